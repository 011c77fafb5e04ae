// Acceptance gate: runs the ten release criteria end to end and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any line fails.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "nsft/errors.hpp"
#include "nsft/metent.hpp"
#include "nsft/oracles.hpp"
#include "nsft/parry.hpp"
#include "nsft/spec_model.hpp"
#include "nsft/topent.hpp"
#include "nsft/word_counts.hpp"

using namespace nsft;

namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);
const double kLogPhi = std::log((1.0 + std::sqrt(5.0)) / 2.0);

const std::vector<const char*> kAllSpecs{
    "golden_mean.json", "full3.json",        "ab_linear.json",
    "ab_pow2.json",     "ab_listcycle.json", "mixed23.json",
    "permutation.json"};
// Specs satisfying the positivity assumption, i.e. carrying a Parry chain.
const std::vector<const char*> kChainSpecs{
    "golden_mean.json", "full3.json",        "ab_linear.json",
    "ab_pow2.json",     "ab_listcycle.json", "mixed23.json"};

MatrixSequenceSpec bundled(const char* file) {
  return load_spec_file(std::string(NSFT_SPEC_DIR) + "/" + file);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool emit(int id, const char* label, bool ok, const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, label,
              detail.c_str());
  std::fflush(stdout);
  return ok;
}

// 1. Enumerated word counts equal exact block-product counts on every
// bundled spec for all depths <= 12, under 10 s total.
bool criterion_word_count_oracle() {
  constexpr std::int64_t depth = 12;
  constexpr std::int64_t cap = 2000000;
  constexpr double budget = 10.0;
  auto t0 = Clock::now();
  std::int64_t checked = 0;
  bool all_match = true;
  for (const char* file : kAllSpecs)
    for (const auto& r : oracle_word_counts(bundled(file), depth, cap)) {
      ++checked;
      all_match = all_match && r.match && !r.skipped;
    }
  double secs = seconds_since(t0);
  bool ok = all_match && secs < budget;
  return emit(1, "word-count enumeration equals exact block products",
              ok,
              std::to_string(checked) + " checks over 7 specs, depth <= 12, " +
                  fmt(secs) + "s");
}

// 2. Stationary ground truth: golden-mean tail within 1e-3 of log phi at
// horizon 1000, full 3-shift within 1e-2 of log 3, under 5 s each.
bool criterion_stationary_ground_truth() {
  constexpr double tol_gm = 1e-3;
  constexpr double tol_full = 1e-2;
  constexpr double budget = 5.0;
  TopentOptions options;
  options.window_fraction = 0.8;
  auto t0 = Clock::now();
  double dev_gm = std::abs(
      topent_trace(bundled("golden_mean.json"), 1000, options).tail_estimate -
      kLogPhi);
  double secs_gm = seconds_since(t0);
  t0 = Clock::now();
  double dev_full = std::abs(
      topent_trace(bundled("full3.json"), 1000, options).tail_estimate -
      kLog3);
  double secs_full = seconds_since(t0);
  bool ok = dev_gm <= tol_gm && dev_full <= tol_full && secs_gm < budget &&
            secs_full < budget;
  return emit(2, "horizon-1000 tails match log phi and log 3", ok,
              "golden-mean dev " + fmt(dev_gm) + ", full-3 dev " +
                  fmt(dev_full) + ", " + fmt(secs_gm) + "s/" + fmt(secs_full) +
                  "s");
}

// 3. Linear-run ab family at horizon 2000: topological tail and the
// eigenvalue-growth tail both within 0.05 of log 2, and within 0.1 of each
// other, under 60 s.
bool criterion_ab_linear_agreement() {
  constexpr double tol_each = 0.05;
  constexpr double tol_agree = 0.1;
  constexpr double budget = 60.0;
  constexpr std::int64_t horizon = 2000;
  auto t0 = Clock::now();
  MatrixSequenceSpec spec = bundled("ab_linear.json");
  double top = topent_trace(spec, horizon).tail_estimate;
  ParryChain chain = parry_frames(spec, horizon);
  double lam = lambda_lower_bound_trace(chain, horizon).tail_estimate;
  double secs = seconds_since(t0);
  bool ok = std::abs(top - kLog2) <= tol_each &&
            std::abs(lam - kLog2) <= tol_each &&
            std::abs(top - lam) <= tol_agree && secs < budget;
  return emit(3, "ab-linear topological and growth tails meet at log 2", ok,
              "topent dev " + fmt(std::abs(top - kLog2)) + ", lambda dev " +
                  fmt(std::abs(lam - kLog2)) + ", gap " +
                  fmt(std::abs(top - lam)) + ", " + fmt(secs) + "s");
}

// 4. Block identities of the ab family: exact powers of the blocked matrix,
// the closed-form eigenvalue product over each run, and the uniform tail
// vector at every all-ones position.
bool criterion_ab_block_identities() {
  constexpr double tol_lambda = 1e-6;  // relative
  constexpr double tol_w = 1e-9;
  bool powers_exact = true;
  MatrixSequenceSpec constant_b = parse_spec_text(R"({
    "name": "constant-b",
    "matrices": {"B": [[1, 1, 0], [1, 1, 0], [0, 0, 1]]},
    "pattern": {"kind": "eventually-periodic", "prefix": [], "cycle": ["B"]}
  })");
  for (std::int64_t k = 1; k <= 20; ++k) {
    const BigMatrix& p = block_product(constant_b, 0, k).matrix;
    BigNat half((std::uint64_t)1 << (k - 1));
    powers_exact = powers_exact && p.at(0, 0) == half && p.at(0, 1) == half &&
                   p.at(1, 0) == half && p.at(1, 1) == half &&
                   p.at(0, 2).is_zero() && p.at(1, 2).is_zero() &&
                   p.at(2, 0).is_zero() && p.at(2, 1).is_zero() &&
                   p.at(2, 2) == BigNat(1);
  }

  MatrixSequenceSpec ab = bundled("ab_linear.json");
  ParryChain chain = parry_frames(ab, 305);
  double worst_lambda = 0.0;
  double worst_w = 0.0;
  for (double x : chain.frame(0).w) worst_w = std::max(worst_w, std::abs(x - 1.0 / 3.0));
  std::int64_t runs = 0;
  std::int64_t prev = 0;  // previous all-ones position
  for (std::int64_t n = 1; prev + n + 1 <= chain.horizon(); ++n) {
    std::int64_t pos = prev + n + 1;  // run of n blocked matrices, then ones
    double got = chain.lambda_block(prev + 1, pos);
    double want = (std::ldexp(1.0, (int)n + 1) + 1.0) / 3.0;
    worst_lambda = std::max(worst_lambda, std::abs(got - want) / want);
    for (double x : chain.frame(pos).w)
      worst_w = std::max(worst_w, std::abs(x - 1.0 / 3.0));
    ++runs;
    prev = pos;
  }
  bool ok = powers_exact && runs >= 20 && worst_lambda <= tol_lambda &&
            worst_w <= tol_w;
  return emit(4, "ab-family block closed forms hold", ok,
              std::string("powers k <= 20 ") +
                  (powers_exact ? "exact" : "WRONG") + ", " +
                  std::to_string(runs) + " runs, lambda rel dev " +
                  fmt(worst_lambda) + ", w dev " + fmt(worst_w));
}

// 5. Growth-over-primitivity-window checker: fail verdict with a large tail
// on the doubling-run family, pass verdict with window 2 on the golden mean.
bool criterion_condition_checker_verdicts() {
  constexpr double tail_floor = 0.1;  // fail tail must exceed log 2 - 0.1
  MatrixSequenceSpec pow2 = bundled("ab_pow2.json");
  ParryChain pchain = parry_frames(pow2, 1034);
  ConditionReport bad = check_cond_413iii(pow2, pchain, 600);
  MatrixSequenceSpec gm = bundled("golden_mean.json");
  ParryChain gchain = parry_frames(gm, 410);
  ConditionReport good = check_cond_413iii(gm, gchain, 400);
  bool ok = bad.verdict == Verdict::fail &&
            bad.tail_max >= kLog2 - tail_floor &&
            good.verdict == Verdict::pass && good.max_block_gap == 2;
  return emit(5, "block-growth condition splits the two families", ok,
              "doubling-runs tail " + fmt(bad.tail_max) + " (fail), golden-mean tail " +
                  fmt(good.tail_max) + " with N_k == " +
                  std::to_string(good.max_block_gap) + " (pass)");
}

// 6. Measure-sequence properties on every bundled spec: cylinder sums,
// shift-invariance, route agreement, stochastic identities; the
// non-primitive spec must be refused. Under 30 s total.
bool criterion_parry_properties() {
  constexpr double tol_sum = 1e-9;
  constexpr double tol_invariance = 1e-8;
  constexpr double tol_routes = 1e-9;  // relative
  constexpr double tol_stochastic = 1e-10;
  constexpr double tol_rows = 1e-12;
  constexpr double lambda_floor = 1.0 - 1e-12;
  constexpr double budget = 30.0;
  auto t0 = Clock::now();
  double worst_sum = 0.0, worst_inv = 0.0, worst_routes = 0.0;
  double worst_rows = 0.0, worst_stoch = 0.0;
  double min_lambda = std::numeric_limits<double>::infinity();
  bool invariance_ok = true;
  for (const char* file : kChainSpecs) {
    MatrixSequenceSpec spec = bundled(file);
    ParryChain chain = parry_frames(spec, 24);
    for (std::int64_t i = 0; i <= chain.horizon(); ++i) {
      const ParryFrame& f = chain.frame(i);
      min_lambda = std::min(min_lambda, f.lambda);
      std::int64_t rows = (std::int64_t)f.P.size() / f.p_cols;
      std::vector<double> pushed((std::size_t)f.p_cols, 0.0);
      for (std::int64_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::int64_t c = 0; c < f.p_cols; ++c) {
          sum += f.p_at(r, c);
          pushed[(std::size_t)c] += f.pi[(std::size_t)r] * f.p_at(r, c);
        }
        worst_rows = std::max(worst_rows, std::abs(sum - 1.0));
      }
      if (i < chain.horizon()) {
        const ParryFrame& g = chain.frame(i + 1);
        for (std::int64_t c = 0; c < f.p_cols; ++c)
          worst_stoch = std::max(
              worst_stoch, std::abs(pushed[(std::size_t)c] - g.pi[(std::size_t)c]));
      }
    }
    for (std::int64_t d = 0; d <= 10; ++d) {
      double total = 0.0;
      for (const auto& word : enumerate_words(spec, 0, d, 2000000))
        total += cylinder_measure(chain, 0, word);
      worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    }
    for (std::int64_t d = 0; d <= 6; ++d)
      for (const auto& word : enumerate_words(spec, 0, d)) {
        CylinderRoutes r = cylinder_measure_routes(chain, 0, word);
        double denom = std::max({r.markov, r.closed_form, 1e-300});
        worst_routes =
            std::max(worst_routes, std::abs(r.markov - r.closed_form) / denom);
      }
    for (std::int64_t k = 0; k <= 2; ++k) {
      InvarianceReport rep = verify_invariance(chain, k, 8, tol_invariance);
      invariance_ok = invariance_ok && rep.ok;
      worst_inv = std::max(worst_inv, rep.max_deviation);
    }
  }
  bool refused = false;
  try {
    (void)parry_frames(bundled("permutation.json"), 8);
  } catch (const primitivity_error&) {
    refused = true;
  }
  double secs = seconds_since(t0);
  bool ok = worst_sum <= tol_sum && invariance_ok &&
            worst_inv < tol_invariance && worst_routes <= tol_routes &&
            worst_stoch <= tol_stochastic && worst_rows <= tol_rows &&
            min_lambda >= lambda_floor && refused && secs < budget;
  return emit(6, "measure-sequence identities hold on every bundled spec", ok,
              "sum dev " + fmt(worst_sum) + ", invariance " + fmt(worst_inv) +
                  ", routes " + fmt(worst_routes) + ", stochastic " +
                  fmt(worst_stoch) + ", rows " + fmt(worst_rows) +
                  ", min lambda " + fmt(min_lambda) + ", non-primitive refused, " +
                  fmt(secs) + "s");
}

// 7. Closed-form and enumerated partition entropies agree to 1e-9 for all
// depths k <= 12 on every bundled spec with a chain.
bool criterion_partition_entropy_equivalence() {
  constexpr double tol = 1e-9;
  double worst = 0.0;
  for (const char* file : kChainSpecs) {
    MatrixSequenceSpec spec = bundled(file);
    ParryChain chain = parry_frames(spec, 16);
    for (std::int64_t k = 0; k <= 12; ++k)
      worst = std::max(worst,
                       std::abs(partition_entropy_closed(spec, chain, k) -
                                partition_entropy_direct(chain, k, 2000000)));
  }
  bool ok = worst <= tol;
  return emit(7, "closed-form partition entropy equals direct enumeration",
              ok, "max |closed - direct| = " + fmt(worst) + " for k <= 12");
}

// 8. Finite-stage variational inequality at horizon 500: the metric-entropy
// grid maximum stays below the topological tail plus 0.02.
bool criterion_variational_inequality() {
  constexpr double slack = 0.02;
  constexpr double metent_window = 0.95;
  constexpr int grid_lo = 3, grid_hi = 12;
  constexpr std::int64_t horizon = 500;
  double worst_gap = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (const char* file : kChainSpecs) {
    MatrixSequenceSpec spec = bundled(file);
    double eps_min = std::ldexp(1.0, -grid_hi);
    std::int64_t needed = m_eps(spec, 0, eps_min);
    for (std::int64_t i = 1; i <= horizon; ++i)
      needed = std::max(needed, i + m_eps(spec, i, eps_min));
    ParryChain chain = parry_frames(spec, needed);
    double grid_max = -std::numeric_limits<double>::infinity();
    for (int j = grid_lo; j <= grid_hi; ++j)
      grid_max = std::max(
          grid_max, metent_trace(spec, chain, std::ldexp(1.0, -j), horizon,
                                 metent_window)
                        .tail_estimate);
    double top = topent_trace(spec, horizon).tail_estimate;
    worst_gap = std::max(worst_gap, grid_max - top);
    ok = ok && grid_max <= top + slack;
  }
  // Bounded word counts leave the scale map undefined at small eps.
  bool refused = false;
  try {
    (void)m_eps(bundled("permutation.json"), 0, std::ldexp(1.0, -grid_lo));
  } catch (const cap_error&) {
    refused = true;
  }
  ok = ok && refused;
  return emit(8, "metric grid maximum respects the topological tail", ok,
              "worst grid_max - topent tail = " + fmt(worst_gap) +
                  " <= " + fmt(slack) + ", bounded-count spec refused");
}

// 9. Product laws: word counts factorize exactly over Kronecker products for
// n <= 10, and the diagonal square doubles the entropy trace.
bool criterion_product_laws() {
  constexpr double tol_double = 1e-12;
  MatrixSequenceSpec gm = bundled("golden_mean.json");
  auto cross1 = oracle_product_entropy(gm, bundled("mixed23.json"), 10);
  auto cross2 =
      oracle_product_entropy(bundled("ab_linear.json"), bundled("full3.json"), 10);
  auto diag = oracle_product_entropy(gm, gm, 10);
  bool ok = cross1.at(0).match && cross2.at(0).match && diag.at(0).match &&
            diag.size() == 2 && diag.at(1).match &&
            diag.at(1).deviation <= tol_double;
  return emit(9, "Kronecker factorization and diagonal trace doubling", ok,
              "factorization exact on 3 pairs, doubling dev " +
                  fmt(diag.at(1).deviation));
}

// 10. One-step shifts move the horizon-500 tail by at most
// 2 log(alphabet bound) / 250 on every bundled spec.
bool criterion_shift_stability() {
  constexpr std::int64_t horizon = 500;
  bool ok = true;
  double worst_ratio = 0.0;
  for (const char* file : kAllSpecs) {
    MatrixSequenceSpec spec = bundled(file);
    double bound = 2.0 * std::log((double)spec.alphabet_bound()) / 250.0;
    double t0 = topent_trace(spec, horizon).tail_estimate;
    double t1 = topent_trace(spec.shifted(1), horizon).tail_estimate;
    ok = ok && std::abs(t0 - t1) <= bound;
    worst_ratio = std::max(worst_ratio, std::abs(t0 - t1) / bound);
  }
  return emit(10, "tails are stable under a one-step shift", ok,
              "worst |tail - shifted tail| at " + fmt(worst_ratio * 100.0) +
                  "% of the 2 log(sup l)/250 budget");
}

}  // namespace

int main() {
  bool all = true;
  all = criterion_word_count_oracle() && all;
  all = criterion_stationary_ground_truth() && all;
  all = criterion_ab_linear_agreement() && all;
  all = criterion_ab_block_identities() && all;
  all = criterion_condition_checker_verdicts() && all;
  all = criterion_parry_properties() && all;
  all = criterion_partition_entropy_equivalence() && all;
  all = criterion_variational_inequality() && all;
  all = criterion_product_laws() && all;
  all = criterion_shift_stability() && all;
  std::printf("acceptance: %s\n", all ? "all 10 criteria passed" : "FAILURES above");
  return all ? 0 : 1;
}
