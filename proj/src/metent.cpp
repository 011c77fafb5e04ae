#include "nsft/metent.hpp"

#include <algorithm>
#include <cmath>

#include "nsft/errors.hpp"
#include "nsft/word_counts.hpp"

namespace nsft {

namespace {

double entropy_of(const std::vector<double>& dist) {
  double h = 0.0;
  for (double p : dist)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double closed_form_from_colsums(const ParryChain& chain, std::int64_t k,
                                const std::vector<BigNat>& colsums) {
  const ParryFrame& f = chain.frame(k);
  if ((std::size_t)f.pi.size() != colsums.size())
    throw spec_error("column sum width does not match the frame alphabet");
  double h = entropy_of(f.pi);
  for (std::size_t b = 0; b < colsums.size(); ++b)
    if (f.pi[b] > 0.0) h += f.pi[b] * colsums[b].log();
  return h;
}

// All maximizing columns of the exact column sums.
std::vector<std::int64_t> maximizers(const std::vector<BigNat>& sums) {
  std::vector<std::int64_t> out;
  const BigNat* best = nullptr;
  for (std::size_t b = 0; b < sums.size(); ++b) {
    if (best == nullptr || sums[b] > *best) {
      best = &sums[b];
      out.assign(1, (std::int64_t)b);
    } else if (sums[b] == *best) {
      out.push_back((std::int64_t)b);
    }
  }
  return out;
}

}  // namespace

double partition_entropy_closed(const MatrixSequenceSpec& spec,
                                const ParryChain& chain, std::int64_t k) {
  if (!chain.ones_v0())
    throw spec_error(
        "partition_entropy_closed requires the all-ones left seed; use the "
        "direct route for custom seeds");
  if (k < 0 || k > chain.horizon())
    throw range_error("partition entropy index outside chain horizon");
  return closed_form_from_colsums(chain, k,
                                  block_product(spec, 0, k).matrix.col_sums());
}

double partition_entropy_direct(const ParryChain& chain, std::int64_t k,
                                std::int64_t cap) {
  if (k < 0 || k > chain.horizon())
    throw range_error("partition entropy index outside chain horizon");
  double h = 0.0;
  for (const auto& word : enumerate_words(chain.spec(), 0, k, cap)) {
    double mu = cylinder_measure(chain, 0, word);
    if (mu > 0.0) h -= mu * std::log(mu);
  }
  return h;
}

EntropyTrace metent_trace(const MatrixSequenceSpec& spec,
                          const ParryChain& chain, double eps,
                          std::int64_t horizon, double window_fraction) {
  if (horizon < 1) throw range_error("metent horizon must be >= 1");
  if (!chain.ones_v0())
    throw spec_error("metent_trace requires the all-ones left seed");
  EntropyTrace trace;
  trace.points.reserve((std::size_t)horizon);
  PrefixProduct acc(spec, 0);
  std::vector<BigNat> colsums = acc.matrix().col_sums();
  std::int64_t running = m_eps(spec, 0, eps);  // max_{i <= k} (i + m_eps(i))
  for (std::int64_t k = 1; k <= horizon; ++k) {
    running = std::max(running, k + m_eps(spec, k, eps));
    if (running > chain.horizon())
      throw range_error(
          "metent_trace: depth n_tilde = " + std::to_string(running) +
          " exceeds the chain horizon " + std::to_string(chain.horizon()));
    while (acc.position() < running) {
      acc.advance();
      colsums = acc.matrix().col_sums();
    }
    double h = closed_form_from_colsums(chain, acc.position(), colsums);
    trace.points.emplace_back(k, h / (double)k);
  }
  finalize_trace(trace, window_fraction);
  return trace;
}

EntropyTrace lambda_lower_bound_trace(const ParryChain& chain,
                                      std::int64_t horizon,
                                      double window_fraction) {
  if (horizon < 1 || horizon > chain.horizon() + 1)
    throw range_error("lambda trace horizon outside chain horizon");
  EntropyTrace trace;
  for (std::int64_t k = 1; k <= horizon; ++k)
    trace.points.emplace_back(k, chain.log_lambda_block(0, k) / (double)k);
  finalize_trace(trace, window_fraction);
  return trace;
}

ConditionReport check_cond_413ii(const MatrixSequenceSpec& spec, double eps,
                                 std::int64_t k0, std::int64_t k1,
                                 std::int64_t slack) {
  if (k0 < 0 || k1 < k0) throw range_error("bad k range");
  ConditionReport report;
  report.condition = "maximizing-row-positivity";
  report.params = "eps=" + std::to_string(eps) + " k=[" + std::to_string(k0) +
                  "," + std::to_string(k1) + "] slack=" + std::to_string(slack);
  report.verdict = Verdict::pass;
  PrefixProduct acc(spec, 0);
  acc.advance_to(k0);
  for (std::int64_t k = k0; k <= k1; ++k) {
    if (k > k0) acc.advance();
    std::vector<BigNat> sums = acc.matrix().col_sums();
    std::int64_t m_min = m_eps(spec, k, eps);
    BlockProduct window = block_product(spec, k, k + m_min);
    for (std::int64_t m = m_min; m <= m_min + slack; ++m) {
      if (m > m_min) {
        window.matrix = window.matrix.times(spec.matrix_at(window.to));
        ++window.to;
      }
      for (std::int64_t gamma : maximizers(sums)) {
        for (std::int64_t beta = 0; beta < window.matrix.cols; ++beta) {
          if (window.matrix.at(gamma, beta).is_zero()) {
            report.witnesses.push_back({k, gamma, beta, 0.0});
            report.verdict = Verdict::fail;
          }
        }
      }
      if (report.verdict == Verdict::fail) return report;
    }
  }
  return report;
}

ConditionReport check_cond_413iii(const MatrixSequenceSpec& spec,
                                  const ParryChain& chain,
                                  std::int64_t horizon, double pass_tol,
                                  double fail_threshold,
                                  double window_fraction) {
  if (horizon < 1) throw range_error("bad horizon");
  ConditionReport report;
  report.condition = "vanishing-primitivity-block-growth";
  report.params = "horizon=" + std::to_string(horizon);
  report.max_block_gap = 0;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    std::int64_t budget = chain.horizon() + 1 - k;
    auto nk = primitivity_profile(spec, k, budget);
    if (!nk)
      throw primitivity_error(
          "no positive block product from index " + std::to_string(k) +
          " within the chain horizon");
    report.max_block_gap = std::max(report.max_block_gap, *nk);
    report.trace.emplace_back(
        k, chain.log_lambda_block(k, k + *nk) / (double)k);
  }
  std::int64_t lo = std::clamp<std::int64_t>(
      (std::int64_t)std::ceil(window_fraction * (double)horizon), 1, horizon);
  report.tail_max = 0.0;
  for (const auto& [k, v] : report.trace)
    if (k >= lo) report.tail_max = std::max(report.tail_max, v);
  if (report.tail_max < pass_tol)
    report.verdict = Verdict::pass;
  else if (report.tail_max >= fail_threshold)
    report.verdict = Verdict::fail;
  else
    report.verdict = Verdict::inconclusive;
  return report;
}

ConditionReport check_cond_414ii(const MatrixSequenceSpec& spec,
                                 const ParryChain& chain, double delta,
                                 double eps, std::int64_t k0,
                                 std::int64_t k1) {
  if (k0 < 0 || k1 < k0) throw range_error("bad k range");
  if (!(delta > 0.0) || delta >= 1.0)
    throw spec_error("delta must lie in (0, 1)");
  ConditionReport report;
  report.condition = "reachable-mass";
  report.params = "delta=" + std::to_string(delta) +
                  " eps=" + std::to_string(eps) + " k=[" + std::to_string(k0) +
                  "," + std::to_string(k1) + "]";
  report.verdict = Verdict::pass;
  PrefixProduct acc(spec, 0);
  acc.advance_to(k0);
  for (std::int64_t k = k0; k <= k1; ++k) {
    if (k > k0) acc.advance();
    std::vector<BigNat> sums = acc.matrix().col_sums();
    std::int64_t nk = k + m_eps(spec, k, eps);
    if (nk > chain.horizon())
      throw range_error("n_k exceeds the chain horizon");
    BigMatrix window = block_product(spec, k, nk).matrix;
    const ParryFrame& f = chain.frame(nk);
    for (std::int64_t gamma : maximizers(sums)) {
      double mass = 0.0;
      for (std::int64_t beta = 0; beta < window.cols; ++beta)
        if (!window.at(gamma, beta).is_zero())
          mass += f.pi[(std::size_t)beta];
      report.trace.emplace_back(k, mass);
      if (mass < 1.0 - delta) {
        report.witnesses.push_back({k, gamma, -1, mass});
        report.verdict = Verdict::fail;
      }
    }
  }
  return report;
}

}  // namespace nsft
