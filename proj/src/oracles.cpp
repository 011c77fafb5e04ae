#include "nsft/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "nsft/errors.hpp"
#include "nsft/parry.hpp"
#include "nsft/topent.hpp"
#include "nsft/word_counts.hpp"

namespace nsft {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

OracleResult make_result(std::string quantity, std::string method,
                         std::string engine, std::string oracle, bool match,
                         double deviation) {
  OracleResult r;
  r.quantity = std::move(quantity);
  r.method = std::move(method);
  r.engine_value = std::move(engine);
  r.oracle_value = std::move(oracle);
  r.match = match;
  r.deviation = deviation;
  return r;
}

}  // namespace

std::vector<OracleResult> oracle_word_counts(const MatrixSequenceSpec& spec,
                                             std::int64_t max_depth,
                                             std::int64_t cap) {
  std::vector<OracleResult> out;
  for (std::int64_t n = 0; n <= max_depth; ++n) {
    std::string quantity = "word_count(0," + std::to_string(n) + ")";
    BigNat count = word_count(spec, 0, n);
    std::vector<std::vector<int>> words;
    try {
      words = enumerate_words(spec, 0, n, cap);
    } catch (const cap_error& e) {
      OracleResult r = make_result(quantity, "enumeration", count.to_decimal(),
                                   e.count, false, 0.0);
      r.skipped = true;
      out.push_back(std::move(r));
      continue;
    }
    // Endpoint-resolved comparison against the block product entries.
    BlockProduct block = block_product(spec, 0, n);
    std::map<std::pair<int, int>, std::uint64_t> by_pair;
    for (const auto& w : words) ++by_pair[{w.front(), w.back()}];
    bool entries_ok = true;
    for (std::int64_t a = 0; a < block.matrix.rows; ++a)
      for (std::int64_t b = 0; b < block.matrix.cols; ++b) {
        auto it = by_pair.find({(int)a, (int)b});
        std::uint64_t seen = it == by_pair.end() ? 0 : it->second;
        entries_ok =
            entries_ok && block.matrix.at(a, b) == BigNat(seen);
      }
    bool total_ok = BigNat((std::uint64_t)words.size()) == count;
    out.push_back(make_result(quantity, "enumeration", count.to_decimal(),
                              std::to_string(words.size()),
                              entries_ok && total_ok, 0.0));
    // Independent check of the floating path against the exact count.
    double exact_log = count.log();
    double scaled_log = log_word_count_scaled(spec, 0, n);
    double dev = std::abs(exact_log - scaled_log) /
                 std::max(1.0, std::abs(exact_log));
    out.push_back(make_result("log_w(0," + std::to_string(n) + ")",
                              "scaled-float", format_double(exact_log),
                              format_double(scaled_log), dev <= 1e-9, dev));
  }
  return out;
}

std::vector<OracleResult> oracle_product_entropy(const MatrixSequenceSpec& a,
                                                 const MatrixSequenceSpec& b,
                                                 std::int64_t horizon) {
  std::vector<OracleResult> out;
  MatrixSequenceSpec prod = kronecker_product(a, b);
  bool factor_ok = true;
  std::string first_bad;
  PrefixProduct pa(a, 0), pb(b, 0), pp(prod, 0);
  for (std::int64_t n = 1; n <= horizon; ++n) {
    pa.advance();
    pb.advance();
    pp.advance();
    BigNat lhs = pp.matrix().entry_sum();
    BigNat rhs = pa.matrix().entry_sum() * pb.matrix().entry_sum();
    if (!(lhs == rhs) && factor_ok) {
      factor_ok = false;
      first_bad = "n=" + std::to_string(n) + ": " + lhs.to_decimal() +
                  " != " + rhs.to_decimal();
    }
  }
  out.push_back(make_result(
      "w_prod(0,n) = w_a(0,n) * w_b(0,n), n <= " + std::to_string(horizon),
      "kronecker-factorization", factor_ok ? "exact" : first_bad,
      "exact", factor_ok, 0.0));

  if (spec_to_json(a) == spec_to_json(b)) {
    EntropyTrace ta = topent_trace(a, horizon);
    EntropyTrace tp = topent_trace(prod, horizon);
    double worst = 0.0;
    for (std::size_t i = 0; i < ta.points.size(); ++i)
      worst = std::max(worst, std::abs(tp.points[i].second -
                                       2.0 * ta.points[i].second));
    out.push_back(make_result("trace doubling on the diagonal",
                              "kronecker-factorization", format_double(worst),
                              "0", worst <= 1e-12, worst));
  }
  return out;
}

StationaryParry power_iteration_parry(const TransitionMatrix& matrix,
                                      double tol, std::int64_t max_iter) {
  if (matrix.rows != matrix.cols)
    throw spec_error("stationary Parry oracle needs a square matrix");
  std::int64_t l = matrix.rows;
  // Wielandt bound: a primitive 0-1 matrix has a positive power by then.
  {
    std::int64_t bound = (l - 1) * (l - 1) + 1;
    std::vector<std::uint8_t> acc(matrix.entries);
    bool positive = false;
    for (std::int64_t p = 1; p <= bound && !positive; ++p) {
      positive = std::all_of(acc.begin(), acc.end(),
                             [](std::uint8_t v) { return v != 0; });
      if (positive) break;
      std::vector<std::uint8_t> next((std::size_t)(l * l), 0);
      for (std::int64_t r = 0; r < l; ++r)
        for (std::int64_t g = 0; g < l; ++g)
          if (acc[(std::size_t)(r * l + g)])
            for (std::int64_t c = 0; c < l; ++c)
              if (matrix.at(g, c)) next[(std::size_t)(r * l + c)] = 1;
      acc = std::move(next);
    }
    if (!positive)
      throw primitivity_error("stationary Parry oracle: matrix not primitive");
  }

  auto step_right = [&](const std::vector<double>& x) {
    std::vector<double> y((std::size_t)l, 0.0);
    for (std::int64_t r = 0; r < l; ++r)
      for (std::int64_t c = 0; c < l; ++c)
        if (matrix.at(r, c)) y[(std::size_t)r] += x[(std::size_t)c];
    return y;
  };
  auto step_left = [&](const std::vector<double>& x) {
    std::vector<double> y((std::size_t)l, 0.0);
    for (std::int64_t r = 0; r < l; ++r)
      if (x[(std::size_t)r] != 0.0)
        for (std::int64_t c = 0; c < l; ++c)
          if (matrix.at(r, c)) y[(std::size_t)c] += x[(std::size_t)r];
    return y;
  };
  auto iterate = [&](auto step) {
    std::vector<double> x((std::size_t)l, 1.0 / (double)l);
    double lambda = 0.0;
    for (std::int64_t it = 0; it < max_iter; ++it) {
      std::vector<double> y = step(x);
      double norm = 0.0;
      for (double v : y) norm += v;
      for (double& v : y) v /= norm;
      double diff = 0.0;
      for (std::int64_t i = 0; i < l; ++i)
        diff += std::abs(y[(std::size_t)i] - x[(std::size_t)i]);
      x = std::move(y);
      lambda = norm;
      if (diff < tol) return std::make_pair(x, lambda);
    }
    throw convergence_error("power iteration did not converge", tol);
  };

  StationaryParry out;
  auto [w, lw] = iterate(step_right);
  auto [v, lv] = iterate(step_left);
  out.lambda = 0.5 * (lw + lv);
  out.w = w;
  double dot = 0.0;
  for (std::int64_t i = 0; i < l; ++i)
    dot += v[(std::size_t)i] * w[(std::size_t)i];
  out.v = v;
  for (double& x : out.v) x /= dot;
  out.pi.resize((std::size_t)l);
  for (std::int64_t i = 0; i < l; ++i)
    out.pi[(std::size_t)i] = out.v[(std::size_t)i] * out.w[(std::size_t)i];
  return out;
}

std::vector<OracleResult> oracle_stationary_parry(
    const TransitionMatrix& matrix, double tol) {
  StationaryParry classical = power_iteration_parry(matrix);

  std::map<std::string, TransitionMatrix> mats{{"M", matrix}};
  Pattern pattern;
  pattern.kind = Pattern::Kind::eventually_periodic;
  pattern.cycle = {"M"};
  MatrixSequenceSpec spec("constant", std::move(mats), std::move(pattern));
  std::int64_t horizon = 12;
  ParryChain chain = parry_frames(spec, horizon, 1e-13, classical.v);

  std::vector<OracleResult> out;
  auto compare_vec = [&](const std::string& what, const std::vector<double>& got,
                         const std::vector<double>& want) {
    double dev = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
      dev = std::max(dev, std::abs(got[i] - want[i]));
    out.push_back(make_result(what, "power-iteration",
                              format_double(got.empty() ? 0.0 : got[0]),
                              format_double(want.empty() ? 0.0 : want[0]),
                              dev <= tol, dev));
  };
  double lambda_dev = 0.0;
  for (std::int64_t i = 0; i < horizon; ++i) {
    const ParryFrame& f = chain.frame(i);
    lambda_dev = std::max(lambda_dev, std::abs(f.lambda - classical.lambda));
    compare_vec("w at index " + std::to_string(i), f.w, classical.w);
    compare_vec("v at index " + std::to_string(i), f.v, classical.v);
    compare_vec("pi at index " + std::to_string(i), f.pi, classical.pi);
  }
  out.push_back(make_result("lambda (all indices)", "power-iteration",
                            format_double(chain.frame(0).lambda),
                            format_double(classical.lambda),
                            lambda_dev <= tol, lambda_dev));
  return out;
}

}  // namespace nsft
