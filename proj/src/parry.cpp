#include "nsft/parry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nsft/errors.hpp"
#include "nsft/word_counts.hpp"

namespace nsft {

namespace {

double l1_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

void normalize_l1(std::vector<double>& v) {
  double s = l1_norm(v);
  for (double& x : v) x /= s;
}

double l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

std::vector<double> mat_apply(const TransitionMatrix& t,
                          const std::vector<double>& v) {
  std::vector<double> out((std::size_t)t.rows, 0.0);
  for (std::int64_t r = 0; r < t.rows; ++r) {
    double s = 0.0;
    for (std::int64_t c = 0; c < t.cols; ++c)
      if (t.at(r, c)) s += v[(std::size_t)c];
    out[(std::size_t)r] = s;
  }
  return out;
}

std::vector<double> mat_apply_left(const std::vector<double>& v,
                               const TransitionMatrix& t) {
  std::vector<double> out((std::size_t)t.cols, 0.0);
  for (std::int64_t r = 0; r < t.rows; ++r) {
    if (v[(std::size_t)r] == 0.0) continue;
    for (std::int64_t c = 0; c < t.cols; ++c)
      if (t.at(r, c)) out[(std::size_t)c] += v[(std::size_t)r];
  }
  return out;
}

// Backward sweep: normalized L_j ... L_{top+T-1} u for every j in [0, top],
// seeded with the uniform vector at index top + T.
std::vector<std::vector<double>> backward_sweep(const MatrixSequenceSpec& spec,
                                                std::int64_t top,
                                                std::int64_t tail) {
  std::int64_t seed_index = top + tail;
  std::vector<double> v(
      (std::size_t)spec.alphabet_size_at(seed_index),
      1.0 / (double)spec.alphabet_size_at(seed_index));
  std::vector<std::vector<double>> out((std::size_t)(top + 1));
  for (std::int64_t j = seed_index - 1; j >= 0; --j) {
    v = mat_apply(spec.matrix_at(j), v);
    normalize_l1(v);
    if (j <= top) out[(std::size_t)j] = v;
  }
  return out;
}

}  // namespace

std::vector<double> w_tail(const MatrixSequenceSpec& spec, std::int64_t i,
                           double tol, std::int64_t max_tail) {
  if (i < 0) throw range_error("w_tail index must be >= 0");
  auto positive = primitivity_profile(spec, i, max_tail);
  if (!positive)
    throw primitivity_error(
        "A3 violated: no positive block product within [" + std::to_string(i) +
        ", " + std::to_string(i + max_tail) + "]");
  auto estimate = [&](std::int64_t T) {
    std::vector<double> v((std::size_t)spec.alphabet_size_at(i + T),
                          1.0 / (double)spec.alphabet_size_at(i + T));
    for (std::int64_t j = i + T - 1; j >= i; --j) {
      v = mat_apply(spec.matrix_at(j), v);
      normalize_l1(v);
    }
    return v;
  };
  std::int64_t T = std::max<std::int64_t>(*positive, 1);
  std::vector<double> prev = estimate(T);
  double residual = std::numeric_limits<double>::infinity();
  while (2 * T <= max_tail) {
    T *= 2;
    std::vector<double> cur = estimate(T);
    residual = l1_diff(prev, cur);
    if (residual < tol) return cur;
    prev = std::move(cur);
  }
  throw convergence_error(
      "w_tail: no l1-Cauchy convergence within max_tail = " +
          std::to_string(max_tail) + " (residual " + std::to_string(residual) +
          ")",
      residual);
}

ParryChain::ParryChain(MatrixSequenceSpec spec, std::vector<ParryFrame> frames,
                       std::vector<double> cum_log_lambda, bool ones_v0,
                       double tol, std::int64_t tail_depth, double residual)
    : spec_(std::move(spec)),
      frames_(std::move(frames)),
      cum_log_lambda_(std::move(cum_log_lambda)),
      ones_v0_(ones_v0),
      tol_(tol),
      tail_depth_(tail_depth),
      residual_(residual) {}

const ParryFrame& ParryChain::frame(std::int64_t i) const {
  if (i < 0 || i > horizon())
    throw range_error("frame index " + std::to_string(i) +
                      " outside chain horizon " + std::to_string(horizon()));
  return frames_[(std::size_t)i];
}

double ParryChain::log_lambda_block(std::int64_t k, std::int64_t m) const {
  if (k < 0 || m < k || m >= (std::int64_t)cum_log_lambda_.size())
    throw range_error("lambda block outside chain horizon");
  return cum_log_lambda_[(std::size_t)m] - cum_log_lambda_[(std::size_t)k];
}

double ParryChain::lambda_block(std::int64_t k, std::int64_t m) const {
  return std::exp(log_lambda_block(k, m));
}

ParryChain parry_frames(const MatrixSequenceSpec& spec, std::int64_t horizon,
                        double tol, const std::vector<double>& v0,
                        std::int64_t max_tail) {
  if (horizon < 0) throw range_error("chain horizon must be >= 0");
  std::int64_t top = horizon + 1;

  // (A3) along the chain: every index must see a positive block product.
  for (std::int64_t i = 0; i <= top; ++i) {
    if (!primitivity_profile(spec, i, max_tail))
      throw primitivity_error(
          "A3 violated: no positive block product within [" +
          std::to_string(i) + ", " + std::to_string(i + max_tail) + "]");
  }

  // Tail vectors for every index at once: one backward sweep per candidate
  // depth, doubling until the whole family is l1-Cauchy within tol.
  std::vector<std::vector<double>> w;
  std::int64_t tail = std::clamp<std::int64_t>(max_tail / 2, 1, 16);
  double residual = std::numeric_limits<double>::infinity();
  {
    std::vector<std::vector<double>> prev = backward_sweep(spec, top, tail);
    bool accepted = false;
    while (2 * tail <= max_tail) {
      tail *= 2;
      std::vector<std::vector<double>> cur = backward_sweep(spec, top, tail);
      residual = 0.0;
      for (std::int64_t j = 0; j <= top; ++j)
        residual = std::max(
            residual, l1_diff(prev[(std::size_t)j], cur[(std::size_t)j]));
      prev = std::move(cur);
      if (residual < tol) {
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw convergence_error(
          "parry_frames: tail iteration did not reach tol within max_tail = " +
              std::to_string(max_tail) + " (residual " +
              std::to_string(residual) + ")",
          residual);
    w = std::move(prev);
  }
  for (std::int64_t j = 0; j <= top; ++j)
    for (double x : w[(std::size_t)j])
      if (!(x > 0.0))
        throw primitivity_error(
            "tail vector not strictly positive at index " + std::to_string(j));

  // Growth factors from the exact eigen relation L_j w_{j+1} = lambda_j w_j:
  // recompute w_j from w_{j+1} so the relation holds to rounding.
  std::vector<double> lambda((std::size_t)top, 0.0);
  for (std::int64_t j = top - 1; j >= 0; --j) {
    std::vector<double> lw = mat_apply(spec.matrix_at(j), w[(std::size_t)(j + 1)]);
    lambda[(std::size_t)j] = l1_norm(lw);
    for (double& x : lw) x /= lambda[(std::size_t)j];
    w[(std::size_t)j] = std::move(lw);
  }
  std::vector<double> cum((std::size_t)(top + 1), 0.0);
  for (std::int64_t j = 0; j < top; ++j)
    cum[(std::size_t)(j + 1)] =
        cum[(std::size_t)j] + std::log(lambda[(std::size_t)j]);

  // Left vectors from the seed, kept l1-normalized; v_i rescales so that
  // v_i . w_i = 1.
  std::vector<double> vhat;
  bool ones = v0.empty();
  if (ones) {
    vhat.assign((std::size_t)spec.alphabet_size_at(0), 1.0);
  } else {
    if ((std::int64_t)v0.size() != spec.alphabet_size_at(0))
      throw spec_error("v0 size does not match the alphabet at index 0");
    for (double x : v0)
      if (!(x > 0.0)) throw spec_error("v0 must be entrywise positive");
    vhat = v0;
  }

  std::vector<ParryFrame> frames;
  frames.reserve((std::size_t)top);
  for (std::int64_t i = 0; i < top; ++i) {
    ParryFrame f;
    f.index = i;
    f.w = w[(std::size_t)i];
    double dot = 0.0;
    for (std::size_t a = 0; a < vhat.size(); ++a) dot += vhat[a] * f.w[a];
    f.v = vhat;
    for (double& x : f.v) x /= dot;
    f.pi.resize(f.v.size());
    for (std::size_t a = 0; a < f.v.size(); ++a) f.pi[a] = f.v[a] * f.w[a];
    f.lambda = lambda[(std::size_t)i];
    const auto& t = spec.matrix_at(i);
    f.p_cols = t.cols;
    f.P.assign((std::size_t)(t.rows * t.cols), 0.0);
    const auto& wn = w[(std::size_t)(i + 1)];
    for (std::int64_t r = 0; r < t.rows; ++r)
      for (std::int64_t c = 0; c < t.cols; ++c)
        if (t.at(r, c))
          f.P[(std::size_t)(r * t.cols + c)] =
              wn[(std::size_t)c] / (f.lambda * f.w[(std::size_t)r]);
    frames.push_back(std::move(f));
    vhat = mat_apply_left(vhat, t);
    normalize_l1(vhat);
  }
  return ParryChain(spec, std::move(frames), std::move(cum), ones, tol, tail,
                    residual);
}

namespace {

bool word_admissible(const MatrixSequenceSpec& spec, std::int64_t k,
                     const Word& word) {
  for (std::size_t t = 0; t + 1 < word.size(); ++t) {
    const auto& m = spec.matrix_at(k + (std::int64_t)t);
    if (word[t] < 0 || word[t] >= m.rows || word[t + 1] < 0 ||
        word[t + 1] >= m.cols)
      throw range_error("cylinder word symbol out of alphabet range");
    if (!m.at(word[t], word[t + 1])) return false;
  }
  if (word.size() == 1) {
    if (word[0] < 0 || word[0] >= spec.alphabet_size_at(k))
      throw range_error("cylinder word symbol out of alphabet range");
  }
  return true;
}

}  // namespace

CylinderRoutes cylinder_measure_routes(const ParryChain& chain, std::int64_t k,
                                       const Word& word) {
  if (word.empty()) throw range_error("cylinder word must be nonempty");
  std::int64_t m = k + (std::int64_t)word.size() - 1;
  if (k < 0 || m > chain.horizon())
    throw range_error("cylinder indices outside chain horizon");
  if (!word_admissible(chain.spec(), k, word)) return {0.0, 0.0};
  const ParryFrame& fk = chain.frame(k);
  double markov = fk.pi[(std::size_t)word[0]];
  for (std::int64_t i = k; i < m; ++i)
    markov *= chain.frame(i).p_at(word[(std::size_t)(i - k)],
                                  word[(std::size_t)(i - k + 1)]);
  double closed = std::exp(-chain.log_lambda_block(k, m)) *
                  fk.v[(std::size_t)word[0]] *
                  chain.frame(m).w[(std::size_t)word.back()];
  return {markov, closed};
}

double cylinder_measure(const ParryChain& chain, std::int64_t k,
                        const Word& word) {
  CylinderRoutes r = cylinder_measure_routes(chain, k, word);
  double scale = std::max({std::abs(r.markov), std::abs(r.closed_form), 1e-300});
  if (std::abs(r.markov - r.closed_form) / scale > 1e-9)
    throw convergence_error(
        "cylinder measure routes disagree beyond 1e-9 relative",
        std::abs(r.markov - r.closed_form) / scale);
  return r.markov;
}

InvarianceReport verify_invariance(const ParryChain& chain, std::int64_t k,
                                   std::int64_t depth, double tol) {
  if (depth < 1) throw range_error("invariance depth must be >= 1");
  InvarianceReport report;
  report.k = k;
  report.depth = depth;
  const auto& spec = chain.spec();
  const auto& lk = spec.matrix_at(k);
  for (std::int64_t len = 1; len <= depth; ++len) {
    for (const auto& word : enumerate_words(spec, k + 1, k + len)) {
      double rhs = cylinder_measure(chain, k + 1, word);
      double lhs = 0.0;
      Word extended(word.size() + 1);
      std::copy(word.begin(), word.end(), extended.begin() + 1);
      for (int s = 0; s < (int)lk.rows; ++s) {
        if (!lk.at(s, word[0])) continue;
        extended[0] = s;
        lhs += cylinder_measure(chain, k, extended);
      }
      report.max_deviation =
          std::max(report.max_deviation, std::abs(lhs - rhs));
      ++report.cylinders_checked;
    }
  }
  report.ok = report.max_deviation <= tol;
  return report;
}

Word sample_path(const ParryChain& chain, std::int64_t k, std::int64_t length,
                 std::uint64_t seed) {
  if (length < 1) throw range_error("sample length must be >= 1");
  if (k < 0 || k + length - 1 > chain.horizon())
    throw range_error("sample range outside chain horizon");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto pick = [&](const std::vector<double>& dist) {
    double u = unif(gen);
    double acc = 0.0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      acc += dist[s];
      if (u < acc) return (int)s;
    }
    return (int)dist.size() - 1;
  };
  Word path;
  path.reserve((std::size_t)length);
  path.push_back(pick(chain.frame(k).pi));
  for (std::int64_t i = 1; i < length; ++i) {
    const ParryFrame& f = chain.frame(k + i - 1);
    std::vector<double> row((std::size_t)f.p_cols);
    for (std::int64_t c = 0; c < f.p_cols; ++c)
      row[(std::size_t)c] = f.p_at(path.back(), c);
    path.push_back(pick(row));
  }
  return path;
}

}  // namespace nsft
