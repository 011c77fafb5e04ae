#include "nsft/word_counts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsft/errors.hpp"

namespace nsft {

BigMatrix BigMatrix::identity(std::int64_t n) {
  BigMatrix m;
  m.rows = m.cols = n;
  m.cells.assign((std::size_t)(n * n), BigNat());
  for (std::int64_t i = 0; i < n; ++i) m.at(i, i) = BigNat(1);
  return m;
}

BigMatrix BigMatrix::from_transition(const TransitionMatrix& t) {
  BigMatrix m;
  m.rows = t.rows;
  m.cols = t.cols;
  m.cells.assign((std::size_t)(t.rows * t.cols), BigNat());
  for (std::int64_t r = 0; r < t.rows; ++r)
    for (std::int64_t c = 0; c < t.cols; ++c)
      if (t.at(r, c)) m.at(r, c) = BigNat(1);
  return m;
}

BigMatrix BigMatrix::times(const TransitionMatrix& t) const {
  if (cols != t.rows) throw spec_error("block product: dimension mismatch");
  BigMatrix out;
  out.rows = rows;
  out.cols = t.cols;
  out.cells.assign((std::size_t)(rows * t.cols), BigNat());
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t g = 0; g < cols; ++g) {
      const BigNat& v = at(r, g);
      if (v.is_zero()) continue;
      for (std::int64_t c = 0; c < t.cols; ++c)
        if (t.at(g, c)) out.at(r, c) += v;
    }
  return out;
}

BigMatrix BigMatrix::times(const BigMatrix& rhs) const {
  if (cols != rhs.rows) throw spec_error("matrix product: dimension mismatch");
  BigMatrix out;
  out.rows = rows;
  out.cols = rhs.cols;
  out.cells.assign((std::size_t)(rows * rhs.cols), BigNat());
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t g = 0; g < cols; ++g) {
      const BigNat& v = at(r, g);
      if (v.is_zero()) continue;
      for (std::int64_t c = 0; c < rhs.cols; ++c) {
        const BigNat& w = rhs.at(g, c);
        if (!w.is_zero()) out.at(r, c) += v * w;
      }
    }
  return out;
}

BigNat BigMatrix::entry_sum() const {
  BigNat s;
  for (const auto& c : cells) s += c;
  return s;
}

std::vector<BigNat> BigMatrix::col_sums() const {
  std::vector<BigNat> out((std::size_t)cols);
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t c = 0; c < cols; ++c) out[(std::size_t)c] += at(r, c);
  return out;
}

BigNat BigMatrix::max_col_sum() const {
  BigNat best;
  for (auto& s : col_sums())
    if (s > best) best = s;
  return best;
}

PrefixProduct::PrefixProduct(const MatrixSequenceSpec& spec, std::int64_t start)
    : spec_(spec), start_(start), position_(start) {
  if (start < 0) throw range_error("block product start must be >= 0");
  acc_ = BigMatrix::identity(spec.alphabet_size_at(start));
}

void PrefixProduct::advance() {
  acc_ = acc_.times(spec_.matrix_at(position_));
  ++position_;
}

void PrefixProduct::advance_to(std::int64_t n) {
  if (n < position_)
    throw range_error("prefix product cannot rewind");
  while (position_ < n) advance();
}

BlockProduct block_product(const MatrixSequenceSpec& spec, std::int64_t k,
                           std::int64_t n) {
  if (k < 0 || n < k) throw range_error("block product needs 0 <= k <= n");
  PrefixProduct p(spec, k);
  p.advance_to(n);
  return BlockProduct{k, n, p.matrix()};
}

BigNat word_count(const MatrixSequenceSpec& spec, std::int64_t n,
                  std::int64_t m) {
  return block_product(spec, n, m).matrix.entry_sum();
}

std::vector<std::vector<int>> enumerate_words(const MatrixSequenceSpec& spec,
                                              std::int64_t n, std::int64_t m,
                                              std::int64_t cap) {
  BigNat count = word_count(spec, n, m);
  if (count.exceeds((double)cap))
    throw cap_error("enumerate_words: " + count.to_decimal() +
                        " words exceed the cap of " + std::to_string(cap),
                    count.to_decimal());
  std::vector<const TransitionMatrix*> steps;
  for (std::int64_t i = n; i < m; ++i) steps.push_back(&spec.matrix_at(i));
  std::int64_t len = m - n + 1;
  std::vector<std::vector<int>> out;
  std::vector<int> word((std::size_t)len, 0);
  // Depth-first in ascending symbol order yields lexicographic output.
  auto rec = [&](auto&& self, std::int64_t depth) -> void {
    if (depth == len) {
      out.push_back(word);
      return;
    }
    std::int64_t symbols = depth == 0 ? spec.alphabet_size_at(n)
                                      : steps[(std::size_t)(depth - 1)]->cols;
    for (int s = 0; s < symbols; ++s) {
      if (depth > 0 &&
          !steps[(std::size_t)(depth - 1)]->at(word[(std::size_t)(depth - 1)], s))
        continue;
      word[(std::size_t)depth] = s;
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::int64_t m_eps(const MatrixSequenceSpec& spec, std::int64_t n, double eps,
                   std::int64_t cap) {
  if (!(eps > 0.0) || eps > 1.0)
    throw spec_error("m_eps: eps must lie in (0, 1]");
  double threshold = 1.0 / eps;
  // Column sums of L^(n, n+m), extended one step at a time.
  std::int64_t l = spec.alphabet_size_at(n);
  std::vector<BigNat> sums((std::size_t)l, BigNat(1));
  for (std::int64_t m = 0; m <= cap; ++m) {
    BigNat total;
    for (const auto& s : sums) total += s;
    if (total.exceeds(threshold)) return m;
    const auto& t = spec.matrix_at(n + m);
    std::vector<BigNat> next((std::size_t)t.cols);
    for (std::int64_t g = 0; g < t.rows; ++g) {
      if (sums[(std::size_t)g].is_zero()) continue;
      for (std::int64_t c = 0; c < t.cols; ++c)
        if (t.at(g, c)) next[(std::size_t)c] += sums[(std::size_t)g];
    }
    sums = std::move(next);
  }
  throw cap_error("m_eps: w(" + std::to_string(n) + ", " + std::to_string(n) +
                  "+m) did not exceed 1/eps = " + std::to_string(threshold) +
                  " within m <= " + std::to_string(cap) +
                  " (finite shift space or cap too small)");
}

std::int64_t n_tilde(const MatrixSequenceSpec& spec, std::int64_t k,
                     double eps, std::int64_t cap) {
  std::int64_t best = 0;
  for (std::int64_t i = 0; i <= k; ++i)
    best = std::max(best, i + m_eps(spec, i, eps, cap));
  return best;
}

double log_word_count(const MatrixSequenceSpec& spec, std::int64_t n,
                      std::int64_t m) {
  return word_count(spec, n, m).log();
}

ScaledPrefixProduct::ScaledPrefixProduct(const MatrixSequenceSpec& spec,
                                         std::int64_t start)
    : spec_(spec), start_(start), position_(start) {
  if (start < 0) throw range_error("block product start must be >= 0");
  rows_ = cols_ = spec.alphabet_size_at(start);
  acc_.assign((std::size_t)(rows_ * cols_), 0.0);
  log_scale_.assign((std::size_t)rows_, 0.0);
  for (std::int64_t i = 0; i < rows_; ++i) acc_[(std::size_t)(i * cols_ + i)] = 1.0;
}

void ScaledPrefixProduct::advance() {
  const auto& t = spec_.matrix_at(position_);
  if (t.rows != cols_) throw spec_error("block product: dimension mismatch");
  std::vector<double> next((std::size_t)(rows_ * t.cols), 0.0);
  for (std::int64_t r = 0; r < rows_; ++r)
    for (std::int64_t g = 0; g < cols_; ++g) {
      double v = acc_[(std::size_t)(r * cols_ + g)];
      if (v == 0.0) continue;
      for (std::int64_t c = 0; c < t.cols; ++c)
        if (t.at(g, c)) next[(std::size_t)(r * t.cols + c)] += v;
    }
  cols_ = t.cols;
  acc_ = std::move(next);
  for (std::int64_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::int64_t c = 0; c < cols_; ++c) s += acc_[(std::size_t)(r * cols_ + c)];
    // s > 0 for reduced matrices: no row of a factor is all zero.
    log_scale_[(std::size_t)r] += std::log(s);
    for (std::int64_t c = 0; c < cols_; ++c) acc_[(std::size_t)(r * cols_ + c)] /= s;
  }
  ++position_;
}

void ScaledPrefixProduct::advance_to(std::int64_t n) {
  if (n < position_) throw range_error("prefix product cannot rewind");
  while (position_ < n) advance();
}

double ScaledPrefixProduct::log_entry_sum() const {
  // log sum over rows of exp(log_scale_r) * rowsum_r, max-shifted.
  double shift = -std::numeric_limits<double>::infinity();
  for (std::int64_t r = 0; r < rows_; ++r)
    shift = std::max(shift, log_scale_[(std::size_t)r]);
  double total = 0.0;
  for (std::int64_t r = 0; r < rows_; ++r) {
    double rowsum = 0.0;
    for (std::int64_t c = 0; c < cols_; ++c)
      rowsum += acc_[(std::size_t)(r * cols_ + c)];
    total += rowsum * std::exp(log_scale_[(std::size_t)r] - shift);
  }
  return shift + std::log(total);
}

double ScaledPrefixProduct::log_max_col_sum() const {
  double shift = -std::numeric_limits<double>::infinity();
  for (std::int64_t r = 0; r < rows_; ++r)
    shift = std::max(shift, log_scale_[(std::size_t)r]);
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t c = 0; c < cols_; ++c) {
    double colsum = 0.0;
    for (std::int64_t r = 0; r < rows_; ++r)
      colsum += acc_[(std::size_t)(r * cols_ + c)] *
                std::exp(log_scale_[(std::size_t)r] - shift);
    if (colsum > 0.0) best = std::max(best, shift + std::log(colsum));
  }
  return best;
}

double log_word_count_scaled(const MatrixSequenceSpec& spec, std::int64_t n,
                             std::int64_t m) {
  ScaledPrefixProduct p(spec, n);
  p.advance_to(m);
  return p.log_entry_sum();
}

}  // namespace nsft
