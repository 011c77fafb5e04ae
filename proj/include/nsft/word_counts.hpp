#pragma once

#include <cstdint>
#include <vector>

#include "nsft/bignat.hpp"
#include "nsft/spec_model.hpp"

namespace nsft {

// Dense matrix of exact nonnegative integers.
struct BigMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<BigNat> cells;  // row-major

  static BigMatrix identity(std::int64_t n);
  static BigMatrix from_transition(const TransitionMatrix& t);

  const BigNat& at(std::int64_t r, std::int64_t c) const {
    return cells[(std::size_t)(r * cols + c)];
  }
  BigNat& at(std::int64_t r, std::int64_t c) {
    return cells[(std::size_t)(r * cols + c)];
  }

  BigMatrix times(const TransitionMatrix& t) const;  // 0-1 factor: sums only
  BigMatrix times(const BigMatrix& rhs) const;
  BigNat entry_sum() const;
  std::vector<BigNat> col_sums() const;
  BigNat max_col_sum() const;
};

// L^(k,n) = L_k * ... * L_{n-1}; the identity when k == n. Entry (a, b)
// counts admissible words from symbol a at index k to symbol b at index n.
struct BlockProduct {
  std::int64_t from = 0;
  std::int64_t to = 0;
  BigMatrix matrix;
};

BlockProduct block_product(const MatrixSequenceSpec& spec, std::int64_t k,
                           std::int64_t n);

// Incremental accumulator for L^(start, position). Extending one step
// multiplies by the next 0-1 matrix, so each step costs only additions.
class PrefixProduct {
 public:
  explicit PrefixProduct(const MatrixSequenceSpec& spec, std::int64_t start = 0);
  std::int64_t start() const { return start_; }
  std::int64_t position() const { return position_; }
  const BigMatrix& matrix() const { return acc_; }
  void advance();
  void advance_to(std::int64_t n);

 private:
  const MatrixSequenceSpec& spec_;
  std::int64_t start_;
  std::int64_t position_;
  BigMatrix acc_;
};

// w(n, m): number of admissible words (x_n, ..., x_m).
BigNat word_count(const MatrixSequenceSpec& spec, std::int64_t n,
                  std::int64_t m);

// All admissible words (x_n, ..., x_m) in lexicographic order, symbols
// 0-based. Refuses when the count exceeds cap.
std::vector<std::vector<int>> enumerate_words(const MatrixSequenceSpec& spec,
                                              std::int64_t n, std::int64_t m,
                                              std::int64_t cap = 1000000);

// Smallest m >= 0 with w(n, n+m) > 1/eps. Errors out at the cap, which
// happens when the counts stay bounded (finite shift) or the cap is too
// small for the requested eps.
std::int64_t m_eps(const MatrixSequenceSpec& spec, std::int64_t n, double eps,
                   std::int64_t cap = 10000);

// max_{0 <= i <= k} (i + m_eps(i)).
std::int64_t n_tilde(const MatrixSequenceSpec& spec, std::int64_t k,
                     double eps, std::int64_t cap = 10000);

double log_word_count(const MatrixSequenceSpec& spec, std::int64_t n,
                      std::int64_t m);

// Floating-point evaluation path: per-step row scaling with accumulated log
// scales, so only ratios live in doubles.
class ScaledPrefixProduct {
 public:
  explicit ScaledPrefixProduct(const MatrixSequenceSpec& spec,
                               std::int64_t start = 0);
  std::int64_t position() const { return position_; }
  void advance();
  void advance_to(std::int64_t n);
  double log_entry_sum() const;
  double log_max_col_sum() const;

 private:
  const MatrixSequenceSpec& spec_;
  std::int64_t start_;
  std::int64_t position_;
  std::int64_t rows_, cols_;
  std::vector<double> acc_;        // row-major, each row scaled to sum 1
  std::vector<double> log_scale_;  // per-row accumulated log factor
};

double log_word_count_scaled(const MatrixSequenceSpec& spec, std::int64_t n,
                             std::int64_t m);

}  // namespace nsft
