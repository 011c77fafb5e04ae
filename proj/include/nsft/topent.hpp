#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nsft/bignat.hpp"
#include "nsft/spec_model.hpp"

namespace nsft {

using Word = std::vector<int>;

// Finite-horizon entropy trace: points (n, value_n) plus the max over a
// trailing window, used as the finite-stage limsup estimate.
struct EntropyTrace {
  std::vector<std::pair<std::int64_t, double>> points;
  std::int64_t tail_lo = 0;
  std::int64_t tail_hi = 0;
  double tail_estimate = 0.0;
};

enum class NormKind { entry_sum, col_sum_max };

struct TopentOptions {
  double window_fraction = 0.5;
  NormKind norm = NormKind::entry_sum;
  bool scaled_path = false;  // floating evaluation instead of exact integers
};

// (1/n) log ||L^(0,n)|| for n = 1..horizon.
EntropyTrace topent_trace(const MatrixSequenceSpec& spec, std::int64_t horizon,
                          const TopentOptions& options = {});

// Fills tail_lo/hi/estimate from a finished point list.
void finalize_trace(EntropyTrace& trace, double window_fraction);

// Distance at index k between words starting at coordinate k. Words are
// finite prefixes; comparisons that depend on unseen coordinates throw
// undecidable_error.
double metric_dk(const MatrixSequenceSpec& spec, std::int64_t k, const Word& x,
                 const Word& y);

// max over 0 <= i <= n of the index-i distance between the i-shifted
// suffixes; words start at coordinate 0.
double bowen_distance(const MatrixSequenceSpec& spec, std::int64_t n,
                      const Word& x, const Word& y);

struct SeparationReport {
  std::int64_t n = 0;
  double eps = 0.0;
  std::int64_t m_n = 0;
  BigNat set_size;
  bool separated_ok = false;
  double separation_scale = 0.0;  // realized minimal pairwise distance
  bool spanning_ok = false;
};

// Materializes the spanning/separated family E of depth n + m_eps(n) and
// checks both properties numerically.
SeparationReport verify_separated_spanning(const MatrixSequenceSpec& spec,
                                           std::int64_t n, double eps,
                                           std::int64_t cap = 1000000);

}  // namespace nsft
