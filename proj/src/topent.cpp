#include "nsft/topent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "nsft/errors.hpp"
#include "nsft/word_counts.hpp"

namespace nsft {

void finalize_trace(EntropyTrace& trace, double window_fraction) {
  if (trace.points.empty()) {
    trace.tail_lo = trace.tail_hi = 0;
    trace.tail_estimate = 0.0;
    return;
  }
  if (!(window_fraction > 0.0) || window_fraction > 1.0)
    throw spec_error("window fraction must lie in (0, 1]");
  std::int64_t first = trace.points.front().first;
  std::int64_t last = trace.points.back().first;
  std::int64_t lo = (std::int64_t)std::ceil(window_fraction * (double)last);
  lo = std::clamp(lo, first, last);
  trace.tail_lo = lo;
  trace.tail_hi = last;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [n, v] : trace.points)
    if (n >= lo) best = std::max(best, v);
  trace.tail_estimate = best;
}

EntropyTrace topent_trace(const MatrixSequenceSpec& spec, std::int64_t horizon,
                          const TopentOptions& options) {
  if (horizon < 1) throw range_error("topent horizon must be >= 1");
  EntropyTrace trace;
  trace.points.reserve((std::size_t)horizon);
  if (options.scaled_path) {
    ScaledPrefixProduct acc(spec, 0);
    for (std::int64_t n = 1; n <= horizon; ++n) {
      acc.advance();
      double lognorm = options.norm == NormKind::entry_sum
                           ? acc.log_entry_sum()
                           : acc.log_max_col_sum();
      trace.points.emplace_back(n, lognorm / (double)n);
    }
  } else {
    PrefixProduct acc(spec, 0);
    for (std::int64_t n = 1; n <= horizon; ++n) {
      acc.advance();
      BigNat norm = options.norm == NormKind::entry_sum
                        ? acc.matrix().entry_sum()
                        : acc.matrix().max_col_sum();
      trace.points.emplace_back(n, norm.log() / (double)n);
    }
  }
  finalize_trace(trace, options.window_fraction);
  return trace;
}

namespace {

// First index j >= from with x[j] != y[j], or -1 if the words agree on the
// whole common length.
std::int64_t first_disagreement(const Word& x, const Word& y,
                                std::int64_t from) {
  std::int64_t common = (std::int64_t)std::min(x.size(), y.size());
  for (std::int64_t j = from; j < common; ++j)
    if (x[(std::size_t)j] != y[(std::size_t)j]) return j;
  return -1;
}

}  // namespace

double metric_dk(const MatrixSequenceSpec& spec, std::int64_t k, const Word& x,
                 const Word& y) {
  if (x == y) return 0.0;
  if (x.empty() || y.empty())
    throw undecidable_error("metric_dk: empty word prefix");
  std::int64_t j = first_disagreement(x, y, 0);
  if (j < 0)
    throw undecidable_error(
        "metric_dk: words agree on their common length; undecidable at this "
        "depth");
  if (j == 0) return 1.0;
  // Last agreeing index is k + j - 1 in absolute coordinates.
  return 1.0 / word_count(spec, k, k + j - 1).to_double();
}

double bowen_distance(const MatrixSequenceSpec& spec, std::int64_t n,
                      const Word& x, const Word& y) {
  if (n < 0) throw range_error("bowen distance needs n >= 0");
  if (x == y) return 0.0;
  double best = 0.0;
  bool undecided = false;
  for (std::int64_t i = 0; i <= n; ++i) {
    if (i >= (std::int64_t)x.size() || i >= (std::int64_t)y.size()) {
      undecided = true;
      break;
    }
    std::int64_t j = first_disagreement(x, y, i);
    if (j == i) return 1.0;  // nothing can exceed this term
    double term;
    if (j < 0) {
      if (x.size() == y.size()) {
        term = 0.0;  // suffixes identical on the full stored depth
      } else {
        undecided = true;
        break;
      }
    } else {
      term = 1.0 / word_count(spec, i, j - 1).to_double();
    }
    best = std::max(best, term);
  }
  if (undecided)
    throw undecidable_error(
        "bowen_distance: word prefixes too short to decide all shifted "
        "comparisons");
  return best;
}

SeparationReport verify_separated_spanning(const MatrixSequenceSpec& spec,
                                           std::int64_t n, double eps,
                                           std::int64_t cap) {
  SeparationReport report;
  report.n = n;
  report.eps = eps;
  report.m_n = m_eps(spec, n, eps);
  std::int64_t depth = n + report.m_n;
  auto words = enumerate_words(spec, 0, depth, cap);
  report.set_size = BigNat((std::uint64_t)words.size());

  // Table of 1/w(i, j) for all windows inside [0, depth].
  std::vector<std::vector<double>> inv_w((std::size_t)(depth + 1));
  for (std::int64_t i = 0; i <= depth; ++i) {
    PrefixProduct acc(spec, i);
    for (std::int64_t j = i; j <= depth; ++j) {
      acc.advance_to(j);
      inv_w[(std::size_t)i].push_back(1.0 /
                                      acc.matrix().entry_sum().to_double());
    }
  }
  auto pair_distance = [&](const Word& x, const Word& y) {
    double best = 0.0;
    for (std::int64_t i = 0; i <= n; ++i) {
      std::int64_t j = first_disagreement(x, y, i);
      if (j == i) return 1.0;
      if (j < 0) return best;
      best = std::max(best, inv_w[(std::size_t)i][(std::size_t)(j - 1 - i)]);
    }
    return best;
  };

  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < words.size(); ++p)
    for (std::size_t q = p + 1; q < words.size(); ++q)
      min_dist = std::min(min_dist, pair_distance(words[p], words[q]));
  if (words.size() < 2) min_dist = 1.0;
  report.separation_scale = min_dist;
  double bound = eps / (double)spec.alphabet_bound();
  report.separated_ok = min_dist >= bound * (1.0 - 1e-12);

  // Spanning: E holds one representative per admissible word of the covering
  // depth (so any point agrees with a member through coordinate depth), and
  // the window count makes that agreement worth less than eps.
  bool threshold_ok = word_count(spec, n, depth).exceeds(1.0 / eps);
  bool complete = BigNat((std::uint64_t)words.size()) ==
                  word_count(spec, 0, depth);
  std::set<Word> members(words.begin(), words.end());
  bool covered = true;
  for (const auto& deeper : enumerate_words(spec, 0, depth + 1, cap)) {
    Word prefix(deeper.begin(), deeper.end() - 1);
    covered = covered && members.count(prefix) > 0;
  }
  report.spanning_ok = threshold_ok && complete && covered;
  return report;
}

}  // namespace nsft
