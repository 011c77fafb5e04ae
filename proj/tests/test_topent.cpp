#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "nsft/errors.hpp"
#include "nsft/topent.hpp"
#include "nsft/word_counts.hpp"
#include "test_support.hpp"

using namespace nsft;
using testutil::load_bundled;

namespace {

const double kLogPhi = std::log((1.0 + std::sqrt(5.0)) / 2.0);

}  // namespace

TEST_CASE("finalize_trace window selection") {
  EntropyTrace trace;
  for (std::int64_t n = 1; n <= 10; ++n)
    trace.points.emplace_back(n, n == 7 ? 5.0 : 1.0 / (double)n);
  finalize_trace(trace, 0.5);
  CHECK_EQ(trace.tail_lo, 5);
  CHECK_EQ(trace.tail_hi, 10);
  CHECK_EQ(trace.tail_estimate, 5.0);
  finalize_trace(trace, 1.0);
  CHECK_EQ(trace.tail_lo, 10);
  CHECK_EQ(trace.tail_estimate, 0.1);
  finalize_trace(trace, 1e-9);
  CHECK_EQ(trace.tail_lo, 1);
  CHECK_THROWS_AS(finalize_trace(trace, 0.0), spec_error);
  CHECK_THROWS_AS(finalize_trace(trace, 1.5), spec_error);
}

TEST_CASE("topent full shift hits log 3 exactly along the trace") {
  EntropyTrace trace = topent_trace(load_bundled("full3.json"), 12);
  // w(0,n) = 3^{n+1}, so the point at n is (n+1)/n log 3.
  const double log3 = std::log(3.0);
  for (const auto& [n, v] : trace.points)
    CHECK_EQ(v, doctest::Approx((double)(n + 1) / (double)n * log3)
                    .epsilon(1e-12));
  CHECK_EQ(trace.points[9].second, doctest::Approx(1.1 * log3).epsilon(1e-12));
}

TEST_CASE("topent golden mean approaches log phi from above") {
  TopentOptions options;
  options.window_fraction = 0.8;
  EntropyTrace trace = topent_trace(load_bundled("golden_mean.json"), 400,
                                    options);
  CHECK(trace.tail_estimate > kLogPhi);
  CHECK(std::abs(trace.tail_estimate - kLogPhi) < 3e-3);
  // Values decrease toward the limit.
  CHECK(trace.points[10].second > trace.points[100].second);
  CHECK(trace.points[100].second > trace.points[399].second);
}

TEST_CASE("topent permutation spec has zero growth") {
  EntropyTrace trace = topent_trace(load_bundled("permutation.json"), 100);
  for (const auto& [n, v] : trace.points)
    CHECK_EQ(v, doctest::Approx(std::log(2.0) / (double)n).epsilon(1e-12));
  CHECK(trace.tail_estimate < 0.02);
}

TEST_CASE("topent norm choice does not move the tail") {
  for (const char* file :
       {"golden_mean.json", "mixed23.json", "ab_listcycle.json"}) {
    MatrixSequenceSpec spec = load_bundled(file);
    TopentOptions sum_norm;
    TopentOptions col_norm;
    col_norm.norm = NormKind::col_sum_max;
    double t_sum = topent_trace(spec, 200, sum_norm).tail_estimate;
    double t_col = topent_trace(spec, 200, col_norm).tail_estimate;
    // The norms differ by at most a factor of the alphabet bound.
    double slack = std::log((double)(2 * spec.alphabet_bound())) / 100.0;
    CHECK(std::abs(t_sum - t_col) <= slack);
    CHECK(t_col <= t_sum + 1e-12);
  }
}

TEST_CASE("topent scaled path equals the exact path") {
  for (const char* file : {"golden_mean.json", "ab_linear.json"}) {
    MatrixSequenceSpec spec = load_bundled(file);
    TopentOptions exact;
    TopentOptions scaled;
    scaled.scaled_path = true;
    EntropyTrace a = topent_trace(spec, 150, exact);
    EntropyTrace b = topent_trace(spec, 150, scaled);
    REQUIRE_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
      CHECK_EQ(a.points[i].second,
               doctest::Approx(b.points[i].second).epsilon(1e-9));
  }
}

TEST_CASE("topent values respect the alphabet ceiling") {
  for (const char* file : {"golden_mean.json", "full3.json", "mixed23.json",
                           "ab_pow2.json", "permutation.json"}) {
    MatrixSequenceSpec spec = load_bundled(file);
    EntropyTrace trace = topent_trace(spec, 80);
    double ceiling = 2.0 * std::log((double)spec.alphabet_bound()) + 1e-9;
    for (const auto& [n, v] : trace.points) {
      CHECK(v <= ceiling);
      CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("topent shift sandwich") {
  for (const char* file : {"golden_mean.json", "mixed23.json",
                           "ab_linear.json", "permutation.json"}) {
    MatrixSequenceSpec spec = load_bundled(file);
    double t0 = topent_trace(spec, 200).tail_estimate;
    double t1 = topent_trace(spec.shifted(1), 200).tail_estimate;
    double bound = 2.0 * std::log((double)spec.alphabet_bound()) / 100.0;
    CHECK(std::abs(t0 - t1) <= bound);
  }
}

TEST_CASE("metric_dk cases") {
  MatrixSequenceSpec gm = load_bundled("golden_mean.json");
  CHECK_EQ(metric_dk(gm, 0, {0, 1, 0}, {0, 1, 0}), 0.0);
  CHECK_EQ(metric_dk(gm, 0, {1, 0, 0}, {0, 1, 0}), 1.0);
  // Last agreement at coordinate 0: 1/w(0,0) = 1/2.
  CHECK_EQ(metric_dk(gm, 0, {0, 0, 1}, {0, 1, 0}), 0.5);
  // Last agreement at coordinate 1: 1/w(0,1) = 1/3.
  CHECK_EQ(metric_dk(gm, 0, {0, 0, 0}, {0, 0, 1}),
           doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // Same comparison seen at index 2 instead: 1/w(2,3).
  CHECK_EQ(metric_dk(gm, 2, {0, 0, 0}, {0, 0, 1}),
           doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // Longer agreement shrinks the distance: 1/w(0,2) = 1/5.
  CHECK_EQ(metric_dk(gm, 0, {0, 0, 0, 0}, {0, 0, 0, 1}),
           doctest::Approx(0.2).epsilon(1e-15));

  CHECK_THROWS_AS((void)metric_dk(gm, 0, {0, 0}, {0, 0, 1}),
                  undecidable_error);
  CHECK_THROWS_AS((void)metric_dk(gm, 0, {}, {0}), undecidable_error);
}

TEST_CASE("bowen distance maximizes over shifts") {
  MatrixSequenceSpec gm = load_bundled("golden_mean.json");
  Word x{0, 0, 0, 0};
  Word y{0, 0, 0, 1};
  // Shifts see windows w(0,2)=5, w(1,2)=3, w(2,2)=2.
  CHECK_EQ(bowen_distance(gm, 0, x, y), doctest::Approx(0.2).epsilon(1e-15));
  CHECK_EQ(bowen_distance(gm, 1, x, y),
           doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_EQ(bowen_distance(gm, 2, x, y), doctest::Approx(0.5).epsilon(1e-15));
  CHECK_EQ(bowen_distance(gm, 3, x, y), 1.0);
  CHECK_EQ(bowen_distance(gm, 3, x, x), 0.0);
  CHECK_THROWS_AS((void)bowen_distance(gm, 2, Word{0, 0}, Word{0, 0, 0}),
                  undecidable_error);
}

TEST_CASE("separated and spanning family on the golden mean") {
  SeparationReport report =
      verify_separated_spanning(load_bundled("golden_mean.json"), 4, 0.3);
  CHECK_EQ(report.m_n, 2);
  CHECK(report.set_size == BigNat(34));  // F(9) words of depth 6
  CHECK(report.separated_ok);
  CHECK(report.spanning_ok);
  // Pairs differing only in the last coordinate realize 1/w(4,5) = 1/3.
  CHECK_EQ(report.separation_scale, doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("separated and spanning family on the full shift") {
  SeparationReport report =
      verify_separated_spanning(load_bundled("full3.json"), 2, 0.1);
  CHECK_EQ(report.m_n, 2);
  CHECK(report.set_size == BigNat(243));
  CHECK(report.separated_ok);
  CHECK(report.spanning_ok);
  CHECK_EQ(report.separation_scale, doctest::Approx(1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("separated and spanning family on the permutation spec") {
  SeparationReport report =
      verify_separated_spanning(load_bundled("permutation.json"), 2, 0.6);
  CHECK_EQ(report.m_n, 0);
  CHECK(report.set_size == BigNat(2));
  CHECK(report.separated_ok);
  CHECK(report.spanning_ok);
  CHECK_EQ(report.separation_scale, 1.0);
}
