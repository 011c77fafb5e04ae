#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nsft/errors.hpp"
#include "nsft/oracles.hpp"
#include "test_support.hpp"

using namespace nsft;
using testutil::load_bundled;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_CASE("word-count oracle agrees on the bundled specs") {
  for (const char* file : {"golden_mean.json", "mixed23.json",
                           "ab_linear.json", "permutation.json"}) {
    auto results = oracle_word_counts(load_bundled(file), 10);
    CHECK_EQ(results.size(), 22);
    for (const auto& r : results) {
      CHECK(r.match);
      CHECK_FALSE(r.skipped);
      CHECK(r.deviation <= 1e-9);
    }
  }
}

TEST_CASE("word-count oracle reports Fibonacci totals on the golden mean") {
  auto results = oracle_word_counts(load_bundled("golden_mean.json"), 10);
  std::vector<std::uint64_t> fib{1, 1};
  while (fib.size() < 16) fib.push_back(fib.end()[-1] + fib.end()[-2]);
  for (std::int64_t n = 0; n <= 10; ++n) {
    const OracleResult& r = results[(std::size_t)(2 * n)];
    CHECK_EQ(r.quantity, "word_count(0," + std::to_string(n) + ")");
    CHECK_EQ(r.engine_value, std::to_string(fib[(std::size_t)(n + 2)]));
    CHECK_EQ(r.engine_value, r.oracle_value);
  }
}

TEST_CASE("word-count oracle records cap refusals as skipped") {
  // 3^{n+1} words on the full 3-shift: the cap of 100 trips from depth 4 on,
  // and the floating cross-check line is dropped with the enumeration.
  auto results = oracle_word_counts(load_bundled("full3.json"), 6, 100);
  CHECK_EQ(results.size(), 11);
  std::int64_t skipped = 0;
  for (const auto& r : results) skipped += r.skipped ? 1 : 0;
  CHECK_EQ(skipped, 3);
  const OracleResult& first_skipped = results[8];
  CHECK(first_skipped.skipped);
  CHECK_FALSE(first_skipped.match);
  CHECK_EQ(first_skipped.quantity, "word_count(0,4)");
  CHECK_EQ(first_skipped.engine_value, "243");
  CHECK_EQ(first_skipped.oracle_value, "243");
}

TEST_CASE("product oracle factorizes and doubles on the diagonal") {
  MatrixSequenceSpec gm = load_bundled("golden_mean.json");
  auto cross = oracle_product_entropy(gm, load_bundled("mixed23.json"), 24);
  REQUIRE_EQ(cross.size(), 1);
  CHECK(cross[0].match);
  CHECK_EQ(cross[0].engine_value, "exact");

  auto diag = oracle_product_entropy(gm, gm, 24);
  REQUIRE_EQ(diag.size(), 2);
  CHECK(diag[0].match);
  CHECK(diag[1].match);
  CHECK(diag[1].deviation <= 1e-12);
}

TEST_CASE("power iteration recovers the classical golden-mean data") {
  StationaryParry classical =
      power_iteration_parry(load_bundled("golden_mean.json").matrix_at(0));
  CHECK_EQ(classical.lambda, doctest::Approx(kPhi).epsilon(1e-12));
  CHECK_EQ(classical.w[0], doctest::Approx(1.0 / kPhi).epsilon(1e-10));
  CHECK_EQ(classical.w[1], doctest::Approx(1.0 / (kPhi * kPhi)).epsilon(1e-10));
  CHECK_EQ(classical.pi[0],
           doctest::Approx(kPhi * kPhi / (1.0 + kPhi * kPhi)).epsilon(1e-10));
  double mass = classical.pi[0] + classical.pi[1];
  CHECK_EQ(mass, doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power iteration refuses degenerate inputs") {
  CHECK_THROWS_AS(
      (void)power_iteration_parry(load_bundled("permutation.json").matrix_at(0)),
      primitivity_error);
  CHECK_THROWS_AS(
      (void)power_iteration_parry(load_bundled("mixed23.json").matrix_at(0)),
      spec_error);
}

TEST_CASE("stationary oracle matches the seeded chain frame by frame") {
  for (const char* file : {"golden_mean.json", "full3.json"}) {
    auto results =
        oracle_stationary_parry(load_bundled(file).matrix_at(0));
    CHECK_EQ(results.size(), 37);
    for (const auto& r : results) {
      CHECK(r.match);
      CHECK(r.deviation <= 1e-8);
    }
  }
}
