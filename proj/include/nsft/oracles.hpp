#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsft/spec_model.hpp"

namespace nsft {

struct OracleResult {
  std::string quantity;
  std::string method;
  std::string engine_value;
  std::string oracle_value;
  bool match = false;
  bool skipped = false;
  double deviation = 0.0;
};

// Transition-walk enumeration against exact block products: per-endpoint
// counts and totals, depth by depth. Cap refusals are recorded as skipped.
std::vector<OracleResult> oracle_word_counts(const MatrixSequenceSpec& spec,
                                             std::int64_t max_depth,
                                             std::int64_t cap = 1000000);

// Kronecker product laws: exact factorization of product counts, and exact
// trace doubling when both factors are the same spec.
std::vector<OracleResult> oracle_product_entropy(const MatrixSequenceSpec& a,
                                                 const MatrixSequenceSpec& b,
                                                 std::int64_t horizon = 64);

// Classical Parry data of a single primitive 0-1 matrix by plain power
// iteration, compared against the chain frames of the constant spec seeded
// with the computed left eigenvector.
struct StationaryParry {
  double lambda = 0.0;
  std::vector<double> w;   // right eigenvector on the simplex
  std::vector<double> v;   // left eigenvector with v . w = 1
  std::vector<double> pi;  // v o w
};

StationaryParry power_iteration_parry(const TransitionMatrix& matrix,
                                      double tol = 1e-14,
                                      std::int64_t max_iter = 200000);

std::vector<OracleResult> oracle_stationary_parry(const TransitionMatrix& matrix,
                                                  double tol = 1e-8);

}  // namespace nsft
