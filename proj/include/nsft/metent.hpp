#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsft/parry.hpp"
#include "nsft/spec_model.hpp"
#include "nsft/topent.hpp"

namespace nsft {

// Entropy of the depth-k cylinder partition under mu_0 via the column-sum
// formula H(pi_k) + sum_b (pi_k)_b log colsum_b(L^(0,k)). Valid only for the
// all-ones left seed; column sums come from the exact block product.
double partition_entropy_closed(const MatrixSequenceSpec& spec,
                                const ParryChain& chain, std::int64_t k);

// Same quantity by enumerating cylinders and summing -mu log mu.
double partition_entropy_direct(const ParryChain& chain, std::int64_t k,
                                std::int64_t cap = 1000000);

// Points (k, (1/k) * partition entropy at depth n_tilde_k(eps)).
EntropyTrace metent_trace(const MatrixSequenceSpec& spec,
                          const ParryChain& chain, double eps,
                          std::int64_t horizon,
                          double window_fraction = 0.5);

// Points (k, (1/k) * log lambda^(0,k)): the growth lower bound.
EntropyTrace lambda_lower_bound_trace(const ParryChain& chain,
                                      std::int64_t horizon,
                                      double window_fraction = 0.5);

enum class Verdict { pass, fail, inconclusive };

struct ConditionWitness {
  std::int64_t k = 0;
  std::int64_t gamma = 0;  // maximizing column (0-based)
  std::int64_t beta = -1;  // violating column, when applicable
  double value = 0.0;      // reported mass for mass-type conditions
};

struct ConditionReport {
  std::string condition;
  std::string params;
  Verdict verdict = Verdict::inconclusive;
  std::vector<ConditionWitness> witnesses;
  std::vector<std::pair<std::int64_t, double>> trace;
  double tail_max = 0.0;
  std::int64_t max_block_gap = -1;  // largest N_k seen, when applicable
};

// For k in [k0, k1] and every maximizing column gamma of L^(0,k): each m with
// w(k,k+m) > 1/eps (scanned from the minimal one up to m + slack) must give a
// block L^(k,k+m) whose gamma row is entrywise positive.
ConditionReport check_cond_413ii(const MatrixSequenceSpec& spec, double eps,
                                 std::int64_t k0, std::int64_t k1,
                                 std::int64_t slack = 3);

// Trace of (1/k) log lambda^(k, k+N_k) with N_k the primitivity offset;
// verdict from the tail window against pass/fail thresholds.
ConditionReport check_cond_413iii(const MatrixSequenceSpec& spec,
                                  const ParryChain& chain,
                                  std::int64_t horizon,
                                  double pass_tol = 1e-2,
                                  double fail_threshold = 1e-1,
                                  double window_fraction = 0.5);

// For k in [k0, k1]: the columns reachable from a maximizing gamma inside the
// window [k, k + m_eps(k)] must carry pi mass at least 1 - delta.
ConditionReport check_cond_414ii(const MatrixSequenceSpec& spec,
                                 const ParryChain& chain, double delta,
                                 double eps, std::int64_t k0, std::int64_t k1);

}  // namespace nsft
