#pragma once

#include <cstdint>
#include <vector>

#include "nsft/spec_model.hpp"
#include "nsft/topent.hpp"

namespace nsft {

// Per-index Parry data: right tail vector w_i (positive, l1-normalized),
// normalized left vector v_i with v_i . w_i = 1, growth factor
// lambda_i = ||L_i w_{i+1}||_1, coordinate distribution pi_i = v_i o w_i,
// and the row-stochastic transition P_i (l_i x l_{i+1}).
struct ParryFrame {
  std::int64_t index = 0;
  std::vector<double> w;
  std::vector<double> v;
  std::vector<double> pi;
  double lambda = 0.0;
  std::vector<double> P;  // row-major
  std::int64_t p_cols = 0;

  double p_at(std::int64_t r, std::int64_t c) const {
    return P[(std::size_t)(r * p_cols + c)];
  }
};

class ParryChain {
 public:
  ParryChain(MatrixSequenceSpec spec, std::vector<ParryFrame> frames,
             std::vector<double> cum_log_lambda, bool ones_v0, double tol,
             std::int64_t tail_depth, double residual);

  const MatrixSequenceSpec& spec() const { return spec_; }
  std::int64_t horizon() const { return (std::int64_t)frames_.size() - 1; }
  const ParryFrame& frame(std::int64_t i) const;

  // lambda^(k,m) = prod_{i=k}^{m-1} lambda_i, evaluated in the log domain.
  double log_lambda_block(std::int64_t k, std::int64_t m) const;
  double lambda_block(std::int64_t k, std::int64_t m) const;

  bool ones_v0() const { return ones_v0_; }
  double tol() const { return tol_; }
  std::int64_t tail_depth_used() const { return tail_depth_; }
  double convergence_residual() const { return residual_; }

 private:
  MatrixSequenceSpec spec_;
  std::vector<ParryFrame> frames_;
  std::vector<double> cum_log_lambda_;  // size horizon + 2
  bool ones_v0_;
  double tol_;
  std::int64_t tail_depth_;
  double residual_;
};

// Right tail vector at index i: limit of normalized L_i ... L_{i+T-1} u over
// growing T, with an l1-Cauchy stopping rule on doubling depths. Requires a
// strictly positive block product inside [i, i+max_tail].
std::vector<double> w_tail(const MatrixSequenceSpec& spec, std::int64_t i,
                           double tol = 1e-12, std::int64_t max_tail = 2048);

// Builds frames 0..horizon. v0 empty means the canonical all-ones seed.
ParryChain parry_frames(const MatrixSequenceSpec& spec, std::int64_t horizon,
                        double tol = 1e-12,
                        const std::vector<double>& v0 = {},
                        std::int64_t max_tail = 2048);

// Measure of the cylinder fixing word at coordinates k..k+len-1. Inadmissible
// words get measure zero. Internally evaluates both the Markov-product route
// and the closed-form route and insists they agree to 1e-9 relative.
double cylinder_measure(const ParryChain& chain, std::int64_t k,
                        const Word& word);

struct CylinderRoutes {
  double markov = 0.0;
  double closed_form = 0.0;
};
CylinderRoutes cylinder_measure_routes(const ParryChain& chain, std::int64_t k,
                                       const Word& word);

struct InvarianceReport {
  std::int64_t k = 0;
  std::int64_t depth = 0;
  std::int64_t cylinders_checked = 0;
  double max_deviation = 0.0;
  bool ok = false;
};

// Checks sum_{x_k} mu_k([.x_k x_{k+1} ... x_m]) = mu_{k+1}([.x_{k+1} ... x_m])
// over all admissible cylinders with m - k <= depth.
InvarianceReport verify_invariance(const ParryChain& chain, std::int64_t k,
                                   std::int64_t depth, double tol);

// Samples x_k ~ pi_k, then follows the stochastic rows of P. Deterministic
// for a fixed seed.
Word sample_path(const ParryChain& chain, std::int64_t k, std::int64_t length,
                 std::uint64_t seed);

}  // namespace nsft
