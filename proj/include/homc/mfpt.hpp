#pragma once

#include <Eigen/Dense>

#include "homc/reduction.hpp"
#include "homc/tensor.hpp"

namespace homc {

// Mean first passage times of the higher-order chain: entry (i1, i2, ..., im)
// is the expected number of steps of the first arrival at i1 from history
// (i2, ..., im). Solves the linear system
//   mu_t - sum_{j != i1} p_{j, i2...im} * mu_{i1, j, i2...i(m-1)} = 1
// over all m-tuples t. The system is nonsingular exactly when the chain is
// ergodic, so a singular factorization is reported as NonErgodicChain.
struct MfptTensor {
  Tensor mu;
  double residual = 0.0;  // max-norm defect of the defining equation

  explicit MfptTensor(TensorShape s) : mu(s) {}
};

MfptTensor solve_mfpt(const StochasticTensor& p);

// Max-norm defect |mu_t - 1 - sum_{j != i1} p_{j, i2...} mu_{i1, j, i2...}|
// of a candidate solution.
double mfpt_residual(const StochasticTensor& p, const Tensor& mu);

// First-order analogue on the reduced chain: M = E + (M - M_d) Q with M_d the
// diagonal of M. Deliberately a different quantity from the tensor solution:
// it measures passes between full history states, not bare states.
struct MfptMatrix {
  Eigen::MatrixXd M;
  Eigen::MatrixXd M_d;
  double residual = 0.0;
};

MfptMatrix mfpt_reduced(const ReducedChain& rc);

}  // namespace homc
