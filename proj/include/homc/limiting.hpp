#pragma once

#include <Eigen/Dense>

#include "homc/reduction.hpp"
#include "homc/tensor.hpp"

namespace homc {

// ---- stationary distributions of the reduced chain ------------------------------

enum class StationaryMethod { cesaro, nullspace };

const char* to_string(StationaryMethod m);

struct StationaryDistribution {
  Eigen::VectorXd xi;        // nonnegative, sums to 1
  StationaryMethod method = StationaryMethod::cesaro;
  double residual = 0.0;     // ||Q xi - xi||_inf
  int iterations = 0;        // cesaro only
};

// cesaro: damped power iteration x <- (Qx + x)/2 from the uniform start. The
//   averaged operator (Q + I)/2 strictly dampens every rotation of the power
//   map, so the iteration converges for every column-stochastic Q, periodic
//   ones included, and the fixed point is a stationary vector of Q. Stops when
//   successive iterates agree within 1e-12 (cap 10^6, then NotConverged).
// nullspace: rank-revealing factorization of Q - I, then selection of a
//   nonnegative normalized vector from the null space basis; with a
//   multi-dimensional stationary set this lands on an extreme vector, making
//   it a useful second sample alongside the cesaro one. Throws
//   NoNonnegativeVectorFound when no such selection exists numerically.
StationaryDistribution stationary_distribution(
    const ReducedChain& rc, StationaryMethod method = StationaryMethod::cesaro);

// ---- limiting distribution of the higher-order chain ------------------------------

enum class LimitProvenance { via_stationary, via_powers };

const char* to_string(LimitProvenance p);

struct LimitingDistribution {
  Eigen::VectorXd pi;  // length n, nonnegative, sums to 1
  LimitProvenance provenance = LimitProvenance::via_stationary;
};

// pi_i = sum of xi over all multi-index states whose current component is i
// (the unfolded-identity matrix applied to xi). Any stationary vector of the
// reduced chain gives the same pi when the chain is regular.
LimitingDistribution limiting_distribution(const StochasticTensor& p,
                                           const StationaryDistribution& xi);
// Same marginalization for an externally supplied stationary vector.
LimitingDistribution limiting_from_vector(const StochasticTensor& p,
                                          const Eigen::VectorXd& xi);

// Independent check: iterate P^k until every lead state's values agree across
// all history tails (spread below tol), which is literally the product
// structure the limit must have; then pi is the shared per-state value.
// Throws NotConverged when the cap is hit, the expected outcome for chains
// that are not regular.
struct PowerLimit {
  LimitingDistribution dist;
  int k_used = 0;
  double spread = 0.0;  // final max over i1 of (max tail - min tail)
};

PowerLimit limit_via_powers(const StochasticTensor& p, double tol = 1e-10,
                            int k_max = 100000);

}  // namespace homc
