#include "homc/mfpt.hpp"

#include <cmath>
#include <string>

namespace homc {

namespace {

constexpr double kPivotTol = 1e-12;  // relative pivot floor for singularity

// Solves the assembled system A x = 1 for the flat unknown vector, throwing
// NonErgodicChain when the factorization is numerically singular.
Eigen::VectorXd solve_passage_system(Eigen::MatrixXd A) {
  const Eigen::Index N = A.rows();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(std::move(A));
  const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
  const double max_pivot = diag.maxCoeff();
  const double min_pivot = diag.minCoeff();
  if (min_pivot < kPivotTol * std::max(1.0, max_pivot)) {
    throw NonErgodicChain(
        "mean first passage system is singular (relative pivot " +
        std::to_string(max_pivot > 0 ? min_pivot / max_pivot : 0.0) +
        "); only ergodic chains admit finite mean first passage times");
  }
  return lu.solve(Eigen::VectorXd::Ones(N));
}

// Builds the coefficient matrix for a transition tensor: unknowns in linear
// tuple order, A = I minus the off-target back-substitution weights.
Eigen::MatrixXd assemble(const StochasticTensor& p) {
  const std::size_t n = static_cast<std::size_t>(p.dimension());
  const std::size_t total = p.shape().entry_count();
  const std::size_t mids = p.shape().mid_count();
  if (total > kEntryGuard / total) {
    throw GuardExceeded("mean first passage system would need " +
                        std::to_string(total) + "^2 coefficients");
  }
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(total),
                                static_cast<Eigen::Index>(total));
  for (std::size_t row = 0; row < total; ++row) {
    // row encodes t = (i1, i2, ..., im); the coupled unknowns replace the
    // head pair by (i1, j) while the transition weight reads (j, i2...im).
    const std::size_t i1 = row % n;
    const std::size_t tail = row / n;        // (i2, ..., im)
    const std::size_t mid = tail % mids;     // (i2, ..., i(m-1))
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i1) continue;
      const std::size_t unknown = i1 + n * j + n * n * mid;
      A(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(unknown)) -=
          p[j + n * tail];
    }
  }
  return A;
}

}  // namespace

MfptTensor solve_mfpt(const StochasticTensor& p) {
  const Eigen::VectorXd x = solve_passage_system(assemble(p));
  MfptTensor result(p.shape());
  for (std::size_t i = 0; i < result.mu.size(); ++i) {
    result.mu[i] = x(static_cast<Eigen::Index>(i));
  }
  result.residual = mfpt_residual(p, result.mu);
  return result;
}

double mfpt_residual(const StochasticTensor& p, const Tensor& mu) {
  if (!(mu.shape() == p.shape())) {
    throw ShapeMismatch("mean first passage tensor has a different shape than the chain");
  }
  const std::size_t n = static_cast<std::size_t>(p.dimension());
  const std::size_t total = p.shape().entry_count();
  const std::size_t mids = p.shape().mid_count();
  double worst = 0.0;
  for (std::size_t row = 0; row < total; ++row) {
    const std::size_t i1 = row % n;
    const std::size_t tail = row / n;
    const std::size_t mid = tail % mids;
    double lhs = mu[row] - 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i1) continue;
      lhs -= p[j + n * tail] * mu[i1 + n * j + n * n * mid];
    }
    worst = std::max(worst, std::abs(lhs));
  }
  return worst;
}

MfptMatrix mfpt_reduced(const ReducedChain& rc) {
  const std::size_t N = rc.size;
  // The reduced chain is first-order, so the matrix equation is the order-2
  // instance of the tensor equation; reuse the same assembler on Q.
  const StochasticTensor q = as_first_order_tensor(rc);
  const Eigen::VectorXd x = solve_passage_system(assemble(q));

  MfptMatrix result;
  result.M = Eigen::Map<const Eigen::MatrixXd>(x.data(), static_cast<Eigen::Index>(N),
                                               static_cast<Eigen::Index>(N));
  result.M_d = result.M.diagonal().asDiagonal();
  result.residual = mfpt_residual(q, Tensor(TensorShape{2, static_cast<int>(N)},
                                            std::vector<double>(x.data(), x.data() + N * N)));
  return result;
}

}  // namespace homc
