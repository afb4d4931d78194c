#include "homc/limiting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homc/errors.hpp"
#include "homc/passage.hpp"

namespace homc {

namespace {

constexpr double kCesaroTol = 1e-12;
constexpr int kCesaroMaxIterations = 1000000;

double residual_of(const Eigen::MatrixXd& Q, const Eigen::VectorXd& xi) {
  return (Q * xi - xi).cwiseAbs().maxCoeff();
}

StationaryDistribution stationary_cesaro(const ReducedChain& rc) {
  const int N = rc.size;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(N, 1.0 / N);
  for (int iter = 1; iter <= kCesaroMaxIterations; ++iter) {
    Eigen::VectorXd next = 0.5 * (rc.Q * x + x);
    const double diff = (next - x).cwiseAbs().maxCoeff();
    x = next;
    if (diff < kCesaroTol) {
      // Renormalize away accumulated rounding; the iterate is already
      // nonnegative because it is a convex combination of nonnegative vectors.
      x /= x.sum();
      return StationaryDistribution{x, StationaryMethod::cesaro,
                                    residual_of(rc.Q, x), iter};
    }
  }
  throw NotConverged(
      "stationary_distribution: damped iteration did not settle within 10^6 "
      "steps");
}

StationaryDistribution stationary_nullspace(const ReducedChain& rc) {
  const int N = rc.size;
  Eigen::MatrixXd A = rc.Q - Eigen::MatrixXd::Identity(N, N);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-10);
  Eigen::MatrixXd kernel = lu.kernel();  // N x d, d >= 1 for stochastic Q
  const int d = static_cast<int>(kernel.cols());

  auto finish = [&](Eigen::VectorXd v) {
    // Clamp the tiny negatives that exact zeros pick up in the factorization.
    for (int i = 0; i < N; ++i) {
      if (v[i] < 0.0 && v[i] > -1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff()))
        v[i] = 0.0;
    }
    const double s = v.sum();
    if (s <= 0.0) throw NoNonnegativeVectorFound("stationary_distribution: degenerate kernel vector");
    v /= s;
    return StationaryDistribution{v, StationaryMethod::nullspace,
                                  residual_of(rc.Q, v), 0};
  };

  if (d == 1) {
    Eigen::VectorXd v = kernel.col(0);
    // Fix the overall sign so the vector points into the nonnegative cone.
    if (v.sum() < 0.0) v = -v;
    if (v.minCoeff() < -1e-9 * v.cwiseAbs().maxCoeff()) {
      throw NoNonnegativeVectorFound(
          "stationary_distribution: one-dimensional kernel has mixed signs");
    }
    return finish(v);
  }

  // d >= 2: search the kernel for an extreme nonnegative vector. Walk along
  // a + t*w from a sign-fixed anchor and take the boundary value of t that
  // keeps every component nonnegative; at the boundary some component hits
  // zero, so the result differs from any interior (e.g. cesaro) vector.
  Eigen::VectorXd a = kernel.col(0);
  if (a.sum() < 0.0) a = -a;
  for (int c = 1; c < d; ++c) {
    const Eigen::VectorXd w = kernel.col(c);
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    bool feasible = true;
    for (int i = 0; i < N; ++i) {
      const double ai = a[i], wi = w[i];
      if (std::abs(wi) < 1e-14) {
        if (ai < -1e-12) feasible = false;
        continue;
      }
      const double bound = -ai / wi;
      if (wi > 0.0)
        t_lo = std::max(t_lo, bound);
      else
        t_hi = std::min(t_hi, bound);
    }
    if (!feasible || t_lo > t_hi + 1e-12 || !std::isfinite(t_lo)) continue;
    return finish(a + t_lo * w);
  }
  // Fall back to the anchor when it is on its own nonnegative.
  if (a.minCoeff() >= -1e-9 * a.cwiseAbs().maxCoeff()) return finish(a);
  throw NoNonnegativeVectorFound(
      "stationary_distribution: no nonnegative vector located in the kernel");
}

}  // namespace

const char* to_string(StationaryMethod m) {
  return m == StationaryMethod::cesaro ? "cesaro" : "nullspace";
}

const char* to_string(LimitProvenance p) {
  return p == LimitProvenance::via_stationary ? "via_stationary" : "via_powers";
}

StationaryDistribution stationary_distribution(const ReducedChain& rc,
                                               StationaryMethod method) {
  if (rc.size == 1) {
    // Degenerate one-state chain: the only distribution is [1].
    Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
    return StationaryDistribution{one, method, residual_of(rc.Q, one), 0};
  }
  return method == StationaryMethod::cesaro ? stationary_cesaro(rc)
                                            : stationary_nullspace(rc);
}

LimitingDistribution limiting_from_vector(const StochasticTensor& p,
                                          const Eigen::VectorXd& xi) {
  const int n = p.shape().dimension;
  const std::int64_t N = p.shape().tail_count();
  if (xi.size() != N) {
    throw ShapeMismatch("limiting distribution: stationary vector has length " +
                        std::to_string(xi.size()) + ", expected " +
                        std::to_string(N));
  }
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);
  for (std::int64_t t = 0; t < N; ++t) pi[static_cast<int>(t % n)] += xi[t];
  return LimitingDistribution{pi, LimitProvenance::via_stationary};
}

LimitingDistribution limiting_distribution(const StochasticTensor& p,
                                           const StationaryDistribution& xi) {
  return limiting_from_vector(p, xi.xi);
}

PowerLimit limit_via_powers(const StochasticTensor& p, double tol, int k_max) {
  const int n = p.shape().dimension;
  const std::int64_t tails = p.shape().tail_count();
  Tensor power = p.tensor();  // P^1
  for (int k = 1; k <= k_max; ++k) {
    double spread = 0.0;
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);
    for (int i1 = 0; i1 < n; ++i1) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::int64_t t = 0; t < tails; ++t) {
        const double v = power[i1 + n * t];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      spread = std::max(spread, hi - lo);
      pi[i1] = 0.5 * (lo + hi);
    }
    if (spread < tol) {
      pi /= pi.sum();
      return PowerLimit{LimitingDistribution{pi, LimitProvenance::via_powers},
                        k, spread};
    }
    if (k < k_max) power = boxtimes(power, p.tensor());
  }
  throw NotConverged(
      "limit_via_powers: power slices did not flatten within the step cap; "
      "the chain is likely not regular");
}

}  // namespace homc
