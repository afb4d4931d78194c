#pragma once

// Shared helpers for the test suites: deterministic random chains, slice-wise
// tensor construction, and max-difference comparisons.

#include <cmath>
#include <cstdint>
#include <vector>

#include "homc/simulate.hpp"
#include "homc/tensor.hpp"

namespace homc::testing {

// Deterministic uniform double in [0, 1) driven by the library generator, so
// test inputs are identical on every platform.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return gen_.next_double(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_.next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  SplitMix64 gen_;
};

// Random dense tensor with entries in (0, 1), not normalized.
inline Tensor random_tensor(TensorShape shape, TestRng& rng) {
  Tensor t(shape);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform() + 1e-3;
  return t;
}

// Random transition tensor: positive entries, columns normalized to sum 1.
inline StochasticTensor random_chain(TensorShape shape, TestRng& rng) {
  Tensor t = random_tensor(shape, rng);
  const std::size_t n = static_cast<std::size_t>(shape.dimension);
  const std::size_t tails = shape.tail_count();
  for (std::size_t tail = 0; tail < tails; ++tail) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += t[i + n * tail];
    for (std::size_t i = 0; i < n; ++i) t[i + n * tail] /= sum;
  }
  return StochasticTensor(std::move(t));
}

// Random chain with a configurable fraction of structurally zero entries
// (columns are kept valid by re-seeding empty ones).
inline StochasticTensor random_sparse_chain(TensorShape shape, TestRng& rng,
                                            double zero_fraction) {
  Tensor t(shape);
  const std::size_t n = static_cast<std::size_t>(shape.dimension);
  const std::size_t tails = shape.tail_count();
  for (std::size_t tail = 0; tail < tails; ++tail) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = rng.uniform() < zero_fraction ? 0.0 : rng.uniform() + 1e-3;
      t[i + n * tail] = v;
      sum += v;
    }
    if (sum == 0.0) {
      const std::size_t lucky = static_cast<std::size_t>(rng.uniform_int(0, shape.dimension - 1));
      t[lucky + n * tail] = 1.0;
      sum = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) t[i + n * tail] /= sum;
  }
  return StochasticTensor(std::move(t));
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace homc::testing
