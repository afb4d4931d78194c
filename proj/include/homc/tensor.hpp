#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homc/errors.hpp"

namespace homc {

// Largest dense entry count we are willing to allocate. Chains analyzed here
// are desk-scale; anything bigger deserves a different tool.
inline constexpr std::size_t kEntryGuard = 10'000'000;

// Default tolerance used when checking that a tensor is stochastic.
inline constexpr double kStochasticTol = 1e-12;

// A state tuple such as (i1, i2, ..., im). Components are 1-based to match
// the notation used in chain files and reports.
using IndexTuple = std::vector<int>;

// ---- shape ------------------------------------------------------------------

struct TensorShape {
  int order = 2;      // m: number of indices (>= 2)
  int dimension = 2;  // n: number of states  (>= 2)

  // Validating factory; throws OutOfRange / GuardExceeded.
  static TensorShape of(int order, int dimension,
                        std::size_t guard = kEntryGuard);

  std::size_t entry_count() const;  // n^m
  std::size_t tail_count() const;   // n^(m-1): number of history tails
  std::size_t mid_count() const;    // n^(m-2): tails shared between factors

  bool operator==(const TensorShape&) const = default;
};

// n^p as a size, with overflow/guard checking.
std::size_t checked_pow(int n, int p, std::size_t guard = kEntryGuard);

// ---- linear indexing ----------------------------------------------------------
//
// Tuples map to flat positions with the FIRST component varying fastest:
//   lin(i1,...,il) = (i1-1) + n*(i2-1) + ... + n^(l-1)*(il-1).
// The public surface is 1-based on both sides; internal arithmetic is 0-based.

// 1-based tuple -> 0-based flat offset.
std::size_t linear_offset(const IndexTuple& t, int n);
// 0-based flat offset -> 1-based tuple of the given length.
IndexTuple tuple_at_offset(std::size_t offset, int n, int length);

// 1-based tuple -> 1-based linear index (the map used in files and reports).
std::size_t index_of_tuple(const IndexTuple& t, int n);
// 1-based linear index -> 1-based tuple. Throws OutOfRange.
IndexTuple tuple_of_index(std::size_t index, int n, int length);

// ---- dense tensor -------------------------------------------------------------

class Tensor {
 public:
  explicit Tensor(TensorShape shape);  // zero-filled
  Tensor(TensorShape shape, std::vector<double> entries);

  const TensorShape& shape() const { return shape_; }
  int order() const { return shape_.order; }
  int dimension() const { return shape_.dimension; }
  std::size_t size() const { return entries_.size(); }

  double operator[](std::size_t offset) const { return entries_[offset]; }
  double& operator[](std::size_t offset) { return entries_[offset]; }

  // 1-based tuple access; bounds-checked.
  double at(const IndexTuple& t) const;
  void set(const IndexTuple& t, double value);

  const std::vector<double>& entries() const { return entries_; }
  std::vector<double>& entries() { return entries_; }

  double max_abs() const;

 private:
  TensorShape shape_;
  std::vector<double> entries_;
};

enum class SpecialKind { identity, ones };

// identity: entry 1 exactly when i1 == i2, else 0 (for m=2 the usual I).
// ones:     every entry 1.
Tensor special_tensor(SpecialKind kind, TensorShape shape);

// The product C with c_{i1 i2...im} = sum_j a_{i1 j i2...i(m-1)} * b_{j i2...im}.
// For m=2 this is ordinary matrix multiplication. Not associative for m >= 3.
Tensor boxtimes(const Tensor& a, const Tensor& b);

// Keeps entries with i1 == i2, zeroes the rest.
Tensor diagonal_part(const Tensor& a);

// Mode-1 unfolding: n rows, n^(m-1) columns, column order = linear order of
// the tail (i2,...,im). With first-index-fastest storage this is a reshape.
Eigen::MatrixXd mode1_matricize(const Tensor& a);

// ---- stochastic checking ------------------------------------------------------

struct StochasticVerdict {
  bool ok = true;
  // When not ok: the first offending tail (i2,...,im), 1-based, and details.
  IndexTuple first_bad_tail;
  double column_sum = 1.0;
  std::string message;
};

// Accepts iff every entry lies in [-tol, 1+tol] and every column sum (over the
// first index, per fixed tail) is within tol of 1. Reports the first violation
// in linear tail order.
StochasticVerdict validate_stochastic(const Tensor& a, double tol);

// A transition tensor: entry (i1, i2, ..., im) is the probability of moving to
// state i1 given current state i2 and past states i3...im. Columns over i1 sum
// to 1. Immutable after construction.
class StochasticTensor {
 public:
  // Validates at the given tolerance; throws InputError on violation.
  explicit StochasticTensor(Tensor t, double tol = kStochasticTol);

  const Tensor& tensor() const { return tensor_; }
  const TensorShape& shape() const { return tensor_.shape(); }
  int order() const { return tensor_.order(); }
  int dimension() const { return tensor_.dimension(); }
  double operator[](std::size_t offset) const { return tensor_[offset]; }
  double at(const IndexTuple& t) const { return tensor_.at(t); }

 private:
  Tensor tensor_;
};

// P^k by the literal recursion P^(k+1) = P^k [x] P with P^0 = identity.
// Exponentiation by squaring is NOT legal here: the product is non-associative
// for m >= 3, so (P^2)^2 need not equal P^4.
StochasticTensor tensor_power(const StochasticTensor& p, int k);

}  // namespace homc
