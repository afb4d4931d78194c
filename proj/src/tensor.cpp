#include "homc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace homc {

namespace {

std::string tuple_to_string(const IndexTuple& t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ", ";
    os << t[i];
  }
  os << ')';
  return os.str();
}

}  // namespace

std::size_t checked_pow(int n, int p, std::size_t guard) {
  if (n < 1 || p < 0) throw OutOfRange("checked_pow: need n >= 1 and p >= 0");
  std::size_t result = 1;
  for (int i = 0; i < p; ++i) {
    if (result > guard / static_cast<std::size_t>(n)) {
      std::ostringstream os;
      os << "entry count " << n << "^" << p << " exceeds the dense-storage guard of "
         << guard << " entries";
      throw GuardExceeded(os.str());
    }
    result *= static_cast<std::size_t>(n);
  }
  return result;
}

TensorShape TensorShape::of(int order, int dimension, std::size_t guard) {
  if (order < 2) throw OutOfRange("tensor order must be >= 2, got " + std::to_string(order));
  if (dimension < 2)
    throw OutOfRange("tensor dimension must be >= 2, got " + std::to_string(dimension));
  checked_pow(dimension, order, guard);  // throws GuardExceeded when too big
  return TensorShape{order, dimension};
}

std::size_t TensorShape::entry_count() const { return checked_pow(dimension, order); }
std::size_t TensorShape::tail_count() const { return checked_pow(dimension, order - 1); }
std::size_t TensorShape::mid_count() const { return checked_pow(dimension, order - 2); }

std::size_t linear_offset(const IndexTuple& t, int n) {
  std::size_t offset = 0;
  std::size_t stride = 1;
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    const int c = t[pos];
    if (c < 1 || c > n) {
      throw OutOfRange("tuple component " + std::to_string(pos + 1) + " of " +
                       tuple_to_string(t) + " is outside [1, " + std::to_string(n) + "]");
    }
    offset += stride * static_cast<std::size_t>(c - 1);
    stride *= static_cast<std::size_t>(n);
  }
  return offset;
}

IndexTuple tuple_at_offset(std::size_t offset, int n, int length) {
  IndexTuple t(static_cast<std::size_t>(length));
  for (int pos = 0; pos < length; ++pos) {
    t[static_cast<std::size_t>(pos)] = static_cast<int>(offset % static_cast<std::size_t>(n)) + 1;
    offset /= static_cast<std::size_t>(n);
  }
  if (offset != 0) throw OutOfRange("linear index does not fit a tuple of length " +
                                    std::to_string(length));
  return t;
}

std::size_t index_of_tuple(const IndexTuple& t, int n) { return linear_offset(t, n) + 1; }

IndexTuple tuple_of_index(std::size_t index, int n, int length) {
  const std::size_t total = checked_pow(n, length);
  if (index < 1 || index > total) {
    throw OutOfRange("linear index " + std::to_string(index) + " is outside [1, " +
                     std::to_string(total) + "]");
  }
  return tuple_at_offset(index - 1, n, length);
}

Tensor::Tensor(TensorShape shape)
    : shape_(shape), entries_(shape.entry_count(), 0.0) {}

Tensor::Tensor(TensorShape shape, std::vector<double> entries)
    : shape_(shape), entries_(std::move(entries)) {
  if (entries_.size() != shape_.entry_count()) {
    throw ShapeMismatch("tensor of order " + std::to_string(shape_.order) + ", dimension " +
                        std::to_string(shape_.dimension) + " needs " +
                        std::to_string(shape_.entry_count()) + " entries, got " +
                        std::to_string(entries_.size()));
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i])) {
      throw InputError("tensor entry at " +
                       tuple_to_string(tuple_at_offset(i, shape_.dimension, shape_.order)) +
                       " is not finite");
    }
  }
}

double Tensor::at(const IndexTuple& t) const {
  if (static_cast<int>(t.size()) != shape_.order) {
    throw ShapeMismatch("tuple " + tuple_to_string(t) + " has length " +
                        std::to_string(t.size()) + ", tensor order is " +
                        std::to_string(shape_.order));
  }
  return entries_[linear_offset(t, shape_.dimension)];
}

void Tensor::set(const IndexTuple& t, double value) {
  if (static_cast<int>(t.size()) != shape_.order) {
    throw ShapeMismatch("tuple " + tuple_to_string(t) + " has length " +
                        std::to_string(t.size()) + ", tensor order is " +
                        std::to_string(shape_.order));
  }
  entries_[linear_offset(t, shape_.dimension)] = value;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

Tensor special_tensor(SpecialKind kind, TensorShape shape) {
  Tensor out(shape);
  const std::size_t n = static_cast<std::size_t>(shape.dimension);
  const std::size_t total = out.size();
  if (kind == SpecialKind::ones) {
    std::fill(out.entries().begin(), out.entries().end(), 1.0);
    return out;
  }
  // identity: 1 exactly when the first two components agree.
  for (std::size_t offset = 0; offset < total; ++offset) {
    const std::size_t i1 = offset % n;
    const std::size_t i2 = (offset / n) % n;
    if (i1 == i2) out[offset] = 1.0;
  }
  return out;
}

Tensor boxtimes(const Tensor& a, const Tensor& b) {
  if (!(a.shape() == b.shape())) {
    throw ShapeMismatch("product factors must share one shape; got order " +
                        std::to_string(a.order()) + " dim " + std::to_string(a.dimension()) +
                        " vs order " + std::to_string(b.order()) + " dim " +
                        std::to_string(b.dimension()));
  }
  const std::size_t n = static_cast<std::size_t>(a.dimension());
  const std::size_t tails = a.shape().tail_count();
  const std::size_t mids = a.shape().mid_count();
  Tensor c(a.shape());
  // c[i1 + n*tail] = sum_j a[i1 + n*j + n^2*mid] * b[j + n*tail],
  // where mid = first (m-2) components of the tail = tail % n^(m-2).
  for (std::size_t tail = 0; tail < tails; ++tail) {
    const std::size_t mid = tail % mids;
    const std::size_t a_base = n * n * mid;
    const std::size_t out_base = n * tail;
    for (std::size_t j = 0; j < n; ++j) {
      const double bj = b[j + out_base];
      if (bj == 0.0) continue;
      const std::size_t a_col = a_base + n * j;
      for (std::size_t i1 = 0; i1 < n; ++i1) {
        c[i1 + out_base] += a[i1 + a_col] * bj;
      }
    }
  }
  return c;
}

Tensor diagonal_part(const Tensor& a) {
  const std::size_t n = static_cast<std::size_t>(a.dimension());
  Tensor out(a.shape());
  const std::size_t total = a.size();
  for (std::size_t offset = 0; offset < total; ++offset) {
    const std::size_t i1 = offset % n;
    const std::size_t i2 = (offset / n) % n;
    if (i1 == i2) out[offset] = a[offset];
  }
  return out;
}

Eigen::MatrixXd mode1_matricize(const Tensor& a) {
  const auto rows = static_cast<Eigen::Index>(a.dimension());
  const auto cols = static_cast<Eigen::Index>(a.shape().tail_count());
  // First-index-fastest storage makes the unfolding a column-major reshape.
  return Eigen::Map<const Eigen::MatrixXd>(a.entries().data(), rows, cols);
}

StochasticVerdict validate_stochastic(const Tensor& a, double tol) {
  const std::size_t n = static_cast<std::size_t>(a.dimension());
  const std::size_t tails = a.shape().tail_count();
  for (std::size_t tail = 0; tail < tails; ++tail) {
    double sum = 0.0;
    for (std::size_t i1 = 0; i1 < n; ++i1) {
      const double v = a[i1 + n * tail];
      if (v < -tol || v > 1.0 + tol) {
        StochasticVerdict verdict;
        verdict.ok = false;
        verdict.first_bad_tail = tuple_at_offset(tail, a.dimension(), a.order() - 1);
        verdict.column_sum = v;
        IndexTuple full = verdict.first_bad_tail;
        full.insert(full.begin(), static_cast<int>(i1) + 1);
        verdict.message = "entry " + std::to_string(v) + " at " + [&] {
          std::ostringstream os;
          os << '(';
          for (std::size_t q = 0; q < full.size(); ++q) os << (q ? ", " : "") << full[q];
          os << ')';
          return os.str();
        }() + " is outside [0, 1] at tolerance " + std::to_string(tol);
        return verdict;
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      StochasticVerdict verdict;
      verdict.ok = false;
      verdict.first_bad_tail = tuple_at_offset(tail, a.dimension(), a.order() - 1);
      verdict.column_sum = sum;
      std::ostringstream os;
      os << "column over the first index at tail (";
      for (std::size_t q = 0; q < verdict.first_bad_tail.size(); ++q)
        os << (q ? ", " : "") << verdict.first_bad_tail[q];
      os << ") sums to " << sum << ", expected 1 within " << tol;
      verdict.message = os.str();
      return verdict;
    }
  }
  return {};
}

StochasticTensor::StochasticTensor(Tensor t, double tol) : tensor_(std::move(t)) {
  const StochasticVerdict verdict = validate_stochastic(tensor_, tol);
  if (!verdict.ok) throw InputError("not a stochastic tensor: " + verdict.message);
}

StochasticTensor tensor_power(const StochasticTensor& p, int k) {
  if (k < 0) throw OutOfRange("tensor power needs k >= 0, got " + std::to_string(k));
  if (k == 0) {
    return StochasticTensor(special_tensor(SpecialKind::identity, p.shape()));
  }
  Tensor acc = p.tensor();
  for (int step = 1; step < k; ++step) acc = boxtimes(acc, p.tensor());
  // Long recursions accumulate rounding in the column sums, so re-admit the
  // result at a looser tolerance than a hand-built tensor would get.
  return StochasticTensor(std::move(acc), 1e-9);
}

}  // namespace homc
