#include "homc/reduction.hpp"

#include <iomanip>
#include <sstream>

namespace homc {

std::string reduced_state_label(std::size_t index, int n, int length) {
  const IndexTuple t = tuple_of_index(index, n, length);
  std::ostringstream os;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (n > 9 && i) os << '.';
    os << t[i];
  }
  return os.str();
}

std::pair<std::size_t, std::size_t> entry_locator(const IndexTuple& t, int n) {
  if (t.size() < 2) throw OutOfRange("entry locator needs a tuple of length >= 2");
  const IndexTuple head(t.begin(), t.end() - 1);  // (i1, ..., i(m-1))
  const IndexTuple tail(t.begin() + 1, t.end());  // (i2, ..., im)
  return {index_of_tuple(head, n), index_of_tuple(tail, n)};
}

ReducedChain reduce_chain(const StochasticTensor& p) {
  const int m = p.order();
  const int n = p.dimension();
  const std::size_t N = p.shape().tail_count();
  if (N > kEntryGuard / N) {
    throw GuardExceeded("reduced matrix would need " + std::to_string(N) + "^2 entries");
  }
  ReducedChain rc;
  rc.order = m;
  rc.dimension = n;
  rc.size = N;
  rc.Q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  rc.labels.reserve(N);
  for (std::size_t s = 1; s <= N; ++s) rc.labels.push_back(reduced_state_label(s, n, m - 1));

  const std::size_t total = p.shape().entry_count();
  for (std::size_t offset = 0; offset < total; ++offset) {
    const double v = p[offset];
    if (v == 0.0) continue;
    // row = first (m-1) components, column = last (m-1) components.
    const std::size_t row = offset % N;
    const std::size_t col = offset / static_cast<std::size_t>(n);
    rc.Q(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
  }
  return rc;
}

StochasticTensor as_first_order_tensor(const ReducedChain& rc) {
  const std::size_t N = rc.size;
  // Linear order for m=2 is (i1-1) + N(i2-1): exactly Q's column-major data.
  Tensor t(TensorShape{2, static_cast<int>(N)},
           std::vector<double>(rc.Q.data(), rc.Q.data() + N * N));
  return StochasticTensor(std::move(t), 1e-9);
}

Tensor recover_kstep_from_reduced(const StochasticTensor& p, int k) {
  if (p.order() != 4) {
    throw WrongOrder("k-step recovery from the reduced chain is only established for "
                     "order-4 tensors; got order " + std::to_string(p.order()));
  }
  if (k < 2) throw OutOfRange("k-step recovery needs k >= 2");
  const int n = p.dimension();
  const ReducedChain rc = reduce_chain(p);

  // Ordinary matrix power: the reduced chain is first-order, so associativity
  // holds and plain repeated multiplication is exact.
  Eigen::MatrixXd Qk = rc.Q;
  for (int step = 1; step < k; ++step) Qk = Qk * rc.Q;

  Tensor out(p.shape());
  const std::size_t n2 = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  for (std::size_t offset = 0; offset < out.size(); ++offset) {
    const std::size_t i1 = offset % static_cast<std::size_t>(n);
    const std::size_t i2 = (offset / static_cast<std::size_t>(n)) % static_cast<std::size_t>(n);
    const std::size_t i3 = (offset / n2) % static_cast<std::size_t>(n);
    const std::size_t i4 = offset / (n2 * static_cast<std::size_t>(n));
    const std::size_t col = i2 + static_cast<std::size_t>(n) * i3 + n2 * i4;
    double sum = 0.0;
    if (k == 2) {
      // One free inner slot: rows (i1, j1, i2) over j1.
      for (std::size_t j1 = 0; j1 < static_cast<std::size_t>(n); ++j1) {
        const std::size_t row = i1 + static_cast<std::size_t>(n) * j1 + n2 * i2;
        sum += Qk(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
      }
    } else {
      // Two free inner slots: rows (i1, j1, j2) over j1, j2.
      for (std::size_t j2 = 0; j2 < static_cast<std::size_t>(n); ++j2) {
        for (std::size_t j1 = 0; j1 < static_cast<std::size_t>(n); ++j1) {
          const std::size_t row = i1 + static_cast<std::size_t>(n) * j1 + n2 * j2;
          sum += Qk(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        }
      }
    }
    out[offset] = sum;
  }
  return out;
}

FirstPassageMatrix reduced_first_passage(const ReducedChain& rc, int k) {
  if (k < 1) throw OutOfRange("first passage step count must be >= 1");
  Eigen::MatrixXd G = rc.Q;
  for (int step = 1; step < k; ++step) {
    Eigen::MatrixXd off_diagonal = G;
    off_diagonal.diagonal().setZero();
    G = off_diagonal * rc.Q;
  }
  return {std::move(G), k};
}

std::string export_dot(const ReducedChain& rc) {
  std::ostringstream os;
  os << "digraph reduced_chain {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  for (std::size_t s = 0; s < rc.size; ++s) {
    os << "  s" << rc.labels[s] << " [label=\"" << rc.labels[s] << "\"];\n";
  }
  // Edge col -> row for every nonzero probability, scanned in linear order
  // (columns outer) so the output is byte-stable for a given chain.
  os << std::setprecision(6);
  for (std::size_t col = 0; col < rc.size; ++col) {
    for (std::size_t row = 0; row < rc.size; ++row) {
      const double v = rc.Q(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
      if (v == 0.0) continue;
      os << "  s" << rc.labels[col] << " -> s" << rc.labels[row]
         << " [label=\"" << v << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace homc
