#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "homc/tensor.hpp"

namespace homc {

// The first-order chain on multi-index states that embeds a higher-order
// chain. States are the (m-1)-tuples (current, previous, ...) in linear
// order; Q is column-stochastic with at most n nonzeros per column (a column
// can only move to states that shift its history window by one).
struct ReducedChain {
  int order = 2;          // m of the source tensor
  int dimension = 2;      // n of the source tensor
  std::size_t size = 0;   // N = n^(m-1)
  Eigen::MatrixXd Q;      // N x N, column-stochastic
  std::vector<std::string> labels;  // multi-index state names, linear order
};

// Builds Q by placing every p_{i1 i2...im} at its (row, column) slot. For
// order-2 input the reduction is the chain's own matrix.
ReducedChain reduce_chain(const StochasticTensor& p);

// The (row, column) placement of entry t = (i1, ..., im) inside Q, 1-based:
//   row    = i1 + n(i2-1) + ... + n^(m-2)(i(m-1)-1)
//   column = i2 + n(i3-1) + ... + n^(m-2)(im-1)
std::pair<std::size_t, std::size_t> entry_locator(const IndexTuple& t, int n);

// Q viewed as an order-2 transition tensor over the multi-index states, so
// every higher-order operation can also run on the reduced chain. Validated
// at 1e-9: Q's columns inherit their sums from an already validated tensor.
StochasticTensor as_first_order_tensor(const ReducedChain& rc);

// Rebuilds the k-step tensor of an order-4 chain from powers of its reduced
// matrix: the k=2 case sums q^(2) over one inner history slot, k >= 3 over
// two. Must match tensor_power(p, k); order != 4 is rejected because the
// identity is only established there.
Tensor recover_kstep_from_reduced(const StochasticTensor& p, int k);

// k-step first passage probabilities of the reduced (first-order) chain:
// G[1] = Q, G[k+1] = (G[k] - diag(G[k])) * Q.
struct FirstPassageMatrix {
  Eigen::MatrixXd G;
  int steps = 1;
};
FirstPassageMatrix reduced_first_passage(const ReducedChain& rc, int k);

// Deterministic DOT digraph of the reduced chain: one node per multi-index
// state, one edge per nonzero probability (6 significant digits), nodes and
// edges in linear-index order. Exact zeros are dropped.
std::string export_dot(const ReducedChain& rc);

// The multi-index label of a reduced state (1-based linear index), e.g. "21"
// for (2,1); components are dot-separated when the dimension exceeds 9.
std::string reduced_state_label(std::size_t index, int n, int length);

}  // namespace homc
