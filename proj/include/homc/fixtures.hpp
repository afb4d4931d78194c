#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homc/tensor.hpp"

namespace homc {

// Built-in worked chains used by the example registry, the test suite and the
// acceptance runner. Every fixture is a second-order chain (order-3 tensor).
struct Fixture {
  std::string name;
  std::string description;
  StochasticTensor chain;
};

const std::vector<Fixture>& all_fixtures();

// Lookup by registry name; throws InputError for unknown names.
const Fixture& fixture(const std::string& name);

// Reference results the registry checks computed values against. All of them
// were derived independently of this library (closed forms and high-precision
// recomputation) and are frozen here as plain numbers.

// Ever-reaching tensors for the three classification fixtures
// (s5_no_recurrent, s5_two_state, s5_mixed_classes).
Tensor expected_ever_reach(const std::string& name);

// The 9x9 reduced matrix of s4_regular_reducible_reduction (row 3, the state
// labeled "31", is identically zero).
Eigen::MatrixXd expected_reduction_s4_regular();

// The 9x9 first-passage-time matrix of the reduced uniform chain.
Eigen::MatrixXd expected_mfpt_matrix_s6_uniform();

// A known stationary vector of the four-state fixture's reduced chain, and
// the chain's limiting distribution (2/7, 2/7, 2/7, 1/7).
Eigen::VectorXd known_stationary_s4_fourstate();
Eigen::VectorXd expected_limit_s4_fourstate();

}  // namespace homc
