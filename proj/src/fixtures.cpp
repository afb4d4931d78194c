#include "homc/fixtures.hpp"

#include "homc/errors.hpp"

namespace homc {

namespace {

using Slice = std::vector<std::vector<double>>;

// Build an order-3 tensor from per-i3 slices written the way the chains are
// usually displayed: slices[i3][i1][i2] = p_{i1 i2 i3} (rows = destination,
// columns = current state, one slice per previous state).
Tensor from_slices(int n, const std::vector<Slice>& slices) {
  Tensor t(TensorShape::of(3, n));
  for (int s = 0; s < n; ++s)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) t.set({r + 1, c + 1, s + 1}, slices[s][r][c]);
  return t;
}

constexpr double k12 = 1.0 / 2.0;
constexpr double k13 = 1.0 / 3.0;
constexpr double k34 = 3.0 / 4.0;
constexpr double k16 = 1.0 / 6.0;
constexpr double k23 = 2.0 / 3.0;
constexpr double k56 = 5.0 / 6.0;
constexpr double k17 = 1.0 / 7.0;
constexpr double k27 = 2.0 / 7.0;

std::vector<Fixture> build_fixtures() {
  std::vector<Fixture> out;

  out.push_back(Fixture{
      "s4_irreducible_not_ergodic",
      "three-state second-order chain that is irreducible but not ergodic: "
      "state 2 can only be entered one step after history (1,1), so some "
      "k-step probabilities stay zero for every k",
      StochasticTensor(from_slices(3, {Slice{{0, 0, 0}, {1, 0, 0}, {0, 1, 1}},
                                       Slice{{0, 0, 0}, {0, 0, 0}, {1, 1, 1}},
                                       Slice{{0, 0, 1}, {0, 0, 0}, {1, 1, 0}}}))});

  out.push_back(Fixture{
      "s4_regular_reducible_reduction",
      "three-state second-order chain that is regular (index 2) while its "
      "reduced first-order chain is reducible, with an all-zero row at the "
      "reduced state 31",
      StochasticTensor(from_slices(
          3, {Slice{{k12, k13, k13}, {k12, k13, k13}, {0, k13, k13}},
              Slice{{k12, k13, k13}, {k12, k13, k13}, {0, k13, k13}},
              Slice{{k12, k13, k13}, {k12, k13, k13}, {0, k13, k13}}}))});

  out.push_back(Fixture{
      "s4_fourstate",
      "four-state second-order regular chain whose reduced chain carries a "
      "two-dimensional stationary set; limiting distribution "
      "(2/7, 2/7, 2/7, 1/7)",
      StochasticTensor(from_slices(
          4,
          {Slice{{k12, 0, 0, 0}, {k12, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 0, 0}},
           Slice{{0, 0, k12, 1}, {0, k12, 0, 0}, {k12, k12, 0, 0}, {k12, 0, k12, 0}},
           Slice{{0, 1, 0, 1}, {1, 0, k12, 0}, {0, 0, k12, 0}, {0, 0, 0, 0}},
           Slice{{0, 0, 0, 0}, {1, 1, 1, 0}, {0, 0, 0, k12}, {0, 0, 0, k12}}}))});

  out.push_back(Fixture{
      "s5_no_recurrent",
      "three-state second-order chain in which no state is recurrent: every "
      "state has histories with return probability below one",
      StochasticTensor(from_slices(
          3, {Slice{{1, 0, 0}, {0, k12, k12}, {0, k12, k12}},
              Slice{{1, 0, k12}, {0, 1, 0}, {0, 0, k12}},
              Slice{{0, k12, 1}, {0, k12, 0}, {1, 0, 0}}}))});

  out.push_back(Fixture{
      "s5_two_state",
      "two-state second-order chain with both states recurrent although "
      "state 2 is reachable from neither history of state 1",
      StochasticTensor(from_slices(2, {Slice{{1, k12}, {0, k12}},
                                       Slice{{0, k12}, {1, k12}}}))});

  out.push_back(Fixture{
      "s5_mixed_classes",
      "three-state second-order chain where state 1 is transient but not "
      "fully transient, state 3 is recurrent, and the two states communicate",
      StochasticTensor(from_slices(
          3, {Slice{{k12, k13, k12}, {k12, k13, 0}, {0, k13, k12}},
              Slice{{1, 0, k12}, {0, 1, k12}, {0, 0, 0}},
              Slice{{0, 0, k12}, {0, 0, k12}, {1, 1, 0}}}))});

  out.push_back(Fixture{
      "s6_uniform",
      "three-state second-order chain with every transition probability 1/3; "
      "every first-passage time has mean 3",
      StochasticTensor(from_slices(
          3, {Slice{{k13, k13, k13}, {k13, k13, k13}, {k13, k13, k13}},
              Slice{{k13, k13, k13}, {k13, k13, k13}, {k13, k13, k13}},
              Slice{{k13, k13, k13}, {k13, k13, k13}, {k13, k13, k13}}}))});

  return out;
}

}  // namespace

const std::vector<Fixture>& all_fixtures() {
  static const std::vector<Fixture> fixtures = build_fixtures();
  return fixtures;
}

const Fixture& fixture(const std::string& name) {
  for (const Fixture& f : all_fixtures()) {
    if (f.name == name) return f;
  }
  throw InputError("unknown example name '" + name +
                   "'; run `examples list` for the available names");
}

Tensor expected_ever_reach(const std::string& name) {
  if (name == "s5_no_recurrent") {
    return from_slices(3, {Slice{{1, k12, k34}, {0, 1, 1}, {0, k12, k12}},
                           Slice{{1, 0, 1}, {0, 1, 1}, {0, 0, 1}},
                           Slice{{k34, k12, 1}, {1, k12, 1}, {1, 0, 1}}});
  }
  if (name == "s5_two_state") {
    return from_slices(2, {Slice{{1, 1}, {0, 1}}, Slice{{1, 1}, {1, 1}}});
  }
  if (name == "s5_mixed_classes") {
    return from_slices(3, {Slice{{k56, k23, 1}, {1, 1, 1}, {k12, k12, 1}},
                           Slice{{1, 0, 1}, {1, 1, 1}, {k12, 0, 1}},
                           Slice{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}});
  }
  throw InputError("no stored ever-reaching reference for example '" + name +
                   "'");
}

Eigen::MatrixXd expected_reduction_s4_regular() {
  Eigen::MatrixXd Q(9, 9);
  // Reduced states in linear order: 11, 21, 31, 12, 22, 32, 13, 23, 33.
  Q << k12, 0, 0, k12, 0, 0, k12, 0, 0,  //
      k12, 0, 0, k12, 0, 0, k12, 0, 0,   //
      0, 0, 0, 0, 0, 0, 0, 0, 0,         //
      0, k13, 0, 0, k13, 0, 0, k13, 0,   //
      0, k13, 0, 0, k13, 0, 0, k13, 0,   //
      0, k13, 0, 0, k13, 0, 0, k13, 0,   //
      0, 0, k13, 0, 0, k13, 0, 0, k13,   //
      0, 0, k13, 0, 0, k13, 0, 0, k13,   //
      0, 0, k13, 0, 0, k13, 0, 0, k13;
  return Q;
}

Eigen::MatrixXd expected_mfpt_matrix_s6_uniform() {
  Eigen::MatrixXd M(9, 9);
  // Target state (a,b) from source state with current component c: the mean
  // hitting time is 6 when c = b and a != b, 9 when c != b and a != b,
  // 9 when c = b = a, and 12 when c != b = a. Closed form for the uniform
  // chain; the diagonal is the mean return time 9 = 1/(uniform weight).
  for (int i = 0; i < 9; ++i) {
    const int a = i % 3, b = i / 3;
    for (int j = 0; j < 9; ++j) {
      const int c = j % 3;
      if (a == b)
        M(i, j) = (c == b) ? 9 : 12;
      else
        M(i, j) = (c == b) ? 6 : 9;
    }
  }
  return M;
}

Eigen::VectorXd known_stationary_s4_fourstate() {
  Eigen::VectorXd z(16);
  z << 0, 0, k17, k17, k27, 0, 0, 0, 0, k27, 0, 0, 0, 0, k17, 0;
  return z;
}

Eigen::VectorXd expected_limit_s4_fourstate() {
  Eigen::VectorXd pi(4);
  pi << k27, k27, k27, k17;
  return pi;
}

}  // namespace homc
