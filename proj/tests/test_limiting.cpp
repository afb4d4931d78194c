#include <string>
#include <vector>

#include "doctest.h"
#include "homc/errors.hpp"
#include "homc/fixtures.hpp"
#include "homc/limiting.hpp"
#include "homc/reduction.hpp"
#include "homc/tensor.hpp"
#include "support.hpp"

using namespace homc;
using homc::testing::TestRng;
using homc::testing::random_chain;

namespace {

void check_distribution(const Eigen::VectorXd& v, double sum_tol = 1e-10) {
  CHECK(v.minCoeff() >= -1e-12);
  CHECK(v.sum() == doctest::Approx(1.0).epsilon(sum_tol));
}

}  // namespace

TEST_SUITE_BEGIN("limiting");

TEST_CASE("uniform chain: both methods land on the uniform vector") {
  const ReducedChain rc = reduce_chain(fixture("s6_uniform").chain);
  for (const StationaryMethod method :
       {StationaryMethod::cesaro, StationaryMethod::nullspace}) {
    const StationaryDistribution sd = stationary_distribution(rc, method);
    CHECK(sd.method == method);
    CHECK(sd.residual <= 1e-10);
    check_distribution(sd.xi);
    for (int i = 0; i < 9; ++i)
      CHECK(sd.xi[i] == doctest::Approx(1.0 / 9.0).epsilon(1e-10));
  }
  CHECK(std::string(to_string(StationaryMethod::cesaro)) == "cesaro");
  CHECK(std::string(to_string(StationaryMethod::nullspace)) == "nullspace");
}

TEST_CASE("four-state chain stationary vectors") {
  const StochasticTensor& p = fixture("s4_fourstate").chain;
  const ReducedChain rc = reduce_chain(p);

  SUBCASE("the stored reference vector is genuinely stationary") {
    const Eigen::VectorXd z = known_stationary_s4_fourstate();
    CHECK((rc.Q * z - z).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(z.sum() == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("cesaro iteration settles on a stationary vector") {
    const StationaryDistribution sd = stationary_distribution(rc);
    CHECK(sd.residual <= 1e-10);
    CHECK(sd.iterations > 0);
    check_distribution(sd.xi);
  }
  SUBCASE("the nullspace pick is a second, distinct stationary vector") {
    const StationaryDistribution cesaro = stationary_distribution(rc);
    const StationaryDistribution null_pick =
        stationary_distribution(rc, StationaryMethod::nullspace);
    CHECK(null_pick.residual <= 1e-10);
    check_distribution(null_pick.xi);
    // The stationary set has dimension two; the extreme vector the kernel
    // walk lands on differs from the interior cesaro average.
    CHECK((cesaro.xi - null_pick.xi).cwiseAbs().maxCoeff() > 1e-6);
  }
}

TEST_CASE("marginalizing stationary vectors to limiting distributions") {
  const StochasticTensor& p = fixture("s4_fourstate").chain;
  const Eigen::VectorXd expected = expected_limit_s4_fourstate();

  SUBCASE("the reference vector gives (2/7, 2/7, 2/7, 1/7)") {
    const LimitingDistribution lim =
        limiting_from_vector(p, known_stationary_s4_fourstate());
    CHECK(lim.provenance == LimitProvenance::via_stationary);
    check_distribution(lim.pi);
    CHECK((lim.pi - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("every stationary vector gives the same limit") {
    const ReducedChain rc = reduce_chain(p);
    const StationaryDistribution cesaro = stationary_distribution(rc);
    const StationaryDistribution null_pick =
        stationary_distribution(rc, StationaryMethod::nullspace);
    const Eigen::VectorXd a = limiting_distribution(p, cesaro).pi;
    const Eigen::VectorXd b = limiting_distribution(p, null_pick).pi;
    CHECK((a - expected).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((b - expected).cwiseAbs().maxCoeff() < 1e-8);
    // Convex combinations of distinct stationary vectors are stationary too
    // and must marginalize identically.
    for (const double t : {0.25, 0.7}) {
      const Eigen::VectorXd mix = t * cesaro.xi + (1.0 - t) * null_pick.xi;
      const Eigen::VectorXd c = limiting_from_vector(p, mix).pi;
      CHECK((c - expected).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  SUBCASE("uniform chain marginalizes to the uniform distribution") {
    const StochasticTensor& u = fixture("s6_uniform").chain;
    const LimitingDistribution lim =
        limiting_distribution(u, stationary_distribution(reduce_chain(u)));
    for (int i = 0; i < 3; ++i)
      CHECK(lim.pi[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }
  SUBCASE("vector length is checked") {
    CHECK_THROWS_AS(limiting_from_vector(p, Eigen::VectorXd::Ones(5)), ShapeMismatch);
  }
}

TEST_CASE("degenerate one-state reduction") {
  ReducedChain rc;
  rc.order = 2;
  rc.dimension = 1;
  rc.size = 1;
  rc.Q = Eigen::MatrixXd::Ones(1, 1);
  rc.labels = {"1"};
  const StationaryDistribution sd = stationary_distribution(rc);
  REQUIRE(sd.xi.size() == 1);
  CHECK(sd.xi[0] == 1.0);
  CHECK(sd.residual == 0.0);
}

TEST_CASE("limits through powers") {
  SUBCASE("uniform chain converges immediately") {
    const PowerLimit pl = limit_via_powers(fixture("s6_uniform").chain);
    CHECK(pl.k_used == 1);
    CHECK(pl.spread == 0.0);
    CHECK(pl.dist.provenance == LimitProvenance::via_powers);
    for (int i = 0; i < 3; ++i)
      CHECK(pl.dist.pi[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("four-state chain agrees with the stationary route") {
    const PowerLimit pl = limit_via_powers(fixture("s4_fourstate").chain);
    CHECK(pl.spread < 1e-10);
    CHECK((pl.dist.pi - expected_limit_s4_fourstate()).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("regular three-state chain agrees with the stationary route") {
    const StochasticTensor& p = fixture("s4_regular_reducible_reduction").chain;
    const PowerLimit pl = limit_via_powers(p);
    const LimitingDistribution lim =
        limiting_distribution(p, stationary_distribution(reduce_chain(p)));
    CHECK((pl.dist.pi - lim.pi).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("a non-regular chain never flattens") {
    CHECK_THROWS_AS(
        limit_via_powers(fixture("s4_irreducible_not_ergodic").chain, 1e-10, 300),
        NotConverged);
  }
}

TEST_CASE("first-order chains: the limit is itself stationary") {
  TestRng rng(51);
  for (int rep = 0; rep < 5; ++rep) {
    const StochasticTensor p = random_chain(TensorShape::of(2, 4), rng);
    const PowerLimit pl = limit_via_powers(p);
    const Eigen::MatrixXd P = mode1_matricize(p.tensor());
    CHECK((P * pl.dist.pi - pl.dist.pi).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("stationary invariants hold across the worked chains") {
  for (const std::string name :
       {"s4_regular_reducible_reduction", "s4_fourstate", "s5_two_state",
        "s6_uniform"}) {
    const ReducedChain rc = reduce_chain(fixture(name).chain);
    const StationaryDistribution sd = stationary_distribution(rc);
    check_distribution(sd.xi);
    CHECK(sd.residual <= 1e-10);
  }
}

TEST_SUITE_END();
