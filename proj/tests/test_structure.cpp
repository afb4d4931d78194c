#include <cstddef>
#include <vector>

#include "doctest.h"
#include "homc/fixtures.hpp"
#include "homc/passage.hpp"
#include "homc/structure.hpp"
#include "homc/tensor.hpp"
#include "support.hpp"

using namespace homc;
using homc::testing::TestRng;
using homc::testing::random_chain;
using homc::testing::random_sparse_chain;

namespace {

// Two-state second-order chain that is uniform except for a blocked move into
// state 1 from the all-2 history; the subset {1} then has no entry point.
StochasticTensor blocked_entry_chain() {
  Tensor t(TensorShape::of(3, 2), std::vector<double>(8, 0.5));
  t.set({1, 2, 2}, 0.0);
  t.set({2, 2, 2}, 1.0);
  return StochasticTensor(std::move(t));
}

// Deterministic swap chain: 1 -> 2 -> 1 -> ... Every power pattern is either
// the swap itself or the identity, so every tuple lights up at some k but no
// single k lights them all.
StochasticTensor swap_chain() {
  return StochasticTensor(Tensor(TensorShape::of(2, 2), {0.0, 1.0, 1.0, 0.0}));
}

}  // namespace

TEST_SUITE_BEGIN("structure");

TEST_CASE("irreducibility") {
  SUBCASE("worked three-state chain is irreducible") {
    const IrreducibilityResult r =
        is_irreducible(fixture("s4_irreducible_not_ergodic").chain);
    CHECK(r.irreducible);
    CHECK(r.witness.empty());
  }
  SUBCASE("a blocked subset is found and reported") {
    const IrreducibilityResult r = is_irreducible(blocked_entry_chain());
    CHECK_FALSE(r.irreducible);
    CHECK(r.witness == std::vector<int>{1});
  }
  SUBCASE("all-positive chains are irreducible") {
    TestRng rng(31);
    const IrreducibilityResult r =
        is_irreducible(random_chain(TensorShape::of(3, 3), rng));
    CHECK(r.irreducible);
  }
  SUBCASE("the subset scan refuses more than 16 states") {
    const TensorShape shape = TensorShape::of(2, 17);
    const StochasticTensor p(
        Tensor(shape, std::vector<double>(shape.entry_count(), 1.0 / 17.0)));
    CHECK_THROWS_AS(is_irreducible(p), GuardExceeded);
  }
}

TEST_CASE("ergodicity verdicts") {
  SUBCASE("irreducible but not ergodic, with the constant witness") {
    const ErgodicityResult r = is_ergodic(fixture("s4_irreducible_not_ergodic").chain);
    CHECK(r.verdict == Verdict3::no);
    CHECK(r.witness == IndexTuple{2, 2, 2});
    CHECK(r.orbit_closed);
    // The witness tuple is indeed never positive in any power.
    const StochasticTensor& p = fixture("s4_irreducible_not_ergodic").chain;
    for (int k = 1; k <= 40; ++k) CHECK(kstep(p, k, {2, 2, 2}) == 0.0);
  }
  SUBCASE("regular chains are ergodic") {
    CHECK(is_ergodic(fixture("s4_regular_reducible_reduction").chain).verdict ==
          Verdict3::yes);
    CHECK(is_ergodic(fixture("s4_fourstate").chain).verdict == Verdict3::yes);
    CHECK(is_ergodic(fixture("s6_uniform").chain).verdict == Verdict3::yes);
  }
  SUBCASE("periodic swap chain is ergodic without being regular") {
    const ErgodicityResult e = is_ergodic(swap_chain());
    CHECK(e.verdict == Verdict3::yes);
    CHECK(e.orbit_length == 2);
    CHECK_FALSE(regularity_index(swap_chain()).index.has_value());
  }
  SUBCASE("a too-short horizon yields undetermined, not a guess") {
    const ErgodicityResult e = is_ergodic(swap_chain(), 1);
    CHECK(e.verdict == Verdict3::undetermined);
    CHECK_FALSE(e.orbit_closed);
    CHECK(e.horizon == 1);
  }
  SUBCASE("horizon 1 still closes on an idempotent pattern") {
    const ErgodicityResult e = is_ergodic(fixture("s6_uniform").chain, 1);
    CHECK(e.verdict == Verdict3::yes);
    CHECK(e.orbit_closed);
    CHECK(e.orbit_length == 1);
  }
}

TEST_CASE("regularity indices") {
  CHECK(regularity_index(fixture("s4_regular_reducible_reduction").chain).index == 2);
  CHECK(regularity_index(fixture("s4_fourstate").chain).index == 10);
  CHECK(regularity_index(fixture("s6_uniform").chain).index == 1);
  const RegularityResult r = regularity_index(fixture("s4_irreducible_not_ergodic").chain);
  CHECK_FALSE(r.index.has_value());
  CHECK(r.orbit_closed);
}

TEST_CASE("analysis invariants across chains") {
  TestRng rng(32);
  std::vector<StochasticTensor> chains;
  for (const Fixture& f : all_fixtures()) chains.push_back(f.chain);
  for (int rep = 0; rep < 10; ++rep)
    chains.push_back(random_sparse_chain(TensorShape::of(3, 3), rng, 0.5));
  for (const StochasticTensor& p : chains) {
    const ChainAnalysis a = analyze_chain(p);
    if (a.ergodic.verdict == Verdict3::yes) CHECK(a.irreducible.irreducible);
    if (a.regularity.index.has_value()) CHECK(a.ergodic.verdict == Verdict3::yes);
    if (a.ergodic.verdict == Verdict3::no) {
      // The witness is a genuine m-tuple that stays dark for many powers.
      REQUIRE(a.ergodic.witness.size() == static_cast<std::size_t>(p.order()));
      for (int k = 1; k <= 16; ++k) CHECK(kstep(p, k, a.ergodic.witness) == 0.0);
    }
  }
}

TEST_CASE("worked analysis of the non-ergodic chain") {
  const ChainAnalysis a = analyze_chain(fixture("s4_irreducible_not_ergodic").chain);
  CHECK(a.irreducible.irreducible);
  CHECK(a.ergodic.verdict == Verdict3::no);
  CHECK(a.ergodic.witness == IndexTuple{2, 2, 2});
  CHECK_FALSE(a.regularity.index.has_value());
}

TEST_CASE("reachability uses every history tail") {
  SUBCASE("two-state chain: 1 is reachable from 2 but not conversely") {
    const StochasticTensor& p = fixture("s5_two_state").chain;
    const auto reach = reachability(p, ever_reaching(p));
    CHECK(reach[0][0]);
    CHECK(reach[1][1]);
    CHECK(reach[1][0]);        // 2 -> 1
    CHECK_FALSE(reach[0][1]);  // 1 -> 2 fails from history (1,1)
  }
  SUBCASE("mixed-class chain: 1 and 3 communicate, 2 reaches neither") {
    const StochasticTensor& p = fixture("s5_mixed_classes").chain;
    const auto reach = reachability(p, ever_reaching(p));
    CHECK(reach[0][2]);
    CHECK(reach[2][0]);
    CHECK_FALSE(reach[1][0]);
    CHECK_FALSE(reach[1][2]);
  }
  SUBCASE("shape of the report is checked") {
    const StochasticTensor& p = fixture("s5_two_state").chain;
    const PassageReport other = ever_reaching(fixture("s6_uniform").chain);
    CHECK_THROWS_AS(reachability(p, other), ShapeMismatch);
  }
}

TEST_CASE("communication classes") {
  SUBCASE("two-state chain splits into singletons") {
    const StochasticTensor& p = fixture("s5_two_state").chain;
    const auto classes = communication_classes(reachability(p, ever_reaching(p)));
    REQUIRE(classes.size() == 2);
    CHECK(classes[0] == std::vector<int>{1});
    CHECK(classes[1] == std::vector<int>{2});
  }
  SUBCASE("mixed-class chain groups 1 with 3") {
    const StochasticTensor& p = fixture("s5_mixed_classes").chain;
    const auto classes = communication_classes(reachability(p, ever_reaching(p)));
    REQUIRE(classes.size() == 2);
    CHECK(classes[0] == std::vector<int>{1, 3});
    CHECK(classes[1] == std::vector<int>{2});
  }
  SUBCASE("an intransitive mutual relation is rejected") {
    const std::vector<std::vector<bool>> broken = {
        {true, true, false}, {true, true, true}, {false, true, true}};
    CHECK_THROWS_AS(communication_classes(broken), InconsistentRelation);
  }
}

TEST_CASE("state classification on the worked chains") {
  SUBCASE("no state recurrent, none fully transient") {
    const StochasticTensor& p = fixture("s5_no_recurrent").chain;
    const ClassificationReport report = classify_states(p, ever_reaching(p));
    for (const StateClass& sc : report.states) {
      CHECK_FALSE(sc.recurrent);
      CHECK(sc.transient);
      CHECK_FALSE(sc.fully_transient);
      CHECK_FALSE(sc.undecided);
      CHECK_FALSE(sc.absorbing);
    }
    CHECK(verify_class_consistency(report));
  }
  SUBCASE("two-state chain: both states recurrent") {
    const StochasticTensor& p = fixture("s5_two_state").chain;
    const ClassificationReport report = classify_states(p, ever_reaching(p));
    CHECK(report.states[0].recurrent);
    CHECK(report.states[1].recurrent);
    CHECK_FALSE(report.states[0].transient);
    CHECK_FALSE(report.states[1].transient);
    CHECK(verify_class_consistency(report));
  }
  SUBCASE("mixed chain: 1 transient but not fully, 3 recurrent") {
    const StochasticTensor& p = fixture("s5_mixed_classes").chain;
    const ClassificationReport report = classify_states(p, ever_reaching(p));
    CHECK(report.states[0].transient);
    CHECK_FALSE(report.states[0].fully_transient);
    CHECK_FALSE(report.states[0].recurrent);
    CHECK(report.states[2].recurrent);
    CHECK(verify_class_consistency(report));
  }
  SUBCASE("return probabilities echo the diagonal of the reference tensor") {
    const StochasticTensor& p = fixture("s5_mixed_classes").chain;
    const ClassificationReport report = classify_states(p, ever_reaching(p));
    const Tensor expected = expected_ever_reach("s5_mixed_classes");
    for (int i = 1; i <= 3; ++i)
      for (int tail = 1; tail <= 3; ++tail)
        CHECK(report.return_probabilities[i - 1][tail - 1] ==
              doctest::Approx(expected.at({i, i, tail})).epsilon(1e-9));
  }
  SUBCASE("a truncated series flags states undecided instead of guessing") {
    const StochasticTensor& p = fixture("s5_no_recurrent").chain;
    const PassageReport truncated = ever_reaching(p, 1e-12, 2);
    REQUIRE_FALSE(truncated.converged);
    const ClassificationReport report = classify_states(p, truncated);
    bool any_undecided = false;
    for (const StateClass& sc : report.states) {
      CHECK_FALSE(sc.recurrent);
      any_undecided = any_undecided || sc.undecided;
    }
    CHECK(any_undecided);
  }
}

TEST_CASE("absorbing states") {
  // Hand-built chain: state 1 keeps itself with certainty from every history.
  Tensor t(TensorShape::of(3, 2));
  t.set({1, 1, 1}, 1.0);
  t.set({1, 1, 2}, 1.0);
  t.set({1, 2, 1}, 0.25);
  t.set({2, 2, 1}, 0.75);
  t.set({1, 2, 2}, 0.5);
  t.set({2, 2, 2}, 0.5);
  const StochasticTensor p{std::move(t)};
  const ClassificationReport report = classify_states(p, ever_reaching(p));
  CHECK(report.states[0].absorbing);
  CHECK(report.states[0].recurrent);
  CHECK_FALSE(report.states[1].absorbing);
  CHECK(verify_class_consistency(report));
}

TEST_CASE("class consistency holds on every built-in chain") {
  for (const Fixture& f : all_fixtures()) {
    const ClassificationReport report = classify_states(f.chain, ever_reaching(f.chain));
    CHECK(verify_class_consistency(report));
  }
  SUBCASE("a fabricated violation is detected") {
    ClassificationReport report;
    report.states.resize(2);
    report.states[0].state = 1;
    report.states[0].recurrent = true;
    report.states[1].state = 2;
    report.states[1].fully_transient = true;
    report.states[1].transient = true;
    report.classes = {{1, 2}};
    CHECK_FALSE(verify_class_consistency(report));
  }
  SUBCASE("a single-state report passes vacuously") {
    ClassificationReport report;
    report.states.resize(1);
    report.states[0].state = 1;
    report.states[0].recurrent = true;
    report.classes = {{1}};
    CHECK(verify_class_consistency(report));
  }
}

TEST_SUITE_END();
