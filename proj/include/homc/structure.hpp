#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homc/passage.hpp"
#include "homc/tensor.hpp"

namespace homc {

// ---- irreducibility -----------------------------------------------------------

// A chain is irreducible when every nonempty proper subset K of states can be
// entered from a history lying entirely outside K: some p_{i1 i2...im} > 0
// with i1 in K and i2,...,im all outside K.
struct IrreducibilityResult {
  bool irreducible = true;
  std::vector<int> witness;  // first failing subset K (ascending states)
};

// Exhaustive scan over all 2^n - 2 subsets; n is capped at 16.
IrreducibilityResult is_irreducible(const StochasticTensor& p);

// ---- ergodicity / regularity ----------------------------------------------------

enum class Verdict3 { yes, no, undetermined };

const char* to_string(Verdict3 v);

// Decided exactly via the zero/nonzero pattern orbit of the powers P^k: the
// boolean product has an entry true iff some inner state makes both factors
// positive, patterns live in a finite space, so iterating until a pattern
// repeats visits every pattern any power can have. Ergodic iff every tuple is
// positive in at least one visited pattern.
struct ErgodicityResult {
  Verdict3 verdict = Verdict3::undetermined;
  IndexTuple witness;     // a never-positive tuple when the verdict is no
  int orbit_length = 0;   // distinct patterns visited
  bool orbit_closed = false;
  int horizon = 0;
};

ErgodicityResult is_ergodic(const StochasticTensor& p, int horizon = 4096);

// Smallest k whose pattern is all-positive (that pattern persists: a
// stochastic factor keeps every column inhabited). Absent when the orbit
// closes without one.
struct RegularityResult {
  std::optional<int> index;
  bool orbit_closed = false;
  int horizon = 0;
};

RegularityResult regularity_index(const StochasticTensor& p, int horizon = 4096);

// The three verdicts together, sharing one pattern-orbit computation.
struct ChainAnalysis {
  IrreducibilityResult irreducible;
  ErgodicityResult ergodic;
  RegularityResult regularity;
};

ChainAnalysis analyze_chain(const StochasticTensor& p, int horizon = 4096);

// ---- reachability and classification --------------------------------------------

// reach[i-1][j-1] is true when j is reachable from i: the ever-reaching
// probability f_{j,i,tail} is positive for EVERY history tail (k=0 makes
// every state reach itself). Positivity threshold 1e-12: exact zeros stay
// exact in the recursion.
std::vector<std::vector<bool>> reachability(const StochasticTensor& p,
                                            const PassageReport& f);

// Classes of mutual reachability, ordered by smallest member. Transitivity
// of the mutual relation is verified, not assumed; a violation throws
// InconsistentRelation rather than silently repairing the partition.
std::vector<std::vector<int>> communication_classes(
    const std::vector<std::vector<bool>>& reach);

// Per-state labels from the diagonal ever-reaching values f_{i,i,tail}:
//   recurrent:       f = 1 for every tail     (threshold: 1 - f <= 1e-9)
//   transient:       f < 1 for some tail
//   fully transient: f < 1 for every tail
//   absorbing:       p_{i,i,tail} = 1 for every tail (checked on P directly)
// When the series did not converge and a value sits below the threshold, the
// state is flagged undecided instead of guessing.
struct StateClass {
  int state = 0;
  bool recurrent = false;
  bool transient = false;
  bool fully_transient = false;
  bool absorbing = false;
  bool undecided = false;
};

struct ClassificationReport {
  std::vector<StateClass> states;
  std::vector<std::vector<bool>> reach;
  std::vector<std::vector<int>> classes;
  // return_probabilities[i-1][t] = accumulated f_{i,i,tail} at tail offset t.
  std::vector<std::vector<double>> return_probabilities;
};

ClassificationReport classify_states(const StochasticTensor& p,
                                     const PassageReport& f);

// No communication class may contain both a recurrent and a fully transient
// state; a failure here would mean the implementation broke an established
// result, so callers should treat `false` as an internal-consistency error.
bool verify_class_consistency(const ClassificationReport& report);

}  // namespace homc
