#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "homc/tensor.hpp"

namespace homc {

// SplitMix64: the fixed 64-bit generator behind every simulation. Chosen for
// reproducibility: the algorithm is tiny, fully specified by its two mixing
// constants and the golden-ratio increment, and produces identical streams on
// every platform. One derived stream per sample index keeps estimates
// independent of evaluation order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Finalizer alone (no state step); used to derive per-sample streams by
  // hashing (seed, sample index) so parallel evaluation order cannot matter.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t sample_index) {
    return SplitMix64(mix(seed + (sample_index + 1) * 0x9E3779B97F4A7C15ULL));
  }

 private:
  std::uint64_t state_;
};

// ---- trajectories ---------------------------------------------------------

struct Trajectory {
  IndexTuple history;       // (m-1) states, most recent first: (i2, ..., im)
  std::vector<int> states;  // the visited states, in time order
  std::uint64_t seed = 0;
};

// Draws `length` successive states starting from the given history. Each step
// samples the column distribution at the current history by inverse CDF with
// a strict u < cumulative comparison; the last state absorbs any residual
// rounding mass. Identical inputs and seed give identical trajectories.
Trajectory sample_trajectory(const StochasticTensor& p, const IndexTuple& history,
                             int length, std::uint64_t seed);

// ---- Monte Carlo estimates --------------------------------------------------

// Probability of sitting at tuple[0] exactly k steps after history
// (tuple[1..]).
struct KStepQuantity {
  int k = 1;
  IndexTuple tuple;  // full m-tuple (target, history...)
};

// Probability of ever reaching tuple[0] from history (tuple[1..]) within the
// horizon (a lower bound on the true ever-reaching probability).
struct EverReachQuantity {
  IndexTuple tuple;
  int horizon = 1000;
};

// Mean number of steps of the first arrival at tuple[0] from the history.
// Samples that never arrive within the horizon are censored: counted and
// reported, never silently folded into the mean.
struct MfptQuantity {
  IndexTuple tuple;
  int horizon = 1000000;
};

// Long-run fraction of time spent in `state`, estimated per trajectory of
// t_max steps after a burn-in prefix is discarded.
struct OccupancyQuantity {
  int state = 1;
  int t_max = 10000;
  int burn_in = -1;     // -1: min(1000, t_max/10)
  IndexTuple history;   // start history; empty = all-ones
};

using Quantity = std::variant<KStepQuantity, EverReachQuantity, MfptQuantity,
                              OccupancyQuantity>;

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;          // samples contributing to the mean
  std::size_t censored = 0;         // first-passage samples past the horizon
  double censored_fraction = 0.0;
  bool unreliable = false;          // censoring above 1%
};

Estimate estimate(const StochasticTensor& p, const Quantity& quantity,
                  std::size_t samples, std::uint64_t seed);

}  // namespace homc
