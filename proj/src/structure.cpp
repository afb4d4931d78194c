#include "homc/structure.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace homc {

namespace {

constexpr double kPositive = 1e-12;  // reachability positivity threshold

// Boolean analogue of the tensor product on zero/nonzero patterns:
// out[i1, tail] = OR_j a[i1, j, mid] AND base[j, tail].
std::string bool_step(const std::string& a, const std::string& base,
                      std::size_t n, std::size_t tails, std::size_t mids) {
  std::string out(a.size(), '\0');
  for (std::size_t tail = 0; tail < tails; ++tail) {
    const std::size_t mid = tail % mids;
    const std::size_t a_base = n * n * mid;
    const std::size_t col = n * tail;
    for (std::size_t j = 0; j < n; ++j) {
      if (!base[j + col]) continue;
      const std::size_t a_col = a_base + n * j;
      for (std::size_t i1 = 0; i1 < n; ++i1) {
        if (a[i1 + a_col]) out[i1 + col] = 1;
      }
    }
  }
  return out;
}

struct PatternOrbit {
  std::vector<std::string> patterns;  // patterns[k-1] = pattern of P^k
  bool closed = false;
  int horizon = 0;
};

PatternOrbit pattern_orbit(const StochasticTensor& p, int horizon) {
  if (horizon < 1) throw OutOfRange("pattern orbit horizon must be >= 1");
  const std::size_t n = static_cast<std::size_t>(p.dimension());
  const std::size_t tails = p.shape().tail_count();
  const std::size_t mids = p.shape().mid_count();

  std::string base(p.tensor().size(), '\0');
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = p[i] > 0.0 ? 1 : 0;

  PatternOrbit orbit;
  orbit.horizon = horizon;
  std::unordered_map<std::string, int> seen;
  std::string current = base;
  for (int k = 1; k <= horizon; ++k) {
    if (seen.count(current)) {
      orbit.closed = true;
      break;
    }
    seen.emplace(current, k);
    orbit.patterns.push_back(current);
    current = bool_step(current, base, n, tails, mids);
  }
  if (!orbit.closed && seen.count(current)) orbit.closed = true;
  return orbit;
}

ErgodicityResult ergodicity_from_orbit(const StochasticTensor& p,
                                       const PatternOrbit& orbit) {
  ErgodicityResult result;
  result.orbit_length = static_cast<int>(orbit.patterns.size());
  result.orbit_closed = orbit.closed;
  result.horizon = orbit.horizon;
  if (!orbit.closed) {
    result.verdict = Verdict3::undetermined;
    return result;
  }
  std::vector<char> ever(p.tensor().size(), 0);
  for (const std::string& pattern : orbit.patterns) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (pattern[i]) ever[i] = 1;
    }
  }
  const auto first_dark = std::find(ever.begin(), ever.end(), 0);
  if (first_dark == ever.end()) {
    result.verdict = Verdict3::yes;
    return result;
  }
  result.verdict = Verdict3::no;
  // Prefer a constant witness (i,i,...,i) when one exists: it reads as "state
  // i is never revisited from its own history", the most interpretable
  // counterexample. Otherwise take the first dark tuple in linear order.
  const int n = p.dimension();
  for (int i = 0; i < n; ++i) {
    std::size_t offset = 0;
    for (int pos = 0; pos < p.order(); ++pos) offset = offset * n + i;
    if (!ever[offset]) {
      result.witness = IndexTuple(p.order(), i + 1);
      return result;
    }
  }
  const std::size_t offset = static_cast<std::size_t>(first_dark - ever.begin());
  result.witness = tuple_at_offset(offset, p.dimension(), p.order());
  return result;
}

RegularityResult regularity_from_orbit(const PatternOrbit& orbit) {
  RegularityResult result;
  result.orbit_closed = orbit.closed;
  result.horizon = orbit.horizon;
  for (std::size_t k = 0; k < orbit.patterns.size(); ++k) {
    const std::string& pattern = orbit.patterns[k];
    if (std::find(pattern.begin(), pattern.end(), '\0') == pattern.end()) {
      result.index = static_cast<int>(k + 1);
      break;
    }
  }
  return result;
}

}  // namespace

const char* to_string(Verdict3 v) {
  switch (v) {
    case Verdict3::yes: return "yes";
    case Verdict3::no: return "no";
    default: return "undetermined";
  }
}

IrreducibilityResult is_irreducible(const StochasticTensor& p) {
  const int n = p.dimension();
  if (n > 16) {
    throw GuardExceeded("irreducibility scans all 2^n subsets; dimension " +
                        std::to_string(n) + " exceeds the cap of 16");
  }
  const std::size_t un = static_cast<std::size_t>(n);
  const std::uint32_t full = (1u << n) - 1u;

  // For every tail-state bitmask, the set of lead states some positive entry
  // can move to from a tail drawn entirely from that mask.
  std::vector<std::uint32_t> leads_by_tailmask(1u << n, 0u);
  const std::size_t tails = p.shape().tail_count();
  for (std::size_t tail = 0; tail < tails; ++tail) {
    std::uint32_t tail_mask = 0;
    std::size_t rest = tail;
    for (int pos = 0; pos < p.order() - 1; ++pos) {
      tail_mask |= 1u << (rest % un);
      rest /= un;
    }
    std::uint32_t lead_mask = 0;
    for (std::size_t i1 = 0; i1 < un; ++i1) {
      if (p[i1 + un * tail] > 0.0) lead_mask |= 1u << i1;
    }
    leads_by_tailmask[tail_mask] |= lead_mask;
  }

  for (std::uint32_t K = 1; K < full; ++K) {
    const std::uint32_t comp = full & ~K;
    bool enterable = false;
    // Enumerate the tail masks contained in the complement of K.
    for (std::uint32_t sub = comp;; sub = (sub - 1) & comp) {
      if (leads_by_tailmask[sub] & K) {
        enterable = true;
        break;
      }
      if (sub == 0) break;
    }
    if (!enterable) {
      IrreducibilityResult result;
      result.irreducible = false;
      for (int s = 0; s < n; ++s) {
        if (K & (1u << s)) result.witness.push_back(s + 1);
      }
      return result;
    }
  }
  return {};
}

ErgodicityResult is_ergodic(const StochasticTensor& p, int horizon) {
  return ergodicity_from_orbit(p, pattern_orbit(p, horizon));
}

RegularityResult regularity_index(const StochasticTensor& p, int horizon) {
  return regularity_from_orbit(pattern_orbit(p, horizon));
}

ChainAnalysis analyze_chain(const StochasticTensor& p, int horizon) {
  const PatternOrbit orbit = pattern_orbit(p, horizon);
  ChainAnalysis analysis;
  analysis.irreducible = is_irreducible(p);
  analysis.ergodic = ergodicity_from_orbit(p, orbit);
  analysis.regularity = regularity_from_orbit(orbit);
  return analysis;
}

std::vector<std::vector<bool>> reachability(const StochasticTensor& p,
                                            const PassageReport& f) {
  if (!(f.shape == p.shape())) {
    throw ShapeMismatch("ever-reaching report belongs to a different shape");
  }
  const std::size_t n = static_cast<std::size_t>(p.dimension());
  const std::size_t mids = p.shape().mid_count();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        reach[i][j] = true;  // zero steps always count
        continue;
      }
      bool all_tails = true;
      const std::size_t base = j + n * i;
      for (std::size_t mid = 0; mid < mids; ++mid) {
        if (f.F[base + n * n * mid] <= kPositive) {
          all_tails = false;
          break;
        }
      }
      reach[i][j] = all_tails;
    }
  }
  return reach;
}

std::vector<std::vector<int>> communication_classes(
    const std::vector<std::vector<bool>>& reach) {
  const std::size_t n = reach.size();
  const auto mutual = [&](std::size_t a, std::size_t b) {
    return reach[a][b] && reach[b][a];
  };
  // The mutual relation must be transitive before it can partition anything.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (mutual(i, j) && mutual(j, k) && !mutual(i, k)) {
          throw InconsistentRelation(
              "mutual reachability is not transitive on this chain: states " +
              std::to_string(i + 1) + " <-> " + std::to_string(j + 1) + " <-> " +
              std::to_string(k + 1) + " but not " + std::to_string(i + 1) +
              " <-> " + std::to_string(k + 1));
        }
      }
    }
  }
  std::vector<std::vector<int>> classes;
  std::vector<bool> assigned(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<int> cls{static_cast<int>(i + 1)};
    assigned[i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!assigned[j] && mutual(i, j)) {
        cls.push_back(static_cast<int>(j + 1));
        assigned[j] = true;
      }
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

ClassificationReport classify_states(const StochasticTensor& p,
                                     const PassageReport& f) {
  if (!(f.shape == p.shape())) {
    throw ShapeMismatch("ever-reaching report belongs to a different shape");
  }
  constexpr double kOneThreshold = 1e-9;  // 1 - f below this reads as "equals 1"
  const std::size_t n = static_cast<std::size_t>(p.dimension());
  const std::size_t mids = p.shape().mid_count();

  ClassificationReport report;
  report.reach = reachability(p, f);
  report.classes = communication_classes(report.reach);
  report.states.resize(n);
  report.return_probabilities.assign(n, std::vector<double>(mids, 0.0));

  for (std::size_t i = 0; i < n; ++i) {
    StateClass& sc = report.states[i];
    sc.state = static_cast<int>(i + 1);
    bool all_one = true, all_below = true, any_below = false, any_undecided = false;
    bool absorbing = true;
    const std::size_t base = i + n * i;
    for (std::size_t mid = 0; mid < mids; ++mid) {
      const double value = f.F[base + n * n * mid];
      report.return_probabilities[i][mid] = value;
      if (value >= 1.0 - kOneThreshold) {
        all_below = false;  // this tail reads as f = 1
      } else if (f.converged) {
        any_below = true;   // the series settled; the gap is real
        all_one = false;
      } else {
        any_undecided = true;  // truncated series, value below threshold
        all_one = false;
        all_below = false;
      }
      if (std::abs(p[base + n * n * mid] - 1.0) > kStochasticTol) absorbing = false;
    }
    sc.undecided = any_undecided;
    sc.recurrent = all_one && !any_undecided;
    sc.fully_transient = all_below && any_below;
    sc.transient = any_below;
    sc.absorbing = absorbing;
  }
  return report;
}

bool verify_class_consistency(const ClassificationReport& report) {
  for (const std::vector<int>& cls : report.classes) {
    bool has_recurrent = false, has_fully_transient = false;
    for (int state : cls) {
      const StateClass& sc = report.states[static_cast<std::size_t>(state - 1)];
      has_recurrent = has_recurrent || sc.recurrent;
      has_fully_transient = has_fully_transient || sc.fully_transient;
    }
    if (has_recurrent && has_fully_transient) return false;
  }
  return true;
}

}  // namespace homc
