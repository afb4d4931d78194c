#include "homc/simulate.hpp"

#include <cmath>
#include <string>

namespace homc {

namespace {

// Per-tail cumulative sums of the transition columns, laid out like the
// tensor itself: cum[i + n*tail] = sum of column entries up to state i.
std::vector<double> cumulative_columns(const StochasticTensor& p) {
  const std::size_t n = static_cast<std::size_t>(p.dimension());
  const std::size_t tails = p.shape().tail_count();
  std::vector<double> cum(n * tails);
  for (std::size_t tail = 0; tail < tails; ++tail) {
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      running += p[i + n * tail];
      cum[i + n * tail] = running;
    }
  }
  return cum;
}

// Mutable sampling state: the history as 0-based components, most recent
// first, plus the strides to turn it into a flat tail offset.
struct Walker {
  std::vector<std::size_t> history;  // size m-1, history[0] = current state
  std::size_t n = 0;

  std::size_t tail_offset() const {
    std::size_t offset = 0;
    std::size_t stride = 1;
    for (std::size_t h : history) {
      offset += stride * h;
      stride *= n;
    }
    return offset;
  }

  // One transition; returns the new state (0-based).
  std::size_t step(const std::vector<double>& cum, SplitMix64& gen) {
    const std::size_t base = n * tail_offset();
    const double u = gen.next_double();
    std::size_t next = n - 1;  // final state absorbs rounding residue
    for (std::size_t i = 0; i < n; ++i) {
      if (u < cum[i + base]) {
        next = i;
        break;
      }
    }
    for (std::size_t pos = history.size() - 1; pos > 0; --pos)
      history[pos] = history[pos - 1];
    history[0] = next;
    return next;
  }
};

Walker make_walker(const StochasticTensor& p, const IndexTuple& history) {
  const int m = p.order();
  const int n = p.dimension();
  if (static_cast<int>(history.size()) != m - 1) {
    throw ShapeMismatch("start history needs " + std::to_string(m - 1) +
                        " states (most recent first), got " +
                        std::to_string(history.size()));
  }
  Walker w;
  w.n = static_cast<std::size_t>(n);
  w.history.reserve(history.size());
  for (int c : history) {
    if (c < 1 || c > n)
      throw OutOfRange("history state " + std::to_string(c) + " is outside [1, " +
                       std::to_string(n) + "]");
    w.history.push_back(static_cast<std::size_t>(c - 1));
  }
  return w;
}

void check_full_tuple(const StochasticTensor& p, const IndexTuple& tuple) {
  if (static_cast<int>(tuple.size()) != p.order()) {
    throw ShapeMismatch("quantity tuple needs " + std::to_string(p.order()) +
                        " components (target, history...), got " +
                        std::to_string(tuple.size()));
  }
  linear_offset(tuple, p.dimension());  // bounds check
}

IndexTuple history_of(const IndexTuple& tuple) {
  return IndexTuple(tuple.begin() + 1, tuple.end());
}

// Mean and standard error of a sample set accumulated in extended precision.
struct Accumulator {
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += static_cast<long double>(x) * x;
    ++count;
  }

  double mean() const { return count ? static_cast<double>(sum / count) : 0.0; }

  double std_error() const {
    if (count < 2) return 0.0;
    const long double m = sum / count;
    long double var = (sum_sq - static_cast<long double>(count) * m * m) /
                      static_cast<long double>(count - 1);
    if (var < 0.0L) var = 0.0L;
    return static_cast<double>(std::sqrt(static_cast<double>(var) /
                                         static_cast<double>(count)));
  }
};

}  // namespace

Trajectory sample_trajectory(const StochasticTensor& p, const IndexTuple& history,
                             int length, std::uint64_t seed) {
  if (length < 1) throw OutOfRange("trajectory length must be >= 1");
  Walker w = make_walker(p, history);
  const std::vector<double> cum = cumulative_columns(p);
  SplitMix64 gen(seed);
  Trajectory out;
  out.history = history;
  out.seed = seed;
  out.states.reserve(static_cast<std::size_t>(length));
  for (int t = 0; t < length; ++t) {
    out.states.push_back(static_cast<int>(w.step(cum, gen)) + 1);
  }
  return out;
}

Estimate estimate(const StochasticTensor& p, const Quantity& quantity,
                  std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw OutOfRange("need at least one sample");
  const std::vector<double> cum = cumulative_columns(p);

  Estimate out;
  Accumulator acc;

  if (const auto* q = std::get_if<KStepQuantity>(&quantity)) {
    check_full_tuple(p, q->tuple);
    if (q->k < 1) throw OutOfRange("k-step quantity needs k >= 1");
    const std::size_t target = static_cast<std::size_t>(q->tuple[0] - 1);
    const IndexTuple start = history_of(q->tuple);
    for (std::size_t s = 0; s < samples; ++s) {
      SplitMix64 gen = SplitMix64::stream(seed, s);
      Walker w = make_walker(p, start);
      std::size_t state = 0;
      for (int t = 0; t < q->k; ++t) state = w.step(cum, gen);
      acc.add(state == target ? 1.0 : 0.0);
    }
    out.value = acc.mean();
    // Binomial standard error of the hit frequency.
    out.std_error = std::sqrt(out.value * (1.0 - out.value) /
                              static_cast<double>(samples));
    out.samples = samples;
    return out;
  }

  if (const auto* q = std::get_if<EverReachQuantity>(&quantity)) {
    check_full_tuple(p, q->tuple);
    if (q->horizon < 1) throw OutOfRange("ever-reach horizon must be >= 1");
    const std::size_t target = static_cast<std::size_t>(q->tuple[0] - 1);
    const IndexTuple start = history_of(q->tuple);
    for (std::size_t s = 0; s < samples; ++s) {
      SplitMix64 gen = SplitMix64::stream(seed, s);
      Walker w = make_walker(p, start);
      double hit = 0.0;
      for (int t = 0; t < q->horizon; ++t) {
        if (w.step(cum, gen) == target) {
          hit = 1.0;
          break;
        }
      }
      acc.add(hit);
    }
    out.value = acc.mean();
    out.std_error = std::sqrt(out.value * (1.0 - out.value) /
                              static_cast<double>(samples));
    out.samples = samples;
    return out;
  }

  if (const auto* q = std::get_if<MfptQuantity>(&quantity)) {
    check_full_tuple(p, q->tuple);
    if (q->horizon < 1) throw OutOfRange("first-passage horizon must be >= 1");
    const std::size_t target = static_cast<std::size_t>(q->tuple[0] - 1);
    const IndexTuple start = history_of(q->tuple);
    std::size_t censored = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      SplitMix64 gen = SplitMix64::stream(seed, s);
      Walker w = make_walker(p, start);
      int arrived_at = 0;
      for (int t = 1; t <= q->horizon; ++t) {
        if (w.step(cum, gen) == target) {
          arrived_at = t;
          break;
        }
      }
      if (arrived_at == 0) {
        ++censored;  // kept out of the mean, reported below
      } else {
        acc.add(static_cast<double>(arrived_at));
      }
    }
    out.value = acc.mean();
    out.std_error = acc.std_error();
    out.samples = acc.count;
    out.censored = censored;
    out.censored_fraction =
        static_cast<double>(censored) / static_cast<double>(samples);
    out.unreliable = out.censored_fraction > 0.01;
    return out;
  }

  const auto& q = std::get<OccupancyQuantity>(quantity);
  if (q.state < 1 || q.state > p.dimension())
    throw OutOfRange("occupancy state " + std::to_string(q.state) + " is outside [1, " +
                     std::to_string(p.dimension()) + "]");
  if (q.t_max < 1) throw OutOfRange("occupancy t_max must be >= 1");
  IndexTuple start = q.history;
  if (start.empty()) start.assign(static_cast<std::size_t>(p.order() - 1), 1);
  const int burn = q.burn_in >= 0 ? q.burn_in : std::min(1000, q.t_max / 10);
  if (burn >= q.t_max) throw OutOfRange("burn-in must be shorter than t_max");
  const std::size_t target = static_cast<std::size_t>(q.state - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    SplitMix64 gen = SplitMix64::stream(seed, s);
    Walker w = make_walker(p, start);
    long hits = 0;
    for (int t = 1; t <= q.t_max; ++t) {
      const std::size_t state = w.step(cum, gen);
      if (t > burn && state == target) ++hits;
    }
    acc.add(static_cast<double>(hits) / static_cast<double>(q.t_max - burn));
  }
  out.value = acc.mean();
  out.std_error = acc.std_error();
  out.samples = samples;
  return out;
}

}  // namespace homc
