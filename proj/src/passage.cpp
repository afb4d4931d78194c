#include "homc/passage.hpp"

#include <cmath>

namespace homc {

namespace {

// One step of the first-passage recursion: (F - F_d) [x] P.
Tensor passage_step(const Tensor& f, const StochasticTensor& p) {
  Tensor off_diagonal = f;
  const std::size_t n = static_cast<std::size_t>(f.dimension());
  const std::size_t total = f.size();
  for (std::size_t offset = 0; offset < total; ++offset) {
    const std::size_t i1 = offset % n;
    const std::size_t i2 = (offset / n) % n;
    if (i1 == i2) off_diagonal[offset] = 0.0;
  }
  return boxtimes(off_diagonal, p.tensor());
}

}  // namespace

FirstPassageSeries first_passage_series(const StochasticTensor& p, int K) {
  if (K < 1) throw OutOfRange("first passage series needs K >= 1");
  FirstPassageSeries series{p.shape(), {}};
  series.terms.reserve(static_cast<std::size_t>(K));
  series.terms.push_back(p.tensor());
  for (int k = 1; k < K; ++k) {
    series.terms.push_back(passage_step(series.terms.back(), p));
  }
  return series;
}

PassageReport ever_reaching(const StochasticTensor& p, double tol, int k_max) {
  if (tol <= 0.0) throw OutOfRange("series tolerance must be positive");
  if (k_max < 1) throw OutOfRange("series cap must be >= 1");
  PassageReport report(p.shape());
  Tensor term = p.tensor();  // F[1]
  int quiet_terms = 0;       // consecutive increments below tol
  for (int k = 1; k <= k_max; ++k) {
    double increment = 0.0;
    for (std::size_t i = 0; i < term.size(); ++i) {
      report.F[i] += term[i];
      increment = std::max(increment, std::abs(term[i]));
    }
    report.terms_used = k;
    report.last_increment_norm = increment;
    quiet_terms = increment < tol ? quiet_terms + 1 : 0;
    if (quiet_terms >= 3) {
      report.converged = true;
      break;
    }
    if (k < k_max) term = passage_step(term, p);
  }
  report.stop_reason = report.converged ? "increment-below-tol" : "k-max-reached";
  report.residual.resize(report.F.size());
  for (std::size_t i = 0; i < report.F.size(); ++i) {
    report.residual[i] = 1.0 - report.F[i];
  }
  return report;
}

Tensor kstep(const StochasticTensor& p, int k) {
  if (k < 1) throw OutOfRange("k-step tensor needs k >= 1");
  return tensor_power(p, k).tensor();
}

double kstep(const StochasticTensor& p, int k, const IndexTuple& t) {
  return kstep(p, k).at(t);
}

ReturnSumDiagnostic return_sum_partial(const StochasticTensor& p, int i,
                                       const IndexTuple& tail, int K) {
  if (K < 1) throw OutOfRange("return sum needs K >= 1");
  const int n = p.dimension();
  if (i < 1 || i > n)
    throw OutOfRange("state " + std::to_string(i) + " is outside [1, " +
                     std::to_string(n) + "]");
  if (static_cast<int>(tail.size()) != p.order() - 2) {
    throw ShapeMismatch("return-sum tail needs " + std::to_string(p.order() - 2) +
                        " states, got " + std::to_string(tail.size()));
  }
  IndexTuple tuple;
  tuple.reserve(static_cast<std::size_t>(p.order()));
  tuple.push_back(i);
  tuple.push_back(i);
  tuple.insert(tuple.end(), tail.begin(), tail.end());
  const std::size_t offset = linear_offset(tuple, n);

  ReturnSumDiagnostic diag;
  diag.partial_sums.reserve(static_cast<std::size_t>(K));
  Tensor power = p.tensor();  // P^1
  double running = 0.0;
  for (int k = 1; k <= K; ++k) {
    diag.final_increment = power[offset];
    running += diag.final_increment;
    diag.partial_sums.push_back(running);
    if (k < K) power = boxtimes(power, p.tensor());
  }
  if (diag.final_increment > 1e-2) {
    diag.verdict = SumVerdict::diverging;
  } else if (diag.final_increment < 1e-6) {
    diag.verdict = SumVerdict::converging;
  } else {
    diag.verdict = SumVerdict::undetermined;
  }
  return diag;
}

const char* to_string(SumVerdict v) {
  switch (v) {
    case SumVerdict::diverging: return "diverging";
    case SumVerdict::converging: return "converging";
    default: return "undetermined";
  }
}

}  // namespace homc
