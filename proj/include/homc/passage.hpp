#pragma once

#include <string>
#include <vector>

#include "homc/tensor.hpp"

namespace homc {

// Series of k-step first passage probability tensors F[1..K]:
//   F[1] = P,  F[k+1] = (F[k] - diagonal_part(F[k])) [x] P.
// Entry (i1, tail) of F[k] is the probability that the FIRST arrival at i1
// from that history happens at exactly step k.
struct FirstPassageSeries {
  TensorShape shape;
  std::vector<Tensor> terms;  // terms[k-1] = F[k]
};
FirstPassageSeries first_passage_series(const StochasticTensor& p, int K);

// Accumulated ever-reaching probabilities F = sum_k F[k], with truncation
// bookkeeping. The per-tuple residual (1 - partial sum) bounds how much
// probability mass the truncation leaves undecided.
struct PassageReport {
  TensorShape shape;
  int terms_used = 0;
  bool converged = false;          // stopped by the increment rule
  std::string stop_reason;         // "increment-below-tol" or "k-max-reached"
  double last_increment_norm = 0.0;
  Tensor F;
  std::vector<double> residual;    // per tuple: 1 - partial sum

  explicit PassageReport(TensorShape s) : shape(s), F(s) {}
};

// Sums the series until the increment max-norm stays below tol for 3
// consecutive terms (one term is not enough: periodic chains alternate zero
// increments) or K_max terms are used.
PassageReport ever_reaching(const StochasticTensor& p, double tol = 1e-12,
                            int k_max = 100000);

// k-step transition tensor P^k (k >= 1), or a single entry of it.
Tensor kstep(const StochasticTensor& p, int k);
double kstep(const StochasticTensor& p, int k, const IndexTuple& t);

// Partial sums S_K = sum_{k<=K} p^(k)_{i,i,tail}: a divergence diagnostic for
// return probabilities. No finite computation can prove divergence, so the
// verdict is a slope heuristic over the final increment, never a proof.
enum class SumVerdict { diverging, converging, undetermined };

struct ReturnSumDiagnostic {
  std::vector<double> partial_sums;  // S_1 .. S_K
  double final_increment = 0.0;      // p^(K)_{i,i,tail}
  SumVerdict verdict = SumVerdict::undetermined;
};

// Thresholds: final increment > 1e-2 reads as diverging (mass keeps
// returning), below 1e-6 as converging, otherwise undetermined.
ReturnSumDiagnostic return_sum_partial(const StochasticTensor& p, int i,
                                       const IndexTuple& tail, int K);

const char* to_string(SumVerdict v);

}  // namespace homc
