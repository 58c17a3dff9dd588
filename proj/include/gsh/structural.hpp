#pragma once

#include <span>
#include <vector>

#include "gsh/types.hpp"
#include "gsh/weights.hpp"

namespace gsh::structural {

/// One evaluation of the regularizing divisor
///   D_mu(n) = sum_alpha mu^{2 alpha} nu^alpha / M_{2 alpha},   nu = n_1+...+n_d,
/// summed in log domain. D >= 1 always (the alpha = 0 term is 1).
struct DivisorEvaluation {
  double mu = 1.0;
  long nu = 0;
  double log_value = 0.0;
  long terms_used = 1;
  bool tail_flag = false;  // truncation criterion not met before the term cap

  double value() const;
};

DivisorEvaluation divisor(const weights::WeightSequence& seq, double mu, const MultiIndex& n);
DivisorEvaluation divisor_total(const weights::WeightSequence& seq, double mu, long nu);

/// log of the partial divisor sum_{alpha < terms} mu^{2a} nu^a / M_{2a}.
double divisor_partial_log(const weights::WeightSequence& seq, double mu, long nu, long terms);

/// Theorem-1 regularization a_n = b_n / D_mu(nu(n)), carried as
/// (log magnitude, phase) internally. The result is the Hermite
/// representation of the bounded continuous function f.
CoefficientField regularize(const CoefficientField& b, const weights::WeightSequence& seq,
                            double mu);

struct BoundTable {
  double sup_value = 0.0;
  std::vector<double> s;  // s[n-1] = n^2 |a_n| ||H_n||_inf for n = 1..up_to
};

/// The proof's uniform-convergence bound n^2 |a_n| ||H_n||_inf, tabulated.
/// One-dimensional fields only.
BoundTable verify_bound(const CoefficientField& a, int up_to);

struct OscPairResult {
  cplx value{0.0, 0.0};
  double tail_estimate = 0.0;  // magnitude of the last included beta term
  long beta_used = 0;
};

/// <T, phi> through the oscillator-power series
///   sum_beta (mu^{2 beta} / M_{2 beta}) <N^beta f, phi>,
/// evaluated spectrally; N is the half-oscillator with N H_n = n H_n, which
/// absorbs the 1/2^beta of the operator form. Stops at beta_max or when the
/// term magnitude drops below 1e-12 of the running total for 3 consecutive
/// decreasing terms.
OscPairResult oscillator_series_pair(const CoefficientField& a_f,
                                     const weights::WeightSequence& seq, double mu,
                                     const CoefficientField& phi, long beta_max);

/// Grid materialization of f (delegates to hermite synthesis).
SampledFunction synthesize_f(const CoefficientField& a,
                             std::span<const std::vector<double>> grids);

}  // namespace gsh::structural
