#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gsh/types.hpp"

namespace gsh::hermite {

inline constexpr int kDefaultOrderCap = 10000;

/// Orthonormal Hermite function H_n(x) (harmonic oscillator eigenfunction),
/// via the normalized three-term recurrence seeded at pi^{-1/4} e^{-x^2/2}.
/// Far outside the classically allowed region the recurrence runs in
/// exponent-carrying form so the Gaussian seed cannot underflow.
double hermite_eval(int n, double x, int order_cap = kDefaultOrderCap);

/// All of H_0(x) .. H_{n_max}(x) in one recurrence pass.
std::vector<double> hermite_eval_all(int n_max, double x, int order_cap = kDefaultOrderCap);

/// Tensor-product Hermite function H_n(x) = prod_k H_{n_k}(x_k).
double hermite_eval_multi(const MultiIndex& n, std::span<const double> x);

/// Gauss-Hermite rule: exact for polynomials of degree <= 2*order - 1
/// against the weight e^{-x^2}. total_weights[i] = w_i e^{x_i^2} is the
/// bounded de-weighted factor used when integrating plain functions.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;
  std::vector<double> total_weights;
};

QuadRule gauss_hermite_rule(int order);

using Callable = std::function<cplx(std::span<const double>)>;

/// Fourier-Hermite analysis a_n = integral f(x) H_n(x) dx over the box, by
/// tensorized Gauss-Hermite quadrature with the e^{x^2} de-weighting folded
/// into bounded per-node factors. quad_order must be >= box.max_order() + 1;
/// pass 0 to use the default guard of max_order + 16.
CoefficientField analyze(const Callable& f, const Box& box, int quad_order = 0,
                         FieldKind kind = FieldKind::test);

/// Analysis of samples given on the tensor Gauss-Hermite grid of the stated
/// quadrature order (axis grids must match the rule's nodes).
CoefficientField analyze(const SampledFunction& samples, const Box& box, int quad_order);

/// sum_n a_n H_n(x) at one point, Clenshaw accumulation down the recurrence.
cplx synthesize_at(const CoefficientField& a, std::span<const double> x);

/// Synthesis on a tensor grid.
SampledFunction synthesize(const CoefficientField& a,
                           std::span<const std::vector<double>> grids);

enum class LadderOp { position, derivative, number };

/// Ladder algebra on coefficients. position/derivative grow the box by one
/// on the chosen axis; number is diagonal: (N_axis a)_n = n_axis a_n with
/// N = (-d^2/dx^2 + x^2 - 1)/2 per axis.
CoefficientField ladder_apply(const CoefficientField& a, LadderOp op, int axis = 0);

/// a_n -> (n_1 + ... + n_d)^beta a_n, the beta-th power of the total number
/// operator.
CoefficientField number_power(const CoefficientField& a, int beta);

/// Numerical sup-norm of H_n by a turning-point-aware dense scan with local
/// refinement at the maximum.
double sup_norm_estimate(int n);

/// sup_norm_estimate for all n <= n_max, sharing scan machinery.
std::vector<double> sup_norm_table(int n_max);

}  // namespace gsh::hermite
