#pragma once

#include <span>
#include <vector>

#include "gsh/types.hpp"
#include "gsh/weights.hpp"

namespace gsh::spaces {

struct WeightedNormResult {
  double log_norm = 0.0;  // log of the norm; -inf for the zero field
  bool saturated = false;
};

/// Membership norm ||a||_theta = (sum_n |a_n|^2 exp[2 sum_k M(theta_k sqrt(n_k))])^{1/2},
/// computed as a log-sum-exp; zero entries contribute nothing. The factor 2
/// on the weight follows the estimates the theorems actually use, so the
/// envelope a_n = e^{-M(theta0 sqrt n)} sits exactly on the theta = theta0
/// boundary.
WeightedNormResult weighted_norm(const CoefficientField& a,
                                 const weights::AssociatedFunctionTable& table,
                                 std::span<const double> theta);

enum class MembershipKind { test_roumieu, test_beurling, dual_roumieu, dual_beurling };

struct MembershipReport {
  MembershipKind kind;
  std::vector<std::vector<double>> theta_grid;
  std::vector<double> log_norms;   // test kinds: weighted norm per theta
  std::vector<double> constants;   // dual kinds: growth constant C per theta
  std::vector<bool> stable;        // per theta: converged (test) / bounded (dual)
  std::vector<double> theta_star;  // boundary estimate
  bool at_boundary = false;        // boundary sits at the grid edge
};

/// Probe membership along a theta grid. Test kinds decide stability per
/// theta by comparing the weighted norm on the full box against the halved
/// box (relative change < 1e-6); dual kinds run growth_check per theta.
/// theta_star is the largest stable theta (test) or the smallest passing
/// theta (dual).
MembershipReport classify(const CoefficientField& a, const weights::AssociatedFunctionTable& table,
                          MembershipKind kind, std::span<const std::vector<double>> theta_grid);

struct GrowthCheckResult {
  bool passes = false;
  double constant = 0.0;  // C = max_n (log|b_n| - sum_k M(theta_k sqrt(n_k)))
};

/// Dual-side growth bound |b_n| <= C exp[sum_k M(theta_k sqrt(n_k))]: the
/// constant is always reported; passing means the per-shell maxima of the
/// log-excess are non-increasing over the outer half of the box.
GrowthCheckResult growth_check(const CoefficientField& b,
                               const weights::AssociatedFunctionTable& table,
                               std::span<const double> theta);

/// Bilinear Parseval pairing <f, phi> = sum_n b_n a_n over the common box
/// (no conjugation).
cplx parseval_pair(const CoefficientField& b, const CoefficientField& a);

struct SeminormResult {
  double value = 0.0;
  int alpha_star = 0;
  int beta_star = 0;
};

/// sup over alpha <= alpha_max, even beta <= beta_max of
///   m^{alpha+beta} / (M_alpha M_beta) * ||(1+x^2)^{beta/2} phi^(alpha)||_inf,
/// with derivatives and (1+x^2) powers realized by ladder algebra and the
/// sup norm taken on the supplied grid. One-dimensional fields only.
SeminormResult seminorm_estimate(const CoefficientField& a, double m,
                                 const weights::WeightSequence& seq, int alpha_max, int beta_max,
                                 std::span<const double> grid);

/// Shell-trend helper shared with the kernel growth check: true when the
/// finite per-shell maxima of q (indexed like box) are non-increasing over
/// the outer half of the total-degree range.
bool outer_tail_nonincreasing(const Box& box, std::span<const double> q);

}  // namespace gsh::spaces
