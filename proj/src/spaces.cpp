#include "gsh/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsh/hermite.hpp"
#include "gsh/scaled.hpp"

namespace gsh::spaces {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> theta_check(const Box& box, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != box.dim())
    throw std::invalid_argument("spaces: theta dimension must match field dimension");
  std::vector<double> t(theta.begin(), theta.end());
  for (double v : t)
    if (!(v > 0.0)) throw std::invalid_argument("spaces: theta entries must be positive");
  return t;
}

}  // namespace

WeightedNormResult weighted_norm(const CoefficientField& a,
                                 const weights::AssociatedFunctionTable& table,
                                 std::span<const double> theta) {
  theta_check(a.box, theta);
  WeightedNormResult out;
  std::vector<double> terms;
  terms.reserve(a.data.size());
  for (std::size_t f = 0; f < a.data.size(); ++f) {
    const double mag = std::abs(a.data[f]);
    if (mag == 0.0) continue;
    const MultiIndex n = a.box.unflat(f);
    const auto w = weights::log_weight(table, theta, n);
    out.saturated = out.saturated || w.saturated;
    terms.push_back(2.0 * std::log(mag) + 2.0 * w.value);
  }
  out.log_norm = terms.empty() ? kNegInf : 0.5 * log_sum_exp(terms);
  return out;
}

namespace {

Box halved(const Box& box) {
  std::array<int, kMaxDim> h{1, 1, 1};
  for (int k = 0; k < box.dim(); ++k) {
    if (box.order(k) < 2) throw std::invalid_argument("classify: box too small to halve");
    h[k] = box.order(k) / 2;
  }
  return Box(std::span<const int>(h.data(), box.dim()));
}

CoefficientField restrict_to(const CoefficientField& a, const Box& sub) {
  CoefficientField out(sub, a.kind);
  for (std::size_t f = 0; f < out.data.size(); ++f) out.data[f] = a.at(sub.unflat(f));
  return out;
}

}  // namespace

MembershipReport classify(const CoefficientField& a, const weights::AssociatedFunctionTable& table,
                          MembershipKind kind, std::span<const std::vector<double>> theta_grid) {
  if (theta_grid.empty()) throw std::invalid_argument("classify: empty theta grid");
  MembershipReport rep;
  rep.kind = kind;
  rep.theta_grid.assign(theta_grid.begin(), theta_grid.end());

  const bool test_side = kind == MembershipKind::test_roumieu || kind == MembershipKind::test_beurling;

  if (test_side) {
    const CoefficientField half = restrict_to(a, halved(a.box));
    for (const auto& theta : rep.theta_grid) {
      const auto full_n = weighted_norm(a, table, theta);
      const auto half_n = weighted_norm(half, table, theta);
      rep.log_norms.push_back(full_n.log_norm);
      // both finite sums; full >= half, so the relative change is 1 - e^{lh - lf}
      double rel;
      if (full_n.log_norm == kNegInf)
        rel = 0.0;  // zero field: trivially converged
      else if (half_n.log_norm == kNegInf)
        rel = 1.0;  // all mass in the outer half
      else
        rel = -std::expm1(half_n.log_norm - full_n.log_norm);
      rep.stable.push_back(std::fabs(rel) < 1e-6);
    }
    // boundary: last stable theta scanning upward (norm is monotone in theta)
    std::size_t last_stable = rep.stable.size();
    for (std::size_t i = 0; i < rep.stable.size(); ++i)
      if (rep.stable[i]) last_stable = i;
    if (last_stable == rep.stable.size()) {
      rep.theta_star = rep.theta_grid.front();
      rep.at_boundary = true;  // nothing stable: boundary below the grid
    } else {
      rep.theta_star = rep.theta_grid[last_stable];
      rep.at_boundary = (last_stable + 1 == rep.theta_grid.size());
    }
    return rep;
  }

  for (const auto& theta : rep.theta_grid) {
    const auto g = growth_check(a, table, theta);
    rep.constants.push_back(g.constant);
    rep.stable.push_back(g.passes);
  }
  std::size_t first_pass = rep.stable.size();
  for (std::size_t i = rep.stable.size(); i-- > 0;)
    if (rep.stable[i]) first_pass = i;
  if (first_pass == rep.stable.size()) {
    rep.theta_star = rep.theta_grid.back();
    rep.at_boundary = true;  // nothing admissible inside the grid
  } else {
    rep.theta_star = rep.theta_grid[first_pass];
    rep.at_boundary = (first_pass == 0);
  }
  return rep;
}

bool outer_tail_nonincreasing(const Box& box, std::span<const double> q) {
  long r_max = 0;
  for (int k = 0; k < box.dim(); ++k) r_max += box.order(k) - 1;
  std::vector<double> shell(r_max + 1, kNegInf);
  for (std::size_t f = 0; f < q.size(); ++f) {
    const long r = box.unflat(f).total();
    shell[r] = std::max(shell[r], q[f]);
  }
  double prev = kNegInf;
  bool have_prev = false;
  for (long r = r_max / 2; r <= r_max; ++r) {
    if (shell[r] == kNegInf) continue;  // no evidence on this shell
    if (have_prev && shell[r] > prev + 1e-9 * (1.0 + std::fabs(prev))) return false;
    prev = shell[r];
    have_prev = true;
  }
  return true;
}

GrowthCheckResult growth_check(const CoefficientField& b,
                               const weights::AssociatedFunctionTable& table,
                               std::span<const double> theta) {
  theta_check(b.box, theta);
  GrowthCheckResult out;
  std::vector<double> q(b.data.size(), kNegInf);
  double c = kNegInf;
  for (std::size_t f = 0; f < b.data.size(); ++f) {
    const double mag = std::abs(b.data[f]);
    if (mag == 0.0) continue;
    const MultiIndex n = b.box.unflat(f);
    q[f] = std::log(mag) - weights::log_weight(table, theta, n).value;
    c = std::max(c, q[f]);
  }
  out.constant = (c == kNegInf) ? 0.0 : c;
  out.passes = outer_tail_nonincreasing(b.box, q);
  return out;
}

cplx parseval_pair(const CoefficientField& b, const CoefficientField& a) {
  if (b.box.dim() != a.box.dim())
    throw std::invalid_argument("parseval_pair: dimension mismatch");
  std::array<int, kMaxDim> common{1, 1, 1};
  for (int k = 0; k < b.box.dim(); ++k)
    common[k] = std::min(b.box.order(k), a.box.order(k));
  const Box cbox(std::span<const int>(common.data(), b.box.dim()));
  cplx acc{0.0, 0.0};
  for (std::size_t f = 0; f < cbox.size(); ++f) {
    const MultiIndex n = cbox.unflat(f);
    acc += b.at(n) * a.at(n);
  }
  return acc;
}

namespace {

CoefficientField embed(const CoefficientField& a, const Box& box) {
  CoefficientField out(box, a.kind);
  for (std::size_t f = 0; f < a.data.size(); ++f) out.at(a.box.unflat(f)) = a.data[f];
  return out;
}

// (1 + x^2) f in coefficient space
CoefficientField one_plus_x2(const CoefficientField& a) {
  CoefficientField x2 = hermite::ladder_apply(hermite::ladder_apply(a, hermite::LadderOp::position),
                                              hermite::LadderOp::position);
  CoefficientField out = embed(a, x2.box);
  for (std::size_t f = 0; f < out.data.size(); ++f) out.data[f] += x2.data[f];
  return out;
}

}  // namespace

SeminormResult seminorm_estimate(const CoefficientField& a, double m,
                                 const weights::WeightSequence& seq, int alpha_max, int beta_max,
                                 std::span<const double> grid) {
  if (a.box.dim() != 1) throw std::invalid_argument("seminorm_estimate: one-dimensional fields only");
  if (!(m > 0.0)) throw std::invalid_argument("seminorm_estimate: m must be positive");
  if (beta_max % 2 != 0) throw std::invalid_argument("seminorm_estimate: beta_max must be even");
  if (alpha_max < 0 || beta_max < 0) throw std::invalid_argument("seminorm_estimate: negative order");
  if (grid.empty()) throw std::invalid_argument("seminorm_estimate: empty evaluation grid");

  SeminormResult best;
  CoefficientField deriv = a;
  for (int alpha = 0; alpha <= alpha_max; ++alpha) {
    CoefficientField field = deriv;
    for (int beta = 0; beta <= beta_max; beta += 2) {
      double sup = 0.0;
      for (double x : grid)
        sup = std::max(sup, std::abs(hermite::synthesize_at(field, std::span<const double>(&x, 1))));
      const double log_term = (alpha + beta) * std::log(m) - seq.log_m(alpha) - seq.log_m(beta) +
                              (sup > 0 ? std::log(sup) : kNegInf);
      const double term = std::exp(log_term);
      if (term > best.value) {
        best.value = term;
        best.alpha_star = alpha;
        best.beta_star = beta;
      }
      if (beta + 2 <= beta_max) field = one_plus_x2(field);
    }
    if (alpha + 1 <= alpha_max) deriv = hermite::ladder_apply(deriv, hermite::LadderOp::derivative);
  }
  return best;
}

}  // namespace gsh::spaces
