#include "gsh/structural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "gsh/hermite.hpp"
#include "gsh/scaled.hpp"

namespace gsh::structural {

namespace {

constexpr double kTermStopLog = -18.0 * std::numbers::ln10_v<double>;  // 1e-18 of the partial sum
constexpr long kAlphaCap = 200000;

long table_alpha_cap(const weights::WeightSequence& seq) {
  if (seq.unbounded()) return kAlphaCap;
  // terms need M_{2 alpha}; cap where 2 alpha + 1 exceeds the prefix
  return (seq.p_max() - 1) / 2;
}

}  // namespace

double DivisorEvaluation::value() const { return std::exp(log_value); }

DivisorEvaluation divisor_total(const weights::WeightSequence& seq, double mu, long nu) {
  if (!(mu > 0.0)) throw std::invalid_argument("divisor: mu must be positive");
  if (nu < 0) throw std::invalid_argument("divisor: nu must be >= 0");
  DivisorEvaluation ev;
  ev.mu = mu;
  ev.nu = nu;
  if (nu == 0) return ev;  // only alpha = 0 survives (0^0 = 1)

  const double log_x = 2.0 * std::log(mu) + std::log(static_cast<double>(nu));
  const long cap = table_alpha_cap(seq);
  double log_partial = 0.0;  // alpha = 0 term
  double prev_term = 0.0;
  long small_streak = 0;
  long alpha = 1;
  for (; alpha <= cap; ++alpha) {
    const double log_term = alpha * log_x - seq.log_m(2 * alpha);
    log_partial = log_add_exp(log_partial, log_term);
    const bool decreasing = alpha > 1 && log_term < prev_term;
    if (decreasing && log_term < log_partial + kTermStopLog)
      ++small_streak;
    else
      small_streak = 0;
    prev_term = log_term;
    if (small_streak >= 3) {
      ev.terms_used = alpha + 1;
      ev.log_value = log_partial;
      return ev;
    }
  }
  // cap reached before the tail criterion fired
  if (prev_term >= log_partial + kTermStopLog && alpha > 1) {
    const double second_last = (cap >= 2) ? (cap - 1) * log_x - seq.log_m(2 * (cap - 1)) : 0.0;
    if (prev_term >= second_last)
      throw std::domain_error("divisor: sequence prefix too short, terms still growing at the cap");
  }
  ev.terms_used = cap + 1;
  ev.log_value = log_partial;
  ev.tail_flag = true;
  return ev;
}

DivisorEvaluation divisor(const weights::WeightSequence& seq, double mu, const MultiIndex& n) {
  return divisor_total(seq, mu, n.total());
}

double divisor_partial_log(const weights::WeightSequence& seq, double mu, long nu, long terms) {
  if (!(mu > 0.0)) throw std::invalid_argument("divisor: mu must be positive");
  if (terms < 1) throw std::invalid_argument("divisor: need at least the alpha = 0 term");
  if (nu == 0) return 0.0;
  const double log_x = 2.0 * std::log(mu) + std::log(static_cast<double>(nu));
  double log_partial = 0.0;
  for (long alpha = 1; alpha < terms; ++alpha)
    log_partial = log_add_exp(log_partial, alpha * log_x - seq.log_m(2 * alpha));
  return log_partial;
}

CoefficientField regularize(const CoefficientField& b, const weights::WeightSequence& seq,
                            double mu) {
  b.require_finite();
  std::map<long, double> log_d;  // per total degree
  CoefficientField a(b.box, FieldKind::test);
  for (std::size_t f = 0; f < b.data.size(); ++f) {
    const cplx z = b.data[f];
    if (z == cplx{0.0, 0.0}) continue;
    const long nu = b.box.unflat(f).total();
    auto it = log_d.find(nu);
    if (it == log_d.end()) it = log_d.emplace(nu, divisor_total(seq, mu, nu).log_value).first;
    // (log magnitude, phase) through the division
    const double log_mag = std::log(std::abs(z)) - it->second;
    a.data[f] = std::polar(std::exp(log_mag), std::arg(z));
  }
  return a;
}

BoundTable verify_bound(const CoefficientField& a, int up_to) {
  if (a.box.dim() != 1) throw std::invalid_argument("verify_bound: one-dimensional fields only");
  if (up_to < 1) throw std::invalid_argument("verify_bound: up_to must be >= 1");
  const int n_hi = std::min(up_to, a.box.order(0) - 1);
  BoundTable table;
  if (n_hi < 1) return table;
  const std::vector<double> sup = hermite::sup_norm_table(n_hi);
  table.s.reserve(n_hi);
  for (int n = 1; n <= n_hi; ++n) {
    const double s = static_cast<double>(n) * n * std::abs(a.data[n]) * sup[n];
    table.s.push_back(s);
    table.sup_value = std::max(table.sup_value, s);
  }
  return table;
}

OscPairResult oscillator_series_pair(const CoefficientField& a_f,
                                     const weights::WeightSequence& seq, double mu,
                                     const CoefficientField& phi, long beta_max) {
  if (!(mu > 0.0)) throw std::invalid_argument("oscillator_series_pair: mu must be positive");
  if (beta_max < 0) throw std::invalid_argument("oscillator_series_pair: beta_max must be >= 0");
  if (a_f.box.dim() != phi.box.dim())
    throw std::invalid_argument("oscillator_series_pair: dimension mismatch");

  // products over the common box, grouped by total degree ratio
  std::array<int, kMaxDim> common{1, 1, 1};
  for (int k = 0; k < a_f.box.dim(); ++k)
    common[k] = std::min(a_f.box.order(k), phi.box.order(k));
  const Box cbox(std::span<const int>(common.data(), a_f.box.dim()));

  std::vector<cplx> c(cbox.size());
  std::vector<double> ratio(cbox.size());
  long nu_max = 0;
  for (std::size_t f = 0; f < cbox.size(); ++f) {
    const MultiIndex n = cbox.unflat(f);
    c[f] = a_f.at(n) * phi.at(n);
    if (c[f] != cplx{0.0, 0.0}) nu_max = std::max(nu_max, n.total());
  }
  for (std::size_t f = 0; f < cbox.size(); ++f)
    ratio[f] = nu_max > 0 ? static_cast<double>(cbox.unflat(f).total()) / nu_max : 0.0;

  OscPairResult out;
  // beta = 0 term
  cplx z0{0.0, 0.0};
  for (const cplx& v : c) z0 += v;
  out.value = z0;
  out.beta_used = 1;
  if (nu_max == 0) return out;  // nu = 0 kills every beta >= 1 term

  const double log_numax = std::log(static_cast<double>(nu_max));
  std::vector<double> pw(cbox.size(), 1.0);
  double prev_mag = std::abs(z0);
  long small_streak = 0;
  for (long beta = 1; beta <= beta_max; ++beta) {
    cplx z{0.0, 0.0};
    for (std::size_t f = 0; f < cbox.size(); ++f) {
      pw[f] *= ratio[f];
      if (pw[f] != 0.0) z += pw[f] * c[f];
    }
    const double log_scale = 2.0 * beta * std::log(mu) + beta * log_numax - seq.log_m(2 * beta);
    const cplx term = std::exp(log_scale) * z;
    out.value += term;
    out.beta_used = beta + 1;
    const double mag = std::abs(term);
    out.tail_estimate = mag;
    const bool decreasing = mag < prev_mag;
    if (decreasing && mag < 1e-12 * std::abs(out.value))
      ++small_streak;
    else
      small_streak = 0;
    prev_mag = mag;
    if (small_streak >= 3) break;
  }
  return out;
}

SampledFunction synthesize_f(const CoefficientField& a,
                             std::span<const std::vector<double>> grids) {
  return hermite::synthesize(a, grids);
}

}  // namespace gsh::structural
