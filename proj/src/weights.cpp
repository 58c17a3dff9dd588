#include "gsh/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace gsh::weights {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// log factor for the power_log family: max(log p, 1) keeps M_1 positive.
double log_factor(long p) { return std::max(std::log(static_cast<double>(p)), 1.0); }

// sup over rho of (p log rho - omega(rho)) on a geometric grid, refined
// around the maximizer until the value is stable to relative 1e-10.
double sup_weight_fn(const std::function<double(double)>& omega, long p) {
  const auto objective = [&](double log_rho) {
    const double w = omega(std::exp(log_rho));
    if (!std::isfinite(w)) throw std::domain_error("from_weight_fn: omega returned non-finite value");
    return static_cast<double>(p) * log_rho - w;
  };

  double lo = std::log(1e-8), hi = std::log(10.0);
  const int grid_n = 64;
  const int max_expand = 40, max_refine = 200;

  double best_val = -kInf, best_x = lo;
  for (int expand = 0;; ++expand) {
    best_val = -kInf;
    int best_i = 0;
    for (int i = 0; i <= grid_n; ++i) {
      const double x = lo + (hi - lo) * i / grid_n;
      const double v = objective(x);
      if (v > best_val) {
        best_val = v;
        best_i = i;
        best_x = x;
      }
    }
    if (best_i == grid_n) {
      if (expand >= max_expand) throw std::domain_error("from_weight_fn: supremum scan saturated (omega grows too slowly)");
      hi += (hi - lo);
      continue;
    }
    if (best_i == 0) {
      if (expand >= max_expand) throw std::domain_error("from_weight_fn: supremum scan saturated at small rho");
      lo -= (hi - lo);
      continue;
    }
    // interior maximizer: shrink to the neighbor bracket and iterate
    double blo = lo + (hi - lo) * (best_i - 1) / grid_n;
    double bhi = lo + (hi - lo) * (best_i + 1) / grid_n;
    double prev = best_val;
    for (int it = 0; it < max_refine; ++it) {
      double bv = -kInf, bx = blo;
      int bi = 0;
      for (int i = 0; i <= grid_n; ++i) {
        const double x = blo + (bhi - blo) * i / grid_n;
        const double v = objective(x);
        if (v > bv) {
          bv = v;
          bi = i;
          bx = x;
        }
      }
      const double step = (bhi - blo) / grid_n;
      blo = bx - step;
      bhi = bx + step;
      const double rel = std::fabs(bv - prev) / std::max(1.0, std::fabs(bv));
      prev = bv;
      best_val = bv;
      if (rel < 1e-10 && it > 1) break;
    }
    return best_val;
  }
}

}  // namespace

WeightSequence WeightSequence::gevrey(double alpha, long p_max) {
  require(alpha > 0, "gevrey: alpha must be positive");
  require(p_max >= 2, "gevrey: p_max must be >= 2");
  WeightSequence s;
  s.family_ = Family::gevrey;
  s.p_max_ = p_max;
  s.params_["alpha"] = alpha;
  s.log_table_.resize(p_max + 1);
  for (long p = 0; p <= p_max; ++p) s.log_table_[p] = s.compute(p);
  return s;
}

WeightSequence WeightSequence::power_log(double s_param, double t_param, long p_max) {
  require(s_param >= 0.5, "power_log: s must be >= 1/2");
  require(t_param >= 0.0, "power_log: t must be >= 0");
  require(p_max >= 2, "power_log: p_max must be >= 2");
  WeightSequence s;
  s.family_ = Family::power_log;
  s.p_max_ = p_max;
  s.params_["s"] = s_param;
  s.params_["t"] = t_param;
  s.log_table_.resize(p_max + 1);
  for (long p = 0; p <= p_max; ++p) s.log_table_[p] = s.compute(p);
  return s;
}

WeightSequence WeightSequence::exp_power(double r, long p_max) {
  require(r > 1.0 && r <= 2.0, "exp_power: r must be in (1, 2]");
  require(p_max >= 2, "exp_power: p_max must be >= 2");
  WeightSequence s;
  s.family_ = Family::exp_power;
  s.p_max_ = p_max;
  s.params_["r"] = r;
  s.log_table_.resize(p_max + 1);
  for (long p = 0; p <= p_max; ++p) s.log_table_[p] = s.compute(p);
  return s;
}

WeightSequence WeightSequence::from_weight_fn(std::function<double(double)> omega, long p_max) {
  require(static_cast<bool>(omega), "from_weight_fn: omega required");
  require(p_max >= 2, "from_weight_fn: p_max must be >= 2");
  WeightSequence s;
  s.family_ = Family::from_weight_fn;
  s.p_max_ = p_max;
  s.omega_ = std::move(omega);
  s.log_table_.resize(p_max + 1);
  s.log_table_[0] = 0.0;  // M_0 = 1 by normalization
  for (long p = 1; p <= p_max; ++p) s.log_table_[p] = sup_weight_fn(s.omega_, p);
  return s;
}

WeightSequence WeightSequence::from_weight_table(std::vector<std::pair<double, double>> table,
                                                 long p_max) {
  require(table.size() >= 2, "from_weight_table: need at least 2 grid points");
  require(p_max >= 2, "from_weight_table: p_max must be >= 2");
  for (const auto& [rho, w] : table) {
    require(rho > 0 && std::isfinite(rho), "from_weight_table: rho must be positive finite");
    require(std::isfinite(w), "from_weight_table: omega values must be finite");
  }
  std::sort(table.begin(), table.end());
  WeightSequence s;
  s.family_ = Family::from_weight_table;
  s.p_max_ = p_max;
  s.omega_table_ = std::move(table);
  s.log_table_.resize(p_max + 1);
  s.log_table_[0] = 0.0;
  for (long p = 1; p <= p_max; ++p) {
    double best = -kInf;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < s.omega_table_.size(); ++i) {
      const auto& [rho, w] = s.omega_table_[i];
      const double v = p * std::log(rho) - w;
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    if (best_i + 1 == s.omega_table_.size())
      throw std::domain_error("from_weight_table: supremum at table edge; extend the rho grid");
    s.log_table_[p] = best;
  }
  return s;
}

WeightSequence WeightSequence::custom(std::vector<double> log_values) {
  require(log_values.size() >= 3, "custom: need entries for p = 0..2 at least");
  require(log_values[0] == 0.0, "custom: log M_0 must be 0 (M_0 = 1)");
  for (double v : log_values) require(std::isfinite(v), "custom: log values must be finite");
  WeightSequence s;
  s.family_ = Family::custom;
  s.p_max_ = static_cast<long>(log_values.size()) - 1;
  s.log_table_ = std::move(log_values);
  return s;
}

bool WeightSequence::unbounded() const {
  switch (family_) {
    case Family::gevrey:
    case Family::power_log:
    case Family::exp_power:
    case Family::from_weight_fn:
      return true;
    default:
      return false;
  }
}

double WeightSequence::compute(long p) const {
  switch (family_) {
    case Family::gevrey:
      return params_.at("alpha") * std::lgamma(static_cast<double>(p) + 1.0);
    case Family::power_log: {
      if (p == 0) return 0.0;
      const double pd = static_cast<double>(p);
      return params_.at("s") * pd * std::log(pd) + params_.at("t") * pd * std::log(log_factor(p));
    }
    case Family::exp_power:
      return std::pow(static_cast<double>(p), params_.at("r"));
    case Family::from_weight_fn:
      return p == 0 ? 0.0 : sup_weight_fn(omega_, p);
    default:
      throw std::out_of_range("WeightSequence: table family queried beyond p_max");
  }
}

double WeightSequence::log_m(long p) const {
  if (p < 0) throw std::invalid_argument("log_m: p must be >= 0");
  if (p < static_cast<long>(log_table_.size())) return log_table_[p];
  return compute(p);  // throws for table families
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::M1: return "M1";
    case Condition::M2: return "M2";
    case Condition::M3_quasi: return "M3_quasi";
    case Condition::M3_roumieu: return "M3_roumieu";
    case Condition::M3_beurling: return "M3_beurling";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double ConditionReport::witness(const std::string& name) const {
  for (const auto& [k, v] : witnesses)
    if (k == name) return v;
  throw std::out_of_range("ConditionReport: no witness named " + name);
}

bool ConditionReport::has_witness(const std::string& name) const {
  for (const auto& [k, v] : witnesses)
    if (k == name) return true;
  return false;
}

ConditionReport check_m1(const WeightSequence& seq) {
  require(seq.p_max() >= 2, "check_m1: p_max must be >= 2");
  ConditionReport rep;
  rep.condition = Condition::M1;
  rep.checked_up_to = seq.p_max();
  constexpr double tol = 1e-12;
  for (long p = 1; p + 1 <= seq.p_max(); ++p) {
    const double lhs = 2.0 * seq.log_m(p);
    const double rhs = seq.log_m(p - 1) + seq.log_m(p + 1);
    if (lhs > rhs + tol) {
      rep.verdict = Verdict::fails;
      rep.witnesses.emplace_back("violating_index", static_cast<double>(p));
      rep.witnesses.emplace_back("excess", lhs - rhs);
      return rep;
    }
  }
  rep.verdict = Verdict::holds;
  return rep;
}

namespace {

// mean of first differences over [lo, hi)
double mean_diff(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi <= lo + 1) return 0.0;
  return (v[hi - 1] - v[lo]) / static_cast<double>(hi - 1 - lo);
}

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return den > 0 ? num / den : 0.0;
}

// Leveling-off test for a ratio sequence r_p known to sit below a finite sup
// when its increments decay: compares mean increments in the third and
// fourth quarters of the range. Returns true when the tail has flattened.
bool tail_levels_off(const std::vector<double>& r) {
  const std::size_t n = r.size();
  const std::size_t q2 = n / 2, q3 = (3 * n) / 4;
  const double d34 = mean_diff(r, q3, n);
  const double d23 = mean_diff(r, q2, q3);
  if (d34 <= 1e-12) return true;  // nonincreasing tail
  if (d23 <= 0.0) return false;   // rising again after a flat stretch
  return d34 / d23 <= 0.6;
}

}  // namespace

ConditionReport check_m2(const WeightSequence& seq) {
  require(seq.p_max() >= 2, "check_m2: p_max must be >= 2");
  const long pmax = seq.p_max();
  ConditionReport rep;
  rep.condition = Condition::M2;
  rep.checked_up_to = pmax;

  std::vector<double> g(pmax + 1, 0.0), ratio;
  for (long p = 0; p <= pmax; ++p) {
    double m = kInf;
    for (long q = 0; q <= p; ++q) m = std::min(m, seq.log_m(q) + seq.log_m(p - q));
    g[p] = seq.log_m(p) - m;
  }
  ratio.reserve(pmax);
  for (long p = 1; p <= pmax; ++p) ratio.push_back(g[p] / static_cast<double>(p));

  const double log_H = *std::max_element(ratio.begin(), ratio.end());
  double log_A = 0.0;
  for (long p = 0; p <= pmax; ++p) log_A = std::max(log_A, g[p] - static_cast<double>(p) * log_H);

  rep.witnesses.emplace_back("A", std::exp(log_A));
  rep.witnesses.emplace_back("H", std::exp(log_H));
  rep.witnesses.emplace_back("ratio_at_pmax", ratio.back());

  rep.verdict = tail_levels_off(ratio) ? Verdict::holds : Verdict::inconclusive;
  return rep;
}

ConditionReport check_m3_quasi(const WeightSequence& seq) {
  require(seq.p_max() >= 16, "check_m3_quasi: p_max must be >= 16");
  const long pmax = seq.p_max();
  ConditionReport rep;
  rep.condition = Condition::M3_quasi;
  rep.checked_up_to = pmax;

  // r_p = M_{p-1}/M_p in log domain; partial sums in linear domain
  std::vector<double> log_r(pmax + 1, 0.0), partial(pmax + 1, 0.0);
  for (long p = 1; p <= pmax; ++p) {
    log_r[p] = seq.log_m(p - 1) - seq.log_m(p);
    partial[p] = partial[p - 1] + std::exp(std::min(log_r[p], 700.0));
  }

  std::vector<double> xs, ys;
  for (long p = pmax / 2; p <= pmax; ++p) {
    xs.push_back(std::log(static_cast<double>(p)));
    ys.push_back(log_r[p]);
  }
  const double expo = fit_slope(xs, ys);

  rep.witnesses.emplace_back("partial_sum", partial[pmax]);
  rep.witnesses.emplace_back("fitted_exponent", expo);

  if (expo < -1.05) {
    rep.verdict = Verdict::holds;
  } else if (expo > -0.95) {
    rep.verdict = Verdict::fails;
    rep.witnesses.emplace_back("violating_index", static_cast<double>(pmax));
  } else {
    // boundary band: decide by whether octave increments of the partial sum
    // keep pace (harmonic-like divergence) or collapse
    const double oct1 = partial[pmax] - partial[pmax / 2];
    const double oct0 = partial[pmax / 2] - partial[pmax / 4];
    const double r = oct0 > 0 ? oct1 / oct0 : 0.0;
    rep.witnesses.emplace_back("octave_ratio", r);
    if (r >= 0.8) {
      rep.verdict = Verdict::fails;
      rep.witnesses.emplace_back("violating_index", static_cast<double>(pmax));
    } else if (r <= 0.5) {
      rep.verdict = Verdict::holds;
    } else {
      rep.verdict = Verdict::inconclusive;
    }
  }
  return rep;
}

ConditionReport check_m3_nontrivial(const WeightSequence& seq, NontrivialityMode mode) {
  require(seq.p_max() >= 16, "check_m3_nontrivial: p_max must be >= 16");
  const long pmax = seq.p_max();
  ConditionReport rep;
  rep.condition = mode == NontrivialityMode::roumieu ? Condition::M3_roumieu : Condition::M3_beurling;
  rep.checked_up_to = pmax;

  // q_p = ((p/2) log p - log M_p) / p; Roumieu needs sup_p q_p < inf,
  // Beurling needs q_p -> -inf.
  std::vector<double> q;
  q.reserve(pmax);
  for (long p = 1; p <= pmax; ++p) {
    const double pd = static_cast<double>(p);
    q.push_back((0.5 * pd * std::log(pd) - seq.log_m(p)) / pd);
  }

  if (mode == NontrivialityMode::roumieu) {
    const double log_L = *std::max_element(q.begin(), q.end());
    double log_C = 0.0;
    for (long p = 1; p <= pmax; ++p) {
      const double pd = static_cast<double>(p);
      log_C = std::max(log_C, 0.5 * pd * std::log(pd) - seq.log_m(p) - pd * log_L);
    }
    rep.witnesses.emplace_back("C", std::exp(log_C));
    rep.witnesses.emplace_back("L", std::exp(log_L));
    rep.witnesses.emplace_back("q_at_pmax", q.back());
    rep.verdict = tail_levels_off(q) ? Verdict::holds : Verdict::inconclusive;
    if (rep.verdict == Verdict::inconclusive) {
      // still climbing: no finite L fits the trend
      rep.witnesses.emplace_back("tail_mean_increment", mean_diff(q, (3 * q.size()) / 4, q.size()));
    }
    return rep;
  }

  // Beurling: fit the tail slope of q_p against log p; a strictly negative
  // slope in log-p coordinates is the desk-scale signature of q_p -> -inf.
  std::vector<double> xs, ys;
  for (std::size_t i = q.size() / 2; i < q.size(); ++i) {
    xs.push_back(std::log(static_cast<double>(i + 1)));
    ys.push_back(q[i]);
  }
  const double slope = fit_slope(xs, ys);
  rep.witnesses.emplace_back("tail_slope", slope);
  rep.witnesses.emplace_back("q_at_pmax", q.back());
  if (slope <= -0.05) {
    rep.verdict = Verdict::holds;
  } else if (slope >= -0.01) {
    rep.verdict = Verdict::fails;
    rep.witnesses.emplace_back("violating_index", static_cast<double>(pmax));
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

namespace {

AssocResult assoc_full_scan(const WeightSequence& seq, double log_rho, long p_hi) {
  AssocResult r{0.0, 0, false};
  for (long p = 0; p <= p_hi; ++p) {
    const double v = static_cast<double>(p) * log_rho - seq.log_m(p);
    if (v > r.value) {
      r.value = v;
      r.p_star = p;
    }
  }
  r.saturated = (r.p_star == p_hi);
  return r;
}

AssocResult assoc_unimodal(const WeightSequence& seq, double log_rho, long p_hi) {
  AssocResult r{0.0, 0, false};
  double prev = 0.0;  // value at p = 0
  for (long p = 1; p <= p_hi; ++p) {
    const double v = static_cast<double>(p) * log_rho - seq.log_m(p);
    if (v > r.value) {
      r.value = v;
      r.p_star = p;
    }
    if (v < prev) return r;  // first strict decrease: concavity says done
    prev = v;
  }
  r.saturated = true;  // never decreased before the cap
  return r;
}

AssocResult assoc_bracket(const WeightSequence& seq, double log_rho, long p_hi) {
  // first difference d(p) = g(p+1) - g(p) is nonincreasing under (M.1);
  // the first maximizer is the smallest p with d(p) <= 0.
  const auto diff = [&](long p) {
    return log_rho - (seq.log_m(p + 1) - seq.log_m(p));
  };
  AssocResult r{0.0, 0, false};
  if (p_hi == 0 || diff(0) <= 0.0) {
    r.value = 0.0;
    r.p_star = 0;
    return r;
  }
  if (diff(p_hi - 1) > 0.0) {
    r.p_star = p_hi;
    r.value = static_cast<double>(p_hi) * log_rho - seq.log_m(p_hi);
    r.saturated = true;
    return r;
  }
  long lo = 0, hi = p_hi - 1;  // diff(lo) > 0, diff(hi) <= 0
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (diff(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  r.p_star = hi;
  r.value = static_cast<double>(hi) * log_rho - seq.log_m(hi);
  if (r.value < 0.0) {  // numerical wobble near flat tops; p = 0 always gives 0
    r.value = 0.0;
    r.p_star = 0;
  }
  return r;
}

}  // namespace

AssocResult associated_fn(const WeightSequence& seq, double rho, const AssocOptions& opt) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("associated_fn: rho must be positive finite");
  if (opt.p_cap < 1) throw std::invalid_argument("associated_fn: p_cap must be >= 1");
  const long p_hi = seq.unbounded() ? opt.p_cap : std::min(opt.p_cap, seq.p_max());
  const double log_rho = std::log(rho);
  AssocResult r;
  switch (opt.mode) {
    case ScanMode::full: r = assoc_full_scan(seq, log_rho, p_hi); break;
    case ScanMode::bracket: r = assoc_bracket(seq, log_rho, p_hi); break;
    default: r = assoc_unimodal(seq, log_rho, p_hi); break;
  }
  return r;
}

AssocResult AssociatedFunctionTable::lookup(double rho) const {
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(rho);
    if (it != entries_.end()) return it->second;
  }
  AssocResult r = associated_fn(seq_, rho, opt_);
  std::unique_lock lock(mutex_);
  entries_.emplace(rho, r);
  return r;
}

LogWeightResult log_weight(const AssociatedFunctionTable& table, std::span<const double> theta,
                           const MultiIndex& n) {
  if (static_cast<int>(theta.size()) != n.dim())
    throw std::invalid_argument("log_weight: theta dimension must match index dimension");
  LogWeightResult out;
  for (int k = 0; k < n.dim(); ++k) {
    if (!(theta[k] > 0)) throw std::invalid_argument("log_weight: theta entries must be positive");
    if (n[k] == 0) continue;  // M(0+) = 0 with p* = 0
    const AssocResult r = table.lookup(theta[k] * std::sqrt(static_cast<double>(n[k])));
    out.value += r.value;
    out.saturated = out.saturated || r.saturated;
  }
  return out;
}

}  // namespace gsh::weights
