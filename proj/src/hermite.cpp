#include "gsh/hermite.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "gsh/scaled.hpp"

namespace gsh::hermite {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;
// below this seed exponent the plain recurrence would start from a denormal
constexpr double kLogSeedFloor = -700.0;
// Clenshaw is safe up to here for desk-scale boxes; beyond, sum scaled terms
constexpr double kClenshawXMax = 36.0;

double log_seed(double x) { return -0.5 * x * x - 0.25 * std::log(kPi); }

void check_order(int n, int cap) {
  if (n < 0) throw std::invalid_argument("hermite: order must be >= 0");
  if (n > cap) throw std::domain_error("hermite: order beyond configured cap");
}

// (h_{n-1}, h_n) at x as mantissas with a shared power-of-two exponent.
struct ScaledPair {
  double prev = 0.0;
  double cur = 0.0;
  long exp2 = 0;
};

ScaledPair recurrence_pair(int n, double x) {
  const Scaled seed = Scaled::from_log(log_seed(x));
  double hm1 = 0.0, h = seed.mantissa;
  long e = seed.exp2;
  for (int k = 0; k < n; ++k) {
    const double hp1 =
        x * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(static_cast<double>(k) / (k + 1)) * hm1;
    hm1 = h;
    h = hp1;
    const double m = std::max(std::fabs(h), std::fabs(hm1));
    if (m > 0x1p500) {
      hm1 = std::ldexp(hm1, -512);
      h = std::ldexp(h, -512);
      e += 512;
    } else if (m > 0.0 && m < 0x1p-500) {
      hm1 = std::ldexp(hm1, 512);
      h = std::ldexp(h, 512);
      e -= 512;
    }
  }
  return {hm1, h, e};
}

double collapse(double mantissa, long e) {
  if (mantissa == 0.0) return 0.0;
  if (e < -1200) return 0.0;  // true value below double range
  if (e > 1100) return mantissa > 0 ? HUGE_VAL : -HUGE_VAL;
  return std::ldexp(mantissa, static_cast<int>(e));
}

}  // namespace

std::vector<double> hermite_eval_all(int n_max, double x, int order_cap) {
  check_order(n_max, order_cap);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  const double ls = log_seed(x);
  if (ls > kLogSeedFloor) {
    double hm1 = 0.0, h = std::exp(ls);
    out[0] = h;
    for (int k = 0; k < n_max; ++k) {
      const double hp1 =
          x * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(static_cast<double>(k) / (k + 1)) * hm1;
      hm1 = h;
      h = hp1;
      out[k + 1] = h;
    }
    return out;
  }
  // exponent-carrying pass, recombining per order
  const Scaled seed = Scaled::from_log(ls);
  double hm1 = 0.0, h = seed.mantissa;
  long e = seed.exp2;
  out[0] = collapse(h, e);
  for (int k = 0; k < n_max; ++k) {
    const double hp1 =
        x * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(static_cast<double>(k) / (k + 1)) * hm1;
    hm1 = h;
    h = hp1;
    const double m = std::max(std::fabs(h), std::fabs(hm1));
    if (m > 0x1p500) {
      hm1 = std::ldexp(hm1, -512);
      h = std::ldexp(h, -512);
      e += 512;
    } else if (m > 0.0 && m < 0x1p-500) {
      hm1 = std::ldexp(hm1, 512);
      h = std::ldexp(h, 512);
      e -= 512;
    }
    out[k + 1] = collapse(h, e);
  }
  return out;
}

double hermite_eval(int n, double x, int order_cap) {
  check_order(n, order_cap);
  const double ls = log_seed(x);
  if (ls > kLogSeedFloor) {
    double hm1 = 0.0, h = std::exp(ls);
    for (int k = 0; k < n; ++k) {
      const double hp1 =
          x * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(static_cast<double>(k) / (k + 1)) * hm1;
      hm1 = h;
      h = hp1;
    }
    return h;
  }
  const ScaledPair p = recurrence_pair(n, x);
  return collapse(p.cur, p.exp2);
}

double hermite_eval_multi(const MultiIndex& n, std::span<const double> x) {
  if (static_cast<int>(x.size()) != n.dim())
    throw std::invalid_argument("hermite_eval_multi: point dimension mismatch");
  double v = 1.0;
  for (int k = 0; k < n.dim(); ++k) v *= hermite_eval(n[k], x[k]);
  return v;
}

namespace {

QuadRule build_rule(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_rule: order must be >= 1");
  QuadRule rule;
  rule.nodes.resize(order);

  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix (diag 0,
  // offdiag sqrt(k/2)); a Newton step on the recurrence then polishes each
  // node to machine accuracy.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite_rule: tridiagonal eigensolver did not converge");
  for (int i = 0; i < order; ++i) rule.nodes[i] = solver.eigenvalues()[i];
  std::sort(rule.nodes.begin(), rule.nodes.end());

  const double root2n = std::sqrt(2.0 * order);
  for (int i = 0; i < order; ++i) {
    double z = rule.nodes[i];
    for (int it = 0; it < 3; ++it) {
      const ScaledPair p = recurrence_pair(order, z);
      const double deriv = root2n * p.prev - z * p.cur;
      if (deriv == 0.0) break;
      const double delta = p.cur / deriv;
      z -= delta;
      if (std::fabs(delta) < 1e-15 * (1.0 + std::fabs(z))) break;
    }
    rule.nodes[i] = z;
  }

  // enforce exact symmetry
  for (int i = 0; i < order / 2; ++i) {
    const double m = 0.5 * (rule.nodes[i] - rule.nodes[order - 1 - i]);
    rule.nodes[i] = m;
    rule.nodes[order - 1 - i] = -m;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;

  // Christoffel weights: w_i e^{x_i^2} = 1 / sum_{k<order} H_k(x_i)^2; the
  // de-weighted factor is bounded, so the sum never under- or overflows.
  rule.weights.resize(order);
  rule.log_weights.resize(order);
  rule.total_weights.resize(order);
  for (int i = 0; i <= (order - 1) / 2; ++i) {
    const double x = rule.nodes[i];
    const std::vector<double> h = hermite_eval_all(order - 1, x, std::max(order, kDefaultOrderCap));
    double s = 0.0;
    for (double v : h) s += v * v;
    const double total = 1.0 / s;
    const double logw = -x * x - std::log(s);
    const int j = order - 1 - i;
    rule.total_weights[i] = rule.total_weights[j] = total;
    rule.log_weights[i] = rule.log_weights[j] = logw;
    rule.weights[i] = rule.weights[j] = std::exp(logw);
  }
  return rule;
}

const QuadRule& cached_rule(int order) {
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

}  // namespace

QuadRule gauss_hermite_rule(int order) { return cached_rule(order); }

namespace {

int resolve_quad_order(const Box& box, int quad_order) {
  if (quad_order == 0) return box.max_order() + 16;
  if (quad_order < box.max_order() + 1)
    throw std::invalid_argument("analyze: quad_order must be >= box max order + 1");
  return quad_order;
}

// basis matrix B[i*N + n] = H_n(x_i)
std::vector<double> basis_matrix(std::span<const double> nodes, int n_count) {
  std::vector<double> b(nodes.size() * n_count);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::vector<double> h = hermite_eval_all(n_count - 1, nodes[i]);
    std::copy(h.begin(), h.end(), b.begin() + i * n_count);
  }
  return b;
}

CoefficientField analyze_values(const std::vector<cplx>& f, const Box& box, const QuadRule& rule,
                                FieldKind kind) {
  const int d = box.dim();
  const int q = static_cast<int>(rule.nodes.size());
  for (const cplx& v : f)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("analyze: non-finite sample value");

  CoefficientField out(box, kind);
  const std::span<const double> w(rule.total_weights);

  if (d == 1) {
    const int n0 = box.order(0);
    const std::vector<double> b0 = basis_matrix(rule.nodes, n0);
    for (int n = 0; n < n0; ++n) {
      cplx acc{0.0, 0.0};
      for (int i = 0; i < q; ++i) acc += w[i] * f[i] * b0[i * n0 + n];
      out.data[n] = acc;
    }
    return out;
  }

  if (d == 2) {
    const int n0 = box.order(0), n1 = box.order(1);
    const std::vector<double> b0 = basis_matrix(rule.nodes, n0);
    const std::vector<double> b1 = basis_matrix(rule.nodes, n1);
    // contract axis 1 first: t[i][m] = sum_j w_j f[i][j] H_m(x_j)
    std::vector<cplx> t(static_cast<std::size_t>(q) * n1, cplx{0.0, 0.0});
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        const cplx wf = w[j] * f[static_cast<std::size_t>(i) * q + j];
        for (int m = 0; m < n1; ++m) t[static_cast<std::size_t>(i) * n1 + m] += wf * b1[j * n1 + m];
      }
    for (int n = 0; n < n0; ++n)
      for (int m = 0; m < n1; ++m) {
        cplx acc{0.0, 0.0};
        for (int i = 0; i < q; ++i) acc += w[i] * b0[i * n0 + n] * t[static_cast<std::size_t>(i) * n1 + m];
        out.data[static_cast<std::size_t>(n) * n1 + m] = acc;
      }
    return out;
  }

  const int n0 = box.order(0), n1 = box.order(1), n2 = box.order(2);
  const std::vector<double> b0 = basis_matrix(rule.nodes, n0);
  const std::vector<double> b1 = basis_matrix(rule.nodes, n1);
  const std::vector<double> b2 = basis_matrix(rule.nodes, n2);
  // stage 1: contract axis 2
  std::vector<cplx> t1(static_cast<std::size_t>(q) * q * n2, cplx{0.0, 0.0});
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const std::size_t fb = (static_cast<std::size_t>(i) * q + j) * q;
      const std::size_t tb = (static_cast<std::size_t>(i) * q + j) * n2;
      for (int k = 0; k < q; ++k) {
        const cplx wf = w[k] * f[fb + k];
        for (int m = 0; m < n2; ++m) t1[tb + m] += wf * b2[k * n2 + m];
      }
    }
  // stage 2: contract axis 1
  std::vector<cplx> t2(static_cast<std::size_t>(q) * n1 * n2, cplx{0.0, 0.0});
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const std::size_t sb = (static_cast<std::size_t>(i) * q + j) * n2;
      for (int m1 = 0; m1 < n1; ++m1) {
        const cplx wb = w[j] * b1[j * n1 + m1];
        const std::size_t db = (static_cast<std::size_t>(i) * n1 + m1) * n2;
        for (int m2 = 0; m2 < n2; ++m2) t2[db + m2] += wb * t1[sb + m2];
      }
    }
  // stage 3: contract axis 0
  for (int n = 0; n < n0; ++n)
    for (int m1 = 0; m1 < n1; ++m1)
      for (int m2 = 0; m2 < n2; ++m2) {
        cplx acc{0.0, 0.0};
        for (int i = 0; i < q; ++i)
          acc += w[i] * b0[i * n0 + n] * t2[(static_cast<std::size_t>(i) * n1 + m1) * n2 + m2];
        out.data[(static_cast<std::size_t>(n) * n1 + m1) * n2 + m2] = acc;
      }
  return out;
}

}  // namespace

CoefficientField analyze(const Callable& f, const Box& box, int quad_order, FieldKind kind) {
  if (!f) throw std::invalid_argument("analyze: callable required");
  const int q = resolve_quad_order(box, quad_order);
  const QuadRule& rule = cached_rule(q);
  const int d = box.dim();
  std::vector<cplx> samples;
  samples.reserve(static_cast<std::size_t>(std::pow(q, d)));
  std::array<double, kMaxDim> x{};
  if (d == 1) {
    for (int i = 0; i < q; ++i) {
      x[0] = rule.nodes[i];
      samples.push_back(f(std::span<const double>(x.data(), 1)));
    }
  } else if (d == 2) {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        x[0] = rule.nodes[i];
        x[1] = rule.nodes[j];
        samples.push_back(f(std::span<const double>(x.data(), 2)));
      }
  } else {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        for (int k = 0; k < q; ++k) {
          x[0] = rule.nodes[i];
          x[1] = rule.nodes[j];
          x[2] = rule.nodes[k];
          samples.push_back(f(std::span<const double>(x.data(), 3)));
        }
  }
  return analyze_values(samples, box, rule, kind);
}

CoefficientField analyze(const SampledFunction& samples, const Box& box, int quad_order) {
  samples.validate();
  if (samples.dim != box.dim()) throw std::invalid_argument("analyze: sample/box dimension mismatch");
  const int q = resolve_quad_order(box, quad_order);
  const QuadRule& rule = cached_rule(q);
  for (int k = 0; k < samples.dim; ++k) {
    if (static_cast<int>(samples.grid[k].size()) != q)
      throw std::invalid_argument("analyze: sample grid must be the Gauss-Hermite grid of the quadrature order");
    for (int i = 0; i < q; ++i)
      if (std::fabs(samples.grid[k][i] - rule.nodes[i]) > 1e-12 * (1.0 + std::fabs(rule.nodes[i])))
        throw std::invalid_argument("analyze: sample grid must match the Gauss-Hermite nodes");
  }
  return analyze_values(samples.values, box, rule, samples.dim == 1 ? FieldKind::test : FieldKind::test);
}

namespace {

// Clenshaw over one axis; falls back to a scaled direct sum when the plain
// backward pass could overflow (seed far in the Gaussian tail).
cplx clenshaw_1d(std::span<const cplx> c, double x) {
  const int n = static_cast<int>(c.size());
  if (n == 0) return {0.0, 0.0};
  if (std::fabs(x) > kClenshawXMax) {
    const std::vector<double> h = hermite_eval_all(n - 1, x);
    cplx acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) acc += c[k] * h[k];
    return acc;
  }
  cplx b1{0.0, 0.0}, b2{0.0, 0.0};
  for (int k = n - 1; k >= 0; --k) {
    const cplx b = c[k] + x * std::sqrt(2.0 / (k + 1)) * b1 -
                   std::sqrt(static_cast<double>(k + 1) / (k + 2)) * b2;
    b2 = b1;
    b1 = b;
  }
  return b1 * std::exp(log_seed(x));
}

}  // namespace

cplx synthesize_at(const CoefficientField& a, std::span<const double> x) {
  const int d = a.box.dim();
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("synthesize_at: point dimension mismatch");
  if (d == 1) return clenshaw_1d(a.data, x[0]);
  if (d == 2) {
    const int n1 = a.box.order(1);
    std::vector<cplx> col(a.box.order(0));
    for (int n = 0; n < a.box.order(0); ++n)
      col[n] = clenshaw_1d(std::span<const cplx>(a.data).subspan(static_cast<std::size_t>(n) * n1, n1), x[1]);
    return clenshaw_1d(col, x[0]);
  }
  const int n1 = a.box.order(1), n2 = a.box.order(2);
  std::vector<cplx> mat(static_cast<std::size_t>(a.box.order(0)) * n1);
  for (int n = 0; n < a.box.order(0); ++n)
    for (int m = 0; m < n1; ++m)
      mat[static_cast<std::size_t>(n) * n1 + m] = clenshaw_1d(
          std::span<const cplx>(a.data).subspan((static_cast<std::size_t>(n) * n1 + m) * n2, n2), x[2]);
  std::vector<cplx> col(a.box.order(0));
  for (int n = 0; n < a.box.order(0); ++n)
    col[n] = clenshaw_1d(std::span<const cplx>(mat).subspan(static_cast<std::size_t>(n) * n1, n1), x[1]);
  return clenshaw_1d(col, x[0]);
}

SampledFunction synthesize(const CoefficientField& a, std::span<const std::vector<double>> grids) {
  const int d = a.box.dim();
  if (static_cast<int>(grids.size()) != d)
    throw std::invalid_argument("synthesize: grid dimension mismatch");
  SampledFunction out;
  out.dim = d;
  for (int k = 0; k < d; ++k) out.grid[k] = grids[k];
  out.values.resize(out.grid_size());
  out.validate();

  std::array<double, kMaxDim> x{};
  std::size_t idx = 0;
  if (d == 1) {
    for (double x0 : out.grid[0]) {
      x[0] = x0;
      out.values[idx++] = synthesize_at(a, std::span<const double>(x.data(), 1));
    }
  } else if (d == 2) {
    for (double x0 : out.grid[0])
      for (double x1 : out.grid[1]) {
        x[0] = x0;
        x[1] = x1;
        out.values[idx++] = synthesize_at(a, std::span<const double>(x.data(), 2));
      }
  } else {
    for (double x0 : out.grid[0])
      for (double x1 : out.grid[1])
        for (double x2 : out.grid[2]) {
          x[0] = x0;
          x[1] = x1;
          x[2] = x2;
          out.values[idx++] = synthesize_at(a, std::span<const double>(x.data(), 3));
        }
  }
  return out;
}

CoefficientField ladder_apply(const CoefficientField& a, LadderOp op, int axis) {
  const int d = a.box.dim();
  if (axis < 0 || axis >= d) throw std::invalid_argument("ladder_apply: axis out of range");

  if (op == LadderOp::number) {
    CoefficientField out(a.box, a.kind);
    for (std::size_t f = 0; f < a.data.size(); ++f) {
      const MultiIndex n = a.box.unflat(f);
      out.data[f] = static_cast<double>(n[axis]) * a.data[f];
    }
    return out;
  }

  std::array<int, kMaxDim> orders{1, 1, 1};
  for (int k = 0; k < d; ++k) orders[k] = a.box.order(k) + (k == axis ? 1 : 0);
  Box obox(std::span<const int>(orders.data(), d));
  CoefficientField out(obox, a.kind);

  for (std::size_t f = 0; f < out.data.size(); ++f) {
    MultiIndex n = obox.unflat(f);
    const int nk = n[axis];
    cplx v{0.0, 0.0};
    // (x a)_n =  sqrt(n/2) a_{n-1} + sqrt((n+1)/2) a_{n+1}
    // (a')_n  = -sqrt(n/2) a_{n-1} + sqrt((n+1)/2) a_{n+1}
    if (nk >= 1) {
      MultiIndex m = n;
      m[axis] = nk - 1;
      if (a.box.contains(m)) {
        const double c = std::sqrt(0.5 * nk);
        v += (op == LadderOp::position ? c : -c) * a.at(m);
      }
    }
    {
      MultiIndex m = n;
      m[axis] = nk + 1;
      if (a.box.contains(m)) v += std::sqrt(0.5 * (nk + 1)) * a.at(m);
    }
    out.data[f] = v;
  }
  return out;
}

CoefficientField number_power(const CoefficientField& a, int beta) {
  if (beta < 0) throw std::invalid_argument("number_power: beta must be >= 0");
  CoefficientField out(a.box, a.kind);
  for (std::size_t f = 0; f < a.data.size(); ++f) {
    const double nu = static_cast<double>(a.box.unflat(f).total());
    const double scale = beta == 0 ? 1.0 : std::pow(nu, beta);
    out.data[f] = scale * a.data[f];
  }
  return out;
}

double sup_norm_estimate(int n) {
  check_order(n, kDefaultOrderCap);
  const double turning = std::sqrt(2.0 * n + 1.0);
  const double x_hi = turning + 2.0;
  const double step = std::min(0.5 / turning, 0.5);

  // |H_n| is even; scan [0, x_hi]
  double best_x = 0.0, best = 0.0;
  for (double x = 0.0; x <= x_hi + 0.5 * step; x += step) {
    const double v = std::fabs(hermite_eval(n, x));
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // golden-section refinement around the scan maximum
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::max(0.0, best_x - step), hi = best_x + step;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = std::fabs(hermite_eval(n, x1)), f2 = std::fabs(hermite_eval(n, x2));
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = std::fabs(hermite_eval(n, x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = std::fabs(hermite_eval(n, x1));
    }
    best = std::max(best, std::max(f1, f2));
  }
  return best;
}

std::vector<double> sup_norm_table(int n_max) {
  check_order(n_max, kDefaultOrderCap);
  std::vector<double> t(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) t[n] = sup_norm_estimate(n);
  return t;
}

}  // namespace gsh::hermite
