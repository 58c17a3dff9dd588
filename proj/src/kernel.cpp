#include "gsh/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsh/parallel.hpp"
#include "gsh/spaces.hpp"

namespace gsh::kernel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_inside(const Box& inner, const Box& outer, const char* what) {
  if (inner.dim() != outer.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  for (int k = 0; k < inner.dim(); ++k)
    if (inner.order(k) > outer.order(k))
      throw std::invalid_argument(std::string(what) + ": box exceeds kernel box");
}

}  // namespace

KernelCoefficients kernel_from_bilinear(const BilinearEvaluator& B, const Box& out_box,
                                        const Box& in_box, bool parallel_safe) {
  if (!B) throw std::invalid_argument("kernel_from_bilinear: evaluator required");
  KernelCoefficients t(out_box, in_box);
  const std::size_t in_size = in_box.size();
  std::atomic<bool> bad{false};
  const auto rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t fn = begin; fn < end; ++fn) {
      const CoefficientField en = CoefficientField::unit(out_box, out_box.unflat(fn));
      for (std::size_t fk = 0; fk < in_size; ++fk) {
        const CoefficientField ek = CoefficientField::unit(in_box, in_box.unflat(fk));
        const cplx v = B(en, ek);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) bad.store(true);
        t.data[fn * in_size + fk] = v;
      }
    }
  };
  if (parallel_safe)
    runtime::parallel_for(out_box.size(), rows);
  else
    rows(0, out_box.size());
  if (bad.load())
    throw std::domain_error("kernel_from_bilinear: evaluator returned non-finite value");
  return t;
}

CoefficientField apply_operator(const KernelCoefficients& t, const CoefficientField& phi) {
  require_inside(phi.box, t.in_box, "apply_operator");
  CoefficientField out(t.out_box, FieldKind::dual);
  const std::size_t in_size = t.in_box.size();
  runtime::parallel_for(t.out_box.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t fn = begin; fn < end; ++fn) {
      cplx acc{0.0, 0.0};
      for (std::size_t fp = 0; fp < phi.data.size(); ++fp) {
        const std::size_t fk = t.in_box.flat(phi.box.unflat(fp));
        acc += t.data[fn * in_size + fk] * phi.data[fp];
      }
      out.data[fn] = acc;
    }
  });
  return out;
}

CoefficientField tensor(const CoefficientField& a, const CoefficientField& b) {
  const Box box = a.box.concat(b.box);
  CoefficientField out(box, a.kind);
  const std::size_t nb = b.data.size();
  for (std::size_t fa = 0; fa < a.data.size(); ++fa)
    for (std::size_t fb = 0; fb < nb; ++fb) out.data[fa * nb + fb] = a.data[fa] * b.data[fb];
  return out;
}

cplx pair_kernel(const KernelCoefficients& t, const CoefficientField& Phi) {
  if (Phi.box.dim() != t.l() + t.s())
    throw std::invalid_argument("pair_kernel: Phi dimension must be l + s");
  // split Phi's box into the l-side and s-side factors
  std::array<int, kMaxDim> lo{1, 1, 1}, so{1, 1, 1};
  for (int k = 0; k < t.l(); ++k) lo[k] = Phi.box.order(k);
  for (int k = 0; k < t.s(); ++k) so[k] = Phi.box.order(t.l() + k);
  const Box lbox(std::span<const int>(lo.data(), t.l()));
  const Box sbox(std::span<const int>(so.data(), t.s()));
  require_inside(lbox, t.out_box, "pair_kernel");
  require_inside(sbox, t.in_box, "pair_kernel");

  const std::size_t in_size = t.in_box.size(), s_size = sbox.size();
  cplx acc{0.0, 0.0};
  for (std::size_t fl = 0; fl < lbox.size(); ++fl) {
    const std::size_t tn = t.out_box.flat(lbox.unflat(fl)) * in_size;
    const std::size_t pb = fl * s_size;
    for (std::size_t fs = 0; fs < s_size; ++fs)
      acc += t.data[tn + t.in_box.flat(sbox.unflat(fs))] * Phi.data[pb + fs];
  }
  return acc;
}

double verify_kernel_identity(const KernelCoefficients& t, const CoefficientField& phi,
                              const CoefficientField& psi) {
  const cplx lhs = spaces::parseval_pair(apply_operator(t, phi), psi);
  const cplx rhs = pair_kernel(t, tensor(psi, phi));
  return std::abs(lhs - rhs);
}

KernelGrowthResult kernel_growth_check(const KernelCoefficients& t,
                                       const weights::AssociatedFunctionTable& table,
                                       std::span<const double> theta, std::span<const double> nu) {
  if (static_cast<int>(theta.size()) != t.l() || static_cast<int>(nu.size()) != t.s())
    throw std::invalid_argument("kernel_growth_check: theta/nu dimensions must match (l, s)");
  const Box joint = t.out_box.concat(t.in_box);
  std::vector<double> q(t.data.size(), kNegInf);
  double c = kNegInf;
  const std::size_t in_size = t.in_box.size();
  for (std::size_t fn = 0; fn < t.out_box.size(); ++fn) {
    const double wn = 2.0 * weights::log_weight(table, theta, t.out_box.unflat(fn)).value;
    for (std::size_t fk = 0; fk < in_size; ++fk) {
      const double mag = std::abs(t.data[fn * in_size + fk]);
      if (mag == 0.0) continue;
      const double wk = 2.0 * weights::log_weight(table, nu, t.in_box.unflat(fk)).value;
      q[fn * in_size + fk] = std::log(mag) - wn - wk;
      c = std::max(c, q[fn * in_size + fk]);
    }
  }
  KernelGrowthResult out;
  out.constant = (c == kNegInf) ? 0.0 : c;
  out.passes = spaces::outer_tail_nonincreasing(joint, q);
  return out;
}

double kernel_uniqueness_probe(const KernelCoefficients& t) {
  double worst = 0.0;
  const std::size_t in_size = t.in_box.size();
  for (std::size_t fn = 0; fn < t.out_box.size(); ++fn) {
    const CoefficientField en = CoefficientField::unit(t.out_box, t.out_box.unflat(fn));
    for (std::size_t fk = 0; fk < in_size; ++fk) {
      const CoefficientField ek = CoefficientField::unit(t.in_box, t.in_box.unflat(fk));
      const cplx recovered = pair_kernel(t, tensor(en, ek));
      worst = std::max(worst, std::abs(recovered - t.data[fn * in_size + fk]));
    }
  }
  return worst;
}

KernelCoefficients identity_kernel(const Box& box) {
  KernelCoefficients t(box, box);
  const std::size_t n = box.size();
  for (std::size_t f = 0; f < n; ++f) t.data[f * n + f] = cplx{1.0, 0.0};
  return t;
}

KernelCoefficients fourier_kernel(const Box& box) {
  KernelCoefficients t(box, box);
  const std::size_t n = box.size();
  const cplx mi{0.0, -1.0};
  for (std::size_t f = 0; f < n; ++f) {
    const long nu = box.unflat(f).total();
    cplx v{1.0, 0.0};
    switch (nu % 4) {
      case 0: v = cplx{1.0, 0.0}; break;
      case 1: v = mi; break;
      case 2: v = cplx{-1.0, 0.0}; break;
      case 3: v = cplx{0.0, 1.0}; break;
    }
    t.data[f * n + f] = v;
  }
  return t;
}

KernelCoefficients heat_kernel(const Box& box, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("heat_kernel: tau must be >= 0");
  KernelCoefficients t(box, box);
  const std::size_t n = box.size();
  for (std::size_t f = 0; f < n; ++f)
    t.data[f * n + f] = std::exp(-tau * static_cast<double>(box.unflat(f).total()));
  return t;
}

KernelCoefficients rank_one_kernel(const CoefficientField& a, const CoefficientField& b) {
  KernelCoefficients t(a.box, b.box);
  const std::size_t nb = b.data.size();
  for (std::size_t fa = 0; fa < a.data.size(); ++fa)
    for (std::size_t fb = 0; fb < nb; ++fb) t.data[fa * nb + fb] = a.data[fa] * b.data[fb];
  return t;
}

}  // namespace gsh::kernel
