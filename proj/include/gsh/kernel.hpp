#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gsh/types.hpp"
#include "gsh/weights.hpp"

namespace gsh::kernel {

/// Hermite representation of an operator kernel: the complex matrix
/// t_{(n,k)} over an output box (multi-indices in N^l) and an input box
/// (N^s), row-major on both sides.
struct KernelCoefficients {
  Box out_box;  // N^l side
  Box in_box;   // N^s side
  std::vector<cplx> data;

  KernelCoefficients() = default;
  KernelCoefficients(Box out, Box in)
      : out_box(out), in_box(in), data(out.size() * in.size(), cplx{0.0, 0.0}) {}

  int l() const { return out_box.dim(); }
  int s() const { return in_box.dim(); }

  cplx& at(const MultiIndex& n, const MultiIndex& k) {
    return data[out_box.flat(n) * in_box.size() + in_box.flat(k)];
  }
  const cplx& at(const MultiIndex& n, const MultiIndex& k) const {
    return data[out_box.flat(n) * in_box.size() + in_box.flat(k)];
  }
};

using BilinearEvaluator =
    std::function<cplx(const CoefficientField&, const CoefficientField&)>;

/// Extract kernel coefficients t_{(n,k)} = B(e_n, e_k) from a bilinear
/// evaluator on coefficient fields. Rows are filled in parallel unless the
/// evaluator declares itself serial.
KernelCoefficients kernel_from_bilinear(const BilinearEvaluator& B, const Box& out_box,
                                        const Box& in_box, bool parallel_safe = true);

/// (K phi)_n = sum_k t_{(n,k)} phi_k; phi's box must sit inside the input box.
CoefficientField apply_operator(const KernelCoefficients& t, const CoefficientField& phi);

/// Tensor product c_{(n,k)} = a_n b_k on the concatenated box.
CoefficientField tensor(const CoefficientField& a, const CoefficientField& b);

/// <K, Phi> = sum_{(n,k)} t_{(n,k)} Phi_{(n,k)} over Phi's box.
cplx pair_kernel(const KernelCoefficients& t, const CoefficientField& Phi);

/// | <K phi, psi> - K(psi (x) phi) |; identically zero in exact arithmetic.
double verify_kernel_identity(const KernelCoefficients& t, const CoefficientField& phi,
                              const CoefficientField& psi);

struct KernelGrowthResult {
  bool passes = false;
  double constant = 0.0;  // max log|t| - 2 sum M(theta_i sqrt n_i) - 2 sum M(nu_j sqrt k_j)
};

/// Growth estimate of the kernel proof: |t_{(n,k)}| against
/// exp[2 sum_i M(theta_i sqrt n_i)] exp[2 sum_j M(nu_j sqrt k_j)], trend-checked
/// like the dual-side growth bound.
KernelGrowthResult kernel_growth_check(const KernelCoefficients& t,
                                       const weights::AssociatedFunctionTable& table,
                                       std::span<const double> theta, std::span<const double> nu);

/// max over (n,k) of |pair_kernel(t, e_n (x) e_k) - t_{(n,k)}|.
double kernel_uniqueness_probe(const KernelCoefficients& t);

/// Built-in kernels.
KernelCoefficients identity_kernel(const Box& box);
/// Diagonal (-i)^{nu(n)}: the Fourier transform in coefficient space.
KernelCoefficients fourier_kernel(const Box& box);
/// Diagonal e^{-tau nu(n)}: the heat semigroup of the number operator.
KernelCoefficients heat_kernel(const Box& box, double tau);
/// Rank-one t_{(n,k)} = a_n b_k.
KernelCoefficients rank_one_kernel(const CoefficientField& a, const CoefficientField& b);

}  // namespace gsh::kernel
