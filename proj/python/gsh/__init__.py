"""Hermite-spectral toolkit: weight sequences, Fourier-Hermite analysis,
membership diagnostics, structural regularization and kernel operators."""

from gsh._core import (  # noqa: F401
    CoefficientField,
    KernelCoefficients,
    WeightSequence,
    analyze,
    apply_operator,
    associated_fn,
    check_m1,
    check_m2,
    check_m3_nontrivial,
    check_m3_quasi,
    classify,
    divisor,
    fourier_kernel,
    gauss_hermite_rule,
    growth_check,
    heat_kernel,
    hermite_eval,
    hermite_eval_multi,
    identity_kernel,
    kernel_from_bilinear,
    kernel_growth_check,
    kernel_uniqueness_probe,
    ladder_apply,
    number_power,
    oscillator_series_pair,
    pair_kernel,
    parseval_pair,
    rank_one_kernel,
    regularize,
    seminorm_estimate,
    sup_norm_estimate,
    synthesize,
    synthesize_at,
    tensor,
    verify_bound,
    verify_kernel_identity,
    weighted_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
