"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import gsh


def test_weight_sequence_and_conditions():
    seq = gsh.WeightSequence.gevrey(1.0, 256)
    assert seq.log_m(3) == pytest.approx(math.log(6.0), abs=1e-14)
    assert gsh.check_m1(seq)["verdict"] == "holds"
    assert gsh.check_m3_quasi(seq)["verdict"] == "fails"  # quasianalytic
    rep = gsh.check_m3_nontrivial(seq, mode="roumieu")
    assert rep["verdict"] == "holds"


def test_associated_fn():
    seq = gsh.WeightSequence.power_log(1.0, 0.0, 64)
    value, p_star, saturated = gsh.associated_fn(seq, math.e)
    assert value == pytest.approx(1.0, abs=1e-13)
    assert p_star == 1
    assert not saturated


def test_hermite_and_quadrature():
    assert gsh.hermite_eval(0, 0.0) == pytest.approx(math.pi ** -0.25, rel=1e-14)
    assert gsh.hermite_eval(1, 0.0) == 0.0
    nodes, weights, log_weights = gsh.gauss_hermite_rule(32)
    assert weights.sum() == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert np.all(np.isfinite(log_weights))


def test_analyze_synthesize_roundtrip():
    box = [10]
    a = gsh.analyze(lambda x: math.pi ** -0.25 * math.exp(-0.5 * x[0] ** 2), box)
    data = a.data
    assert abs(data[0] - 1.0) < 1e-12
    assert np.max(np.abs(data[1:])) < 1e-12
    val = gsh.synthesize_at(a, [0.5])
    assert val == pytest.approx(gsh.hermite_eval(0, 0.5), rel=1e-12)


def test_ladder_and_parseval():
    e0 = gsh.CoefficientField.unit([8], [0])
    x0 = gsh.ladder_apply(e0, "position")
    assert abs(x0.data[1] - math.sqrt(0.5)) < 1e-15
    e3 = gsh.CoefficientField.unit([8], [3], kind="dual")
    a3 = gsh.CoefficientField.unit([8], [3])
    assert gsh.parseval_pair(e3, a3) == 1.0 + 0.0j


def test_structural_roundtrip():
    seq = gsh.WeightSequence.gevrey(1.0, 1024)
    value, terms, tail = gsh.divisor(seq, 1.0, 1)
    assert value == pytest.approx(math.cosh(1.0), abs=1e-12)

    rng = np.random.default_rng(5)
    raw = rng.uniform(-1, 1, 32) + 1j * rng.uniform(-1, 1, 32)
    b = gsh.CoefficientField([32], raw, kind="dual")
    phi_raw = rng.uniform(-1, 1, 32) + 1j * rng.uniform(-1, 1, 32)
    phi = gsh.CoefficientField([32], phi_raw)
    a = gsh.regularize(b, seq, 1.0)
    series, tail_est, _ = gsh.oscillator_series_pair(a, seq, 1.0, phi, beta_max=500)
    direct = gsh.parseval_pair(b, phi)
    assert abs(series - direct) <= 1e-8 * abs(direct)


def test_kernel_machinery():
    t = gsh.identity_kernel([8])
    rng = np.random.default_rng(7)
    phi = gsh.CoefficientField([8], rng.uniform(-1, 1, 8) + 1j * rng.uniform(-1, 1, 8))
    psi = gsh.CoefficientField([8], rng.uniform(-1, 1, 8) + 1j * rng.uniform(-1, 1, 8))
    assert gsh.verify_kernel_identity(t, phi, psi) <= 1e-13
    assert gsh.kernel_uniqueness_probe(t) == 0.0

    F = gsh.fourier_kernel([8])
    out = phi
    for _ in range(4):
        out = gsh.apply_operator(F, out)
    assert np.allclose(out.data, phi.data, rtol=0, atol=0)

    B = lambda a, b: gsh.parseval_pair(a, b)
    t2 = gsh.kernel_from_bilinear(B, [4], [4])
    assert np.allclose(t2.data, np.eye(4), rtol=0, atol=0)


def test_classify_envelope():
    seq = gsh.WeightSequence.gevrey(1.0, 2048)
    n = np.arange(1, 128)
    mags = np.array([math.exp(-gsh.associated_fn(seq, math.sqrt(k))[0]) / k**2 for k in n])
    data = np.concatenate([[1.0 + 0j], mags.astype(complex)])
    a = gsh.CoefficientField([128], data)
    rep = gsh.classify(a, seq, "test", [[0.25 * i] for i in range(1, 17)])
    assert abs(rep["theta_star"][0] - 1.0) <= 0.25 + 1e-12
