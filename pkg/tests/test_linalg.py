"""Tests for the dense-numerics layer against raw numpy oracles."""
import math

import numpy as np
import pytest

from entscale import linalg
from entscale.errors import NumericalError

import helpers


@pytest.mark.parametrize("dim", [2, 16, 64])
def test_hermitian_eigensystem_quality(dim):
    rng = np.random.default_rng(100 + dim)
    for _ in range(100):
        a = helpers.random_hermitian(rng, dim)
        es = linalg.hermitian_eigensystem(a)
        assert es.residual <= 1e-10 * max(1.0, linalg.operator_norm(a))
        assert es.orthogonality <= 1e-12
        rebuilt = (es.vectors * es.values) @ es.vectors.conj().T
        assert np.max(np.abs(rebuilt - a)) < 1e-10
        assert np.all(np.diff(es.values) >= 0)


def test_hermitian_eigensystem_rejects_non_hermitian():
    with pytest.raises(ValueError):
        linalg.hermitian_eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_singular_values_descending_and_match_numpy():
    rng = np.random.default_rng(7)
    c = rng.standard_normal((8, 20)) + 1j * rng.standard_normal((8, 20))
    s = linalg.singular_values(c)
    assert np.all(np.diff(s) <= 0)
    assert np.allclose(np.sort(s), np.sort(np.linalg.svd(c, compute_uv=False)),
                       atol=1e-12)


def test_operator_norm_matches_two_norm():
    rng = np.random.default_rng(8)
    a = helpers.random_hermitian(rng, 24)
    assert abs(linalg.operator_norm(a) - np.linalg.norm(a, 2)) < 1e-10
    b = rng.standard_normal((10, 10))
    assert abs(linalg.operator_norm(b) - np.linalg.norm(b, 2)) < 1e-10


def test_evolve_action_dense_matches_oracle_and_is_unitary():
    rng = np.random.default_rng(9)
    h = helpers.random_hermitian(rng, 32)
    v = helpers.random_unit_vector(rng, 32)
    out = linalg.evolve_action(h, 0.8, v)
    assert np.max(np.abs(out - helpers.unitary_of(h, 0.8) @ v)) < 1e-10
    assert abs(np.linalg.norm(out) - 1.0) < 1e-10
    back = linalg.evolve_action(h, -0.8, out)
    assert np.max(np.abs(back - v)) < 1e-9


def test_evolve_action_krylov_agrees_with_dense():
    # force the Lanczos path with a small dense_limit and via a callable
    rng = np.random.default_rng(10)
    h = helpers.random_hermitian(rng, 256, scale=0.5)
    v = helpers.random_unit_vector(rng, 256)
    dense = linalg.evolve_action(h, 1.3, v)
    forced = linalg.evolve_action(h, 1.3, v, dense_limit=64)
    as_callable = linalg.evolve_action(lambda x: h @ x, 1.3, v)
    assert np.max(np.abs(forced - dense)) < 1e-8
    assert np.max(np.abs(as_callable - dense)) < 1e-8


def test_evolve_action_zero_time_is_identity():
    rng = np.random.default_rng(11)
    h = helpers.random_hermitian(rng, 16)
    v = helpers.random_unit_vector(rng, 16)
    assert np.max(np.abs(linalg.evolve_action(h, 0.0, v) - v)) < 1e-14


def test_log_abs_determinant_matches_slogdet():
    rng = np.random.default_rng(12)
    for dim in (2, 5, 16, 64):
        a = rng.standard_normal((dim, dim))
        sign_ref, log_ref = np.linalg.slogdet(a)
        log_mine, sign_mine = linalg.log_abs_determinant(a)
        assert abs(log_mine - log_ref) < 1e-9 * max(1.0, abs(log_ref))
        assert sign_mine == int(sign_ref)


def test_log_abs_determinant_hermitian_sign_counts_negatives():
    rng = np.random.default_rng(13)
    a = helpers.random_hermitian(rng, 12)
    w = np.linalg.eigvalsh(a)
    log_mine, sign_mine = linalg.log_abs_determinant(a)
    assert sign_mine == (1 if (w < 0).sum() % 2 == 0 else -1)
    assert abs(log_mine - np.log(np.abs(w)).sum()) < 1e-9 * max(1.0, abs(log_mine))


def test_log_abs_determinant_flags_singular():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    log_val, sign = linalg.log_abs_determinant(a)
    assert log_val == -math.inf
    assert sign == 0


def test_log_abs_determinant_rejects_complex_phase():
    with pytest.raises(NumericalError):
        linalg.log_abs_determinant(np.array([[1.0j]]))


def test_fourier_piecewise_matches_riemann_sum():
    # paper-style sign profile: +1, -1, +1 on quarters of the period
    breakpoints = (0.0, math.pi / 2, 3 * math.pi / 2, linalg.TWO_PI)
    values = (1.0, -1.0, 1.0)
    xs = (np.arange(1_000_000) + 0.5) * (linalg.TWO_PI / 1_000_000)
    fx = np.where((xs > math.pi / 2) & (xs <= 3 * math.pi / 2), -1.0, 1.0)
    for l in range(-6, 7):
        brute = np.mean(fx * np.exp(-1j * l * xs))
        exact = linalg.fourier_coefficient((breakpoints, values), l)
        assert abs(exact - brute) < 1e-5
    # real symbols: t_{-l} = conj(t_l)
    for l in range(1, 7):
        plus = linalg.fourier_coefficient((breakpoints, values), l)
        minus = linalg.fourier_coefficient((breakpoints, values), -l)
        assert abs(minus - np.conj(plus)) < 1e-14


def test_fourier_zero_mode_is_mean():
    breakpoints = (0.0, 1.0, linalg.TWO_PI)
    values = (3.0, -1.0)
    mean = (3.0 * 1.0 + (-1.0) * (linalg.TWO_PI - 1.0)) / linalg.TWO_PI
    assert abs(linalg.fourier_coefficient((breakpoints, values), 0) - mean) < 1e-14


def test_fourier_callable_needs_spec_and_converges_when_aligned():
    breakpoints = (0.0, math.pi / 2, 3 * math.pi / 2, linalg.TWO_PI)
    values = (1.0, -1.0, 1.0)

    def f(x):
        return np.where((x > math.pi / 2) & (x <= 3 * math.pi / 2), -1.0, 1.0)

    with pytest.raises(ValueError):
        linalg.fourier_coefficient(f, 1)
    spec = linalg.QuadratureSpec(breakpoints=breakpoints[1:])
    for l in (0, 1, 2, 3):
        exact = linalg.fourier_coefficient((breakpoints, values), l)
        quad = linalg.fourier_coefficient(f, l, quadrature=spec)
        assert abs(quad - exact) < 1e-12


def test_fourier_callable_misaligned_panels_fail_certification():
    def f(x):
        return np.where(x <= 1.0, 1.0, -1.0)

    spec = linalg.QuadratureSpec(breakpoints=(linalg.TWO_PI,), nodes=8,
                                 tolerance=1e-12)
    with pytest.raises(NumericalError):
        linalg.fourier_coefficient(f, 3, quadrature=spec)


def test_fourier_piecewise_jump_alignment_precondition():
    breakpoints = (0.0, 1.0, linalg.TWO_PI)
    values = (1.0, -1.0)
    spec = linalg.QuadratureSpec(breakpoints=(2.0, linalg.TWO_PI))
    with pytest.raises(ValueError):
        linalg.fourier_coefficient((breakpoints, values), 1, quadrature=spec)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        linalg.QuadratureSpec(breakpoints=())
    with pytest.raises(ValueError):
        linalg.QuadratureSpec(breakpoints=(1.0, 0.5, linalg.TWO_PI))
    with pytest.raises(ValueError):
        linalg.QuadratureSpec(breakpoints=(1.0, 2.0))
    with pytest.raises(ValueError):
        linalg.QuadratureSpec(breakpoints=(linalg.TWO_PI,), nodes=0)
    with pytest.raises(ValueError):
        linalg.QuadratureSpec(breakpoints=(linalg.TWO_PI,), tolerance=0.0)


def test_weyl_perturbation_check_random_pairs():
    rng = np.random.default_rng(14)
    for _ in range(25):
        p = helpers.random_hermitian(rng, 16)
        q = helpers.random_hermitian(rng, 16, scale=0.3)
        check = linalg.weyl_perturbation_check(p, q)
        assert check.holds
        assert check.max_shift <= check.bound + 1e-10
        assert abs(check.bound - np.linalg.norm(q, 2)) < 1e-10
