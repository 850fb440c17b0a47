"""Lanczos evaluation of e^{+itA} v for Hermitian A given only as a matvec.

Full two-pass reorthogonalization keeps the basis clean at the cost of a few
extra gemvs; step size adapts on the standard residual estimate (last basis
component times the trailing off-diagonal). Unitarity is enforced: each step
renormalizes and a drift beyond 1e-8 raises instead of silently degrading.
"""
import numpy as np

from .errors import NumericalError

BASIS_SIZE = 30
STEP_TOLERANCE = 1e-12


def _lanczos(matvec, w0, m):
    """Basis rows V, diagonal alpha, off-diagonal beta, residual norm beta_next."""
    dim = w0.shape[0]
    m = min(m, dim)
    basis = np.empty((m, dim), dtype=np.complex128)
    basis[0] = w0
    alpha = np.empty(m)
    beta = np.empty(max(m - 1, 0))
    for j in range(m):
        u = matvec(basis[j])
        a = np.vdot(basis[j], u).real
        alpha[j] = a
        u = u - a * basis[j]
        if j > 0:
            u -= beta[j - 1] * basis[j - 1]
        for _ in range(2):  # full reorthogonalization, two passes
            u -= basis[: j + 1].T @ (basis[: j + 1].conj() @ u)
        b = float(np.linalg.norm(u))
        if b < 1e-13:
            return basis[: j + 1], alpha[: j + 1], beta[:j], 0.0
        if j + 1 < m:
            beta[j] = b
            basis[j + 1] = u / b
        else:
            return basis, alpha, beta, b
    raise AssertionError("unreachable")


def _small_exp(alpha, beta, dt):
    """e^{i dt T} e_1 for the tridiagonal T, plus its last component."""
    k = alpha.shape[0]
    t_small = np.diag(alpha).astype(np.complex128)
    if k > 1:
        idx = np.arange(k - 1)
        t_small[idx, idx + 1] = beta
        t_small[idx + 1, idx] = beta
    w, q = np.linalg.eigh(t_small)
    coef = q @ (np.exp(1j * dt * w) * q[0].conj())
    return coef


def expv_hermitian(matvec, t, v, basis_size=BASIS_SIZE, step_tolerance=STEP_TOLERANCE,
                   max_steps=100000):
    """Return e^{+itA} v where A is Hermitian and reachable only through matvec."""
    v = np.asarray(v, dtype=np.complex128)
    nrm0 = float(np.linalg.norm(v))
    if t == 0 or nrm0 == 0:
        return v.copy()
    w = v / nrm0
    remaining = float(t)
    dt = remaining
    steps = 0
    while remaining != 0.0:
        if abs(dt) > abs(remaining):
            dt = remaining
        basis, alpha, beta, beta_next = _lanczos(matvec, w, basis_size)
        coef = _small_exp(alpha, beta, dt)
        err = beta_next * abs(coef[-1]) * abs(dt)
        if err > step_tolerance:
            dt *= 0.5
            if abs(dt) < 1e-12 * abs(t):
                raise NumericalError("Krylov step size underflow")
            continue
        w = coef @ basis
        nw = float(np.linalg.norm(w))
        if abs(nw - 1.0) > 1e-8:
            raise NumericalError(f"Krylov norm drift {abs(nw - 1.0):.3e}")
        w /= nw
        remaining -= dt
        steps += 1
        if steps > max_steps:
            raise NumericalError("Krylov step budget exhausted")
        if err < 0.01 * step_tolerance:
            dt *= 2.0
    return nrm0 * w
