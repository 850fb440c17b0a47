"""Dense Hermitian numerics with pinned tolerances.

Everything here is a pure function of its inputs; nothing mutates its
arguments. numpy's LAPACK bindings do the heavy lifting (eigh/svd); the
log-determinant uses an explicit pivoted LU so the singularity cutoff is
under our control rather than the library's.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from . import krylov

TWO_PI = 2.0 * math.pi

# above this dimension evolve_action switches from eigendecomposition to Krylov
DENSE_EVOLVE_LIMIT = 4096

# pivot magnitudes below this count as an exact zero eigenvalue, not underflow
DET_PIVOT_CUTOFF = 1e-300


def _as_square(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def _check_hermitian(a, tol=1e-10):
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")


@dataclass(frozen=True)
class EigenSystem:
    """A = vectors @ diag(values) @ vectors^H, values ascending."""
    values: np.ndarray
    vectors: np.ndarray
    residual: float       # max_j ||A u_j - w_j u_j||_2
    orthogonality: float  # max |U^H U - I|


def hermitian_eigensystem(a):
    a = _as_square(a)
    _check_hermitian(a)
    values, vectors = np.linalg.eigh(a)
    resid = float(np.max(np.linalg.norm(a @ vectors - vectors * values, axis=0))) if a.size else 0.0
    gram = vectors.conj().T @ vectors
    ortho = float(np.max(np.abs(gram - np.eye(gram.shape[0])))) if a.size else 0.0
    return EigenSystem(values=values, vectors=vectors, residual=resid, orthogonality=ortho)


def singular_values(c):
    """Singular values of a general matrix, nonincreasing."""
    return np.linalg.svd(np.asarray(c), compute_uv=False)


def operator_norm(a):
    """Spectral norm; Hermitian inputs take the cheaper eigvalsh route."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("operator_norm expects a matrix")
    if a.shape[0] == a.shape[1] and a.size:
        scale = max(1.0, float(np.max(np.abs(a))))
        if float(np.max(np.abs(a - a.conj().T))) <= 1e-12 * scale:
            return float(np.max(np.abs(np.linalg.eigvalsh(a))))
    return float(np.linalg.svd(a, compute_uv=False)[0]) if a.size else 0.0


def evolve_action(h, t, v, eigensystem=None, dense_limit=DENSE_EVOLVE_LIMIT):
    """Return e^{+itH} v.

    h may be a Hermitian matrix or a matvec callable. Matrices up to
    dense_limit go through a (possibly precomputed) eigendecomposition;
    larger matrices and callables go through the Lanczos path.
    """
    v = np.asarray(v, dtype=np.complex128)
    nrm_in = np.linalg.norm(v)
    if callable(h):
        out = krylov.expv_hermitian(h, t, v)
    else:
        h = _as_square(h)
        if eigensystem is None and h.shape[0] <= dense_limit:
            eigensystem = hermitian_eigensystem(h)
        if eigensystem is not None:
            u = eigensystem.vectors
            out = u @ (np.exp(1j * t * eigensystem.values) * (u.conj().T @ v))
        else:
            out = krylov.expv_hermitian(lambda x: h @ x, t, v)
    if nrm_in > 0:
        drift = abs(np.linalg.norm(out) - nrm_in) / nrm_in
        if drift > 1e-8:
            raise NumericalError(f"evolution norm drift {drift:.3e}")
    return out


def log_abs_determinant(a, pivot_cutoff=DET_PIVOT_CUTOFF):
    """(log|det A|, sign) via partial-pivoted LU.

    sign is -1/0/+1; a pivot below pivot_cutoff reports an exact singularity
    (log|det| = -inf, sign 0). Hermitian inputs are required whenever the
    determinant's phase is not +-1 up to roundoff.
    """
    a = _as_square(a)
    m = a.shape[0]
    if m == 0:
        return 0.0, 1
    work = np.array(a, dtype=np.complex128 if np.iscomplexobj(a) else np.float64)
    perm_sign = 1
    log_sum = 0.0
    phase = 1.0 + 0.0j
    for k in range(m):
        p = k + int(np.argmax(np.abs(work[k:, k])))
        piv = work[p, k]
        if abs(piv) < pivot_cutoff:
            return -math.inf, 0
        if p != k:
            work[[k, p]] = work[[p, k]]
            perm_sign = -perm_sign
            piv = work[k, k]
        log_sum += math.log(abs(piv))
        phase *= piv / abs(piv)
        if k + 1 < m:
            work[k + 1:, k] /= piv
            work[k + 1:, k + 1:] -= np.outer(work[k + 1:, k], work[k, k + 1:])
    total = perm_sign * phase
    if abs(total.imag) > 1e-9 or abs(abs(total.real) - 1.0) > 1e-9:
        raise NumericalError(f"determinant phase {total:.6f} is not +-1")
    return log_sum, (1 if total.real > 0 else -1)


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout for integrals over (0, 2pi].

    breakpoints are panel right-endpoints, strictly increasing, ending at 2pi
    (the left endpoint 0 is implicit). nodes counts Gauss-Legendre points per
    panel for callable integrands; tolerance is the target absolute accuracy
    certified by node doubling.
    """
    breakpoints: tuple
    nodes: int = 64
    tolerance: float = 1e-12

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bp)
        if not bp:
            raise ValueError("QuadratureSpec needs at least one breakpoint")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])) or bp[0] <= 0:
            raise ValueError("breakpoints must be strictly increasing within (0, 2pi]")
        if abs(bp[-1] - TWO_PI) > 1e-12:
            raise ValueError("last breakpoint must be 2pi")
        if self.nodes < 1:
            raise ValueError("nodes must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def _piecewise_fourier(breakpoints, values, l):
    # f = values[r] on (breakpoints[r], breakpoints[r+1]]; breakpoints[0] = 0
    total = 0.0 + 0.0j
    if l == 0:
        for r, v in enumerate(values):
            total += v * (breakpoints[r + 1] - breakpoints[r])
    else:
        il = 1j * l
        for r, v in enumerate(values):
            total += v * (np.exp(-il * breakpoints[r]) - np.exp(-il * breakpoints[r + 1])) / il
    return total / TWO_PI


def _gauss_fourier(f, l, spec, nodes):
    xi, wt = np.polynomial.legendre.leggauss(nodes)
    edges = (0.0,) + spec.breakpoints
    total = 0.0 + 0.0j
    for a, b in zip(edges, edges[1:]):
        x = 0.5 * (b - a) * xi + 0.5 * (a + b)
        w = 0.5 * (b - a) * wt
        fx = np.asarray([f(v) for v in x], dtype=np.complex128)
        total += np.sum(w * fx * np.exp(-1j * l * x))
    return total / TWO_PI


def fourier_coefficient(f, l, quadrature=None):
    """(1/2pi) Integral over (0, 2pi] of f(x) e^{-ilx} dx.

    f is either a (breakpoints, values) pair describing a piecewise-constant
    function (integrated analytically per piece) or a callable (composite
    Gauss-Legendre over the quadrature panels, certified by node doubling).
    For piecewise input with an explicit quadrature, every interior jump must
    appear among the panel breakpoints.
    """
    l = int(l)
    if callable(f):
        if quadrature is None:
            raise ValueError("callable integrands require a QuadratureSpec")
        coarse = _gauss_fourier(f, l, quadrature, quadrature.nodes)
        fine = _gauss_fourier(f, l, quadrature, 2 * quadrature.nodes)
        if abs(fine - coarse) > quadrature.tolerance:
            raise NumericalError(
                f"quadrature not converged at l={l}: refinement moved "
                f"{abs(fine - coarse):.3e} > {quadrature.tolerance:.1e}")
        return fine
    breakpoints, values = f
    breakpoints = tuple(float(b) for b in breakpoints)
    values = tuple(float(v) for v in values)
    if len(breakpoints) != len(values) + 1:
        raise ValueError("piecewise input needs len(breakpoints) == len(values)+1")
    if quadrature is not None:
        for jump in breakpoints[1:-1]:
            if min(abs(jump - b) for b in quadrature.breakpoints) > 1e-12:
                raise ValueError(f"jump point {jump!r} missing from quadrature breakpoints")
    return _piecewise_fourier(breakpoints, values, l)


@dataclass(frozen=True)
class WeylCheck:
    max_shift: float
    bound: float
    holds: bool


def weyl_perturbation_check(p, q):
    """Eigenvalue stability of Hermitian P under additive Hermitian Q:
    max_j |lambda_j(P+Q) - lambda_j(P)| <= ||Q||."""
    p = _as_square(p)
    q = _as_square(q)
    _check_hermitian(p)
    _check_hermitian(q)
    shift = float(np.max(np.abs(np.linalg.eigvalsh(p + q) - np.linalg.eigvalsh(p))))
    bound = operator_norm(q)
    return WeylCheck(max_shift=shift, bound=bound, holds=shift <= bound + 1e-10)
