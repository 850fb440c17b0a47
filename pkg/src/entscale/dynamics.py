"""Quench dynamics of chain states and the entropy observables on top of them.

The quench convention throughout is |psi(t)> = e^{+itH} |0> with |0> the
all-up product state. Entropies are in bits.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from . import chain, linalg

EFF_RANK_CUTOFF = 1e-12


@dataclass(frozen=True)
class CutPartition:
    """Contiguous bipartition: A = sites 0..m-1, B = sites m..n-1."""
    n: int
    m: int

    def __post_init__(self):
        if not (1 <= self.m < self.n):
            raise ConfigError(f"cut m={self.m} out of range [1, {self.n - 1}]")

    @property
    def a_sites(self):
        return tuple(range(self.m))

    @property
    def b_sites(self):
        return tuple(range(self.m, self.n))


@dataclass(frozen=True)
class StateVector:
    """2^n amplitudes; site 0 = most significant bit; unit norm enforced."""
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes, got {amps.shape}")
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > 1e-10:
            raise NumericalError(f"state norm {nrm} deviates from 1 beyond 1e-10")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Squared Schmidt coefficients for a cut, nonincreasing, summing to 1."""
    m: int
    coefficients: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.coefficients, dtype=np.float64)
        if s.size and float(s.min()) < -1e-12:
            raise NumericalError(f"Schmidt weight {float(s.min()):.3e} below -1e-12")
        s = np.clip(s, 0.0, None)
        s = np.sort(s)[::-1].copy()
        total = float(s.sum())
        if abs(total - 1.0) > 1e-10:
            raise NumericalError(f"Schmidt weights sum to {total}, not 1 +- 1e-10")
        s.setflags(write=False)
        object.__setattr__(self, "coefficients", s)


@dataclass(frozen=True)
class EntropyCurve:
    """Rows (t, m, S, sMax, effRank) in lexical (t, m) order."""
    rows: tuple


def all_up_state(n):
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n=n, amplitudes=amps)


def evolve(h, t, state=None):
    """e^{+itH} applied to `state` (default |0>); dense below 2^12, Krylov above."""
    if not math.isfinite(t):
        raise ConfigError(f"time {t!r} is not finite")
    if state is None:
        state = all_up_state(h.n)
    v = state.amplitudes
    if h.dim <= linalg.DENSE_EVOLVE_LIMIT:
        out = linalg.evolve_action(h.dense(), t, v, eigensystem=h.eigensystem())
    else:
        out = linalg.evolve_action(h.matvec, t, v)
    nrm = float(np.linalg.norm(out))
    if abs(nrm - 1.0) > 1e-10:
        raise NumericalError(f"evolved norm {nrm} deviates from 1 beyond 1e-10")
    return StateVector(n=h.n, amplitudes=out / nrm)


def schmidt_spectrum(state, cut):
    """Squared singular values of the amplitude matrix for the cut."""
    m = cut.m if isinstance(cut, CutPartition) else int(cut)
    n = state.n
    if not (1 <= m < n):
        raise ConfigError(f"cut m={m} out of range [1, {n - 1}]")
    c = state.amplitudes.reshape(1 << m, 1 << (n - m))
    s = linalg.singular_values(c) ** 2
    return SchmidtSpectrum(m=m, coefficients=s)


def block_entropy(spectrum, alpha=1):
    """Entropy of a Schmidt spectrum in bits; alpha=1 is von Neumann."""
    if alpha <= 0:
        raise ValueError("entropy order must be positive")
    s = spectrum.coefficients if isinstance(spectrum, SchmidtSpectrum) else np.asarray(spectrum)
    s = s[s > 0]
    if alpha == 1:
        return float(-np.sum(s * np.log2(s)))
    return float(np.log2(np.sum(s ** alpha)) / (1.0 - alpha))


def entropy_profile(h, t_grid, m_list):
    """One evolution per t, one Schmidt extraction per (t, m)."""
    t_grid = sorted(float(t) for t in t_grid)
    m_list = sorted(int(m) for m in m_list)
    if not t_grid or not m_list:
        raise ConfigError("t grid and m list must be nonempty")
    rows = []
    for t in t_grid:
        state = evolve(h, t)
        for m in m_list:
            spec = schmidt_spectrum(state, m)
            s = spec.coefficients
            rows.append((t, m, block_entropy(spec), float(s[0]),
                         int(np.count_nonzero(s > EFF_RANK_CUTOFF))))
    return EntropyCurve(rows=tuple(rows))


def interaction_split(h, cut):
    """(H_A, H_B, H_I) with H_A = terms left of the cut, H_I = the cut term."""
    m = cut.m if isinstance(cut, CutPartition) else int(cut)
    if not (1 <= m < h.n):
        raise ConfigError(f"cut m={m} out of range [1, {h.n - 1}]")
    zero = np.zeros((4, 4))
    h_a = h.with_terms([t if j <= m - 2 else zero for j, t in enumerate(h.terms)])
    h_b = h.with_terms([t if j >= m else zero for j, t in enumerate(h.terms)])
    h_i = h.with_terms([t if j == m - 1 else zero for j, t in enumerate(h.terms)])
    return h_a, h_b, h_i


def _zeeman_diagonal(n):
    # diagonal of -sum_j sigma^z_j in the computational basis
    idx = np.arange(1 << n)
    pop = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        pop += (idx >> b) & 1
    return (2 * pop - n).astype(np.float64)


def _ground_fidelity(values, vectors, psi, gap_tol=1e-10):
    """Fidelity of psi with the ground space; degenerate spaces use the projector."""
    ground = values[0]
    sel = values - ground < gap_tol
    degenerate = int(np.count_nonzero(sel)) > 1
    overlaps = vectors[:, sel].conj().T @ psi
    return float(np.sum(np.abs(overlaps) ** 2)), degenerate


@dataclass(frozen=True)
class KReport:
    t: float
    spectrum_max_diff: float
    ground_fidelity: float
    first_order_residual: float
    degenerate: bool


def k_hamiltonian_check(h, t):
    """Diagnostics for K = e^{itH} Z e^{-itH}, Z = -sum_j sigma^z_j.

    K is unitarily equivalent to Z, so its spectrum must match Z's and its
    ground state must be exactly the evolved all-up state. The residual
    ||K - Z - it[H,Z]|| / t^2 checks the first-order expansion in t.
    """
    if h.n > chain.DENSE_SITE_LIMIT:
        raise ConfigError(f"k_hamiltonian_check needs n <= {chain.DENSE_SITE_LIMIT}")
    z_diag = _zeeman_diagonal(h.n)
    eig = h.eigensystem()
    u_t = (eig.vectors * np.exp(1j * t * eig.values)) @ eig.vectors.conj().T
    k_mat = (u_t * z_diag) @ u_t.conj().T
    k_values, k_vectors = np.linalg.eigh(k_mat)
    spectrum_diff = float(np.max(np.abs(k_values - np.sort(z_diag))))
    psi = evolve(h, t).amplitudes
    fidelity, degenerate = _ground_fidelity(k_values, k_vectors, psi)
    if t != 0.0:
        hd = h.dense()
        comm = hd * z_diag[None, :] - z_diag[:, None] * hd
        residual = linalg.operator_norm(k_mat - np.diag(z_diag) - 1j * t * comm) / t ** 2
    else:
        residual = 0.0
    return KReport(t=float(t), spectrum_max_diff=spectrum_diff, ground_fidelity=fidelity,
                   first_order_residual=residual, degenerate=degenerate)


def cluster_state(n):
    """Graph state on the open chain: |+>^n then a controlled-Z on each edge.

    Built directly from sign flips on computational bitstrings, independent of
    any evolution machinery, so it can serve as an oracle for them.
    """
    dim = 1 << n
    amps = np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)
    idx = np.arange(dim)
    for j in range(n - 1):
        both = ((idx >> (n - 1 - j)) & 1) & ((idx >> (n - 2 - j)) & 1)
        amps[both == 1] *= -1.0
    return StateVector(n=n, amplitudes=amps)


def state_fidelity(a, b):
    """|<a|b>|^2."""
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
