"""The patch unitary V(t) and its region-restricted hierarchy.

V(t) = e^{-it(H - H_I)} e^{+itH} repairs the evolution after the cut term is
removed: e^{itH} = e^{it(H_A+H_B)} V(t). Restricting H to the sites within
distance l of the cut gives V_Lambda_l, and the increments
W_l = V_Lambda_l V_Lambda_{l-1}^dagger telescope back to V exactly once the
region covers the chain. Everything here is dense and capped at n <= 12.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from . import chain, dynamics, linalg


def _cut_m(cut):
    return cut.m if isinstance(cut, dynamics.CutPartition) else int(cut)


def _expm(dense_h, t, eigensystem=None):
    eig = eigensystem if eigensystem is not None else linalg.hermitian_eigensystem(dense_h)
    return (eig.vectors * np.exp(1j * t * eig.values)) @ eig.vectors.conj().T


def region_sites(n, m, l):
    """Sites within distance l of the cut site m, clipped to the chain."""
    return max(0, m - l), min(n - 1, m + l)


def region_term_indices(n, m, l):
    """Bond indices whose two sites both lie inside the region."""
    lo, hi = region_sites(n, m, l)
    return range(max(lo, m - l), min(hi - 1, m + l - 1) + 1)


def _region_hamiltonian(h, m, l):
    keep = set(region_term_indices(h.n, m, l))
    zero = np.zeros((4, 4))
    return h.with_terms([t if j in keep else zero for j, t in enumerate(h.terms)])


def _patch_core(h_full, h_i_dense, t):
    rest = h_full.dense() - h_i_dense
    return _expm(rest, -t) @ _expm(h_full.dense(), t, eigensystem=h_full.eigensystem())


def patch_unitary(h, cut, t):
    """V(t) = e^{-it(H-H_I)} e^{+itH} as a dense unitary."""
    m = _cut_m(cut)
    if h.n > chain.DENSE_SITE_LIMIT:
        raise ConfigError(f"patch_unitary needs n <= {chain.DENSE_SITE_LIMIT}")
    _, _, h_i = dynamics.interaction_split(h, m)
    return _patch_core(h, h_i.dense(), t)


def generator(h, cut, t, nodes=200):
    """L(t) = iH_I + integral_0^t e^{-iuH} [H, H_I] e^{+iuH} du.

    The integrand is evaluated in the eigenbasis of H on a Gauss-Legendre
    grid; V(t) solves dV/dt = V(t) L(t).
    """
    m = _cut_m(cut)
    if h.n > chain.DENSE_SITE_LIMIT:
        raise ConfigError(f"generator needs n <= {chain.DENSE_SITE_LIMIT}")
    _, _, h_i = dynamics.interaction_split(h, m)
    hd = h.dense()
    hid = h_i.dense()
    comm = hd @ hid - hid @ hd
    eig = h.eigensystem()
    basis = eig.vectors
    comm_eig = basis.conj().T @ comm @ basis
    delta = eig.values[:, None] - eig.values[None, :]
    xi, wt = np.polynomial.legendre.leggauss(nodes)
    u_nodes = 0.5 * t * (xi + 1.0)
    u_weights = 0.5 * t * wt
    phase_sum = np.zeros_like(delta, dtype=np.complex128)
    for u, w in zip(u_nodes, u_weights):
        phase_sum += w * np.exp(-1j * u * delta)
    integral = basis @ (phase_sum * comm_eig) @ basis.conj().T
    return 1j * hid + integral


def restricted_patch(h, cut, t, l):
    """V_Lambda_l: the patch unitary computed from the terms inside the region.

    Acts nontrivially only on the region sites (tested by factoring the
    matrix); at the maximal l it coincides with patch_unitary.
    """
    m = _cut_m(cut)
    if h.n > chain.DENSE_SITE_LIMIT:
        raise ConfigError(f"restricted_patch needs n <= {chain.DENSE_SITE_LIMIT}")
    if not (1 <= l <= h.n - m):
        raise ConfigError(f"l={l} out of range [1, {h.n - m}]")
    _, _, h_i = dynamics.interaction_split(h, m)
    return _patch_core(_region_hamiltonian(h, m, l), h_i.dense(), t)


def support_factor(v, lo, hi, n):
    """Split v = I (x) v_sub (x) I on sites [lo, hi]; return (v_sub, deviation).

    deviation is ||v - embedding of v_sub||, which is ~0 exactly when v is
    supported on the region.
    """
    d_left = 1 << lo
    d_mid = 1 << (hi - lo + 1)
    d_right = 1 << (n - 1 - hi)
    blocks = v.reshape(d_left, d_mid, d_right, d_left, d_mid, d_right)
    v_sub = np.ascontiguousarray(blocks[0, :, 0, 0, :, 0])
    rebuilt = np.kron(np.eye(d_left), np.kron(v_sub, np.eye(d_right)))
    return v_sub, linalg.operator_norm(v - rebuilt)


@dataclass(frozen=True)
class HierarchyReport:
    t: float
    rows: tuple                # (l, wDeviation, lrBound)
    reassembly_error: float    # ||V - W_lMax ... W_1||
    m_norm: float              # ||[H_Lambda_lMax, H_I]||


def default_l_max(n, m):
    """Smallest l whose region covers the whole chain."""
    return max(m, n - 1 - m)


def w_hierarchy(h, cut, t, l_max=None):
    """Deviations ||W_l - I|| beside the bound delta_l |t|^{l+2} / (l+2)!.

    delta_l = ||M|| 2^l hNorm^l with M = [H_Lambda_lMax, H_I]. The returned
    reassembly error compares W_lMax ... W_1 against patch_unitary directly.
    """
    m = _cut_m(cut)
    if h.n > chain.DENSE_SITE_LIMIT:
        raise ConfigError(f"w_hierarchy needs n <= {chain.DENSE_SITE_LIMIT}")
    if l_max is None:
        l_max = default_l_max(h.n, m)
    if l_max < 1:
        raise ConfigError("l_max must be >= 1")
    _, _, h_i = dynamics.interaction_split(h, m)
    hid = h_i.dense()

    v_prev = np.eye(h.dim, dtype=np.complex128)
    eye = np.eye(h.dim)
    top_region = _region_hamiltonian(h, m, l_max)
    m_comm = top_region.dense() @ hid - hid @ top_region.dense()
    m_norm = linalg.operator_norm(m_comm)

    rows = []
    product = np.eye(h.dim, dtype=np.complex128)
    for l in range(1, l_max + 1):
        v_l = _patch_core(_region_hamiltonian(h, m, l), hid, t)
        w_l = v_l @ v_prev.conj().T
        deviation = linalg.operator_norm(w_l - eye)
        delta_l = m_norm * (2.0 ** l) * (h.hNorm ** l)
        bound = delta_l * abs(t) ** (l + 2) / math.factorial(l + 2)
        rows.append((l, deviation, bound))
        product = w_l @ product
        v_prev = v_l

    v_direct = patch_unitary(h, m, t)
    reassembly = linalg.operator_norm(v_direct - product)
    return HierarchyReport(t=float(t), rows=tuple(rows),
                           reassembly_error=reassembly, m_norm=m_norm)


def hierarchy_state(h, cut, t, l):
    """State reached when the patch is restricted to region l:
    e^{+it(H_A+H_B)} V_Lambda_l |0>."""
    m = _cut_m(cut)
    h_a, h_b, h_i = dynamics.interaction_split(h, m)
    rest = h.dense() - h_i.dense()
    v_l = _patch_core(_region_hamiltonian(h, m, l), h_i.dense(), t) if l >= 1 \
        else np.eye(h.dim, dtype=np.complex128)
    amps = _expm(rest, t) @ (v_l @ dynamics.all_up_state(h.n).amplitudes)
    nrm = float(np.linalg.norm(amps))
    return dynamics.StateVector(n=h.n, amplitudes=amps / nrm)
