"""Light-cone and quasi-locality probes built on Heisenberg evolution.

tau_t(O) = e^{-itH} O e^{+itH} throughout. Both probes are dense and capped
at n <= 12; the truncated evolutions run on the subchain and are embedded
back, which keeps the eigensolves small.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from . import chain, fits, hierarchy, linalg


def _heisenberg(h, t, op):
    eig = h.eigensystem()
    u = (eig.vectors * np.exp(1j * t * eig.values)) @ eig.vectors.conj().T
    return u.conj().T @ op @ u


def lightcone_probe(h, site_a, t_grid, observable=None):
    """Rows (t, d, commNorm) with commNorm = ||[tau_t(O_siteA), O'_siteB]||.

    site_b sweeps the sites at and to the right of site_a, d = site_b - site_a.
    O and O' default to sigma^z.
    """
    if h.n > chain.DENSE_SITE_LIMIT:
        raise ConfigError(f"lightcone_probe needs n <= {chain.DENSE_SITE_LIMIT}")
    if not (0 <= site_a < h.n):
        raise ConfigError(f"site {site_a} out of range [0, {h.n - 1}]")
    op2 = chain.PAULI["Z"] if observable is None else np.asarray(observable)
    op_a = chain.site_operator(op2, site_a, h.n)
    partners = [(d, chain.site_operator(op2, site_a + d, h.n))
                for d in range(h.n - site_a)]
    rows = []
    for t in sorted(float(t) for t in t_grid):
        moved = _heisenberg(h, t, op_a)
        for d, op_b in partners:
            comm = moved @ op_b - op_b @ moved
            rows.append((t, d, linalg.operator_norm(comm)))
    return tuple(rows)


@dataclass(frozen=True)
class QuasilocalityReport:
    rows: tuple          # (t, k, truncNorm)
    c: float
    kappa: float
    v: float
    r_squared: float
    per_t: tuple         # (t, v_t, r2_t); regression of ln truncNorm on k at fixed t
    kappa_identifiable: bool


def quasilocality_decay(h, j, t_grid, k_list):
    """Error of evolving sigma^z_j under the chain truncated to distance k.

    truncNorm(t, k) = ||tau_t^H(sigma^z_j) - tau_t^{H_k}(sigma^z_j)|| where
    H_k keeps the terms lying within distance k of site j. The pooled fit
    models ln truncNorm = ln c + kappa|t| - v k; kappa needs at least two
    distinct times, otherwise it is reported as 0 and flagged.
    """
    if h.n > chain.DENSE_SITE_LIMIT:
        raise ConfigError(f"quasilocality_decay needs n <= {chain.DENSE_SITE_LIMIT}")
    if not (0 < j < h.n - 1):
        raise ConfigError(f"site {j} must be interior")
    k_list = sorted(set(int(k) for k in k_list))
    if not k_list or k_list[0] < 1:
        raise ConfigError("k list must contain integers >= 1")
    t_grid = sorted(float(t) for t in t_grid)
    op_full = chain.site_operator(chain.PAULI["Z"], j, h.n)

    subchains = {}
    for k in k_list:
        lo, hi = hierarchy.region_sites(h.n, j, k)
        n_sub = hi - lo + 1
        if n_sub >= 2:
            terms = [h.terms[lo + b] for b in range(n_sub - 1)]
            subchains[k] = (lo, hi, chain.LocalHamiltonian(n_sub, terms))
        else:
            subchains[k] = (lo, hi, None)

    rows = []
    for t in t_grid:
        moved_full = _heisenberg(h, t, op_full)
        for k in k_list:
            lo, hi, h_sub = subchains[k]
            if h_sub is None:
                moved_sub = chain.PAULI["Z"]
            else:
                moved_sub = _heisenberg(h_sub, t, chain.site_operator(
                    chain.PAULI["Z"], j - lo, h_sub.n))
            embedded = np.kron(np.eye(1 << lo),
                               np.kron(moved_sub, np.eye(1 << (h.n - 1 - hi))))
            rows.append((t, k, linalg.operator_norm(moved_full - embedded)))

    per_t = []
    for t in t_grid:
        pts = [(k, tn) for (tt, k, tn) in rows if tt == t and tn > 1e-14]
        if len(pts) >= 2:
            slope, _, r2 = fits.line_fit([p[0] for p in pts], [np.log(p[1]) for p in pts])
            per_t.append((t, -slope, r2))

    usable = [(t, k, tn) for (t, k, tn) in rows if tn > 1e-14]
    distinct_t = sorted(set(t for t, _, _ in usable))
    identifiable = len(distinct_t) >= 2
    c = kappa = v = r2 = float("nan")
    if len(usable) >= 3:
        y = np.log([tn for _, _, tn in usable])
        if identifiable:
            design = np.column_stack([np.ones(len(usable)),
                                      [abs(t) for t, _, _ in usable],
                                      [-k for _, k, _ in usable]])
            coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
            lnc, kappa, v = coef
        else:
            design = np.column_stack([np.ones(len(usable)),
                                      [-k for _, k, _ in usable]])
            coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
            lnc, v = coef
            kappa = 0.0
        c = float(np.exp(lnc))
        pred = design @ coef
        r2 = fits.r_squared(y, pred)
    return QuasilocalityReport(rows=tuple(rows), c=c, kappa=float(kappa), v=float(v),
                               r_squared=float(r2), per_t=tuple(per_t),
                               kappa_identifiable=identifiable)
