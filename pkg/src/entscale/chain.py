"""Open spin-1/2 chains assembled from two-site blocks.

Term j couples sites (j, j+1), j = 0..n-2. Basis convention: site 0 is the
most significant bit of the state index and bit value 0 means spin up
(sigma^z eigenvalue +1), so the all-up product state is index 0.
"""
import numpy as np

from .errors import ConfigError
from . import kernels, linalg

N_MIN = 2
N_MAX = 14
DENSE_SITE_LIMIT = 12  # dense 2^n x 2^n assembly allowed up to here

PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
PAULI_ORDER = "IXYZ"

PRESETS = ("xy_cross", "xx", "zfield")


def pauli(name):
    try:
        return PAULI[name]
    except KeyError:
        raise ConfigError(f"unknown Pauli label {name!r}; expected one of I,X,Y,Z") from None


def site_operator(op2, site, n):
    """Embed a single-site operator at `site` into the full 2^n space."""
    out = np.array([[1.0 + 0j]])
    for s in range(n):
        out = np.kron(out, op2 if s == site else PAULI["I"])
    return out


def add_bond_dense(h, block, j, n):
    """h += block acting on sites (j, j+1); h is the dense 2^n matrix."""
    left = 1 << j
    right = 1 << (n - j - 2)
    view = h.reshape(left, 4, right, left, 4, right)
    a = np.repeat(np.arange(left), right)
    r = np.tile(np.arange(right), left)
    view[a, :, r, a, :, r] += block


class LocalHamiltonian:
    """Chain of two-site Hermitian 4x4 blocks; hNorm = max_j ||H_j||."""

    def __init__(self, n, terms):
        n = int(n)
        if not (N_MIN <= n <= N_MAX):
            raise ConfigError(f"n={n} out of range [{N_MIN}, {N_MAX}]")
        terms = [np.array(t, dtype=np.complex128) for t in terms]
        if len(terms) != n - 1:
            raise ConfigError(f"need {n - 1} terms for n={n}, got {len(terms)}")
        for j, t in enumerate(terms):
            if t.shape != (4, 4):
                raise ConfigError(f"term {j} is not 4x4")
            if float(np.max(np.abs(t - t.conj().T))) > 1e-12:
                raise ConfigError(f"term {j} is not Hermitian within 1e-12")
            t.setflags(write=False)
        self.n = n
        self.terms = tuple(terms)
        self.hNorm = max(float(np.linalg.norm(np.linalg.eigvalsh(t), np.inf))
                         for t in terms)
        self._dense = None
        self._eigensystem = None

    @property
    def dim(self):
        return 1 << self.n

    def matvec(self, v, out=None):
        """H @ v through the bond kernel; no dense matrix is formed."""
        v = np.ascontiguousarray(v, dtype=np.complex128)
        if out is None:
            out = np.zeros(self.dim, dtype=np.complex128)
        else:
            out[:] = 0
        for j, t in enumerate(self.terms):
            kernels.apply_bond_accumulate(t, v, out, 1 << j, 1 << (self.n - j - 2))
        return out

    def dense(self):
        if self.n > DENSE_SITE_LIMIT:
            raise ConfigError(f"dense assembly limited to n <= {DENSE_SITE_LIMIT}")
        if self._dense is None:
            h = np.zeros((self.dim, self.dim), dtype=np.complex128)
            for j, t in enumerate(self.terms):
                add_bond_dense(h, t, j, self.n)
            h.setflags(write=False)
            self._dense = h
        return self._dense

    def eigensystem(self):
        """Cached eigendecomposition of the dense matrix (evolution reuses it)."""
        if self._eigensystem is None:
            self._eigensystem = linalg.hermitian_eigensystem(self.dense())
        return self._eigensystem

    def with_terms(self, terms):
        return LocalHamiltonian(self.n, terms)

    def shifted(self, alphas):
        """Add alpha_j * identity to each term (Schmidt spectra are unaffected)."""
        if len(alphas) != len(self.terms):
            raise ConfigError("need one shift per term")
        eye4 = np.eye(4)
        return self.with_terms([t + a * eye4 for t, a in zip(self.terms, alphas)])

    def psd_shifted(self):
        """Shift every term by -lambda_min, making each block positive semidefinite."""
        return self.shifted([-float(np.linalg.eigvalsh(t)[0]) for t in self.terms])


def _preset_entries(name, n):
    if name == "xy_cross":
        return [(1.0, "X", "Y", j) for j in range(n - 1)]
    if name == "xx":
        return [(1.0, "X", "X", j) for j in range(n - 1)]
    if name == "zfield":
        # field -sigma^z on every site, folded into bond terms
        return [(-1.0, "Z", s) for s in range(n)]
    raise ConfigError(f"unknown preset {name!r}; expected one of {PRESETS}")


def build_hamiltonian(model, n=None):
    """Build from a preset name or an explicit entry list.

    Entries: (coeff, P, Q, site) places coeff * P(x)Q on sites (site, site+1);
    (coeff, P, site) is a single-site field, folded wholly into the term on the
    site's left (site 0, having none, folds into term 0).
    """
    if isinstance(model, str):
        if n is None:
            raise ConfigError("presets require n")
        entries = _preset_entries(model, int(n))
    else:
        entries = list(model)
        if n is None:
            raise ConfigError("explicit term lists require n")
    n = int(n)
    if not (N_MIN <= n <= N_MAX):
        raise ConfigError(f"n={n} out of range [{N_MIN}, {N_MAX}]")
    blocks = [np.zeros((4, 4), dtype=np.complex128) for _ in range(n - 1)]
    for entry in entries:
        if len(entry) == 4:
            coeff, p, q, site = entry
            site = int(site)
            if not (0 <= site <= n - 2):
                raise ConfigError(f"term site {site} out of range [0, {n - 2}]")
            blocks[site] += float(coeff) * np.kron(pauli(p), pauli(q))
        elif len(entry) == 3:
            coeff, p, site = entry
            site = int(site)
            if not (0 <= site <= n - 1):
                raise ConfigError(f"field site {site} out of range [0, {n - 1}]")
            if site == 0:
                blocks[0] += float(coeff) * np.kron(pauli(p), PAULI["I"])
            else:
                blocks[site - 1] += float(coeff) * np.kron(PAULI["I"], pauli(p))
        else:
            raise ConfigError(f"malformed entry {entry!r}")
    return LocalHamiltonian(n, blocks)
