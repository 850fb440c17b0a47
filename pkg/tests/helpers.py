"""Independent dense oracles for the tests.

Everything here is built straight from Kronecker products and numpy
eigendecompositions so package results are checked against a second,
structurally different computation path.
"""
import numpy as np

SI = np.eye(2, dtype=complex)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ONE_SITE = {"I": SI, "X": SX, "Y": SY, "Z": SZ}


def kron_all(ops):
    out = np.array([[1.0 + 0.0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def chain_operator(placements, n):
    """Dense operator with single-site matrices at given sites, identity elsewhere."""
    ops = [SI] * n
    for site, label in placements:
        ops[site] = ONE_SITE[label] if isinstance(label, str) else label
    return kron_all(ops)


def hamiltonian_oracle(entries, n):
    """Dense H from (coeff, P, Q, bond) or (coeff, P, site) entries."""
    dim = 1 << n
    h = np.zeros((dim, dim), dtype=complex)
    for entry in entries:
        if len(entry) == 4:
            coeff, p, q, j = entry
            h += coeff * chain_operator([(j, p), (j + 1, q)], n)
        else:
            coeff, p, s = entry
            h += coeff * chain_operator([(s, p)], n)
    return h


XY_CROSS = lambda n: [(1.0, "X", "Y", j) for j in range(n - 1)]
XX = lambda n: [(1.0, "X", "X", j) for j in range(n - 1)]
ZFIELD = lambda n: [(-1.0, "Z", s) for s in range(n)]


def unitary_of(h, t):
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * t * w)) @ v.conj().T


def evolve_oracle(h, t, psi0=None):
    if psi0 is None:
        psi0 = np.zeros(h.shape[0], dtype=complex)
        psi0[0] = 1.0
    return unitary_of(h, t) @ psi0


def reduced_entropy(psi, n, m, alpha=1):
    """Block entropy of the first m sites straight from the density matrix."""
    block = np.asarray(psi).reshape(1 << m, 1 << (n - m))
    lam = np.linalg.eigvalsh(block @ block.conj().T)
    lam = np.clip(lam, 0.0, None)
    lam = lam[lam > 1e-16]
    if alpha == 1:
        return float(-(lam * np.log2(lam)).sum())
    return float(np.log2((lam ** alpha).sum()) / (1.0 - alpha))


def schmidt_oracle(psi, n, m):
    """Descending squared Schmidt coefficients from the reduced density matrix."""
    block = np.asarray(psi).reshape(1 << m, 1 << (n - m))
    lam = np.linalg.eigvalsh(block @ block.conj().T)[::-1]
    return np.clip(lam, 0.0, None)


def random_hermitian(rng, dim, scale=1.0):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (a + a.conj().T) / 2.0


def random_unit_vector(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
