"""Hamiltonian assembly tests against raw Kronecker oracles."""
import numpy as np
import pytest

from entscale import chain
from entscale.errors import ConfigError

import helpers


def test_xx_n2_single_term():
    h = chain.build_hamiltonian("xx", n=2)
    assert len(h.terms) == 1
    assert h.hNorm == pytest.approx(1.0, abs=1e-14)
    assert np.max(np.abs(h.dense() - np.kron(helpers.SX, helpers.SX))) < 1e-14


def test_zfield_matches_kron_oracle():
    h = chain.build_hamiltonian("zfield", n=4)
    oracle = helpers.hamiltonian_oracle(helpers.ZFIELD(4), 4)
    assert np.max(np.abs(h.dense() - oracle)) < 1e-14
    assert h.hNorm == pytest.approx(2.0, abs=1e-14)


def test_xy_cross_matches_kron_oracle():
    h = chain.build_hamiltonian("xy_cross", n=3)
    assert len(h.terms) == 2
    oracle = helpers.hamiltonian_oracle(helpers.XY_CROSS(3), 3)
    assert np.max(np.abs(h.dense() - oracle)) < 1e-14


def test_explicit_entries_with_field_terms():
    entries = [(0.7, "X", "Y", 0), (-0.3, "Z", "Z", 1), (1.2, "Z", 2),
               (0.5, "X", 0)]
    h = chain.build_hamiltonian(entries, n=4)
    oracle = helpers.hamiltonian_oracle(entries, 4)
    assert np.max(np.abs(h.dense() - oracle)) < 1e-14


@pytest.mark.parametrize("preset,n", [("xy_cross", 2), ("xy_cross", 5),
                                      ("xx", 7), ("zfield", 6)])
def test_matvec_matches_dense(preset, n):
    h = chain.build_hamiltonian(preset, n=n)
    rng = np.random.default_rng(200 + n)
    for _ in range(5):
        v = helpers.random_unit_vector(rng, h.dim)
        assert np.max(np.abs(h.matvec(v) - h.dense() @ v)) < 1e-12


def test_rejects_non_hermitian_term():
    bad = np.zeros((4, 4), dtype=complex)
    bad[0, 1] = 1.0
    with pytest.raises(ConfigError):
        chain.LocalHamiltonian(n=2, terms=(bad,))


def test_rejects_out_of_range_sizes():
    with pytest.raises(ConfigError):
        chain.build_hamiltonian("xx", n=1)
    with pytest.raises(ConfigError):
        chain.build_hamiltonian("xx", n=15)


def test_rejects_unknown_preset_and_bad_pauli():
    with pytest.raises(ConfigError):
        chain.build_hamiltonian("nosuch", n=4)
    with pytest.raises(ConfigError):
        chain.build_hamiltonian([(1.0, "Q", "X", 0)], n=4)


def test_rejects_out_of_range_bond():
    with pytest.raises(ConfigError):
        chain.build_hamiltonian([(1.0, "X", "X", 3)], n=4)
    with pytest.raises(ConfigError):
        chain.build_hamiltonian([(1.0, "X", "X", -1)], n=4)


def test_hnorm_is_max_term_norm():
    entries = [(2.5, "X", "Y", 0), (0.1, "Z", "Z", 1)]
    h = chain.build_hamiltonian(entries, n=3)
    assert h.hNorm == pytest.approx(2.5, abs=1e-12)


def test_psd_shift_moves_spectrum_only():
    h = chain.build_hamiltonian("xy_cross", n=5)
    shifted = h.psd_shifted()
    for term in shifted.terms:
        assert np.linalg.eigvalsh(term)[0] >= -1e-12
    w_orig = np.linalg.eigvalsh(h.dense())
    w_shift = np.linalg.eigvalsh(shifted.dense())
    gaps_orig = np.diff(w_orig)
    gaps_shift = np.diff(w_shift)
    assert np.max(np.abs(gaps_orig - gaps_shift)) < 1e-10


def test_shifted_adds_identity_multiples():
    h = chain.build_hamiltonian("xx", n=3)
    alphas = [0.5, -1.5]
    shifted = h.shifted(alphas)
    expected = h.dense() + sum(alphas) * np.eye(h.dim)
    assert np.max(np.abs(shifted.dense() - expected)) < 1e-12


def test_dense_is_cached_per_instance():
    h = chain.build_hamiltonian("xx", n=4)
    assert h.dense() is h.dense()
    es = h.eigensystem()
    assert es is h.eigensystem()
