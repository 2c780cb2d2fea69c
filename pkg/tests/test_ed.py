import math
import warnings

import numpy as np
import pytest

from hpdicke.dicke import DickeParams
from hpdicke.ed import (EDBasis, build_hamiltonian, converge_cutoff,
                        ground_state, load_state, parity_diagonal,
                        photon_entropy_ed, photon_moments_ed, save_state)
from hpdicke.errors import BudgetExceeded, CutoffError, CutoffWarning
from hpdicke.gaussian import entropy_from_hp


def test_basis_layout():
    b = EDBasis(4, 6)
    assert b.dim == 7 * 5
    assert b.j == 2.0
    with pytest.raises(CutoffError):
        EDBasis(4, 0)


def test_decoupled_hamiltonian_is_diagonal():
    b = EDBasis(4, 6)
    H = build_hamiltonian(DickeParams(1.0, 1.0, 0.0), b)
    assert H.nnz == b.dim
    res = ground_state(H, b)
    assert res.ground_energy == pytest.approx(-b.j, abs=1e-13)
    assert photon_moments_ed(res, b).hp == pytest.approx(0.5, abs=1e-13)
    assert photon_entropy_ed(res, b) == pytest.approx(0.0, abs=1e-12)


def test_exact_symmetry_and_parity_commutation():
    b = EDBasis(4, 20)
    H = build_hamiltonian(DickeParams(1.0, 1.0, 0.5), b)
    assert np.abs((H - H.T).toarray()).max() == 0.0
    pi = parity_diagonal(b)
    comm = H.multiply(pi[None, :]) - H.multiply(pi[:, None])
    assert abs(comm).max() == 0.0
    assert int(np.diff(H.indptr).max()) <= 5


@pytest.mark.parametrize("n_spins,n_max,lam", [(1, 40, 0.2), (8, 60, 0.45)])
def test_against_dense_solver(n_spins, n_max, lam):
    basis = EDBasis(n_spins, n_max)
    H = build_hamiltonian(DickeParams(1.0, 1.0, lam), basis)
    res = ground_state(H, basis)
    w = np.linalg.eigvalsh(H.toarray())
    assert res.ground_energy == pytest.approx(w[0], abs=1e-10)
    assert res.gap01 == pytest.approx(w[1] - w[0], abs=1e-9)
    assert res.cutoff_converged


def test_iterative_path_matches_dense_and_is_deterministic():
    basis = EDBasis(30, 44)  # large enough to force the sparse solver
    H = build_hamiltonian(DickeParams(1.0, 1.0, 0.45), basis)
    res = ground_state(H, basis)
    w = np.linalg.eigvalsh(H.toarray())
    assert res.ground_energy == pytest.approx(w[0], abs=1e-9)
    res2 = ground_state(H, basis)
    assert np.array_equal(res.state, res2.state)


def test_ground_energy_variational_in_cutoff():
    p = DickeParams(1.0, 1.0, 0.45)
    energies = []
    for n_max in (10, 14, 20, 30):
        basis = EDBasis(8, n_max)
        energies.append(ground_state(build_hamiltonian(p, basis),
                                     basis).ground_energy)
    assert all(b <= a + 1e-14 for a, b in zip(energies, energies[1:]))


def test_photon_entropy_tracks_gaussian_identity():
    basis = EDBasis(8, 40)
    res = ground_state(build_hamiltonian(DickeParams(1.0, 1.0, 0.3), basis),
                       basis)
    mom = photon_moments_ed(res, basis)
    s_direct = photon_entropy_ed(res, basis)
    # finite N deviates from the Gaussian value at the percent level
    assert s_direct == pytest.approx(entropy_from_hp(mom.hp).s_vn, abs=5e-2)


def test_parity_eigenstate_has_no_first_moment():
    basis = EDBasis(6, 30)
    res = ground_state(build_hamiltonian(DickeParams(1.0, 1.0, 0.4), basis),
                       basis)
    mom = photon_moments_ed(res, basis)
    assert abs(mom.mean_a) < 1e-10
    assert res.parity in (1.0, -1.0) or abs(abs(res.parity) - 1.0) < 1e-9


def test_deep_superradiant_cat_pair():
    basis = EDBasis(16, 120)
    res = ground_state(build_hamiltonian(DickeParams(1.0, 1.0, 1.0), basis),
                       basis)
    assert res.gap01 < 1e-6
    assert res.parity == pytest.approx(1.0, abs=1e-6)


def test_converge_cutoff_minimal_for_decoupled():
    n_max = converge_cutoff(DickeParams(1.0, 1.0, 0.0), 4)
    assert n_max <= 8


def test_converge_cutoff_is_self_consistent():
    p = DickeParams(1.0, 1.0, 0.5)
    n_max = converge_cutoff(p, 12, tol=1e-8)
    basis_a = EDBasis(12, n_max)
    basis_b = EDBasis(12, math.ceil(1.5 * n_max))
    hp_a = photon_moments_ed(ground_state(build_hamiltonian(p, basis_a),
                                          basis_a), basis_a).hp
    hp_b = photon_moments_ed(ground_state(build_hamiltonian(p, basis_b),
                                          basis_b), basis_b).hp
    assert abs(hp_a - hp_b) < 1e-6


def test_budget_enforced():
    with pytest.raises(BudgetExceeded) as err:
        converge_cutoff(DickeParams(1.0, 1.0, 3.0), 16, budget_nnz=10_000)
    assert err.value.needed > err.value.budget


def test_cutoff_warning_on_tight_basis():
    basis = EDBasis(8, 6)
    res = ground_state(build_hamiltonian(DickeParams(1.0, 1.0, 1.5), basis),
                       basis)
    assert not res.cutoff_converged
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        photon_moments_ed(res, basis)
    assert any(issubclass(w.category, CutoffWarning) for w in caught)


def test_state_roundtrip(tmp_path):
    basis = EDBasis(6, 24)
    res = ground_state(build_hamiltonian(DickeParams(1.0, 1.0, 0.4), basis),
                       basis)
    path = tmp_path / "state.bin"
    save_state(path, res, basis)
    res2, basis2 = load_state(path)
    assert np.array_equal(res.state, res2.state)
    assert res2.ground_energy == res.ground_energy
    assert res2.parity == res.parity
    assert (basis2.n_spins, basis2.n_max) == (6, 24)
