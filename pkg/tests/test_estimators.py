import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import blisslcu as bl
from blisslcu import (
    AnticommutingLCU,
    BlissShift,
    DoubleFactorizedLCU,
    GreedyCSALCU,
    OrbitalRotationOptimizer,
    PauliLCU,
)

from oracles import random_hamiltonian

ALL_ESTIMATORS = [
    BlissShift(),
    OrbitalRotationOptimizer(),
    PauliLCU(),
    AnticommutingLCU(),
    DoubleFactorizedLCU(),
    GreedyCSALCU(),
]


@pytest.mark.parametrize("estimator", ALL_ESTIMATORS, ids=lambda e: type(e).__name__)
def test_get_set_params_clone(estimator):
    params = estimator.get_params()
    rebuilt = clone(estimator)
    assert rebuilt.get_params() == params
    estimator.set_params(**params)


def test_bliss_shift_matches_functional_api(rng):
    H = random_hamiltonian(2, rng, n_elec=2)
    est = BlissShift().fit(H)
    reference = bl.optimize_bliss(H, 2)
    assert est.norm_after_ == pytest.approx(reference.norm_after, abs=1e-9)
    assert est.transform(H).allclose(reference.shifted, atol=1e-9)
    assert est.norm_before_ == pytest.approx(bl.pauli_one_norm(H))
    assert est.converged_


def test_bliss_shift_symmetry_only(rng):
    H = random_hamiltonian(2, rng, n_elec=2)
    est = BlissShift(symmetry_only=True).fit(H)
    assert np.max(np.abs(est.params_.xi)) == 0.0
    assert est.norm_after_ == pytest.approx(
        bl.optimize_symmetry_shift(H, 2).norm_after, abs=1e-9
    )


def test_bliss_shift_transform_other_hamiltonian(rng):
    H = random_hamiltonian(2, rng, n_elec=2)
    other = random_hamiltonian(2, rng)
    est = BlissShift().fit(H)
    assert est.transform(other).allclose(bl.absorb_shift(other, est.params_), atol=0.0)


def test_fit_transform_shape(rng):
    H = random_hamiltonian(2, rng, n_elec=2)
    shifted = BlissShift().fit_transform(H)
    assert shifted.n_orbitals == 2


def test_not_fitted_raises(rng):
    H = random_hamiltonian(2, rng)
    with pytest.raises(NotFittedError):
        BlissShift().transform(H)
    with pytest.raises(NotFittedError):
        PauliLCU().unitary_count()


def test_type_validation():
    with pytest.raises(TypeError, match="MolecularHamiltonian"):
        PauliLCU().fit(np.zeros((4, 4)))


def test_pauli_lcu_attributes(rng):
    H = random_hamiltonian(2, rng)
    est = PauliLCU(cutoff=1e-8).fit(H)
    assert est.one_norm_ == pytest.approx(bl.pauli_one_norm(H))
    assert est.n_unitaries_ == est.terms_.n_terms(cutoff=1e-8)
    assert est.unitary_count(cutoff=1e9) == 0


def test_anticommuting_lcu_attributes(rng):
    H = random_hamiltonian(2, rng)
    est = AnticommutingLCU().fit(H)
    assert est.one_norm_ <= bl.pauli_one_norm(H) + 1e-9
    assert est.n_unitaries_ <= len(est.groups_)


def test_double_factorized_lcu(rng):
    H = random_hamiltonian(2, rng)
    est = DoubleFactorizedLCU().fit(H)
    reference = bl.df_one_norm(est.fragments_, est.one_body_eigenvalues_)
    assert est.one_norm_ == pytest.approx(reference)


def test_greedy_csa_lcu(rng):
    H = random_hamiltonian(2, rng)
    est = GreedyCSALCU(seed=4).fit(H)
    assert est.converged_
    assert est.one_norm_ >= 0.0


def test_orbital_optimizer_transform(rng):
    H = random_hamiltonian(2, rng)
    est = OrbitalRotationOptimizer().fit(H)
    assert est.norm_after_ <= est.norm_before_ + 1e-9
    assert est.transform(H).allclose(est.rotated_, atol=1e-12)
