import numpy as np
import pytest

import blisslcu as bl
from blisslcu.decompositions import (
    CSAFragment,
    csa_greedy,
    df_decompose,
    fragment_two_body_tensor,
    count_unitaries,
    df_decomposition,
    csa_decomposition,
    orbital_optimize,
    pauli_decomposition,
    ac_decomposition,
)
from blisslcu.hamiltonian import OrbitalRotation, rotation_matrix
from blisslcu.pauli import jordan_wigner, to_sparse_matrix
from blisslcu.validation import symmetrize_two_body

from oracles import random_hamiltonian, random_psd_two_body


def tensor_cost(a, b):
    return float(np.sum((a - b) ** 2))


def test_df_rank_one_tensor(rng):
    v = rng.normal(size=(3, 3))
    v = 0.5 * (v + v.T)
    g = np.einsum("ij,kl->ijkl", v, v)
    fragments = df_decompose(g, tol=1e-8)
    assert len(fragments) == 1
    frag = fragments[0]
    assert frag.sign == 1.0
    lmat = frag.basis @ np.diag(frag.eps) @ frag.basis.T
    assert min(np.max(np.abs(lmat - v)), np.max(np.abs(lmat + v))) < 1e-10
    assert tensor_cost(fragment_two_body_tensor(fragments, 3), g) < 1e-18


def test_df_synthetic_rank_three(rng):
    g = random_psd_two_body(3, rng, rank=3)
    fragments = df_decompose(g, tol=1e-6)
    assert len(fragments) == 3
    assert tensor_cost(fragment_two_body_tensor(fragments, 3), g) < 1e-18


def test_df_indefinite_signed_fragments(rng):
    g = random_psd_two_body(2, rng, rank=2)
    g = g - 3.0 * np.einsum("ij,kl->ijkl", np.eye(2), np.eye(2))
    g = symmetrize_two_body(g)
    fragments = df_decompose(g, tol=1e-8)
    assert any(f.sign < 0 for f in fragments)
    assert tensor_cost(fragment_two_body_tensor(fragments, 2), g) < 1e-16


def test_df_cholesky_matches_on_psd(rng):
    g = random_psd_two_body(3, rng, rank=4)
    eig = df_decompose(g, tol=1e-8, method="eigen")
    chol = df_decompose(g, tol=1e-8, method="cholesky")
    assert tensor_cost(fragment_two_body_tensor(eig, 3), g) < 1e-16
    assert tensor_cost(fragment_two_body_tensor(chol, 3), g) < 1e-16


def test_df_cholesky_rejects_indefinite(rng):
    g = -random_psd_two_body(2, rng, rank=1)
    with pytest.raises(ValueError, match="negative eigenvalue"):
        df_decompose(g, method="cholesky")


def test_df_deterministic(rng):
    g = random_psd_two_body(3, rng, rank=3)
    first = df_decompose(g)
    second = df_decompose(g)
    for f1, f2 in zip(first, second):
        assert np.array_equal(f1.eps, f2.eps)
        assert np.array_equal(f1.basis, f2.basis)


def test_csa_fragment_requires_symmetric_diag():
    with pytest.raises(ValueError, match="symmetric"):
        CSAFragment(OrbitalRotation.identity(2), np.array([[0.0, 1.0], [0.0, 0.0]]))


def make_fragment_tensor(theta, lam):
    u = rotation_matrix(theta).T
    pair = np.einsum("ip,jp->pij", u, u)
    return np.einsum("pq,pij,qkl->ijkl", lam, pair, pair)


def test_csa_single_fragment_recovery():
    lam = np.array([[0.5, -0.2], [-0.2, 0.8]])
    g = make_fragment_tensor(np.array([0.3]), lam)
    fragments, converged = csa_greedy(g, tol=1e-10, seed=3)
    assert converged
    assert len(fragments) == 1
    assert tensor_cost(fragment_two_body_tensor(fragments, 2), g) < 1e-10


def test_csa_rank_two_constructive(rng):
    """Recovery of a rank-2 tensor built from two known fragments.

    With a shared rotation the greedy reccombines the generators exactly,
    so the recovered coefficient norm cannot exceed the generating one.
    """
    theta = np.array([0.7])
    lam1 = np.array([[1.0, 0.4], [0.4, -0.3]])
    lam2 = np.array([[0.2, -0.5], [-0.5, 0.9]])
    g = make_fragment_tensor(theta, lam1) + make_fragment_tensor(theta, lam2)
    assert np.linalg.matrix_rank(g.reshape(4, 4)) == 2
    fragments, converged = csa_greedy(g, tol=1e-6, seed=5)
    assert converged
    assert tensor_cost(fragment_two_body_tensor(fragments, 2), g) < 1e-6
    generating = bl.csa_one_norm(
        [CSAFragment(OrbitalRotation(theta), lam1), CSAFragment(OrbitalRotation(theta), lam2)],
        [],
    )
    recovered = bl.csa_one_norm(fragments, [])
    assert recovered <= generating + 1e-6


def test_csa_non_commuting_pair_recovery(rng):
    """Different-rotation generators: exact recovery of the tensor itself."""
    lam1 = np.array([[1.0, 0.4], [0.4, -0.3]])
    lam2 = 0.25 * np.array([[0.2, -0.5], [-0.5, 0.9]])
    g = make_fragment_tensor(np.array([0.7]), lam1) + make_fragment_tensor(
        np.array([-0.2]), lam2
    )
    fragments, converged = csa_greedy(g, tol=1e-6, seed=5)
    assert converged
    assert tensor_cost(fragment_two_body_tensor(fragments, 2), g) < 1e-6


def test_csa_fragment_cap_flags_partial(rng):
    g = random_psd_two_body(3, rng, rank=4)
    fragments, converged = csa_greedy(g, tol=1e-10, max_fragments=1, seed=1)
    assert len(fragments) == 1
    assert not converged


def test_total_operator_reconstruction_small(rng):
    """Fragments plus untouched one-body and constant rebuild H exactly."""
    H = random_hamiltonian(2, rng)
    for dec in (df_decomposition(H, tol=1e-8), csa_decomposition(H, tol=1e-8, seed=2)):
        rebuilt_g = fragment_two_body_tensor(dec.fragments, 2)
        rebuilt_g = symmetrize_two_body(rebuilt_g)
        H_rebuilt = H.with_tensors(g=rebuilt_g)
        ours = to_sparse_matrix(jordan_wigner(H_rebuilt)).toarray()
        reference = to_sparse_matrix(jordan_wigner(H)).toarray()
        assert np.max(np.abs(ours - reference)) < 1e-6


def test_orbital_optimize_single_orbital(rng):
    H = random_hamiltonian(1, rng)
    rotation, rotated, converged = orbital_optimize(H)
    assert rotation.theta.size == 0
    assert rotated.allclose(H)
    assert converged


def test_orbital_optimize_never_worse(rng):
    H = random_hamiltonian(2, rng)
    _, rotated, _ = orbital_optimize(H)
    assert bl.pauli_one_norm(rotated) <= bl.pauli_one_norm(H) + 1e-9


def test_orbital_optimize_beats_random_sampling(rng):
    H = random_hamiltonian(2, rng)
    _, rotated, _ = orbital_optimize(H)
    achieved = bl.pauli_one_norm(rotated)
    samples = rng.uniform(-np.pi, np.pi, size=10_000)
    best = min(
        bl.pauli_one_norm(bl.rotate_orbitals(H, OrbitalRotation([theta])))
        for theta in samples
    )
    assert achieved <= best + 1e-6


def test_count_unitaries_pauli_and_cutoff(rng):
    H = random_hamiltonian(2, rng)
    dec = pauli_decomposition(H)
    assert count_unitaries(dec, cutoff=0.0) == dec.terms.n_terms()
    assert count_unitaries(dec, cutoff=1e9) == 0
    with pytest.raises(ValueError, match="nonnegative"):
        count_unitaries(dec, cutoff=-1.0)


def test_count_unitaries_empty():
    from blisslcu.decompositions import ACDecomposition, DFDecomposition

    assert count_unitaries(ACDecomposition(groups=(), one_norm=0.0)) == 0
    empty_df = DFDecomposition(fragments=(), one_body_eigenvalues=np.zeros(2), one_norm=0.0)
    assert count_unitaries(empty_df) == 0


def test_count_unitaries_ac_counts_groups(rng):
    H = random_hamiltonian(2, rng)
    dec = ac_decomposition(H)
    assert count_unitaries(dec, cutoff=0.0) == len(dec.groups)
