"""Closed-form LCU 1-norms evaluated directly on the fermionic tensors.

All norms exclude the identity/constant coefficient: constants are applied
classically and never enter a block encoding.
"""

from __future__ import annotations

import numpy as np

from .hamiltonian import MolecularHamiltonian

__all__ = [
    "pauli_one_norm",
    "pauli_norm_terms",
    "corrected_one_body",
    "one_body_corrected_norm",
    "one_body_eigenvalues",
    "csa_one_norm",
    "df_one_norm",
]


def pauli_one_norm(H: MolecularHamiltonian) -> float:
    """1-norm of the Pauli-product LCU, evaluated without building it.

    Equal to the sum of absolute non-identity coefficients of the
    Jordan-Wigner expansion:

        sum_ij |h_ij + 2 sum_k g_ijkk|
        + sum_{i>k, j>l} |g_ijkl - g_ilkj|
        + 1/2 sum_ijkl |g_ijkl|.
    """
    h, g = H.h, H.g
    h_eff = h + 2.0 * np.einsum("ijkk->ij", g)
    one_body = np.abs(h_eff).sum()
    # the restricted double sum equals 1/4 of the unrestricted one because the
    # antisymmetrized combination vanishes at i = k or j = l and its absolute
    # value is invariant under i<->k and j<->l
    antisym = 0.25 * np.abs(g - g.transpose(0, 3, 2, 1)).sum()
    dense = 0.5 * np.abs(g).sum()
    return float(one_body + antisym + dense)


def pauli_norm_terms(H: MolecularHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    """(values, weights) with pauli_one_norm = sum(weights * |values|).

    Exposes the norm's absolute-value structure so optimizers can build
    exact linear models or smoothed surrogates of it.
    """
    h_eff = H.h + 2.0 * np.einsum("ijkk->ij", H.g)
    antisym = H.g - H.g.transpose(0, 3, 2, 1)
    values = np.concatenate([h_eff.ravel(), antisym.ravel(), H.g.ravel()])
    n = H.n_orbitals
    weights = np.concatenate(
        [np.full(n * n, 1.0), np.full(n ** 4, 0.25), np.full(n ** 4, 0.5)]
    )
    return values, weights


def corrected_one_body(H: MolecularHamiltonian) -> np.ndarray:
    """One-body matrix h + 2 sum_k g_ijkk absorbing the reflection-mapping
    correction of the two-body part; shared by the CSA and DF norms."""
    return H.h + 2.0 * np.einsum("ijkk->ij", H.g)


def one_body_corrected_norm(H: MolecularHamiltonian) -> float:
    """lambda_1 = sum_i |mu_i| over eigenvalues of the corrected one-body."""
    return float(np.abs(one_body_eigenvalues(H)).sum())


def one_body_eigenvalues(H: MolecularHamiltonian) -> np.ndarray:
    return np.linalg.eigvalsh(corrected_one_body(H))


def csa_one_norm(fragments, mu) -> float:
    """1-norm of the reflection-form CSA LCU.

    lambda = sum_i |mu_i| + sum_m [ sum_ij |lam^m_ij| - 1/2 sum_i |lam^m_ii| ],
    the diagonal discount coming from squared reflections being the identity.
    """
    total = float(np.abs(np.asarray(mu, dtype=float)).sum())
    for fragment in fragments:
        lam = np.asarray(fragment.diag, dtype=float)
        total += np.abs(lam).sum() - 0.5 * np.abs(np.diag(lam)).sum()
    return total


def df_one_norm(fragments, mu) -> float:
    """1-norm of the double-factorized LCU.

    lambda = sum_i |mu_i| + 1/2 sum_m (sum_i |eps^m_i|)^2; each squared
    one-body factor is implemented as a single qubitized unitary.
    """
    total = float(np.abs(np.asarray(mu, dtype=float)).sum())
    for fragment in fragments:
        eps = np.asarray(fragment.eps, dtype=float)
        total += 0.5 * np.abs(eps).sum() ** 2
    return total
