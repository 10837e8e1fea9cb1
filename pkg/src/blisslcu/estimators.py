"""Scikit-learn style estimators wrapping the functional pipeline.

The estimators operate on :class:`~blisslcu.hamiltonian.MolecularHamiltonian`
objects instead of feature arrays but follow the usual contract: parameters
in ``__init__`` (so ``get_params`` / ``set_params`` / ``clone`` work), fitted
attributes with trailing underscores, transformers returning new
Hamiltonians.  This keeps shift optimization and LCU analysis composable
with generic tooling built on that interface.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .decompositions import (
    ac_decomposition,
    count_unitaries,
    csa_decomposition,
    df_decomposition,
    orbital_optimize,
    pauli_decomposition,
    DEFAULT_CUTOFF,
)
from .hamiltonian import rotate_orbitals
from .norms import pauli_one_norm
from .shift import absorb_shift, optimize_bliss, optimize_symmetry_shift
from .validation import check_molecular_hamiltonian

__all__ = [
    "BlissShift",
    "OrbitalRotationOptimizer",
    "PauliLCU",
    "AnticommutingLCU",
    "DoubleFactorizedLCU",
    "GreedyCSALCU",
]


class BlissShift(TransformerMixin, BaseEstimator):
    """Fit a number-symmetry shift minimizing the Pauli LCU 1-norm.

    Parameters
    ----------
    n_elec : int or None
        Target electron sector; defaults to the count stored on the fitted
        Hamiltonian (from the integral file).
    symmetry_only : bool
        Restrict the shift to the pure symmetry polynomial (xi = 0).
    method : {"lp", "bfgs"}
        Optimizer backend.  The objective is convex piecewise-linear, so the
        default linear program finds the exact optimum.

    Attributes
    ----------
    result_ : ShiftResult
    params_ : ShiftParameters
    shifted_ : MolecularHamiltonian
    norm_before_, norm_after_ : float
    converged_ : bool
    """

    def __init__(self, n_elec=None, symmetry_only=False, method="lp", maxiter=10000):
        self.n_elec = n_elec
        self.symmetry_only = symmetry_only
        self.method = method
        self.maxiter = maxiter

    def fit(self, X, y=None):
        H = check_molecular_hamiltonian(X)
        optimizer = optimize_symmetry_shift if self.symmetry_only else optimize_bliss
        result = optimizer(H, n_elec=self.n_elec, method=self.method, maxiter=self.maxiter)
        self.result_ = result
        self.params_ = result.params
        self.shifted_ = result.shifted
        self.norm_before_ = result.norm_before
        self.norm_after_ = result.norm_after
        self.converged_ = result.converged
        return self

    def transform(self, X):
        """Absorb the fitted shift into a Hamiltonian with the same orbitals."""
        check_is_fitted(self, "params_")
        return absorb_shift(check_molecular_hamiltonian(X), self.params_)


class OrbitalRotationOptimizer(TransformerMixin, BaseEstimator):
    """Fit an orbital rotation minimizing the Pauli LCU 1-norm."""

    def __init__(self, maxiter=10000):
        self.maxiter = maxiter

    def fit(self, X, y=None):
        H = check_molecular_hamiltonian(X)
        rotation, rotated, converged = orbital_optimize(H, maxiter=self.maxiter)
        self.rotation_ = rotation
        self.rotated_ = rotated
        self.norm_before_ = pauli_one_norm(H)
        self.norm_after_ = pauli_one_norm(rotated)
        self.converged_ = converged
        return self

    def transform(self, X):
        check_is_fitted(self, "rotation_")
        return rotate_orbitals(check_molecular_hamiltonian(X), self.rotation_)


class _LCUEstimator(BaseEstimator):
    """Shared surface for decomposition estimators."""

    def unitary_count(self, cutoff=None):
        check_is_fitted(self, "decomposition_")
        if cutoff is None:
            cutoff = self.cutoff
        return count_unitaries(self.decomposition_, cutoff)


class PauliLCU(_LCUEstimator):
    """Pauli-product LCU: terms from the Jordan-Wigner expansion."""

    def __init__(self, cutoff=DEFAULT_CUTOFF):
        self.cutoff = cutoff

    def fit(self, X, y=None):
        H = check_molecular_hamiltonian(X)
        self.decomposition_ = pauli_decomposition(H)
        self.terms_ = self.decomposition_.terms
        self.one_norm_ = self.decomposition_.one_norm
        self.n_unitaries_ = count_unitaries(self.decomposition_, self.cutoff)
        return self


class AnticommutingLCU(_LCUEstimator):
    """Anticommuting-group LCU via greedy sorted insertion."""

    def __init__(self, cutoff=DEFAULT_CUTOFF):
        self.cutoff = cutoff

    def fit(self, X, y=None):
        H = check_molecular_hamiltonian(X)
        self.decomposition_ = ac_decomposition(H)
        self.groups_ = self.decomposition_.groups
        self.one_norm_ = self.decomposition_.one_norm
        self.n_unitaries_ = count_unitaries(self.decomposition_, self.cutoff)
        return self


class DoubleFactorizedLCU(_LCUEstimator):
    """Double-factorized LCU from a pivoted Cholesky of the two-body tensor."""

    def __init__(self, tol=DEFAULT_CUTOFF, cutoff=DEFAULT_CUTOFF, method="eigen"):
        self.tol = tol
        self.cutoff = cutoff
        self.method = method

    def fit(self, X, y=None):
        H = check_molecular_hamiltonian(X)
        self.decomposition_ = df_decomposition(H, tol=self.tol, method=self.method)
        self.fragments_ = self.decomposition_.fragments
        self.one_body_eigenvalues_ = self.decomposition_.one_body_eigenvalues
        self.one_norm_ = self.decomposition_.one_norm
        self.n_unitaries_ = count_unitaries(self.decomposition_, self.cutoff)
        return self


class GreedyCSALCU(_LCUEstimator):
    """Greedy diagonal-pair fragment LCU fitted to the two-body tensor."""

    def __init__(
        self,
        tol=DEFAULT_CUTOFF,
        cutoff=DEFAULT_CUTOFF,
        max_fragments=None,
        restarts=3,
        seed=0,
    ):
        self.tol = tol
        self.cutoff = cutoff
        self.max_fragments = max_fragments
        self.restarts = restarts
        self.seed = seed

    def fit(self, X, y=None):
        H = check_molecular_hamiltonian(X)
        self.decomposition_ = csa_decomposition(
            H,
            tol=self.tol,
            max_fragments=self.max_fragments,
            restarts=self.restarts,
            seed=self.seed,
        )
        self.fragments_ = self.decomposition_.fragments
        self.one_body_eigenvalues_ = self.decomposition_.one_body_eigenvalues
        self.one_norm_ = self.decomposition_.one_norm
        self.converged_ = self.decomposition_.converged
        self.n_unitaries_ = count_unitaries(self.decomposition_, self.cutoff)
        return self
