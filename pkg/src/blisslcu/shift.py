"""Block-invariant symmetry shifts.

The shift operator built from the electron-number symmetry is

    T(k1, k2, xi) = k1 (Ne_op - Ne) + k2 (Ne_op^2 - Ne^2)
                    + sum_ij xi_ij E_ij (Ne_op - Ne),

which annihilates every state with exactly Ne electrons, so H - T acts on
that sector exactly like H.  Absorbing T into the (e0, h, g) tensors keeps
the operator in the standard two-electron form:

    e0' = e0 + k1 Ne + k2 Ne^2
    h'_ij = h_ij - k1 d_ij + Ne xi_ij
    g'_ijkl = g_ijkl - k2 d_ij d_kl - (xi_ij d_kl + xi_kl d_ij) / 2,

the symmetrized xi placement being valid because E_ij commutes with the
number operator.  The shift parameters are chosen to minimize the Pauli
LCU 1-norm of the shifted Hamiltonian, a cheap proxy that tracks both the
spectral range and the cost of the other LCU decompositions.

That objective is a sum of absolute values of affine functions of
(k1, k2, xi), i.e. convex piecewise-linear, so the default optimizer is an
exact linear program; a quasi-Newton path with finite-difference gradients
is kept for cross-checking.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.optimize
import scipy.sparse

from .hamiltonian import MolecularHamiltonian
from .norms import pauli_norm_terms, pauli_one_norm
from .validation import check_symmetric

__all__ = [
    "ShiftParameters",
    "ShiftResult",
    "absorb_shift",
    "evaluate_shift_objective",
    "optimize_symmetry_shift",
    "optimize_bliss",
]


@dataclasses.dataclass(frozen=True)
class ShiftParameters:
    """Shift amplitudes (k1, k2, xi) targeting the n_elec electron sector."""

    kappa1: float
    kappa2: float
    xi: np.ndarray
    n_elec: int

    def __post_init__(self):
        xi = check_symmetric(self.xi, "xi", tol=1e-12).copy()
        xi.flags.writeable = False
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "kappa1", float(self.kappa1))
        object.__setattr__(self, "kappa2", float(self.kappa2))
        if self.n_elec < 0 or self.n_elec != int(self.n_elec):
            raise ValueError(f"n_elec must be a nonnegative integer, got {self.n_elec}")
        object.__setattr__(self, "n_elec", int(self.n_elec))

    @classmethod
    def zero(cls, n_orbitals: int, n_elec: int) -> "ShiftParameters":
        return cls(0.0, 0.0, np.zeros((n_orbitals, n_orbitals)), n_elec)

    @property
    def n_orbitals(self) -> int:
        return self.xi.shape[0]


@dataclasses.dataclass(frozen=True)
class ShiftResult:
    """Optimized shift together with the shifted Hamiltonian and norms."""

    params: ShiftParameters
    shifted: MolecularHamiltonian
    norm_before: float
    norm_after: float
    converged: bool

    def __post_init__(self):
        if self.norm_after > self.norm_before + 1e-9:
            raise ValueError(
                "shift optimization increased the 1-norm "
                f"({self.norm_before} -> {self.norm_after})"
            )


def absorb_shift(H: MolecularHamiltonian, params: ShiftParameters) -> MolecularHamiltonian:
    """Return H - T(params) re-expressed in the standard tensor form."""
    n = H.n_orbitals
    if params.n_orbitals != n:
        raise ValueError(
            f"xi is {params.n_orbitals}x{params.n_orbitals}, Hamiltonian has {n} orbitals"
        )
    ne = params.n_elec
    eye = np.eye(n)
    e0 = H.e0 + params.kappa1 * ne + params.kappa2 * ne * ne
    h = H.h - params.kappa1 * eye + ne * params.xi
    g = (
        H.g
        - params.kappa2 * np.einsum("ij,kl->ijkl", eye, eye)
        - 0.5 * np.einsum("ij,kl->ijkl", params.xi, eye)
        - 0.5 * np.einsum("ij,kl->ijkl", eye, params.xi)
    )
    return H.with_tensors(e0=e0, h=h, g=g)


def evaluate_shift_objective(H: MolecularHamiltonian, params: ShiftParameters) -> float:
    """Pauli 1-norm of the shifted Hamiltonian; the optimization objective."""
    return pauli_one_norm(absorb_shift(H, params))


# ---------------------------------------------------------------------------
# parameter packing
# ---------------------------------------------------------------------------

def _unpack(x, n, n_elec, with_xi):
    xi = np.zeros((n, n))
    if with_xi:
        rows, cols = np.tril_indices(n)
        xi[rows, cols] = x[2:]
        xi[cols, rows] = x[2:]
    return ShiftParameters(x[0], x[1], xi, n_elec)


def _n_params(n, with_xi):
    return 2 + (n * (n + 1) // 2 if with_xi else 0)


# ---------------------------------------------------------------------------
# objective as weighted |affine| terms (for the LP backend)
# ---------------------------------------------------------------------------

def _affine_model(H, n_elec, with_xi):
    """Exact affine map x -> term values, probed with unit parameter vectors."""
    n = H.n_orbitals
    n_par = _n_params(n, with_xi)
    base, _ = pauli_norm_terms(absorb_shift(H, _unpack(np.zeros(n_par), n, n_elec, with_xi)))
    columns = np.empty((base.size, n_par))
    for col in range(n_par):
        unit = np.zeros(n_par)
        unit[col] = 1.0
        values, _ = pauli_norm_terms(absorb_shift(H, _unpack(unit, n, n_elec, with_xi)))
        columns[:, col] = values - base
    return base, columns


def _solve_lp(H, n_elec, with_xi):
    """Global minimum of sum_a w_a |b_a + (M x)_a| via an exact LP."""
    n = H.n_orbitals
    base, mmat = _affine_model(H, n_elec, with_xi)
    _, weights = pauli_norm_terms(H)
    n_terms, n_par = mmat.shape
    mspar = scipy.sparse.csr_matrix(mmat)
    eye = scipy.sparse.identity(n_terms, format="csr")
    a_ub = scipy.sparse.vstack(
        [scipy.sparse.hstack([mspar, -eye]), scipy.sparse.hstack([-mspar, -eye])],
        format="csr",
    )
    b_ub = np.concatenate([-base, base])
    cost = np.concatenate([np.zeros(n_par), weights])
    bounds = [(None, None)] * n_par + [(0, None)] * n_terms
    result = scipy.optimize.linprog(
        cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs"
    )
    if result.status != 0:
        raise RuntimeError(f"shift LP failed: {result.message}")
    return result.x[:n_par], True


def _solve_bfgs(H, n_elec, with_xi, x0, maxiter):
    n = H.n_orbitals

    def objective(x):
        return evaluate_shift_objective(H, _unpack(x, n, n_elec, with_xi))

    result = scipy.optimize.minimize(
        objective,
        x0,
        method="BFGS",
        jac="3-point",
        options={"maxiter": maxiter, "gtol": 1e-7, "finite_diff_rel_step": 1e-6},
    )
    best_x, best_f = result.x, result.fun
    polish = scipy.optimize.minimize(
        objective,
        best_x,
        method="Nelder-Mead",
        options={"maxiter": 20000, "xatol": 1e-10, "fatol": 1e-12},
    )
    if polish.fun < best_f:
        best_x, best_f = polish.x, polish.fun
    if objective(x0 * 0.0) < best_f:
        best_x = x0 * 0.0
    converged = bool(result.success or polish.success)
    return best_x, converged


def _optimize(H, n_elec, with_xi, method, maxiter, warm_start=None):
    n = H.n_orbitals
    if n_elec is None:
        n_elec = H.n_elec
    if n_elec is None:
        raise ValueError("n_elec not given and the Hamiltonian carries no electron count")
    if n_elec > 2 * n:
        raise ValueError(f"n_elec = {n_elec} exceeds the {2 * n} spin orbitals")
    if method == "lp":
        x, converged = _solve_lp(H, n_elec, with_xi)
    elif method == "bfgs":
        x0 = np.zeros(_n_params(n, with_xi))
        if warm_start is not None:
            x0[: warm_start.size] = warm_start
        x, converged = _solve_bfgs(H, n_elec, with_xi, x0, maxiter)
    else:
        raise ValueError(f"unknown optimizer method {method!r}")
    params = _unpack(x, n, n_elec, with_xi)
    shifted = absorb_shift(H, params)
    norm_before = pauli_one_norm(H)
    norm_after = pauli_one_norm(shifted)
    if norm_after > norm_before:
        # never return a shift worse than no shift
        params = ShiftParameters.zero(n, n_elec)
        shifted = H.with_tensors()
        norm_after = norm_before
        converged = False
    return ShiftResult(params, shifted, norm_before, norm_after, converged), x


def optimize_symmetry_shift(
    H: MolecularHamiltonian,
    n_elec: int | None = None,
    method: str = "lp",
    maxiter: int = 10000,
) -> ShiftResult:
    """Optimize the number-symmetry-only shift (k1, k2), xi frozen at zero."""
    result, _ = _optimize(H, n_elec, with_xi=False, method=method, maxiter=maxiter)
    return result


def optimize_bliss(
    H: MolecularHamiltonian,
    n_elec: int | None = None,
    method: str = "lp",
    maxiter: int = 10000,
) -> ShiftResult:
    """Jointly optimize k1, k2 and the symmetric xi matrix.

    The quasi-Newton path warm-starts from the symmetry-only optimum, which
    guarantees the monotone chain norm(H_T) <= norm(H_S) <= norm(H); the LP
    path reaches the global optimum directly.
    """
    warm = None
    if method == "bfgs":
        s_result, s_x = _optimize(H, n_elec, with_xi=False, method=method, maxiter=maxiter)
        warm = s_x
        n_elec = s_result.params.n_elec
    result, _ = _optimize(
        H, n_elec, with_xi=True, method=method, maxiter=maxiter, warm_start=warm
    )
    return result
