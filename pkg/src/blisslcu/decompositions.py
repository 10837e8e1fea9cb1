"""LCU decompositions: anticommuting grouping, double factorization,
greedy diagonal-pair (Cartan) fragments and orbital optimization.

Each decomposition produces a container carrying its fragments/groups and
its 1-norm; ``count_unitaries`` reports the number of LCU unitaries above
a coefficient cutoff for any of them.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.optimize

from .hamiltonian import (
    MolecularHamiltonian,
    OrbitalRotation,
    n_rotation_angles,
    rotate_orbitals,
    rotation_matrix,
)
from .norms import (
    csa_one_norm,
    df_one_norm,
    one_body_eigenvalues,
    pauli_norm_terms,
    pauli_one_norm,
)
from .pauli import PauliSum, PauliWord, jordan_wigner, majorana_term_list

__all__ = [
    "AnticommutingGroup",
    "CSAFragment",
    "DFFragment",
    "PauliDecomposition",
    "ACDecomposition",
    "CSADecomposition",
    "DFDecomposition",
    "Decomposition",
    "ac_grouping",
    "ac_grouping_majorana",
    "ac_one_norm",
    "pauli_decomposition",
    "ac_decomposition",
    "df_decompose",
    "df_decomposition",
    "csa_greedy",
    "csa_decomposition",
    "fragment_two_body_tensor",
    "orbital_optimize",
    "count_unitaries",
    "DEFAULT_CUTOFF",
]

DEFAULT_CUTOFF = 1e-6


# ---------------------------------------------------------------------------
# anticommuting grouping (sorted insertion)
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class AnticommutingGroup:
    """Mutually anticommuting Pauli terms; one unitary of weight group_norm."""

    member_terms: tuple[tuple[PauliWord, float], ...]
    group_norm: float

    def __len__(self):
        return len(self.member_terms)


def _sorted_insertion(terms, n_qubits) -> list[AnticommutingGroup]:
    """Greedy sorted insertion over (x, z, coefficient) triples.

    Terms are visited in decreasing |coefficient| order; each joins the
    first group whose every member anticommutes with it, else it opens a
    new group.  Ties in magnitude break on the word masks so the partition
    is deterministic.
    """
    terms = sorted(terms, key=lambda item: (-abs(item[2]), item[0], item[1]))
    groups: list[list[tuple[int, int, float]]] = []
    for x, z, coeff in terms:
        placed = False
        for group in groups:
            if all(((x & gz).bit_count() + (z & gx).bit_count()) & 1 for gx, gz, _ in group):
                group.append((x, z, coeff))
                placed = True
                break
        if not placed:
            groups.append([(x, z, coeff)])
    out = []
    for group in groups:
        members = tuple(
            (PauliWord(n_qubits, x, z), coeff) for x, z, coeff in group
        )
        norm = float(np.sqrt(sum(coeff * coeff for _, _, coeff in group)))
        out.append(AnticommutingGroup(members, norm))
    return out


def ac_grouping(pauli_sum: PauliSum) -> list[AnticommutingGroup]:
    """Partition the non-identity terms of a Pauli sum by sorted insertion."""
    terms = [
        (x, z, coeff)
        for (x, z), coeff in pauli_sum.raw_items()
        if (x, z) != (0, 0)
    ]
    return _sorted_insertion(terms, pauli_sum.n_qubits)


def ac_grouping_majorana(H: MolecularHamiltonian) -> list[AnticommutingGroup]:
    """Sorted insertion over the Majorana-product term list of H.

    The Majorana list keeps the one-body, dense-quartic and antisymmetrized
    families as separate unitaries; grouping it reproduces published
    anticommuting-grouping norms, whereas grouping the fully combined
    expansion yields a slightly smaller (better) value.
    """
    terms = [(w.x, w.z, c) for w, c in majorana_term_list(H)]
    n_qubits = 2 * H.n_orbitals
    return _sorted_insertion(terms, n_qubits)


def ac_one_norm(groups) -> float:
    return float(sum(group.group_norm for group in groups))


# ---------------------------------------------------------------------------
# double factorization
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class DFFragment:
    """Rank-1 two-body fragment sign * (sum_i eps_i n_i)^2 in a rotated basis.

    ``basis`` holds the orthogonal orbital-rotation matrix columns-as-orbitals;
    the fragment's pair-coefficient matrix is sign * eps eps^T.
    """

    basis: np.ndarray
    eps: np.ndarray
    sign: float = 1.0

    def coefficient_matrix(self) -> np.ndarray:
        return self.sign * np.outer(self.eps, self.eps)


def _pivoted_cholesky(gmat: np.ndarray, tol: float):
    """Greatest-residual-diagonal pivoted Cholesky of a PSD matrix.

    Stops when the largest residual diagonal drops below ``tol``.  A pivot
    more negative than -tol means the matrix was not PSD; callers decide
    how to handle that by validating first.
    """
    dim = gmat.shape[0]
    diag = np.diagonal(gmat).astype(float).copy()
    vectors = []
    for _ in range(dim):
        pivot = int(np.argmax(diag))
        dmax = diag[pivot]
        if dmax < tol:
            break
        column = gmat[:, pivot].astype(float).copy()
        for vec in vectors:
            column -= vec * vec[pivot]
        vec = column / np.sqrt(dmax)
        vectors.append(vec)
        diag -= vec * vec
    return vectors


def df_decompose(
    g: np.ndarray,
    tol: float = DEFAULT_CUTOFF,
    method: str = "eigen",
) -> list[DFFragment]:
    """Factor the two-body tensor into squared one-body fragments.

    The N^2 x N^2 supermatrix G[(ij),(kl)] = g_ijkl is decomposed as
    G = sum_m s_m l_m l_m^T with each l_m a symmetric N x N matrix, which is
    then eigendecomposed into (basis, eps).  ``method`` selects the route:

    - "eigen" (default): symmetric eigendecomposition with signed weights;
      fragments ordered by decreasing |weight| and truncated at ``tol``.
      Handles the indefinite supermatrices of symmetry-shifted Hamiltonians.
    - "cholesky": greatest-diagonal pivoted Cholesky, truncated when the
      largest residual diagonal falls below ``tol``; requires G positive
      semidefinite and raises otherwise, naming the most negative eigenvalue.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    gmat = g.reshape(n * n, n * n)
    gmat = 0.5 * (gmat + gmat.T)
    if method not in ("cholesky", "eigen"):
        raise ValueError(f"unknown method {method!r}")
    weighted: list[tuple[float, np.ndarray]] = []
    if method == "cholesky":
        min_eig = float(np.linalg.eigvalsh(gmat)[0]) if n else 0.0
        if min_eig < -1e-8:
            raise ValueError(
                "two-body supermatrix is not positive semidefinite: most "
                f"negative eigenvalue {min_eig:.6e}"
            )
        for vec in _pivoted_cholesky(gmat, tol):
            weighted.append((1.0, vec))
    else:
        eigs, vecs = np.linalg.eigh(gmat)
        order = np.argsort(-np.abs(eigs))
        for idx in order:
            if abs(eigs[idx]) < tol:
                break
            weighted.append(
                (float(np.sign(eigs[idx])), np.sqrt(abs(eigs[idx])) * vecs[:, idx])
            )

    fragments = []
    for sign, vec in weighted:
        lmat = vec.reshape(n, n)
        lmat = 0.5 * (lmat + lmat.T)
        eps, basis = np.linalg.eigh(lmat)
        fragments.append(DFFragment(basis=basis, eps=eps, sign=sign))
    return fragments


def fragment_two_body_tensor(fragments, n_orbitals: int) -> np.ndarray:
    """Two-body tensor rebuilt from DF or CSA fragments."""
    g = np.zeros((n_orbitals,) * 4)
    for fragment in fragments:
        if isinstance(fragment, DFFragment):
            u = fragment.basis
            lam = fragment.coefficient_matrix()
        else:
            u = fragment.rotation.matrix().T
            lam = fragment.diag
        pair = np.einsum("ip,jp->pij", u, u)
        g += np.einsum("pq,pij,qkl->ijkl", lam, pair, pair)
    return g


# ---------------------------------------------------------------------------
# greedy CSA fragments
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class CSAFragment:
    """Diagonal-pair fragment sum_ij lam_ij n_i n_j in a rotated basis."""

    rotation: OrbitalRotation
    diag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        if np.max(np.abs(diag - diag.T)) > 1e-10:
            raise ValueError("fragment coefficient matrix must be symmetric")
        object.__setattr__(self, "diag", diag)


def _fragment_tensor_from_params(theta, lam_packed, n):
    rows, cols = np.tril_indices(n)
    lam = np.zeros((n, n))
    lam[rows, cols] = lam_packed
    lam[cols, rows] = lam_packed
    u = rotation_matrix(theta).T
    pair = np.einsum("ip,jp->pij", u, u)
    tensor = np.einsum("pq,pij,qkl->ijkl", lam, pair, pair)
    return tensor, lam


def _fit_one_fragment(residual, n, rng, restarts, max_nfev):
    """Best single-fragment least-squares fit to a residual tensor."""
    n_theta = n_rotation_angles(n)
    n_lam = n * (n + 1) // 2
    scale = max(float(np.sqrt(np.max(np.abs(residual)))), 1e-3)

    def resid_vec(params):
        tensor, _ = _fragment_tensor_from_params(params[:n_theta], params[n_theta:], n)
        return (residual - tensor).ravel()

    best_cost = np.inf
    best_x = None
    for attempt in range(max(1, restarts)):
        if attempt == 0:
            start = rng.uniform(-1e-2, 1e-2, size=n_theta + n_lam)
        else:
            # wider restarts escape the rotation-angle local minima that
            # small-magnitude starts fall into
            start = np.concatenate(
                [rng.uniform(-1.5, 1.5, n_theta), rng.uniform(-scale, scale, n_lam)]
            )
        result = scipy.optimize.least_squares(
            resid_vec, start, method="lm",
            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev,
        )
        cost = float(np.dot(result.fun, result.fun))
        if cost < best_cost:
            best_cost = cost
            best_x = result.x
        if best_cost < 1e-18:
            break
    return best_x, best_cost


def _joint_refine(g, params_list, n, max_nfev):
    """Re-optimize all fragment parameters together against the full tensor."""
    n_theta = n_rotation_angles(n)
    n_lam = n * (n + 1) // 2
    width = n_theta + n_lam

    def resid_vec(packed):
        total = np.zeros_like(g)
        for m in range(len(params_list)):
            chunk = packed[m * width:(m + 1) * width]
            tensor, _ = _fragment_tensor_from_params(chunk[:n_theta], chunk[n_theta:], n)
            total += tensor
        return (g - total).ravel()

    packed = np.concatenate(params_list)
    method = "lm" if packed.size <= g.size else "trf"
    result = scipy.optimize.least_squares(
        resid_vec, packed, method=method,
        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev,
    )
    cost = float(np.dot(result.fun, result.fun))
    chunks = [result.x[m * width:(m + 1) * width] for m in range(len(params_list))]
    return chunks, cost


def csa_greedy(
    g: np.ndarray,
    tol: float = DEFAULT_CUTOFF,
    max_fragments: int | None = None,
    restarts: int = 3,
    seed: int = 0,
    max_nfev: int = 4000,
    refine: bool | None = None,
) -> tuple[list[CSAFragment], bool]:
    """Greedily fit diagonal-pair fragments to the two-body tensor.

    Each fragment is a least-squares fit to the remaining residual, and the
    loop stops once the squared-residual cost sum_ijkl |b_ijkl|^2 drops
    below ``tol``.  A greedy sequence cannot terminate finitely in general
    (a single fragment spans only part of the tensor space), so when
    ``refine`` is true (default for up to 4 orbitals) all fragment
    parameters are re-optimized jointly at the end, which drives small
    systems to machine-precision reconstructions.

    Returns (fragments, converged); ``converged`` is False when the
    fragment cap (default 2 N^2) is reached with the cost still above
    ``tol``.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if max_fragments is None:
        max_fragments = 2 * n * n
    if refine is None:
        refine = n <= 4
    rng = np.random.default_rng(seed)
    n_theta = n_rotation_angles(n)
    residual = g.copy()
    params_list: list[np.ndarray] = []

    while float(np.sum(residual * residual)) > tol and len(params_list) < max_fragments:
        best_x, _ = _fit_one_fragment(residual, n, rng, restarts, max_nfev)
        tensor, _ = _fragment_tensor_from_params(best_x[:n_theta], best_x[n_theta:], n)
        params_list.append(best_x)
        residual = residual - tensor

    cost = float(np.sum(residual * residual))
    if refine and params_list and cost > 1e-24:
        refined, refined_cost = _joint_refine(g, params_list, n, max_nfev)
        if refined_cost < cost:
            params_list = refined
            cost = refined_cost

    fragments = []
    for chunk in params_list:
        _, lam = _fragment_tensor_from_params(chunk[:n_theta], chunk[n_theta:], n)
        fragments.append(CSAFragment(OrbitalRotation(chunk[:n_theta].copy()), lam))
    return fragments, cost <= tol


# ---------------------------------------------------------------------------
# orbital optimization of the Pauli 1-norm
# ---------------------------------------------------------------------------

_SMOOTHING_LADDER = (1e-2, 1e-3, 1e-4, 1e-6, 1e-8)


def orbital_optimize(
    H: MolecularHamiltonian,
    maxiter: int = 10000,
) -> tuple[OrbitalRotation, MolecularHamiltonian, bool]:
    """Minimize the Pauli 1-norm over orbital rotations.

    The objective is a sum of absolute values whose kinks sit exactly at
    the symmetry zeros of molecular integrals, where finite-difference
    quasi-Newton descent stalls immediately.  Each descent therefore runs
    on the smoothed surrogate sum w sqrt(v^2 + eps^2) with eps driven from
    1e-2 down to 1e-8, then gets a derivative-free polish on the exact
    objective.  Up to three rotation angles the landscape is cheap enough
    to also multistart over a deterministic spread of initial angles.

    Returns (rotation, rotated Hamiltonian, converged).
    """
    n = H.n_orbitals
    n_theta = n_rotation_angles(n)
    if n_theta == 0:
        return OrbitalRotation.identity(n), H, True
    _, weights = pauli_norm_terms(H)

    def exact(theta):
        return pauli_one_norm(rotate_orbitals(H, OrbitalRotation(theta)))

    def smoothed(theta, eps):
        values, _ = pauli_norm_terms(rotate_orbitals(H, OrbitalRotation(theta)))
        return float(np.dot(weights, np.sqrt(values * values + eps * eps)))

    starts = [np.zeros(n_theta)]
    if n_theta <= 3:
        rng = np.random.default_rng(0)
        starts += [rng.uniform(-np.pi, np.pi, size=n_theta) for _ in range(7)]

    best_x = starts[0]
    best_f = exact(best_x)
    any_success = False
    for start in starts:
        x = start
        success = True
        for eps in _SMOOTHING_LADDER:
            result = scipy.optimize.minimize(
                smoothed,
                x,
                args=(eps,),
                method="BFGS",
                options={"maxiter": maxiter, "gtol": 1e-8},
            )
            x = result.x
            success = bool(result.success) and success
        value = exact(x)
        any_success = any_success or success
        if value < best_f:
            best_x, best_f = x, value
    polish = scipy.optimize.minimize(
        exact,
        best_x,
        method="Nelder-Mead",
        options={"maxiter": 4000, "xatol": 1e-10, "fatol": 1e-12},
    )
    any_success = any_success or bool(polish.success)
    if polish.fun < best_f:
        best_x, best_f = polish.x, polish.fun
    start_norm = pauli_one_norm(H)
    if best_f > start_norm:
        best_x, best_f = np.zeros(n_theta), start_norm
    rotation = OrbitalRotation(best_x)
    return rotation, rotate_orbitals(H, rotation), any_success


# ---------------------------------------------------------------------------
# decomposition containers and unitary counting
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class PauliDecomposition:
    terms: PauliSum
    one_norm: float


@dataclasses.dataclass(frozen=True)
class ACDecomposition:
    groups: tuple[AnticommutingGroup, ...]
    one_norm: float


@dataclasses.dataclass(frozen=True)
class CSADecomposition:
    fragments: tuple[CSAFragment, ...]
    one_body_eigenvalues: np.ndarray
    one_norm: float
    converged: bool


@dataclasses.dataclass(frozen=True)
class DFDecomposition:
    fragments: tuple[DFFragment, ...]
    one_body_eigenvalues: np.ndarray
    one_norm: float


Decomposition = (
    PauliDecomposition | ACDecomposition | CSADecomposition | DFDecomposition
)


def pauli_decomposition(H: MolecularHamiltonian) -> PauliDecomposition:
    return PauliDecomposition(terms=jordan_wigner(H), one_norm=pauli_one_norm(H))


def ac_decomposition(H: MolecularHamiltonian) -> ACDecomposition:
    groups = tuple(ac_grouping_majorana(H))
    return ACDecomposition(groups=groups, one_norm=ac_one_norm(groups))


def df_decomposition(H: MolecularHamiltonian, tol=DEFAULT_CUTOFF, method="eigen") -> DFDecomposition:
    fragments = tuple(df_decompose(H.g, tol=tol, method=method))
    mu = one_body_eigenvalues(H)
    return DFDecomposition(
        fragments=fragments,
        one_body_eigenvalues=mu,
        one_norm=df_one_norm(fragments, mu),
    )


def csa_decomposition(
    H: MolecularHamiltonian,
    tol=DEFAULT_CUTOFF,
    max_fragments=None,
    restarts=3,
    seed=0,
) -> CSADecomposition:
    fragments, converged = csa_greedy(
        H.g, tol=tol, max_fragments=max_fragments, restarts=restarts, seed=seed
    )
    mu = one_body_eigenvalues(H)
    return CSADecomposition(
        fragments=tuple(fragments),
        one_body_eigenvalues=mu,
        one_norm=csa_one_norm(fragments, mu),
        converged=converged,
    )


def _one_body_reflection_count(mu, cutoff):
    # each orbital with |mu_i|/2 above cutoff contributes one reflection per spin
    return 2 * int(np.sum(np.abs(np.asarray(mu)) / 2.0 > cutoff))


def count_unitaries(decomposition: Decomposition, cutoff: float = DEFAULT_CUTOFF) -> int:
    """Number of LCU unitaries with coefficient magnitude above ``cutoff``.

    Pauli: non-identity words; AC: groups; DF: two-body fragments plus
    one-body reflections; CSA: reflection products plus one-body reflections.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    if isinstance(decomposition, PauliDecomposition):
        return decomposition.terms.n_terms(cutoff=cutoff)
    if isinstance(decomposition, ACDecomposition):
        return sum(1 for group in decomposition.groups if group.group_norm > cutoff)
    if isinstance(decomposition, DFDecomposition):
        count = _one_body_reflection_count(decomposition.one_body_eigenvalues, cutoff)
        for fragment in decomposition.fragments:
            if 0.5 * np.abs(fragment.eps).sum() ** 2 > cutoff:
                count += 1
        return count
    if isinstance(decomposition, CSADecomposition):
        count = _one_body_reflection_count(decomposition.one_body_eigenvalues, cutoff)
        for fragment in decomposition.fragments:
            lam = fragment.diag
            n = lam.shape[0]
            for i in range(n):
                if np.abs(lam[i, i]) / 2.0 > cutoff:
                    count += 1
                for j in range(i + 1, n):
                    # four spin-resolved reflection products r_is r_jt
                    count += 4 * int(np.abs(lam[i, j]) / 2.0 > cutoff)
        return count
    raise TypeError(f"unsupported decomposition type {type(decomposition).__name__}")
