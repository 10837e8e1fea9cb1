"""Spatial-orbital electronic Hamiltonians and orbital rotations.

The Hamiltonian is stored in the spin-summed excitation-operator form

    H = e0 + sum_ij h_ij E_ij + sum_ijkl g_ijkl E_ij E_kl,

with E_ij = sum_sigma a^dag_{i,sigma} a_{j,sigma} acting on N spatial
orbitals.  In this convention g_ijkl is half the chemist integral (ij|kl)
and h_ij absorbs the contraction -sum_k g_ikkj of the two-electron tensor.
All tensors are real and carry the full 8-fold index symmetry.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .validation import check_finite, check_symmetric, check_two_body

__all__ = [
    "MolecularHamiltonian",
    "OrbitalRotation",
    "rotate_orbitals",
    "rotation_matrix",
    "n_rotation_angles",
]


@dataclasses.dataclass(frozen=True)
class MolecularHamiltonian:
    """Immutable container for (e0, h, g) over N spatial orbitals.

    Attributes:
        e0: scalar (identity) coefficient in Hartree.
        h: one-body coefficient matrix, shape (N, N), symmetric.
        g: two-body coefficient tensor, shape (N, N, N, N), 8-fold symmetric.
        n_elec: optional electron count carried over from the integral file;
            used as the default target sector for symmetry shifts.
    """

    e0: float
    h: np.ndarray
    g: np.ndarray
    n_elec: int | None = None

    def __post_init__(self):
        h = check_symmetric(self.h, "h").copy()
        g = check_two_body(self.g, "g").copy()
        if h.shape[0] != g.shape[0]:
            raise ValueError(
                f"inconsistent orbital counts: h has {h.shape[0]}, g has {g.shape[0]}"
            )
        if self.n_elec is not None and (self.n_elec < 0 or self.n_elec != int(self.n_elec)):
            raise ValueError(f"n_elec must be a nonnegative integer, got {self.n_elec}")
        h.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "e0", float(self.e0))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)
        check_finite([self.e0], "e0")

    @property
    def n_orbitals(self) -> int:
        return self.h.shape[0]

    def with_tensors(self, e0=None, h=None, g=None) -> "MolecularHamiltonian":
        """Copy with some tensors replaced; validation reruns on the result."""
        return MolecularHamiltonian(
            e0=self.e0 if e0 is None else e0,
            h=self.h if h is None else h,
            g=self.g if g is None else g,
            n_elec=self.n_elec,
        )

    def allclose(self, other: "MolecularHamiltonian", atol=1e-12) -> bool:
        return (
            self.n_orbitals == other.n_orbitals
            and abs(self.e0 - other.e0) <= atol
            and np.allclose(self.h, other.h, atol=atol, rtol=0.0)
            and np.allclose(self.g, other.g, atol=atol, rtol=0.0)
        )


def n_rotation_angles(n_orbitals: int) -> int:
    return n_orbitals * (n_orbitals - 1) // 2


def _orbitals_from_angles(n_angles: int) -> int:
    n = int(round((1 + np.sqrt(1 + 8 * n_angles)) / 2))
    if n_rotation_angles(n) != n_angles:
        raise ValueError(f"theta length {n_angles} is not N(N-1)/2 for any integer N")
    return n


@dataclasses.dataclass(frozen=True)
class OrbitalRotation:
    """Real orthogonal orbital rotation U = exp(K) parameterized by the
    strictly lower triangle of the antisymmetric generator K (radians)."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float)).ravel()
        check_finite(theta, "theta")
        _orbitals_from_angles(theta.size)
        theta = theta.copy()
        theta.flags.writeable = False
        object.__setattr__(self, "theta", theta)

    @property
    def n_orbitals(self) -> int:
        return _orbitals_from_angles(self.theta.size)

    def matrix(self) -> np.ndarray:
        return rotation_matrix(self.theta)

    def inverse(self) -> "OrbitalRotation":
        return OrbitalRotation(-self.theta)

    @classmethod
    def identity(cls, n_orbitals: int) -> "OrbitalRotation":
        return cls(np.zeros(n_rotation_angles(n_orbitals)))


def rotation_matrix(theta: np.ndarray) -> np.ndarray:
    """Orthogonal matrix exp(K) from the strict lower triangle of K.

    The exponential is evaluated through the eigendecomposition of the
    Hermitian matrix iK, which keeps U orthogonal to machine precision.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float)).ravel()
    n = _orbitals_from_angles(theta.size)
    kmat = np.zeros((n, n))
    rows, cols = np.tril_indices(n, -1)
    kmat[rows, cols] = theta
    kmat -= kmat.T
    # iK is Hermitian; exp(K) = V exp(-i diag(w)) V^dag is real orthogonal
    w, v = np.linalg.eigh(1j * kmat)
    u = (v * np.exp(-1j * w)) @ v.conj().T
    return np.ascontiguousarray(u.real)


def rotate_orbitals(H: MolecularHamiltonian, rotation: OrbitalRotation) -> MolecularHamiltonian:
    """Transform the Hamiltonian tensors to the rotated orbital basis.

    h' = U h U^T and g' is the four-index transform of g; e0 is unchanged,
    and so is the operator's spectrum on every electron-number sector.
    """
    if rotation.n_orbitals != H.n_orbitals:
        raise ValueError(
            f"rotation is for {rotation.n_orbitals} orbitals, Hamiltonian has {H.n_orbitals}"
        )
    u = rotation.matrix()
    h_new = u @ H.h @ u.T
    g_new = np.einsum("pi,qj,rk,sl,ijkl->pqrs", u, u, u, u, H.g, optimize=True)
    # exact index symmetry can drift at the last ulp; restore it explicitly
    h_new = 0.5 * (h_new + h_new.T)
    g_new = 0.5 * (g_new + g_new.transpose(1, 0, 2, 3))
    g_new = 0.5 * (g_new + g_new.transpose(0, 1, 3, 2))
    g_new = 0.5 * (g_new + g_new.transpose(2, 3, 0, 1))
    return H.with_tensors(h=h_new, g=g_new)
