"""Input validation helpers shared by the functional API and the estimators."""

import numpy as np

SYMMETRY_TOL = 1e-8

#: index permutations of g_ijkl that leave a real-orbital two-electron tensor
#: invariant (identity excluded)
TWO_BODY_SYMMETRIES = (
    (1, 0, 3, 2),
    (2, 3, 0, 1),
    (3, 2, 1, 0),
    (1, 0, 2, 3),
    (0, 1, 3, 2),
    (2, 3, 1, 0),
    (3, 2, 0, 1),
)


def check_finite(arr, name):
    arr = np.asarray(arr, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_symmetric(mat, name, tol=SYMMETRY_TOL):
    mat = check_finite(mat, name)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {mat.shape}")
    dev = np.max(np.abs(mat - mat.T)) if mat.size else 0.0
    if dev > tol:
        raise ValueError(f"{name} is not symmetric: max |A - A.T| = {dev:.3e} > {tol:.1e}")
    return mat


def check_two_body(g, name="g", tol=SYMMETRY_TOL):
    """Validate the 8-fold index symmetry of a real two-electron tensor."""
    g = check_finite(g, name)
    if g.ndim != 4 or len(set(g.shape)) != 1:
        raise ValueError(f"{name} must have shape (N, N, N, N), got {g.shape}")
    for perm in TWO_BODY_SYMMETRIES:
        dev = np.max(np.abs(g - g.transpose(perm))) if g.size else 0.0
        if dev > tol:
            raise ValueError(
                f"{name} violates two-electron index symmetry {perm}: "
                f"max deviation {dev:.3e} > {tol:.1e}"
            )
    return g


def symmetrize_two_body(g):
    """Average a nearly symmetric tensor over the full 8-fold symmetry group."""
    g = np.asarray(g, dtype=float)
    acc = g.copy()
    for perm in TWO_BODY_SYMMETRIES:
        acc += g.transpose(perm)
    return acc / (len(TWO_BODY_SYMMETRIES) + 1)


def check_molecular_hamiltonian(value):
    """Return ``value`` if it is a MolecularHamiltonian, raise otherwise.

    Used by the estimators so that a clear error surfaces when an array or
    a path is passed where a Hamiltonian object is required.
    """
    from .hamiltonian import MolecularHamiltonian

    if not isinstance(value, MolecularHamiltonian):
        raise TypeError(
            "expected a MolecularHamiltonian; load one with "
            f"blisslcu.load_fcidump(...), got {type(value).__name__}"
        )
    return value
