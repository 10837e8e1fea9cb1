"""Exact spectra over Fock space and electron-number sectors.

The Hamiltonian conserves the alpha and beta occupation numbers
separately, so the Fock space splits into (n_alpha, n_beta) blocks.  Each
block is built in its Slater-determinant basis with Slater-Condon rules
applied directly to the (h, g) tensors, avoiding any 2^(2N)-dimensional
object.  Small blocks are diagonalized densely; large ones fall back to
Krylov iterations for the extremal pair.
"""

from __future__ import annotations

import dataclasses
import itertools

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .hamiltonian import MolecularHamiltonian

__all__ = [
    "SpectralReport",
    "full_spectral_range",
    "sector_spectral_range",
    "sector_eigenvalues",
    "sector_isospectrality",
    "DENSE_BLOCK_LIMIT",
    "SECTOR_DIMENSION_LIMIT",
    "MAX_FULL_SPACE_ORBITALS",
]

DENSE_BLOCK_LIMIT = 4000
SECTOR_DIMENSION_LIMIT = 200_000
MAX_FULL_SPACE_ORBITALS = 8


@dataclasses.dataclass(frozen=True)
class SpectralReport:
    """Extremal eigenvalues over the full Fock space and/or one sector."""

    e_min_full: float | None = None
    e_max_full: float | None = None
    delta_e: float | None = None
    sector: int | None = None
    e_min_sector: float | None = None
    e_max_sector: float | None = None
    delta_e_sector: float | None = None

    def __post_init__(self):
        if self.delta_e is not None and self.delta_e_sector is not None:
            if self.delta_e < self.delta_e_sector - 1e-9:
                raise ValueError(
                    "sector spectral range exceeds the full-space range: "
                    f"{self.delta_e_sector} > {self.delta_e}"
                )

    def merged_with(self, other: "SpectralReport") -> "SpectralReport":
        fields = {
            name: getattr(self, name) if getattr(self, name) is not None else getattr(other, name)
            for name in (f.name for f in dataclasses.fields(self))
        }
        return SpectralReport(**fields)


def _masks_with_popcount(n_orbitals, count):
    return [
        sum(1 << i for i in occ)
        for occ in itertools.combinations(range(n_orbitals), count)
    ]


def _occupied(mask, n):
    return [i for i in range(n) if mask >> i & 1]


def _single_sign(mask, i, a):
    """Parity of moving an electron i -> a within one spin channel."""
    lo, hi = (i, a) if i < a else (a, i)
    between = mask & ((1 << hi) - (1 << (lo + 1)))
    return -1.0 if between.bit_count() & 1 else 1.0


def _spin_singles(masks, index, n):
    """All single excitations within one spin channel.

    Returns parallel arrays (row_det, col_det, i, a, sign).
    """
    rows, cols, iidx, aidx, signs = [], [], [], [], []
    for det_idx, mask in enumerate(masks):
        occ = _occupied(mask, n)
        for i in occ:
            for a in range(n):
                if mask >> a & 1:
                    continue
                target = mask ^ (1 << i) ^ (1 << a)
                rows.append(det_idx)
                cols.append(index[target])
                iidx.append(i)
                aidx.append(a)
                signs.append(_single_sign(mask, i, a))
    return (
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(iidx, dtype=np.int64),
        np.asarray(aidx, dtype=np.int64),
        np.asarray(signs, dtype=float),
    )


def _spin_doubles(masks, index, n, w):
    """Same-spin double excitations: (row_det, col_det, value) arrays."""
    rows, cols, vals = [], [], []
    for det_idx, mask in enumerate(masks):
        occ = _occupied(mask, n)
        virt = [a for a in range(n) if not mask >> a & 1]
        for i, j in itertools.combinations(occ, 2):
            for a, b in itertools.combinations(virt, 2):
                sign = _single_sign(mask, i, a)
                inter = mask ^ (1 << i) ^ (1 << a)
                sign *= _single_sign(inter, j, b)
                target = inter ^ (1 << j) ^ (1 << b)
                value = w[i, a, j, b] - w[i, b, j, a]
                rows.append(det_idx)
                cols.append(index[target])
                vals.append(sign * value)
    return (
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(vals, dtype=float),
    )


def _block_matrix(H: MolecularHamiltonian, n_alpha, n_beta, want_dense):
    """Hamiltonian block over determinants with (n_alpha, n_beta) occupation."""
    n = H.n_orbitals
    g = H.g
    w = 2.0 * g
    t = H.h + np.einsum("ikkj->ij", g)
    jmat = np.einsum("iijj->ij", w)
    kmat = np.einsum("ijji->ij", w)
    w_dir = np.einsum("iajj->iaj", w)
    w_ex = np.einsum("ijja->iaj", w)

    amasks = _masks_with_popcount(n, n_alpha)
    bmasks = _masks_with_popcount(n, n_beta)
    aindex = {m: i for i, m in enumerate(amasks)}
    bindex = {m: i for i, m in enumerate(bmasks)}
    na, nb = len(amasks), len(bmasks)
    dim = na * nb

    occ_a = np.array([[m >> i & 1 for i in range(n)] for m in amasks], dtype=float)
    occ_b = np.array([[m >> i & 1 for i in range(n)] for m in bmasks], dtype=float)

    tdiag = np.diag(t)
    e_a = occ_a @ tdiag + 0.5 * np.einsum("pi,ij,pj->p", occ_a, jmat - kmat, occ_a)
    e_b = occ_b @ tdiag + 0.5 * np.einsum("pi,ij,pj->p", occ_b, jmat - kmat, occ_b)
    e_ab = occ_a @ jmat @ occ_b.T
    diag = (H.e0 + e_a[:, None] + e_b[None, :] + e_ab).ravel()

    rows = [np.arange(dim, dtype=np.int64)]
    cols = [np.arange(dim, dtype=np.int64)]
    vals = [diag]

    a_singles = _spin_singles(amasks, aindex, n)
    b_singles = _spin_singles(bmasks, bindex, n)
    q_all = np.arange(nb, dtype=np.int64)
    p_all = np.arange(na, dtype=np.int64)

    # alpha singles: value = t[i,a] + sum_{j in alpha} (dir - ex) + sum_{j in beta} dir
    for p, p2, i, a, sign in zip(*a_singles):
        alpha_part = t[i, a] + occ_a[p] @ (w_dir[i, a] - w_ex[i, a])
        beta_part = occ_b @ w_dir[i, a]
        rows.append(p * nb + q_all)
        cols.append(p2 * nb + q_all)
        vals.append(sign * (alpha_part + beta_part))
    for q, q2, j, b, sign in zip(*b_singles):
        beta_part = t[j, b] + occ_b[q] @ (w_dir[j, b] - w_ex[j, b])
        alpha_part = occ_a @ w_dir[j, b]
        rows.append(p_all * nb + q)
        cols.append(p_all * nb + q2)
        vals.append(sign * (beta_part + alpha_part))

    # same-spin doubles are independent of the other spin's occupation
    dr, dc, dv = _spin_doubles(amasks, aindex, n, w)
    for p, p2, value in zip(dr, dc, dv):
        rows.append(p * nb + q_all)
        cols.append(p2 * nb + q_all)
        vals.append(np.full(nb, value))
    dr, dc, dv = _spin_doubles(bmasks, bindex, n, w)
    for q, q2, value in zip(dr, dc, dv):
        rows.append(p_all * nb + q)
        cols.append(p_all * nb + q2)
        vals.append(np.full(na, value))

    # opposite-spin doubles: Coulomb term only
    bq, bq2, bj, bb, bsign = b_singles
    if bq.size:
        for p, p2, i, a, sign in zip(*a_singles):
            values = sign * bsign * w[i, a, bj, bb]
            rows.append(p * nb + bq)
            cols.append(p2 * nb + bq2)
            vals.append(values)

    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    matrix = scipy.sparse.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    if want_dense:
        return matrix.toarray()
    return matrix


def _iter_blocks(n, n_elec=None):
    for n_alpha in range(n + 1):
        for n_beta in range(n + 1):
            if n_elec is not None and n_alpha + n_beta != n_elec:
                continue
            yield n_alpha, n_beta


def _block_extremes(H, n_alpha, n_beta):
    from math import comb

    dim = comb(H.n_orbitals, n_alpha) * comb(H.n_orbitals, n_beta)
    if dim <= DENSE_BLOCK_LIMIT:
        eigs = np.linalg.eigvalsh(_block_matrix(H, n_alpha, n_beta, want_dense=True))
        return float(eigs[0]), float(eigs[-1])
    matrix = _block_matrix(H, n_alpha, n_beta, want_dense=False)
    low = scipy.sparse.linalg.eigsh(matrix, k=1, which="SA", return_eigenvectors=False)
    high = scipy.sparse.linalg.eigsh(matrix, k=1, which="LA", return_eigenvectors=False)
    return float(low[0]), float(high[0])


def full_spectral_range(H: MolecularHamiltonian) -> SpectralReport:
    """Extremal eigenvalues over the entire Fock space (all sectors)."""
    n = H.n_orbitals
    if n > MAX_FULL_SPACE_ORBITALS:
        raise ValueError(
            f"full-space scan capped at {MAX_FULL_SPACE_ORBITALS} orbitals, got {n}"
        )
    e_min = np.inf
    e_max = -np.inf
    for n_alpha, n_beta in _iter_blocks(n):
        lo, hi = _block_extremes(H, n_alpha, n_beta)
        e_min = min(e_min, lo)
        e_max = max(e_max, hi)
    return SpectralReport(e_min_full=e_min, e_max_full=e_max, delta_e=e_max - e_min)


def _check_sector(H, n_elec):
    from math import comb

    n = H.n_orbitals
    if n_elec < 0 or n_elec > 2 * n:
        raise ValueError(f"n_elec = {n_elec} outside 0..{2 * n}")
    dim = sum(
        comb(n, n_alpha) * comb(n, n_elec - n_alpha)
        for n_alpha in range(max(0, n_elec - n), min(n, n_elec) + 1)
    )
    if dim > SECTOR_DIMENSION_LIMIT:
        raise ValueError(
            f"sector dimension {dim} exceeds the limit {SECTOR_DIMENSION_LIMIT}"
        )


def sector_spectral_range(H: MolecularHamiltonian, n_elec: int) -> SpectralReport:
    """Extremal eigenvalues over determinants with exactly n_elec electrons."""
    _check_sector(H, n_elec)
    e_min = np.inf
    e_max = -np.inf
    for n_alpha, n_beta in _iter_blocks(H.n_orbitals, n_elec):
        lo, hi = _block_extremes(H, n_alpha, n_beta)
        e_min = min(e_min, lo)
        e_max = max(e_max, hi)
    return SpectralReport(
        sector=n_elec,
        e_min_sector=e_min,
        e_max_sector=e_max,
        delta_e_sector=e_max - e_min,
    )


def sector_eigenvalues(H: MolecularHamiltonian, n_elec: int) -> np.ndarray:
    """Sorted eigenvalues of H restricted to the n_elec sector (all Sz blocks)."""
    _check_sector(H, n_elec)
    eigenvalues = []
    for n_alpha, n_beta in _iter_blocks(H.n_orbitals, n_elec):
        from math import comb

        dim = comb(H.n_orbitals, n_alpha) * comb(H.n_orbitals, n_beta)
        if dim > DENSE_BLOCK_LIMIT:
            raise ValueError(
                f"full sector spectrum needs dense blocks; dim {dim} too large"
            )
        block = _block_matrix(H, n_alpha, n_beta, want_dense=True)
        eigenvalues.append(np.linalg.eigvalsh(block))
    return np.sort(np.concatenate(eigenvalues))


def sector_isospectrality(
    H1: MolecularHamiltonian, H2: MolecularHamiltonian, n_elec: int
) -> float:
    """Max absolute deviation between the sorted sector spectra of H1 and H2."""
    if H1.n_orbitals != H2.n_orbitals:
        raise ValueError("Hamiltonians act on different orbital counts")
    eig1 = sector_eigenvalues(H1, n_elec)
    eig2 = sector_eigenvalues(H2, n_elec)
    return float(np.max(np.abs(eig1 - eig2))) if eig1.size else 0.0
