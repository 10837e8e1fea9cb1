#!/usr/bin/env python3
"""Generate the committed FCIDUMP fixtures (offline tooling, not part of the
installed package).

Minimal-basis (STO-3G) restricted Hartree-Fock in canonical molecular
orbitals, with one- and two-electron integrals evaluated by the
McMurchie-Davidson scheme.  Each fixture is written as tests/fixtures/
<name>.fcidump plus a <name>.meta.json provenance sidecar (geometry, basis,
orbital set, SCF energy).

Usage:  python tools/make_fixtures.py [outdir]
"""

from __future__ import annotations

import json
import math
import pathlib
import sys
from functools import lru_cache

import numpy as np
from scipy.special import hyp1f1

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))
from blisslcu.fcidump import write_raw_integrals  # noqa: E402

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903

# STO-3G exponents/coefficients (s and sp shells, first row)
STO3G = {
    "H": [("s", [3.425250914, 0.6239137298, 0.1688554040],
           [0.1543289673, 0.5353281423, 0.4446345422])],
    "Li": [("s", [16.11957475, 2.936200663, 0.7946504870],
            [0.1543289673, 0.5353281423, 0.4446345422]),
           ("sp", [0.6362897469, 0.1478600533, 0.04808867840],
            [-0.09996722919, 0.3995128261, 0.7001154689],
            [0.1559162750, 0.6076837186, 0.3919573931])],
    "Be": [("s", [30.16787069, 5.495115306, 1.487192653],
            [0.1543289673, 0.5353281423, 0.4446345422]),
           ("sp", [1.314833110, 0.3055389383, 0.09937074560],
            [-0.09996722919, 0.3995128261, 0.7001154689],
            [0.1559162750, 0.6076837186, 0.3919573931])],
    "N": [("s", [99.10616896, 18.05231239, 4.885660238],
           [0.1543289673, 0.5353281423, 0.4446345422]),
          ("sp", [3.780455879, 0.8784966449, 0.2857143744],
           [-0.09996722919, 0.3995128261, 0.7001154689],
           [0.1559162750, 0.6076837186, 0.3919573931])],
    "O": [("s", [130.7093214, 23.80886605, 6.443608313],
           [0.1543289673, 0.5353281423, 0.4446345422]),
          ("sp", [5.033151319, 1.169596125, 0.3803889600],
           [-0.09996722919, 0.3995128261, 0.7001154689],
           [0.1559162750, 0.6076837186, 0.3919573931])],
}

CHARGES = {"H": 1, "Li": 3, "Be": 4, "N": 7, "O": 8}


# ---------------------------------------------------------------------------
# McMurchie-Davidson primitives
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def hermite_e(i, j, t, qx, a, b):
    """Hermite expansion coefficient E_t^{ij} for exponents (a, b), X_AB=qx."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-mu * qx * qx)
    if j == 0:
        return (
            hermite_e(i - 1, j, t - 1, qx, a, b) / (2 * p)
            - (b * qx / p) * hermite_e(i - 1, j, t, qx, a, b)
            + (t + 1) * hermite_e(i - 1, j, t + 1, qx, a, b)
        )
    return (
        hermite_e(i, j - 1, t - 1, qx, a, b) / (2 * p)
        + (a * qx / p) * hermite_e(i, j - 1, t, qx, a, b)
        + (t + 1) * hermite_e(i, j - 1, t + 1, qx, a, b)
    )


def boys(n, t):
    return hyp1f1(n + 0.5, n + 1.5, -t) / (2.0 * n + 1.0)


@lru_cache(maxsize=None)
def hermite_r(t, u, v, n, p, x, y, z):
    """Hermite Coulomb auxiliary integral R^n_{tuv}."""
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, p * (x * x + y * y + z * z))
    if t > 0:
        value = x * hermite_r(t - 1, u, v, n + 1, p, x, y, z)
        if t > 1:
            value += (t - 1) * hermite_r(t - 2, u, v, n + 1, p, x, y, z)
        return value
    if u > 0:
        value = y * hermite_r(t, u - 1, v, n + 1, p, x, y, z)
        if u > 1:
            value += (u - 1) * hermite_r(t, u - 2, v, n + 1, p, x, y, z)
        return value
    value = z * hermite_r(t, u, v - 1, n + 1, p, x, y, z)
    if v > 1:
        value += (v - 1) * hermite_r(t, u, v - 2, n + 1, p, x, y, z)
    return value


def overlap_prim(a, lmn1, acenter, b, lmn2, bcenter):
    p = a + b
    value = 1.0
    for dim in range(3):
        value *= hermite_e(lmn1[dim], lmn2[dim], 0, acenter[dim] - bcenter[dim], a, b)
    return value * (math.pi / p) ** 1.5


def kinetic_prim(a, lmn1, acenter, b, lmn2, bcenter):
    l2, m2, n2 = lmn2
    term0 = b * (2 * (l2 + m2 + n2) + 3) * overlap_prim(a, lmn1, acenter, b, lmn2, bcenter)
    term1 = 0.0
    term2 = 0.0
    for dim, shift in ((0, (2, 0, 0)), (1, (0, 2, 0)), (2, (0, 0, 2))):
        raised = tuple(lmn2[d] + shift[d] for d in range(3))
        term1 += overlap_prim(a, lmn1, acenter, b, raised, bcenter)
        if lmn2[dim] > 1:
            lowered = tuple(lmn2[d] - shift[d] for d in range(3))
            term2 += lmn2[dim] * (lmn2[dim] - 1) * overlap_prim(a, lmn1, acenter, b, lowered, bcenter)
    return term0 - 2.0 * b * b * term1 - 0.5 * term2


def nuclear_prim(a, lmn1, acenter, b, lmn2, bcenter, ccenter):
    p = a + b
    pcenter = [(a * acenter[d] + b * bcenter[d]) / p for d in range(3)]
    value = 0.0
    for t in range(lmn1[0] + lmn2[0] + 1):
        e_x = hermite_e(lmn1[0], lmn2[0], t, acenter[0] - bcenter[0], a, b)
        if e_x == 0.0:
            continue
        for u in range(lmn1[1] + lmn2[1] + 1):
            e_y = hermite_e(lmn1[1], lmn2[1], u, acenter[1] - bcenter[1], a, b)
            if e_y == 0.0:
                continue
            for v in range(lmn1[2] + lmn2[2] + 1):
                e_z = hermite_e(lmn1[2], lmn2[2], v, acenter[2] - bcenter[2], a, b)
                if e_z == 0.0:
                    continue
                value += e_x * e_y * e_z * hermite_r(
                    t, u, v, 0, p,
                    pcenter[0] - ccenter[0],
                    pcenter[1] - ccenter[1],
                    pcenter[2] - ccenter[2],
                )
    return value * 2.0 * math.pi / p


def eri_prim(a, lmn1, ac, b, lmn2, bc, c, lmn3, cc, d, lmn4, dc):
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    pcenter = [(a * ac[i] + b * bc[i]) / p for i in range(3)]
    qcenter = [(c * cc[i] + d * dc[i]) / q for i in range(3)]
    pq = [pcenter[i] - qcenter[i] for i in range(3)]
    value = 0.0
    for t in range(lmn1[0] + lmn2[0] + 1):
        e1x = hermite_e(lmn1[0], lmn2[0], t, ac[0] - bc[0], a, b)
        if e1x == 0.0:
            continue
        for u in range(lmn1[1] + lmn2[1] + 1):
            e1y = hermite_e(lmn1[1], lmn2[1], u, ac[1] - bc[1], a, b)
            if e1y == 0.0:
                continue
            for v in range(lmn1[2] + lmn2[2] + 1):
                e1z = hermite_e(lmn1[2], lmn2[2], v, ac[2] - bc[2], a, b)
                if e1z == 0.0:
                    continue
                e1 = e1x * e1y * e1z
                for tau in range(lmn3[0] + lmn4[0] + 1):
                    e2x = hermite_e(lmn3[0], lmn4[0], tau, cc[0] - dc[0], c, d)
                    if e2x == 0.0:
                        continue
                    for nu in range(lmn3[1] + lmn4[1] + 1):
                        e2y = hermite_e(lmn3[1], lmn4[1], nu, cc[1] - dc[1], c, d)
                        if e2y == 0.0:
                            continue
                        for phi in range(lmn3[2] + lmn4[2] + 1):
                            e2z = hermite_e(lmn3[2], lmn4[2], phi, cc[2] - dc[2], c, d)
                            if e2z == 0.0:
                                continue
                            sign = -1.0 if (tau + nu + phi) & 1 else 1.0
                            value += e1 * e2x * e2y * e2z * sign * hermite_r(
                                t + tau, u + nu, v + phi, 0, alpha, *pq
                            )
    return value * 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))


def prim_norm(a, lmn):
    l, m, n = lmn
    total = l + m + n

    def dfact(k):
        return math.prod(range(2 * k - 1, 0, -2)) if k > 0 else 1

    return (
        (2 * a / math.pi) ** 0.75
        * (4 * a) ** (total / 2.0)
        / math.sqrt(dfact(l) * dfact(m) * dfact(n))
    )


class BasisFunction:
    def __init__(self, center, lmn, exponents, coefficients):
        self.center = tuple(center)
        self.lmn = tuple(lmn)
        self.exponents = list(exponents)
        coefs = [c * prim_norm(a, lmn) for a, c in zip(exponents, coefficients)]
        # renormalize the contracted function
        self.coefficients = coefs
        norm = math.sqrt(self._self_overlap())
        self.coefficients = [c / norm for c in coefs]

    def _self_overlap(self):
        value = 0.0
        for a, ca in zip(self.exponents, self.coefficients):
            for b, cb in zip(self.exponents, self.coefficients):
                value += ca * cb * overlap_prim(a, self.lmn, self.center, b, self.lmn, self.center)
        return value


def build_basis(atoms):
    basis = []
    for symbol, center in atoms:
        for shell in STO3G[symbol]:
            if shell[0] == "s":
                _, exps, coefs = shell
                basis.append(BasisFunction(center, (0, 0, 0), exps, coefs))
            else:
                _, exps, s_coefs, p_coefs = shell
                basis.append(BasisFunction(center, (0, 0, 0), exps, s_coefs))
                for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    basis.append(BasisFunction(center, lmn, exps, p_coefs))
    return basis


def _contracted(prim_func, f1, f2, *extra):
    value = 0.0
    for a, ca in zip(f1.exponents, f1.coefficients):
        for b, cb in zip(f2.exponents, f2.coefficients):
            value += ca * cb * prim_func(a, f1.lmn, f1.center, b, f2.lmn, f2.center, *extra)
    return value


def integrals(atoms):
    basis = build_basis(atoms)
    nao = len(basis)
    smat = np.zeros((nao, nao))
    tmat = np.zeros((nao, nao))
    vmat = np.zeros((nao, nao))
    for i in range(nao):
        for j in range(i + 1):
            smat[i, j] = smat[j, i] = _contracted(overlap_prim, basis[i], basis[j])
            tmat[i, j] = tmat[j, i] = _contracted(kinetic_prim, basis[i], basis[j])
            vsum = 0.0
            for symbol, center in atoms:
                vsum -= CHARGES[symbol] * _contracted(
                    nuclear_prim, basis[i], basis[j], tuple(center)
                )
            vmat[i, j] = vmat[j, i] = vsum

    eri = np.zeros((nao, nao, nao, nao))
    for i in range(nao):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    value = 0.0
                    fi, fj, fk, fl = basis[i], basis[j], basis[k], basis[l]
                    for a, ca in zip(fi.exponents, fi.coefficients):
                        for b, cb in zip(fj.exponents, fj.coefficients):
                            for c, cc_ in zip(fk.exponents, fk.coefficients):
                                for d, cd in zip(fl.exponents, fl.coefficients):
                                    value += ca * cb * cc_ * cd * eri_prim(
                                        a, fi.lmn, fi.center, b, fj.lmn, fj.center,
                                        c, fk.lmn, fk.center, d, fl.lmn, fl.center,
                                    )
                    for idx in (
                        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
                    ):
                        eri[idx] = value
    hermite_e.cache_clear()
    hermite_r.cache_clear()
    return smat, tmat + vmat, eri


def nuclear_repulsion(atoms):
    energy = 0.0
    for i, (sym1, c1) in enumerate(atoms):
        for sym2, c2 in atoms[i + 1:]:
            dist = math.dist(c1, c2)
            energy += CHARGES[sym1] * CHARGES[sym2] / dist
    return energy


# ---------------------------------------------------------------------------
# restricted Hartree-Fock
# ---------------------------------------------------------------------------

def rhf(smat, hcore, eri, n_elec, e_nuc, max_iter=300):
    nocc = n_elec // 2
    assert 2 * nocc == n_elec, "RHF needs a closed shell"
    svals, svecs = np.linalg.eigh(smat)
    xmat = svecs @ np.diag(svals ** -0.5) @ svecs.T

    def fock(density):
        coulomb = np.einsum("pqrs,rs->pq", eri, density)
        exchange = np.einsum("prqs,rs->pq", eri, density)
        return hcore + coulomb - 0.5 * exchange

    density = np.zeros_like(hcore)
    energy = 0.0
    diis_f, diis_e = [], []
    for iteration in range(max_iter):
        fmat = fock(density)
        if iteration > 0:
            error = fmat @ density @ smat - smat @ density @ fmat
            diis_f.append(fmat.copy())
            diis_e.append(error.ravel())
            if len(diis_f) > 8:
                diis_f.pop(0)
                diis_e.pop(0)
            if len(diis_f) > 1:
                k = len(diis_f)
                bmat = -np.ones((k + 1, k + 1))
                bmat[k, k] = 0.0
                for a in range(k):
                    for b in range(k):
                        bmat[a, b] = diis_e[a] @ diis_e[b]
                rhs = np.zeros(k + 1)
                rhs[k] = -1.0
                try:
                    coefs = np.linalg.solve(bmat, rhs)[:k]
                    fmat = sum(c * f for c, f in zip(coefs, diis_f))
                except np.linalg.LinAlgError:
                    pass
        f_ortho = xmat.T @ fmat @ xmat
        _, c_ortho = np.linalg.eigh(f_ortho)
        cmat = xmat @ c_ortho
        new_density = 2.0 * cmat[:, :nocc] @ cmat[:, :nocc].T
        new_energy = 0.5 * np.einsum("pq,pq->", new_density, hcore + fock(new_density)) + e_nuc
        converged = (
            np.max(np.abs(new_density - density)) < 1e-10
            and abs(new_energy - energy) < 1e-12
        )
        density, energy = new_density, new_energy
        if converged and iteration > 1:
            return cmat, energy
    raise RuntimeError(f"SCF did not converge after {max_iter} iterations")


def canonical_mo_integrals(atoms, n_elec):
    smat, hcore, eri = integrals(atoms)
    e_nuc = nuclear_repulsion(atoms)
    cmat, e_scf = rhf(smat, hcore, eri, n_elec, e_nuc)
    h_mo = cmat.T @ hcore @ cmat
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", cmat, cmat, cmat, cmat, eri, optimize=True)
    return h_mo, eri_mo, e_nuc, e_scf


# ---------------------------------------------------------------------------
# geometries (Angstrom)
# ---------------------------------------------------------------------------

def molecule_geometries():
    geoms = {}
    geoms["h2"] = ([("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.0))], 2)
    geoms["lih"] = ([("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.0))], 4)
    geoms["beh2"] = (
        [("Be", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.0)), ("H", (0.0, 0.0, -1.0))],
        6,
    )
    angle = math.radians(107.6)
    geoms["h2o"] = (
        [
            ("O", (0.0, 0.0, 0.0)),
            ("H", (math.sin(angle / 2), 0.0, math.cos(angle / 2))),
            ("H", (-math.sin(angle / 2), 0.0, math.cos(angle / 2))),
        ],
        10,
    )
    # NH3 umbrella: polar angle beta from the C3 axis with HNH = 107 deg
    hnh = math.radians(107.0)
    cos_beta_sq = (1.0 + 2.0 * math.cos(hnh)) / 3.0
    beta = math.acos(math.sqrt(cos_beta_sq))
    hydrogens = []
    for k in range(3):
        phi = 2.0 * math.pi * k / 3.0
        hydrogens.append(
            ("H", (math.sin(beta) * math.cos(phi), math.sin(beta) * math.sin(phi), math.cos(beta)))
        )
    geoms["nh3"] = ([("N", (0.0, 0.0, 0.0))] + hydrogens, 10)
    for n_atoms in (2, 4, 6, 8, 10):
        chain = [("H", (0.0, 0.0, 1.4 * k)) for k in range(n_atoms)]
        geoms[f"hchain_{n_atoms:02d}"] = (chain, n_atoms)
    return geoms


def to_bohr(atoms):
    return [
        (symbol, tuple(ANGSTROM_TO_BOHR * x for x in center)) for symbol, center in atoms
    ]


def main():
    outdir = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else (
        pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"
    )
    outdir.mkdir(parents=True, exist_ok=True)
    for name, (atoms_angstrom, n_elec) in molecule_geometries().items():
        atoms = to_bohr(atoms_angstrom)
        h_mo, eri_mo, e_nuc, e_scf = canonical_mo_integrals(atoms, n_elec)
        path = outdir / f"{name}.fcidump"
        write_raw_integrals(path, h_mo, eri_mo, e_nuc, n_elec, ms2=0, tol=1e-12)
        meta = {
            "name": name,
            "basis": "STO-3G",
            "orbitals": "canonical RHF molecular orbitals",
            "geometry_angstrom": [
                {"symbol": s, "xyz": list(c)} for s, c in atoms_angstrom
            ],
            "n_elec": n_elec,
            "n_orbitals": h_mo.shape[0],
            "scf_energy": e_scf,
            "nuclear_repulsion": e_nuc,
            "generator": "tools/make_fixtures.py",
        }
        (outdir / f"{name}.meta.json").write_text(json.dumps(meta, indent=2) + "\n")
        print(f"{name}: N={h_mo.shape[0]} E_SCF={e_scf:.8f}")


if __name__ == "__main__":
    main()
