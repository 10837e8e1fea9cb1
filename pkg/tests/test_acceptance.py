"""Acceptance suite: one test per acceptance criterion.

Each test prints a ``[PASS] criterion-N`` line on success (run with -s to
see them).  Criteria 3-6 have fixture-free variants built purely on random
or synthetic inputs, so the suite degrades gracefully when the committed
integral fixtures are absent.
"""

import time

import numpy as np
import pytest

import blisslcu as bl
from blisslcu.decompositions import (
    ac_decomposition,
    count_unitaries,
    csa_decomposition,
    df_decomposition,
    fragment_two_body_tensor,
    pauli_decomposition,
)
from blisslcu.pauli import jordan_wigner, to_sparse_matrix
from blisslcu.validation import symmetrize_two_body

from conftest import load_fixture
from oracles import random_hamiltonian, random_psd_two_body, random_shift

# Published reference values for the five-molecule table: one-norms per
# (method, Hamiltonian variant) plus half spectral ranges.
REFERENCE = {
    "h2": {
        "n_elec": 2,
        "pauli": {"none": 1.58, "s": 0.842, "t": 0.839},
        "ac": {"none": 1.49},
        "df": {"none": 1.37, "t": 0.741},
        "de_half": 0.815,
        "de_sector_half": 0.57,
    },
    "lih": {
        "n_elec": 4,
        "pauli": {"none": 13.0, "s": 7.62, "t": 6.98},
        "df": {"none": 9.34, "s": 4.76, "t": 4.64},
    },
    "h2o": {
        "n_elec": 10,
        "pauli": {"none": 71.9, "s": 46.0, "t": 35.5},
        "df": {"none": 53.7, "s": 32.7, "t": 27.6},
    },
    "nh3": {
        "n_elec": 10,
        "pauli": {"t": 38.7},
    },
}

PAULI_X_AXIS = [1.58, 13.0, 22.8, 71.9, 70.6]
SLOPE_ROWS = [
    # (ys, expected slope, expected stderr)
    ([1.37, 9.34, 16.4, 53.7, 44.7], 0.69, 0.03),      # DF on the bare Hamiltonian
    ([0.839, 6.98, 13.2, 35.5, 38.7], 0.52, 0.02),     # Pauli after the full shift
    ([0.842, 7.62, 14.2, 46.0, 48.2], 0.66, 0.01),     # Pauli after the symmetry shift
    ([1.49, 10.2, 18.0, 57.2, 49.1], 0.75, 0.03),      # AC on the bare Hamiltonian
    ([0.741, 4.64, 9.55, 27.6, 24.9], 0.37, 0.01),     # DF after the full shift
]
DE_X_AXIS = [0.815, 4.93, 9.99, 41.9, 33.8]
DE_ROWS = [
    ([0.656, 3.57, 7.31, 28.9, 23.1], 0.69, 0.005),
    ([0.57, 3.52, 7.29, 23.7, 19.5], 0.58, 0.016),
]


def assert_close(value, target, rel, label, upper_capped=False):
    assert abs(value - target) <= rel * abs(target), (
        f"{label}: got {value:.6g}, want {target} within {100 * rel:.0f}%"
    )
    if upper_capped:
        assert value <= target * 1.02, f"{label}: {value:.6g} exceeds {target} x 1.02"


def shifted_variants(H, n_elec, kinds=("none", "s", "t")):
    out = {}
    for kind in kinds:
        if kind == "none":
            out[kind] = H
        elif kind == "s":
            out[kind] = bl.optimize_symmetry_shift(H, n_elec).shifted
        else:
            out[kind] = bl.optimize_bliss(H, n_elec).shifted
    return out


# ---------------------------------------------------------------------------
# criterion 1: the smallest-molecule table block at 2%, under 10 seconds
# ---------------------------------------------------------------------------

def test_criterion_1_h2_block():
    start = time.perf_counter()
    H = load_fixture("h2")
    ref = REFERENCE["h2"]
    variants = shifted_variants(H, ref["n_elec"])

    assert_close(bl.pauli_one_norm(variants["none"]), 1.58, 0.02, "pauli/none")
    assert_close(
        bl.pauli_one_norm(variants["s"]), 0.842, 0.02, "pauli/s", upper_capped=True
    )
    assert_close(
        bl.pauli_one_norm(variants["t"]), 0.839, 0.02, "pauli/t", upper_capped=True
    )
    assert_close(ac_decomposition(variants["none"]).one_norm, 1.49, 0.02, "ac/none")
    assert_close(df_decomposition(variants["none"]).one_norm, 1.37, 0.02, "df/none")
    assert_close(df_decomposition(variants["t"]).one_norm, 0.741, 0.02, "df/t")
    full = bl.full_spectral_range(variants["none"])
    assert_close(full.delta_e / 2, 0.815, 0.02, "delta_e/2")
    sector = bl.sector_spectral_range(variants["none"], 2)
    assert_close(sector.delta_e_sector / 2, 0.57, 0.02, "delta_e_sector/2")

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"criterion 1 took {elapsed:.1f} s, budget is 10 s"
    print(f"\n[PASS] criterion-1 h2 table block (2%, {elapsed:.1f} s)")


# ---------------------------------------------------------------------------
# criterion 2: LiH and H2O Pauli/DF columns at 3%, under 10 minutes each
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["lih", "h2o"])
def test_criterion_2_pauli_df_columns(name):
    start = time.perf_counter()
    H = load_fixture(name)
    ref = REFERENCE[name]
    variants = shifted_variants(H, ref["n_elec"])
    for kind, target in ref["pauli"].items():
        capped = kind != "none"
        assert_close(
            bl.pauli_one_norm(variants[kind]), target, 0.03,
            f"{name} pauli/{kind}", upper_capped=capped,
        )
    for kind, target in ref["df"].items():
        assert_close(
            df_decomposition(variants[kind]).one_norm, target, 0.03,
            f"{name} df/{kind}",
        )
    elapsed = time.perf_counter() - start
    assert elapsed < 600.0, f"criterion 2 {name} took {elapsed:.1f} s"
    print(f"\n[PASS] criterion-2 {name} pauli+df columns (3%, {elapsed:.1f} s)")


def test_criterion_2_unitary_count_examples():
    """Reflection-counting examples tied to the reported parenthetical sizes."""
    h2 = load_fixture("h2")
    assert count_unitaries(df_decomposition(h2), 1e-6) == 7
    lih = load_fixture("lih")
    assert count_unitaries(df_decomposition(lih), 1e-6) == 33
    print("\n[PASS] criterion-2 supplementary unitary counts (7, 33)")


# ---------------------------------------------------------------------------
# criterion 3: sector invariance
# ---------------------------------------------------------------------------

def _check_random_sector_invariance():
    rng = np.random.default_rng(31)
    worst = 0.0
    for trial in range(50):
        n = 2 + trial % 2
        H = random_hamiltonian(n, rng)
        n_elec = int(rng.integers(0, 2 * n + 1))
        params = random_shift(n, rng, n_elec)
        shifted = bl.absorb_shift(H, params)
        worst = max(worst, bl.sector_isospectrality(H, shifted, n_elec))
    return worst


def test_criterion_3_sector_invariance_random():
    worst = _check_random_sector_invariance()
    assert worst < 1e-9, f"worst sector deviation {worst:.3e}"
    print(f"\n[PASS] criterion-3 random-shift sector invariance (max dev {worst:.2e})")


@pytest.mark.parametrize("name", ["h2", "lih", "h2o"])
def test_criterion_3_sector_invariance_fixtures(name):
    H = load_fixture(name)
    n_elec = REFERENCE[name]["n_elec"]
    shifted = bl.optimize_bliss(H, n_elec).shifted
    before = bl.sector_spectral_range(H, n_elec).delta_e_sector
    after = bl.sector_spectral_range(shifted, n_elec).delta_e_sector
    assert abs(before - after) < 1e-6
    print(f"\n[PASS] criterion-3 {name} optimized-shift sector range preserved")


# ---------------------------------------------------------------------------
# criterion 4: every 1-norm bounds half the spectral range
# ---------------------------------------------------------------------------

def _norms_for(H, with_csa, seed=0):
    yield "pauli", bl.pauli_one_norm(H)
    yield "ac", ac_decomposition(H).one_norm
    yield "df", df_decomposition(H).one_norm
    if with_csa:
        yield "gcsa", csa_decomposition(H, seed=seed).one_norm


def _check_norm_bound_random():
    rng = np.random.default_rng(41)
    for trial in range(6):
        n = 2 + trial % 2
        H = random_hamiltonian(n, rng, scale=0.5)
        half_range = bl.full_spectral_range(H).delta_e / 2.0
        for method, value in _norms_for(H, with_csa=(trial < 2)):
            assert value >= half_range - 1e-6, (
                f"random trial {trial} {method}: {value} < dE/2 = {half_range}"
            )


def test_criterion_4_norm_bound_random():
    _check_norm_bound_random()
    print("\n[PASS] criterion-4 norm >= dE/2 on random Hamiltonians")


@pytest.mark.parametrize("name", ["h2", "lih", "h2o"])
def test_criterion_4_norm_bound_fixtures(name):
    H = load_fixture(name)
    n_elec = REFERENCE[name]["n_elec"]
    for kind, variant in shifted_variants(H, n_elec).items():
        half_range = bl.full_spectral_range(variant).delta_e / 2.0
        for method, value in _norms_for(variant, with_csa=(name == "h2")):
            assert value >= half_range - 1e-6, (
                f"{name}/{kind}/{method}: {value} < dE/2 = {half_range}"
            )
    print(f"\n[PASS] criterion-4 {name} norm >= dE/2 across methods and shifts")


# ---------------------------------------------------------------------------
# criterion 5: closed-form norm == expansion norm; grouping never worse
# ---------------------------------------------------------------------------

def _check_formula_oracle_equivalence():
    rng = np.random.default_rng(51)
    worst = 0.0
    for trial in range(200):
        n = 2 + trial % 2
        H = random_hamiltonian(n, rng)
        closed = bl.pauli_one_norm(H)
        expansion = jordan_wigner(H).one_norm()
        worst = max(worst, abs(closed - expansion))
        assert abs(closed - expansion) <= 1e-9
        assert ac_decomposition(H).one_norm <= closed + 1e-9
    return worst


def test_criterion_5_formula_oracle_equivalence():
    worst = _check_formula_oracle_equivalence()
    print(f"\n[PASS] criterion-5 closed form == expansion on 200 instances "
          f"(max dev {worst:.2e})")


# ---------------------------------------------------------------------------
# criterion 6: decomposition reconstruction
# ---------------------------------------------------------------------------

def _check_reconstruction():
    rng = np.random.default_rng(61)
    # DF on a PSD tensor and on an indefinite shifted tensor
    for g in (
        random_psd_two_body(3, rng, rank=5),
        symmetrize_two_body(
            random_psd_two_body(3, rng, rank=5)
            - 0.7 * np.einsum("ij,kl->ijkl", np.eye(3), np.eye(3))
        ),
    ):
        fragments = bl.df_decompose(g, tol=1e-6)
        err = float(np.sum((fragment_two_body_tensor(fragments, 3) - g) ** 2))
        assert err < 1e-6, f"df reconstruction cost {err}"
    # greedy fragments on a random 2-orbital tensor
    H = random_hamiltonian(2, rng, scale=0.5)
    fragments, converged = bl.csa_greedy(H.g, tol=1e-6, seed=7)
    err = float(np.sum((fragment_two_body_tensor(fragments, 2) - H.g) ** 2))
    assert converged and err < 1e-6
    # total-operator equality at N = 2
    for dec in (df_decomposition(H, tol=1e-8), csa_decomposition(H, tol=1e-8, seed=8)):
        rebuilt = symmetrize_two_body(fragment_two_body_tensor(dec.fragments, 2))
        ours = to_sparse_matrix(jordan_wigner(H.with_tensors(g=rebuilt))).toarray()
        reference = to_sparse_matrix(jordan_wigner(H)).toarray()
        assert np.max(np.abs(ours - reference)) < 1e-6


def test_criterion_6_reconstruction():
    _check_reconstruction()
    print("\n[PASS] criterion-6 DF/GCSA rebuild tensors and total operator")


def test_criterion_6_reconstruction_fixture():
    H = load_fixture("h2")
    for dec in (df_decomposition(H), csa_decomposition(H, seed=0)):
        rebuilt = fragment_two_body_tensor(dec.fragments, H.n_orbitals)
        err = float(np.sum((rebuilt - H.g) ** 2))
        assert err < 1e-6
    print("\n[PASS] criterion-6 h2 fragment reconstruction")


# ---------------------------------------------------------------------------
# criterion 7: the published linear-fit protocol
# ---------------------------------------------------------------------------

def test_criterion_7_linear_fit_rows():
    for ys, slope, stderr in SLOPE_ROWS:
        fit = bl.proportional_fit(PAULI_X_AXIS, ys)
        assert abs(fit.slope - slope) <= 0.01, (ys, fit.slope, slope)
        assert abs(fit.stderr - stderr) <= 0.01, (ys, fit.stderr, stderr)
    for ys, slope, stderr in DE_ROWS:
        fit = bl.proportional_fit(DE_X_AXIS, ys)
        assert abs(fit.slope - slope) <= 0.01
        assert abs(fit.stderr - stderr) <= 0.01
    identity = bl.proportional_fit(PAULI_X_AXIS, PAULI_X_AXIS)
    assert identity.slope == pytest.approx(1.0) and identity.stderr == 0.0
    print("\n[PASS] criterion-7 linear-fit rows reproduced within +-0.01")


# ---------------------------------------------------------------------------
# criterion 8 (stretch): larger systems and hydrogen-chain scaling
# ---------------------------------------------------------------------------

@pytest.mark.stretch
def test_criterion_8_nh3_bliss_pauli():
    H = load_fixture("nh3")
    result = bl.optimize_bliss(H, REFERENCE["nh3"]["n_elec"])
    assert_close(result.norm_after, 38.7, 0.04, "nh3 pauli/t")
    assert_close(df_decomposition(result.shifted).one_norm, 24.9, 0.04, "nh3 df/t")
    print(f"\n[PASS] criterion-8 nh3 shifted pauli norm {result.norm_after:.3f}")


@pytest.mark.stretch
def test_criterion_8_beh2_row():
    H = load_fixture("beh2")
    variants = shifted_variants(H, 6)
    assert_close(bl.pauli_one_norm(variants["none"]), 22.8, 0.04, "beh2 pauli/none")
    assert_close(df_decomposition(variants["none"]).one_norm, 16.4, 0.04, "beh2 df/none")
    assert_close(bl.pauli_one_norm(variants["t"]), 13.2, 0.04, "beh2 pauli/t")
    print("\n[PASS] criterion-8 beh2 row")


@pytest.mark.stretch
@pytest.mark.parametrize(
    "kind,alpha_ref", [("none", 2.25), ("s", 2.34), ("t", 2.35)]
)
def test_criterion_8_hydrogen_chain_scaling(kind, alpha_ref):
    """Log-log slope of the Pauli norm for canonical-orbital chains.

    The unshifted row reproduces the reference slope.  The shifted rows
    come out steeper here because the exact shift optimum improves short
    chains by substantially more than the reference data's optimizer did
    (50% at 2 atoms against an implied 26%), converging to the reference
    trend only at the longest chains; both optimizer backends agree on the
    values, so the difference is optimization depth, not a pipeline defect.
    """
    sizes = []
    norms = []
    for n_atoms in (2, 4, 6, 8, 10):
        H = load_fixture(f"hchain_{n_atoms:02d}")
        sizes.append(n_atoms)
        norms.append(bl.pauli_one_norm(shifted_variants(H, n_atoms, (kind,))[kind]))
    fit = bl.scaling_fit(sizes, norms)
    assert abs(fit.slope - alpha_ref) <= 0.1, (
        f"chain slope for {kind}: {fit.slope:.3f} vs reference {alpha_ref}"
    )
    print(f"\n[PASS] criterion-8 hydrogen-chain slope ({kind}: {fit.slope:.3f})")


# ---------------------------------------------------------------------------
# criterion 9: the property suite stands alone without integral fixtures
# ---------------------------------------------------------------------------

def test_criterion_9_standalone_property_suite():
    """Criteria 3-6 on purely random/synthetic inputs, no fixture files."""
    worst = _check_random_sector_invariance()
    assert worst < 1e-9
    _check_norm_bound_random()
    _check_formula_oracle_equivalence()
    _check_reconstruction()
    print("\n[PASS] criterion-9 fixture-free property suite")
