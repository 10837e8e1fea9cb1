import numpy as np
import pytest

import blisslcu as bl
from blisslcu import PauliSum, PauliWord, anticommutes
from blisslcu.decompositions import ac_grouping, ac_one_norm

from oracles import random_hamiltonian


def word(text):
    return PauliWord.from_string(text)


def test_single_term_single_group():
    groups = ac_grouping(PauliSum(1, {word("X"): 0.7}))
    assert len(groups) == 1
    assert ac_one_norm(groups) == pytest.approx(0.7)


def test_pythagorean_pair():
    ps = PauliSum(1, {word("X"): 3.0, word("Z"): 4.0})
    groups = ac_grouping(ps)
    assert len(groups) == 1
    assert groups[0].group_norm == pytest.approx(5.0)


def test_identity_removed_first():
    ps = PauliSum(1, {PauliWord(1, 0, 0): 9.0, word("X"): 1.0})
    groups = ac_grouping(ps)
    assert sum(len(g) for g in groups) == 1


def test_partition_and_mutual_anticommutation(rng):
    ps = bl.jordan_wigner(random_hamiltonian(2, rng))
    groups = ac_grouping(ps)
    collected = {}
    for group in groups:
        members = list(group.member_terms)
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                assert anticommutes(members[a][0], members[b][0])
        norm = np.sqrt(sum(c * c for _, c in members))
        assert group.group_norm == pytest.approx(norm, abs=1e-12)
        for w, c in members:
            collected[(w.x, w.z)] = collected.get((w.x, w.z), 0.0) + c
    expected = {key: c for key, c in ps.raw_items() if key != (0, 0)}
    assert set(collected) == set(expected)
    for key, value in expected.items():
        assert collected[key] == pytest.approx(value, abs=1e-12)


def test_ac_norm_never_exceeds_pauli_norm(rng):
    for n in (1, 2, 3):
        H = random_hamiltonian(n, rng)
        ps = bl.jordan_wigner(H)
        assert ac_one_norm(ac_grouping(ps)) <= ps.one_norm() + 1e-12


def test_majorana_grouping_respects_pauli_norm(rng):
    for n in (2, 3):
        H = random_hamiltonian(n, rng)
        dec = bl.ac_decomposition(H)
        assert dec.one_norm <= bl.pauli_one_norm(H) + 1e-9
        for group in dec.groups:
            members = list(group.member_terms)
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    assert anticommutes(members[a][0], members[b][0])


def test_grouping_deterministic(rng):
    H = random_hamiltonian(2, rng)
    ps = bl.jordan_wigner(H)
    first = ac_grouping(ps)
    second = ac_grouping(ps)
    assert [g.member_terms for g in first] == [g.member_terms for g in second]
