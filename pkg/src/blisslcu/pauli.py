"""Pauli-word algebra in symplectic form and the Jordan-Wigner mapping.

A word over n qubits is stored as a pair of bit masks (x, z) plus a phase
from {1, i, -1, -i}: the operator is phase * W(x, z), where W(x, z) is the
literal tensor product of I/X/Y/Z single-qubit matrices with X's on the
bits of x, Z's on the bits of z and Y's where both are set.  Internally
W(x, z) = i^{popcount(x & z)} X^x Z^z, which makes products and
commutation checks exact integer arithmetic.

Spin orbital (i, sigma) of a spatial-orbital Hamiltonian maps to qubit
2 i + [sigma == beta]; occupied corresponds to qubit state |1>.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.sparse

from .hamiltonian import MolecularHamiltonian

__all__ = [
    "PauliWord",
    "PauliSum",
    "anticommutes",
    "jordan_wigner",
    "majorana_term_list",
    "to_sparse_matrix",
    "number_operator",
    "MAX_JW_ORBITALS",
    "PRUNE_TOL",
]

PRUNE_TOL = 1e-12
MAX_JW_ORBITALS = 16
_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)
_CHAR = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_MASKS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def _mul_masks(x1, z1, x2, z2):
    """Multiply W(x1,z1) W(x2,z2); return (x, z, phase_power mod 4)."""
    x = x1 ^ x2
    z = z1 ^ z2
    power = (
        (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        - (x & z).bit_count()
        + 2 * (z1 & x2).bit_count()
    )
    return x, z, power & 3


@dataclasses.dataclass(frozen=True)
class PauliWord:
    """Single Pauli product: phase * W(x, z) over n_qubits qubits."""

    n_qubits: int
    x: int = 0
    z: int = 0
    phase_power: int = 0

    def __post_init__(self):
        mask = (1 << self.n_qubits) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("x/z masks exceed the qubit register")
        object.__setattr__(self, "phase_power", self.phase_power & 3)

    @property
    def phase(self) -> complex:
        return _PHASES[self.phase_power]

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def normalized(self) -> "PauliWord":
        """The same word with phase reset to +1."""
        return PauliWord(self.n_qubits, self.x, self.z)

    def __mul__(self, other: "PauliWord") -> "PauliWord":
        if self.n_qubits != other.n_qubits:
            raise ValueError("cannot multiply words on different registers")
        x, z, power = _mul_masks(self.x, self.z, other.x, other.z)
        return PauliWord(self.n_qubits, x, z, power + self.phase_power + other.phase_power)

    def __str__(self):
        return "".join(
            _CHAR[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n_qubits)
        )

    @classmethod
    def from_string(cls, text: str, phase_power: int = 0) -> "PauliWord":
        """Build from a dense letter string; character q acts on qubit q."""
        x = z = 0
        for q, char in enumerate(text.upper()):
            if char not in _MASKS:
                raise ValueError(f"invalid Pauli letter {char!r}")
            xb, zb = _MASKS[char]
            x |= xb << q
            z |= zb << q
        return cls(len(text), x, z, phase_power)


def anticommutes(a: PauliWord, b: PauliWord) -> bool:
    """True iff {a, b} = 0, by the symplectic parity of the pair."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("words act on different qubit counts")
    return bool(((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) & 1)


class PauliSum:
    """Real-coefficient sum of phase-normalized Pauli words."""

    def __init__(self, n_qubits: int, terms=None):
        self.n_qubits = int(n_qubits)
        self._terms: dict[tuple[int, int], float] = {}
        if terms:
            for key, coeff in terms.items():
                if isinstance(key, PauliWord):
                    coeff = coeff * key.phase
                    key = (key.x, key.z)
                if abs(complex(coeff).imag) > 1e-10:
                    raise ValueError("PauliSum coefficients must be real")
                value = self._terms.get(key, 0.0) + complex(coeff).real
                if abs(value) > PRUNE_TOL:
                    self._terms[key] = value
                else:
                    self._terms.pop(key, None)

    @classmethod
    def _from_complex(cls, n_qubits, accum: dict) -> "PauliSum":
        out = cls(n_qubits)
        for key, coeff in accum.items():
            if abs(coeff.imag) > 1e-10:
                raise ValueError(
                    f"non-Hermitian term with coefficient {coeff!r}; "
                    "input tensors must be real-symmetric"
                )
            if abs(coeff.real) > PRUNE_TOL:
                out._terms[key] = coeff.real
        return out

    def __len__(self):
        return len(self._terms)

    def items(self):
        for (x, z), coeff in self._terms.items():
            yield PauliWord(self.n_qubits, x, z), coeff

    def coefficient(self, word: PauliWord) -> float:
        return self._terms.get((word.x, word.z), 0.0) * word.phase.real

    @property
    def identity_coefficient(self) -> float:
        return self._terms.get((0, 0), 0.0)

    def one_norm(self, include_identity: bool = False) -> float:
        total = sum(abs(c) for key, c in self._terms.items() if key != (0, 0))
        if include_identity:
            total += abs(self.identity_coefficient)
        return total

    def n_terms(self, cutoff: float = 0.0, include_identity: bool = False) -> int:
        count = 0
        for key, coeff in self._terms.items():
            if key == (0, 0) and not include_identity:
                continue
            if abs(coeff) > cutoff:
                count += 1
        return count

    def raw_items(self):
        """Iterate ((x, z), coefficient) without building PauliWord objects."""
        return self._terms.items()


def _ladder_terms(p: int, dagger: bool):
    """JW image of a_p / a^dag_p as [(x, z, complex coefficient)]."""
    string = (1 << p) - 1
    bit = 1 << p
    sign = -0.5j if dagger else 0.5j
    # W(bit, string) = X_p Z_string, W(bit, string|bit) = Y_p Z_string
    return [(bit, string, 0.5 + 0.0j), (bit, string | bit, sign)]


def _pair_terms(p: int, q: int):
    """JW image of a^dag_p a_q as {(x, z): complex coefficient}."""
    accum: dict[tuple[int, int], complex] = {}
    for x1, z1, c1 in _ladder_terms(p, True):
        for x2, z2, c2 in _ladder_terms(q, False):
            x, z, power = _mul_masks(x1, z1, x2, z2)
            accum[(x, z)] = accum.get((x, z), 0.0) + c1 * c2 * _PHASES[power]
    return [(key, value) for key, value in accum.items() if abs(value) > 0.0]


def jordan_wigner(H: MolecularHamiltonian) -> PauliSum:
    """Map a spatial-orbital Hamiltonian to a Pauli sum on 2N qubits."""
    n = H.n_orbitals
    if n > MAX_JW_ORBITALS:
        raise ValueError(
            f"jordan_wigner supports at most {MAX_JW_ORBITALS} spatial orbitals "
            f"({2 * MAX_JW_ORBITALS} qubits); got N = {n}"
        )
    n_qubits = 2 * n
    pair = {}
    for p in range(n_qubits):
        for q in range(n_qubits):
            pair[(p, q)] = _pair_terms(p, q)

    accum: dict[tuple[int, int], complex] = {(0, 0): complex(H.e0)}

    def add_product(terms1, terms2, weight):
        for (x1, z1), c1 in terms1:
            for (x2, z2), c2 in terms2:
                x, z, power = _mul_masks(x1, z1, x2, z2)
                accum[(x, z)] = accum.get((x, z), 0.0) + weight * c1 * c2 * _PHASES[power]

    h, g = H.h, H.g
    for i in range(n):
        for j in range(n):
            hij = h[i, j]
            if hij == 0.0:
                continue
            for sigma in (0, 1):
                for (x, z), c in pair[(2 * i + sigma, 2 * j + sigma)]:
                    accum[(x, z)] = accum.get((x, z), 0.0) + hij * c
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    gval = g[i, j, k, l]
                    if gval == 0.0:
                        continue
                    for sigma in (0, 1):
                        for tau in (0, 1):
                            add_product(
                                pair[(2 * i + sigma, 2 * j + sigma)],
                                pair[(2 * k + tau, 2 * l + tau)],
                                gval,
                            )
    return PauliSum._from_complex(n_qubits, accum)


def _gamma_masks(mode: int, flavor: int) -> tuple[int, int]:
    """Masks of the Majorana generator: Z-string times X (flavor 0) or Y."""
    string = (1 << mode) - 1
    bit = 1 << mode
    return (bit, string) if flavor == 0 else (bit, string | bit)


def _gamma_product(modes_flavors):
    """Product of Majorana generators as (x, z, complex phase vs canonical)."""
    x = z = 0
    power = 0
    for mode, flavor in modes_flavors:
        gx, gz = _gamma_masks(mode, flavor)
        x, z, extra = _mul_masks(x, z, gx, gz)
        power = (power + extra) & 3
    return x, z, _PHASES[power]


def majorana_term_list(H: MolecularHamiltonian) -> list[tuple[PauliWord, float]]:
    """The Hamiltonian as a list of Majorana-product unitaries.

    Terms come in three families kept as separate LCU entries even when
    they realize the same Pauli word: the quadratic family carrying the
    corrected one-body coefficients, the dense quartic family with one
    entry per two-body tensor element, and the remaining antisymmetrized
    quartic combinations.  The identity is excluded.  The total weight
    sum(|coefficient|) equals ``pauli_one_norm``; the fully combined
    expansion of ``jordan_wigner`` can have a strictly smaller term count.
    """
    n = H.n_orbitals
    if n > MAX_JW_ORBITALS:
        raise ValueError(
            f"majorana_term_list supports at most {MAX_JW_ORBITALS} spatial orbitals"
        )
    n_qubits = 2 * n
    h_eff = H.h + 2.0 * np.einsum("ijkk->ij", H.g)
    g = H.g

    quadratic: dict[tuple[int, int], complex] = {}
    for i in range(n):
        for j in range(n):
            if h_eff[i, j] == 0.0:
                continue
            for s in (0, 1):
                x, z, phase = _gamma_product([(2 * i + s, 0), (2 * j + s, 1)])
                key = (x, z)
                quadratic[key] = quadratic.get(key, 0.0) + 0.5j * h_eff[i, j] * phase

    dense: dict[tuple[int, int], complex] = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    gval = g[i, j, k, l]
                    if gval == 0.0:
                        continue
                    for s in (0, 1):
                        for t in (0, 1):
                            x, z, phase = _gamma_product(
                                [
                                    (2 * i + s, 0),
                                    (2 * j + s, 1),
                                    (2 * k + t, 0),
                                    (2 * l + t, 1),
                                ]
                            )
                            key = (x, z)
                            dense[key] = dense.get(key, 0.0) - 0.125 * gval * phase

    remainder: dict[tuple[int, int], float] = dict(jordan_wigner(H).raw_items())
    terms: list[tuple[PauliWord, float]] = []
    for family in (quadratic, dense):
        for (x, z), coeff in family.items():
            if abs(coeff.imag) > 1e-10:
                raise ValueError("non-Hermitian Majorana family term")
            value = coeff.real
            if (x, z) != (0, 0) and abs(value) > PRUNE_TOL:
                terms.append((PauliWord(n_qubits, x, z), value))
            remainder[(x, z)] = remainder.get((x, z), 0.0) - value
    for (x, z), value in remainder.items():
        if (x, z) != (0, 0) and abs(value) > PRUNE_TOL:
            terms.append((PauliWord(n_qubits, x, z), value))
    return terms


def to_sparse_matrix(pauli_sum: PauliSum) -> scipy.sparse.csr_matrix:
    """Exact sparse-matrix realization over the 2^n computational basis.

    Basis state b has qubit q in |1> iff bit q of b is set.
    """
    n = pauli_sum.n_qubits
    if n > 16:
        raise ValueError(f"matrix realization capped at 16 qubits, got {n}")
    dim = 1 << n
    basis = np.arange(dim, dtype=np.int64)
    rows = []
    cols = []
    data = []
    for (x, z), coeff in pauli_sum.raw_items():
        y_count = (x & z).bit_count()
        signs = 1 - 2 * (np.bitwise_count(basis & z).astype(np.int64) & 1)
        rows.append(basis ^ x)
        cols.append(basis)
        data.append(coeff * _PHASES[y_count & 3] * signs)
    if not rows:
        return scipy.sparse.csr_matrix((dim, dim), dtype=complex)
    matrix = scipy.sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
        dtype=complex,
    )
    return matrix.tocsr()


def number_operator(n_qubits: int) -> PauliSum:
    """Total-occupation operator sum_p (1 - Z_p) / 2 on n_qubits qubits."""
    terms: dict[tuple[int, int], float] = {(0, 0): n_qubits / 2.0}
    for p in range(n_qubits):
        terms[(0, 1 << p)] = -0.5
    out = PauliSum(n_qubits)
    out._terms = terms
    return out
