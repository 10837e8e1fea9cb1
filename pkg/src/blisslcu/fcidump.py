"""FCIDUMP reading and writing.

The file format is the Molpro-style plain-text interchange format: a
namelist header ``&FCI NORB=...,NELEC=...,MS2=...`` terminated by ``&END``
or ``/``, followed by whitespace-separated ``value i j k l`` records with
1-based orbital indices.  Records with all four indices nonzero are
chemist two-electron integrals (ij|kl); records with k = l = 0 are
one-body integrals t_ij; the record with all indices zero is the core
energy.

On load the integrals are converted once to the internal convention:

    g_ijkl = (ij|kl) / 2,    h_ij = t_ij - sum_k g_ikkj,    e0 = core.

The writer performs the inverse conversion and emits the symmetry-unique
records (i >= j, k >= l, (ij) >= (kl)) in 16-significant-digit scientific
notation.
"""

from __future__ import annotations

import re

import numpy as np

from .hamiltonian import MolecularHamiltonian
from .validation import check_symmetric, check_two_body

__all__ = [
    "FcidumpError",
    "load_fcidump",
    "save_fcidump",
    "read_raw_integrals",
    "write_raw_integrals",
]

FLOAT_FORMAT = "%.16g"


class FcidumpError(ValueError):
    """Malformed FCIDUMP content (parse or structural problems)."""


def _parse_header(lines):
    """Return (header_fields, index_of_first_data_line)."""
    text_fields = {}
    for lineno, line in enumerate(lines):
        stripped = line.strip()
        if lineno == 0 and not stripped.upper().startswith("&FCI"):
            raise FcidumpError(f"line 1: expected '&FCI' header, got {stripped[:40]!r}")
        body = stripped
        terminated = False
        if "&END" in body.upper():
            body = body[: body.upper().index("&END")]
            terminated = True
        elif body.endswith("/"):
            body = body[:-1]
            terminated = True
        if lineno == 0:
            body = body[len("&FCI"):]
        for key, value in re.findall(r"([A-Za-z0-9_]+)\s*=\s*([^,/]*)", body):
            text_fields[key.upper()] = value.strip()
        if terminated:
            return text_fields, lineno + 1
    raise FcidumpError("header is not terminated by '&END' or '/'")


def _header_int(fields, key):
    if key not in fields:
        raise FcidumpError(f"header is missing {key}")
    try:
        return int(fields[key])
    except ValueError as exc:
        raise FcidumpError(f"header field {key}={fields[key]!r} is not an integer") from exc


def read_raw_integrals(path):
    """Parse an FCIDUMP into raw integrals (core, t, V, header fields).

    Returns (core_energy, t, v, fields) where t is the bare one-body matrix
    and v the chemist two-electron tensor (ij|kl), both symmetry-completed.
    Duplicate records that disagree beyond 1e-8 raise FcidumpError.
    """
    with open(path, "r", encoding="ascii") as handle:
        lines = handle.read().splitlines()
    fields, start = _parse_header(lines)
    norb = _header_int(fields, "NORB")
    if norb <= 0:
        raise FcidumpError(f"NORB must be positive, got {norb}")
    t = np.full((norb, norb), np.nan)
    v = np.full((norb, norb, norb, norb), np.nan)
    core = None

    def assign(arr, idx, value, lineno):
        current = arr[idx]
        if np.isnan(current):
            arr[idx] = value
        elif abs(current - value) > 1e-8:
            raise FcidumpError(
                f"line {lineno}: record conflicts with an earlier symmetry-equivalent "
                f"entry ({current!r} vs {value!r})"
            )

    for lineno0, line in enumerate(lines[start:], start=start + 1):
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 5:
            raise FcidumpError(f"line {lineno0}: expected 'value i j k l', got {stripped!r}")
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise FcidumpError(f"line {lineno0}: could not parse {stripped!r}") from exc
        for name, idx in (("i", i), ("j", j), ("k", k), ("l", l)):
            if idx < 0 or idx > norb:
                raise FcidumpError(
                    f"line {lineno0}: index {name}={idx} outside 1..{norb}"
                )
        if i == j == k == l == 0:
            if core is not None and abs(core - value) > 1e-8:
                raise FcidumpError(f"line {lineno0}: conflicting core-energy records")
            core = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"line {lineno0}: one-body record with a zero index")
            assign(t, (i - 1, j - 1), value, lineno0)
            assign(t, (j - 1, i - 1), value, lineno0)
        elif 0 in (i, j, k, l):
            raise FcidumpError(f"line {lineno0}: mixed zero/nonzero indices {i, j, k, l}")
        else:
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for idx in (
                (a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a),
            ):
                assign(v, idx, value, lineno0)

    t = np.nan_to_num(t, nan=0.0)
    v = np.nan_to_num(v, nan=0.0)
    return (core if core is not None else 0.0), t, v, fields


def load_fcidump(path) -> MolecularHamiltonian:
    """Load an FCIDUMP and convert to the internal (e0, h, g) convention."""
    core, t, v, fields = read_raw_integrals(path)
    dev = np.max(np.abs(t - t.T)) if t.size else 0.0
    if dev > 1e-8:
        raise FcidumpError(f"one-body integrals asymmetric after completion: {dev:.3e}")
    g = 0.5 * v
    try:
        check_two_body(g, "two-electron integrals")
    except ValueError as exc:
        raise FcidumpError(str(exc)) from exc
    h = t - np.einsum("ikkj->ij", g)
    n_elec = _header_int(fields, "NELEC") if "NELEC" in fields else None
    return MolecularHamiltonian(e0=core, h=h, g=g, n_elec=n_elec)


def write_raw_integrals(path, t, v, core, n_elec, ms2=0, tol=0.0):
    """Write raw integrals (bare t, chemist (ij|kl), core) as an FCIDUMP.

    Only the symmetry-unique records with i >= j, k >= l and (ij) >= (kl)
    are emitted; entries with |value| <= tol are skipped.
    """
    t = check_symmetric(np.asarray(t, dtype=float), "t")
    v = check_two_body(np.asarray(v, dtype=float), "v")
    norb = t.shape[0]
    record = FLOAT_FORMAT + " %4d %4d %4d %4d\n"
    with open(path, "w", encoding="ascii") as out:
        out.write(f"&FCI NORB={norb},NELEC={int(n_elec)},MS2={int(ms2)},\n")
        out.write("  ORBSYM=" + "1," * norb + "\n")
        out.write("  ISYM=1,\n")
        out.write("&END\n")
        for i in range(norb):
            for j in range(i + 1):
                ij = i * (i + 1) // 2 + j
                for k in range(i + 1):
                    for l in range(k + 1):
                        if ij < k * (k + 1) // 2 + l:
                            continue
                        value = v[i, j, k, l]
                        if abs(value) > tol:
                            out.write(record % (value, i + 1, j + 1, k + 1, l + 1))
        for i in range(norb):
            for j in range(i + 1):
                if abs(t[i, j]) > tol:
                    out.write(record % (t[i, j], i + 1, j + 1, 0, 0))
        out.write((FLOAT_FORMAT + " %4d %4d %4d %4d\n") % (core, 0, 0, 0, 0))


def save_fcidump(H: MolecularHamiltonian, path, n_elec=None, ms2=0):
    """Write a Hamiltonian as an FCIDUMP (inverse of load_fcidump).

    The stored records are the bare one-body integrals t = h + sum_k g_ikkj
    and the chemist integrals (ij|kl) = 2 g_ijkl, so a reload reproduces
    (e0, h, g) up to the 16-digit decimal representation.
    """
    if n_elec is None:
        n_elec = H.n_elec if H.n_elec is not None else 0
    t = H.h + np.einsum("ikkj->ij", H.g)
    write_raw_integrals(path, t, 2.0 * H.g, H.e0, n_elec, ms2=ms2)
