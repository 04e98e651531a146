"""JSON documents for measures, decompositions, dilations and block unitaries.

Complex numbers are ``[re, im]`` pairs.  Floats are written with Python's
shortest round-trip repr, so parsing a written document gives back the
identical doubles.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .decomposition import PositiveDecomposition
from .dilation import Dilation
from .measure import AtomicSFM, DiagonalScaling

SCHEMA_VERSION = "1"


class InputError(ValueError):
    """Malformed or inconsistent input document."""


def _pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_pairs(A) -> list:
    A = np.asarray(A, dtype=complex)
    return [[_pair(z) for z in row] for row in A]


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise InputError(f"{where}: non-finite number")
    return x


def pairs_to_matrix(rows, shape=None, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InputError(f"{where}: expected a list of rows")
    out = []
    for i, row in enumerate(rows):
        line = []
        for k, p in enumerate(row):
            if not (isinstance(p, list) and len(p) == 2):
                raise InputError(f"{where}[{i}][{k}]: expected an [re, im] pair")
            line.append(complex(_number(p[0], where), _number(p[1], where)))
        out.append(line)
    if out and len({len(r) for r in out}) != 1:
        raise InputError(f"{where}: ragged rows")
    arr = np.array(out, dtype=complex)
    if shape is not None:
        nrow, ncol = shape
        if arr.size == 0:
            arr = arr.reshape(0, ncol)
        if arr.ndim != 2 or arr.shape[1] != ncol or (nrow is not None and arr.shape[0] != nrow):
            raise InputError(f"{where}: expected shape ({nrow}, {ncol}), got {arr.shape}")
    return arr


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def dump(doc, path) -> None:
    Path(path).write_text(dumps(doc))


def _require(doc, key, where):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{where}: missing field {key!r}")
    return doc[key]


def _dim(doc, where) -> int:
    N = _require(doc, "dim", where)
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise InputError(f"{where}: dim must be a positive integer")
    return N


def measure_to_doc(E: AtomicSFM) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": E.dim,
        "atoms": [{"label": lab, "matrix": matrix_to_pairs(f)} for lab, f in zip(E.labels, E.forms)],
    }


def measure_from_doc(doc, where: str = "measure") -> AtomicSFM:
    version = _require(doc, "schema_version", where)
    if version != SCHEMA_VERSION:
        raise InputError(f"{where}: unsupported schema_version {version!r}")
    N = _dim(doc, where)
    atoms = _require(doc, "atoms", where)
    if not isinstance(atoms, list) or not atoms:
        raise InputError(f"{where}: atoms must be a non-empty list")
    labels, forms = [], []
    for j, atom in enumerate(atoms):
        w = f"{where}.atoms[{j}]"
        label = _require(atom, "label", w)
        if not isinstance(label, str):
            raise InputError(f"{w}: label must be a string")
        labels.append(label)
        forms.append(pairs_to_matrix(_require(atom, "matrix", w), (N, N), w + ".matrix"))
    if len(set(labels)) != len(labels):
        raise InputError(f"{where}: atom labels must be unique")
    return AtomicSFM(tuple(labels), np.array(forms))


def decomposition_to_doc(dec: PositiveDecomposition) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dim": dec.dim,
        "parts": [measure_to_doc(p) for p in dec.parts],
    }
    prov = {}
    if dec.scalings:
        prov["scalings"] = [[float(x) for x in s.weights] for s in dec.scalings]
    if dec.mu is not None:
        prov["mu"] = [[float(x) for x in row] for row in np.atleast_2d(dec.mu)]
    doc["provenance"] = prov
    return doc


def decomposition_from_doc(doc, where: str = "decomposition") -> PositiveDecomposition:
    parts = _require(doc, "parts", where)
    if not isinstance(parts, list) or len(parts) != 4:
        raise InputError(f"{where}: exactly four parts are required")
    parts = tuple(measure_from_doc(p, f"{where}.parts[{k}]") for k, p in enumerate(parts))
    prov = doc.get("provenance", {}) or {}
    scalings = tuple(DiagonalScaling(np.array(s, dtype=float)) for s in prov.get("scalings", []))
    mu = np.array(prov["mu"], dtype=float) if "mu" in prov else None
    try:
        return PositiveDecomposition(parts, scalings, mu)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def dilation_to_doc(d: Dilation) -> dict:
    atoms = []
    for label, mu, row in zip(d.labels, d.mu, d.blocks):
        atoms.append({
            "label": label,
            "mu": float(mu),
            "blocks": [{"k": k, "rows": matrix_to_pairs(b)} for k, b in enumerate(row)],
        })
    return {"dim": d.dim, "atoms": atoms}


def dilation_from_doc(doc, where: str = "dilation") -> Dilation:
    N = _dim(doc, where)
    atoms = _require(doc, "atoms", where)
    if not isinstance(atoms, list) or not atoms:
        raise InputError(f"{where}: atoms must be a non-empty list")
    labels, mus, blocks = [], [], []
    for j, atom in enumerate(atoms):
        w = f"{where}.atoms[{j}]"
        labels.append(_require(atom, "label", w))
        mus.append(_number(_require(atom, "mu", w), w + ".mu"))
        row = [np.zeros((0, N), dtype=complex) for _ in range(4)]
        for i, blk in enumerate(_require(atom, "blocks", w)):
            k = _require(blk, "k", f"{w}.blocks[{i}]")
            if k not in (0, 1, 2, 3):
                raise InputError(f"{w}.blocks[{i}]: k must be 0..3")
            row[k] = pairs_to_matrix(_require(blk, "rows", f"{w}.blocks[{i}]"), (None, N),
                                     f"{w}.blocks[{i}].rows")
        blocks.append(tuple(row))
    if len(set(labels)) != len(labels):
        raise InputError(f"{where}: atom labels must be unique")
    return Dilation(N, tuple(labels), np.array(mus), tuple(blocks))


def unitary_to_doc(flag: bool, U, labels) -> dict:
    doc = {"equivalent": bool(flag)}
    if U is not None:
        doc["atoms"] = [
            {"label": lab, "blocks": [{"k": k, "matrix": matrix_to_pairs(b)} for k, b in enumerate(row)]}
            for lab, row in zip(labels, U)
        ]
    return doc


def c_matrix_from_doc(doc) -> np.ndarray:
    rows = doc.get("c") if isinstance(doc, dict) else doc
    if rows is None:
        raise InputError("c-matrix document needs a 'c' field")
    c = pairs_to_matrix(rows, where="c")
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise InputError("c must be a square matrix")
    return c


def write_probability_csv(path, labels, values) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["atom_label", "re", "im"])
        for lab, v in zip(labels, values):
            w.writerow([lab, repr(float(v.real)), repr(float(v.imag))])


def read_probability_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [r["atom_label"] for r in rows], np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
