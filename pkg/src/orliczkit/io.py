"""Scenario file ingestion and deterministic report rendering.

Readers reject malformed rows and unknown atoms with ParseError. Report
renderers emit byte-stable text: records keep insertion order, floats print
with shortest-roundtrip repr, and nothing time- or path-dependent is ever
included.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Mapping, Sequence

import numpy as np

from .errors import ParseError
from .measure import FINITE, MeasureSpace, Rv


def _read_rows(path: str, expected_header: tuple[str, ...]) -> list[list[str]]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = [row for row in reader
                    if row and any(cell.strip() for cell in row)]
    except OSError as exc:
        raise ParseError(f"cannot read {path!r}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = tuple(cell.strip().lower() for cell in rows[0])
    if header != expected_header:
        raise ParseError(f"{path}: expected header "
                         f"{','.join(expected_header)!r}, got "
                         f"{','.join(header)!r}")
    return rows[1:]


def read_space(path: str, kind: str = FINITE) -> MeasureSpace:
    """CSV with header ``atom_id,weight,block_id``, atoms in ascending id."""
    body = _read_rows(path, ("atom_id", "weight", "block_id"))
    if not body:
        raise ParseError(f"{path}: no atoms")
    ids, weights, blocks = [], [], []
    for lineno, row in enumerate(body, start=2):
        if len(row) != 3:
            raise ParseError(f"{path}:{lineno}: expected 3 columns")
        try:
            ids.append(int(row[0]))
            weights.append(float(row[1]))
            blocks.append(int(row[2]))
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
    try:
        return MeasureSpace(atom_ids=np.array(ids, dtype=np.int64),
                            weights=np.array(weights, dtype=float),
                            block_ids=np.array(blocks, dtype=np.int64),
                            kind=kind)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _align_to_space(path: str, pairs: list[tuple[int, float]],
                    space: MeasureSpace) -> np.ndarray:
    known = {int(a): i for i, a in enumerate(space.atom_ids)}
    values = np.full(space.n_atoms, np.nan)
    for atom_id, value in pairs:
        if atom_id not in known:
            raise ParseError(f"{path}: unknown atom_id {atom_id}")
        pos = known[atom_id]
        if not math.isnan(values[pos]):
            raise ParseError(f"{path}: duplicate atom_id {atom_id}")
        values[pos] = value
    if np.isnan(values).any():
        missing = [int(space.atom_ids[i])
                   for i in np.flatnonzero(np.isnan(values))]
        raise ParseError(f"{path}: missing atoms {missing}")
    return values


def read_rv(path: str, space: MeasureSpace) -> Rv:
    """CSV with header ``atom_id,value`` covering exactly the space's atoms."""
    body = _read_rows(path, ("atom_id", "value"))
    pairs = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 columns")
        try:
            pairs.append((int(row[0]), float(row[1])))
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
    try:
        return Rv(space, _align_to_space(path, pairs, space))
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def read_stacked_rvs(path: str, space: MeasureSpace) -> list[Rv]:
    """CSV with header ``term_index,atom_id,value``: one Rv per term index,
    ordered by index; every term must cover the whole space."""
    body = _read_rows(path, ("term_index", "atom_id", "value"))
    groups: dict[int, list[tuple[int, float]]] = {}
    for lineno, row in enumerate(body, start=2):
        if len(row) != 3:
            raise ParseError(f"{path}:{lineno}: expected 3 columns")
        try:
            term = int(row[0])
            pair = (int(row[1]), float(row[2]))
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
        groups.setdefault(term, []).append(pair)
    if not groups:
        raise ParseError(f"{path}: no terms")
    terms = []
    for term in sorted(groups):
        try:
            terms.append(Rv(space, _align_to_space(path, groups[term], space)))
        except ValueError as exc:
            raise ParseError(f"{path}: term {term}: {exc}") from exc
    return terms


# ---------------------------------------------------------------------------
# deterministic rendering
# ---------------------------------------------------------------------------


def _native(value):
    """Coerce numpy scalars/arrays and tuples to plain Python for rendering."""
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_native(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_native(v) for v in value]
    if isinstance(value, dict):
        return {k: _native(v) for k, v in value.items()}
    return value


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return _quote(";".join(_csv_cell(v) for v in value))
    if value is None:
        return ""
    return _quote(str(value))


def _quote(cell: str) -> str:
    if "," in cell or '"' in cell or "\n" in cell:
        return '"' + cell.replace('"', '""') + '"'
    return cell


def render_record(record: Mapping[str, object], fmt: str) -> str:
    """One flat record -> one deterministic document (insertion order kept)."""
    record = {k: _native(v) for k, v in record.items()}
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    if fmt == "csv":
        lines = ["key,value"]
        for key, value in record.items():
            lines.append(f"{key},{_csv_cell(value)}")
        return "\n".join(lines) + "\n"
    raise ParseError(f"unknown output format {fmt!r}")


def render_table(columns: Mapping[str, Sequence[object]], fmt: str) -> str:
    """Parallel columns -> one deterministic table document."""
    keys = list(columns)
    if not keys:
        raise ValueError("no columns")
    length = len(columns[keys[0]])
    if any(len(columns[k]) != length for k in keys):
        raise ValueError("ragged columns")
    columns = {k: _native(list(columns[k])) for k in keys}
    if fmt == "json":
        return json.dumps(columns, indent=2) + "\n"
    if fmt == "csv":
        lines = [",".join(keys)]
        for i in range(length):
            lines.append(",".join(_csv_cell(columns[k][i]) for k in keys))
        return "\n".join(lines) + "\n"
    raise ParseError(f"unknown output format {fmt!r}")
