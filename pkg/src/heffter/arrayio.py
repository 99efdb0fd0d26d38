"""Array file formats.

Two encodings of the same data:

* sparse JSON (canonical for fixtures): a header with (m, n, s, k, t), the
  generator branch trace and one {"row", "col", "value"} object per cell;
* grid CSV: a single commented header line followed by m rows of n comma
  separated fields, empty fields marking empty cells.

Both writers are deterministic, so write -> read -> write is byte-identical.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .core import PFArray, Parameters, derive_parameters
from .errors import ParseError, PreconditionViolated

FORMAT_TAG = "heffter-array/1"


@dataclass(frozen=True)
class ArrayFile:
    array: PFArray
    params: Parameters
    trace: tuple


def _params_from_header(fields: dict, where: str) -> Parameters:
    from .errors import HeffterError

    try:
        return derive_parameters(
            int(fields["m"]), int(fields["n"]), int(fields["s"]), int(fields["k"]), int(fields["t"])
        )
    except (KeyError, ValueError, HeffterError) as exc:
        raise ParseError(f"{where}: bad header: {exc}") from exc


def dumps_json(doc: ArrayFile) -> str:
    cells = [
        {"row": r, "col": c, "value": v}
        for (r, c), v in sorted(doc.array.cells.items())
    ]
    payload = {
        "format": FORMAT_TAG,
        "m": doc.params.m,
        "n": doc.params.n,
        "s": doc.params.s,
        "k": doc.params.k,
        "t": doc.params.t,
        "branch": list(doc.trace),
        "cells": cells,
    }
    return json.dumps(payload, indent=1) + "\n"


def loads_json(text: str, where: str = "<json>") -> ArrayFile:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: invalid JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != FORMAT_TAG:
        raise ParseError(f"{where}: missing or unsupported format tag")
    params = _params_from_header(payload, where)
    try:
        cells = {
            (int(c["row"]), int(c["col"])): int(c["value"]) for c in payload["cells"]
        }
        if len(cells) != len(payload["cells"]):
            raise ParseError(f"{where}: repeated cell coordinates")
        array = PFArray.from_cells(params.m, params.n, cells)
    except (KeyError, TypeError, ValueError, PreconditionViolated) as exc:
        raise ParseError(f"{where}: bad cell list: {exc}") from exc
    return ArrayFile(array=array, params=params, trace=tuple(payload.get("branch", [])))


_HEADER_RE = re.compile(
    r"^# heffter-array/1 m=(\d+) n=(\d+) s=(\d+) k=(\d+) t=(\d+) branch=(\S*)$"
)


def dumps_grid(doc: ArrayFile) -> str:
    branch = "+".join(doc.trace) if doc.trace else "-"
    lines = [
        f"# {FORMAT_TAG} m={doc.params.m} n={doc.params.n} s={doc.params.s}"
        f" k={doc.params.k} t={doc.params.t} branch={branch}"
    ]
    for r in range(1, doc.params.m + 1):
        row = []
        for c in range(1, doc.params.n + 1):
            v = doc.array.cells.get((r, c))
            row.append("" if v is None else str(v))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def loads_grid(text: str, where: str = "<grid>") -> ArrayFile:
    lines = text.splitlines()
    if not lines:
        raise ParseError(f"{where}: empty file")
    match = _HEADER_RE.match(lines[0])
    if not match:
        raise ParseError(f"{where}: bad or missing grid header line")
    m, n, s, k, t = (int(g) for g in match.groups()[:5])
    branch = match.group(6)
    trace = tuple(branch.split("+")) if branch not in ("", "-") else ()
    params = _params_from_header({"m": m, "n": n, "s": s, "k": k, "t": t}, where)
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"{where}: expected {m} grid rows, found {len(body)}")
    cells = {}
    for i, line in enumerate(body, start=1):
        fields = line.split(",")
        if len(fields) != n:
            raise ParseError(f"{where}: row {i} has {len(fields)} fields, expected {n}")
        for j, field in enumerate(fields, start=1):
            field = field.strip()
            if not field:
                continue
            try:
                cells[(i, j)] = int(field)
            except ValueError as exc:
                raise ParseError(f"{where}: row {i}, col {j}: {field!r}") from exc
    try:
        array = PFArray.from_cells(m, n, cells)
    except PreconditionViolated as exc:
        raise ParseError(f"{where}: bad cells: {exc}") from exc
    return ArrayFile(array=array, params=params, trace=trace)


def write_file(path: Path | str, doc: ArrayFile, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or ("grid" if path.suffix.lower() == ".csv" else "json")
    text = dumps_grid(doc) if fmt == "grid" else dumps_json(doc)
    path.write_text(text, encoding="utf-8")


def read_file(path: Path | str) -> ArrayFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if path.suffix.lower() == ".csv" or text.startswith("# heffter-array"):
        return loads_grid(text, where=str(path))
    return loads_json(text, where=str(path))
