"""Fixed-block catalog.

The concrete and symbolic building blocks live in data/blocks.tsv together
with their declared column-sum profiles and supports, so the transcription
can be reviewed without reading code. This module parses that file, turns
entries into Block values and rechecks every declared identity.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .core import Block, Contract, col_sums, make_block, row_sums, support_of
from .errors import (
    DuplicateAbsoluteValue,
    InvalidBlockParams,
    PreconditionViolated,
    UnknownBlock,
)

_CONTRACTS = {"paired": Contract.BLOCCHI, "balanced": Contract.BLOCCHI_OLD}

# Parameter points at which symbolic families are validated by the self test.
SELFTEST_L_VALUES = (2, 4, 6, 8, 10)
SELFTEST_PY_VALUES = ((3, 2), (5, 3), (7, 4), (5, 8))
SELFTEST_AB_VALUES = ((2, 5), (1, 2), (5, 10), (1, 13), (2, 4))


def _eval_expr(text: str, env: dict) -> int:
    """Evaluate an integer expression in +, -, * and the env variables."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise InvalidBlockParams(f"bad expression {text!r}: {exc}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise InvalidBlockParams(f"missing parameter {node.id!r} in {text!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return ev(node.left) + ev(node.right)
            if isinstance(node.op, ast.Sub):
                return ev(node.left) - ev(node.right)
            if isinstance(node.op, ast.Mult):
                return ev(node.left) * ev(node.right)
        raise InvalidBlockParams(f"unsupported syntax in expression {text!r}")

    return ev(tree)


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog row: a (possibly symbolic) block plus declared identities."""

    name: str
    contract: Contract
    variables: tuple
    row_exprs: tuple        # two tuples of expression strings
    colsum_exprs: tuple
    support_spec: str

    def instantiate(self, params: dict) -> Block:
        extra = set(params) - set(self.variables)
        missing = set(self.variables) - set(params)
        if extra or missing:
            raise InvalidBlockParams(
                f"{self.name} takes parameters {self.variables}, got {sorted(params)}"
            )
        env = dict(params)
        rows = [[_eval_expr(e, env) for e in row] for row in self.row_exprs]
        return make_block(self.name, *rows)

    def declared_col_sums(self, params: dict):
        env = dict(params)
        return [_eval_expr(e, env) for e in self.colsum_exprs]

    def declared_support(self, params: dict):
        return _eval_support(self.support_spec, dict(params))


def _eval_support(spec: str, env: dict):
    """Expand a support declaration into a sorted tuple of values."""
    spec = spec.strip()
    if spec.startswith("LJ:"):
        lo, hi = spec[3:].split("..")
        ell = env["l"]
        return tuple(sorted(j * ell + 1 for j in range(int(lo), int(hi) + 1)))
    if spec.startswith("PY:"):
        offsets = [int(x) for x in spec[3:].split(",")]
        p, y = env["p"], env["y"]
        vals = {(j * p + i) * y + j + 1 for j in range(4) for i in offsets}
        return tuple(sorted(vals))
    if "\\" in spec:
        rng, removed = spec.split("\\")
        banned = {int(x) for x in removed.split(",")}
    else:
        rng, banned = spec, set()
    lo, hi = (int(x) for x in rng.split(".."))
    return tuple(x for x in range(lo, hi + 1) if x not in banned)


def _parse_catalog_text(text: str) -> dict:
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 7:
            raise PreconditionViolated(f"blocks.tsv line {lineno}: expected 7 fields")
        name, contract, variables, row1, row2, colsums, support = parts
        entries[name] = CatalogEntry(
            name=name,
            contract=_CONTRACTS[contract],
            variables=tuple(v for v in variables.split(",") if v and v != "-"),
            row_exprs=(tuple(row1.split(",")), tuple(row2.split(","))),
            colsum_exprs=tuple(colsums.split(",")),
            support_spec=support,
        )
    return entries


@lru_cache(maxsize=1)
def load_catalog() -> dict:
    """All catalog entries, keyed by name."""
    text = resources.files("heffter.data").joinpath("blocks.tsv").read_text("utf-8")
    return _parse_catalog_text(text)


def lookup(name: str, params: dict | None = None) -> Block:
    """Instantiate the named catalog block, evaluating any symbolic entries."""
    entries = load_catalog()
    if name not in entries:
        raise UnknownBlock(name)
    return entries[name].instantiate(params or {})


def make_Bab(a: int, b: int) -> Block:
    """The 3x2 corner block with rows summing to (-a, a) and columns to (-b, b).

    The middle row is empty; corners read (1, -(a+1) / -(b+1), a+b+1).
    """
    if a < 1 or b < 1:
        raise PreconditionViolated("corner block needs a, b >= 1")
    return make_block(
        f"B[{a},{b}]",
        (1, -(a + 1)),
        (None, None),
        (-(b + 1), a + b + 1),
    )


@dataclass(frozen=True)
class CatalogDefect:
    """A mismatch between a catalog entry and its declared identities."""

    name: str
    params: tuple
    kind: str
    detail: str


def _check_instance(entry: CatalogEntry, params: dict, defects: list) -> None:
    key = tuple(sorted(params.items()))
    block = entry.instantiate(params)

    if any(x != 0 for x in row_sums(block)):
        defects.append(CatalogDefect(entry.name, key, "row-sums", f"{row_sums(block)}"))
    for r, row in enumerate(block.entries, start=1):
        pos = sum(1 for e in row if e > 0)
        if 2 * pos != len(row):
            defects.append(CatalogDefect(entry.name, key, "row-balance", f"row {r}"))
    for c in range(block.width):
        col = [row[c] for row in block.entries]
        if sorted(e > 0 for e in col) != [False, True]:
            defects.append(CatalogDefect(entry.name, key, "col-balance", f"col {c + 1}"))

    declared_cs = entry.declared_col_sums(params)
    actual_cs = col_sums(block)
    if actual_cs != declared_cs:
        defects.append(
            CatalogDefect(entry.name, key, "col-sums", f"declared {declared_cs}, got {actual_cs}")
        )
    if entry.contract is Contract.BLOCCHI:
        for i in range(0, len(declared_cs), 2):
            if declared_cs[i] != -declared_cs[i + 1]:
                defects.append(CatalogDefect(entry.name, key, "profile-shape", f"pair {i // 2 + 1}"))
    else:
        if sum(declared_cs[0::2]) != 0 or sum(declared_cs[1::2]) != 0:
            defects.append(CatalogDefect(entry.name, key, "profile-shape", "odd/even totals"))

    try:
        actual_supp = support_of(block)
    except DuplicateAbsoluteValue as exc:
        defects.append(CatalogDefect(entry.name, key, "support-dup", str(exc)))
        return
    declared_supp = entry.declared_support(params)
    if actual_supp != tuple(sorted(declared_supp)):
        missing = sorted(set(declared_supp) - set(actual_supp))
        extra = sorted(set(actual_supp) - set(declared_supp))
        defects.append(
            CatalogDefect(entry.name, key, "support", f"missing {missing}, extra {extra}")
        )


def self_test_catalog() -> list:
    """Recompute sums and supports of every entry; return all mismatches.

    Symbolic families are sampled at several parameter points. An empty list
    means the data file is faithful to its declared identities.
    """
    defects: list = []
    for entry in load_catalog().values():
        if not entry.variables:
            _check_instance(entry, {}, defects)
        elif entry.variables == ("l",):
            for ell in SELFTEST_L_VALUES:
                _check_instance(entry, {"l": ell}, defects)
        elif entry.variables == ("p", "y"):
            for p, y in SELFTEST_PY_VALUES:
                _check_instance(entry, {"p": p, "y": y}, defects)
        else:
            defects.append(CatalogDefect(entry.name, (), "variables", f"{entry.variables}"))

    for a, b in SELFTEST_AB_VALUES:
        blk = make_Bab(a, b)
        if row_sums(blk) != [-a, 0, a]:
            defects.append(CatalogDefect(blk.name, (a, b), "row-sums", f"{row_sums(blk)}"))
        if col_sums(blk) != [-b, b]:
            defects.append(CatalogDefect(blk.name, (a, b), "col-sums", f"{col_sums(blk)}"))
        if a != b:
            expected = tuple(sorted({1, a + 1, b + 1, a + b + 1}))
            if support_of(blk) != expected:
                defects.append(CatalogDefect(blk.name, (a, b), "support", f"{support_of(blk)}"))
    return defects
