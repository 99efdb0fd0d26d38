"""Independent checker for candidate arrays.

Implements the defining conditions directly from the definition: fill
counts, one representative out of every plus/minus class outside the
excluded subgroup (equivalently: distinct absolute values matching the
target support), zero row and column sums (over the integers, or modulo v
in "simple" mode), and the entry range bound. Also evaluates the arithmetic
necessary conditions and shiftability.

This module deliberately imports nothing from the builders, so it can act
as an independent oracle for them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import PFArray, Parameters, target_support


@dataclass
class Check:
    """One verified condition; witnesses are nonempty exactly on failure."""

    passed: bool
    witnesses: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class VerificationReport:
    mode: str
    fill_counts: Check
    support_match: Check
    representative_condition: Check
    range_condition: Check
    row_sums_z: Check
    col_sums_z: Check
    row_sums_mod_v: Check
    col_sums_mod_v: Check
    shiftable: Check
    overall: bool

    def defects(self) -> list:
        """Human-readable list of every failed selected condition."""
        out = []
        for name in (
            "fill_counts",
            "support_match",
            "representative_condition",
            "range_condition",
            "row_sums_z",
            "col_sums_z",
            "row_sums_mod_v",
            "col_sums_mod_v",
        ):
            chk = getattr(self, name)
            if not chk.passed:
                out.append(f"{name}: {chk.witnesses}")
        return out


def _line_sums(a: PFArray):
    rows = [0] * a.m
    cols = [0] * a.n
    for (r, c), v in a.cells.items():
        rows[r - 1] += v
        cols[c - 1] += v
    return rows, cols


def is_shiftable(a: PFArray) -> Check:
    """Every row and column must hold equally many positive and negative
    entries; witnesses name the offending lines with their sign counts."""
    rows = [[0, 0] for _ in range(a.m)]
    cols = [[0, 0] for _ in range(a.n)]
    for (r, c), v in a.cells.items():
        idx = 0 if v > 0 else 1
        rows[r - 1][idx] += 1
        cols[c - 1][idx] += 1
    witnesses = []
    for i, (pos, neg) in enumerate(rows, start=1):
        if pos != neg:
            witnesses.append(("row", i, pos, neg))
    for j, (pos, neg) in enumerate(cols, start=1):
        if pos != neg:
            witnesses.append(("col", j, pos, neg))
    return Check(passed=not witnesses, witnesses=witnesses)


def verify_full(a: PFArray, p: Parameters, mode: str = "integer") -> VerificationReport:
    """Check a candidate array against every defining condition.

    mode "integer" requires row/column sums to vanish over the integers;
    mode "simple" only modulo v. Failures are report entries, not errors.
    """
    if mode not in ("integer", "simple"):
        raise ValueError(f"unknown mode {mode!r}")

    fill_witness = []
    if a.m != p.m or a.n != p.n:
        fill_witness.append(("shape", a.m, a.n, "expected", p.m, p.n))
    row_counts = [0] * a.m
    col_counts = [0] * a.n
    for r, c in a.cells:
        row_counts[r - 1] += 1
        col_counts[c - 1] += 1
    for i, cnt in enumerate(row_counts, start=1):
        if cnt != p.s:
            fill_witness.append(("row", i, cnt, "expected", p.s))
    for j, cnt in enumerate(col_counts, start=1):
        if cnt != p.k:
            fill_witness.append(("col", j, cnt, "expected", p.k))
    fill = Check(passed=not fill_witness, witnesses=fill_witness)

    # Support and representative condition: the excluded subgroup consists
    # exactly of the multiples of ell, so membership is an absolute-value test.
    locations: dict = {}
    dup_witness = []
    subgroup_witness = []
    for (r, c), v in sorted(a.cells.items()):
        u = abs(v)
        if u in locations:
            dup_witness.append(("duplicate", u, locations[u], (r, c)))
        else:
            locations[u] = (r, c)
        if u % p.ell == 0 and u <= p.half_t * p.ell:
            subgroup_witness.append(("excluded-class", u, (r, c)))
    representative = Check(
        passed=not dup_witness and not subgroup_witness,
        witnesses=dup_witness + subgroup_witness,
    )

    expected = set(target_support(p))
    actual = set(locations)
    missing = sorted(expected - actual)
    extra = sorted(actual - expected)
    support_witness = []
    if missing:
        support_witness.append(("missing", missing))
    if extra:
        support_witness.append(("extra", extra))
    if dup_witness:
        support_witness.append(("duplicates", [w[1] for w in dup_witness]))
    support = Check(passed=not support_witness, witnesses=support_witness)

    bound = p.m * p.s + p.half_t
    range_witness = [
        ("out-of-range", v, (r, c)) for (r, c), v in sorted(a.cells.items()) if abs(v) > bound
    ]
    range_check = Check(passed=not range_witness, witnesses=range_witness)

    rows, cols = _line_sums(a)
    rz = [("row", i, x) for i, x in enumerate(rows, start=1) if x != 0]
    cz = [("col", j, x) for j, x in enumerate(cols, start=1) if x != 0]
    rm = [("row", i, x % p.v) for i, x in enumerate(rows, start=1) if x % p.v != 0]
    cm = [("col", j, x % p.v) for j, x in enumerate(cols, start=1) if x % p.v != 0]
    row_z = Check(passed=not rz, witnesses=rz)
    col_z = Check(passed=not cz, witnesses=cz)
    row_m = Check(passed=not rm, witnesses=rm)
    col_m = Check(passed=not cm, witnesses=cm)

    if mode == "integer":
        sums_ok = row_z.passed and col_z.passed
    else:
        sums_ok = row_m.passed and col_m.passed
    overall = (
        fill.passed
        and support.passed
        and representative.passed
        and range_check.passed
        and sums_ok
    )
    return VerificationReport(
        mode=mode,
        fill_counts=fill,
        support_match=support,
        representative_condition=representative,
        range_condition=range_check,
        row_sums_z=row_z,
        col_sums_z=col_z,
        row_sums_mod_v=row_m,
        col_sums_mod_v=col_m,
        shiftable=is_shiftable(a),
        overall=overall,
    )


@dataclass(frozen=True)
class NecessityResult:
    satisfied: bool
    rule: str
    detail: str

    def __bool__(self) -> bool:
        return self.satisfied


# Parameter patterns proved elsewhere to admit no integer array even though
# the arithmetic conditions below hold. Keyed checks, not branch rules.
def _known_nonexistent(p: Parameters) -> str | None:
    if (p.m, p.n, p.s, p.k, p.t) == (4, 4, 3, 3, 8):
        return "no integer array for the 4x4, 3-per-line, t=8 pattern"
    if p.m == p.n and p.s == 3 and p.k == 3 and p.t == 3 * p.n:
        return "no integer array for the square 3-per-line, t=3n pattern"
    return None


def check_necessary(p: Parameters) -> NecessityResult:
    """Evaluate the arithmetic necessary conditions, extended by the known
    sporadic non-existence patterns; reports which rule decided."""
    ms = p.m * p.s
    if ms % p.t == 0:
        ok = ms % 4 == 0 or (ms % 4 in (1, 3) and (ms + p.t) % 4 == 0)
        rule = "t-divides-ms"
        detail = f"ms={ms} mod 4 = {ms % 4}, t={p.t} mod 4 = {p.t % 4}"
    elif p.t == 2 * ms:
        ok = p.s % 2 == 0 and p.k % 2 == 0
        rule = "t-equals-2ms"
        detail = f"s={p.s}, k={p.k} must both be even"
    else:
        ok = (p.t + 2 * ms) % 8 == 0
        rule = "t-plus-2ms-mod-8"
        detail = f"t + 2ms = {p.t + 2 * ms} mod 8 = {(p.t + 2 * ms) % 8}"
    if not ok:
        return NecessityResult(satisfied=False, rule=rule, detail=detail)
    sporadic = _known_nonexistent(p)
    if sporadic is not None:
        return NecessityResult(satisfied=False, rule="known-nonexistent", detail=sporadic)
    return NecessityResult(satisfied=True, rule=rule, detail=detail)
