"""Independent ground truth: exhaustive search and support recomputation.

``search_small`` runs a backtracking existence search straight from the
definition: it enumerates skeletons (filled-cell patterns with s cells per
row and k per column), then assigns each target-support value exactly once
with a sign so that every row and column sums to zero. It shares no code
with the constructive builders, so agreement between the two is meaningful
evidence.

``recheck_sequence_support`` replays a builder invocation and recomputes
its claimed support by direct enumeration of every entry.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

from .core import PFArray, Parameters, target_support
from .errors import PreconditionViolated
from .verifier import verify_full

FOUND = "found"
EXHAUSTED = "exhausted"
BUDGET = "budget"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 5_000_000
    max_seconds: float = 120.0
    fix_sign: bool = True    # largest support value is placed positive
    fix_cell: bool = True    # ... and at cell (1, 1)


@dataclass
class SearchOutcome:
    status: str
    array: PFArray | None = None
    nodes: int = 0
    skeletons: int = 0
    seconds: float = 0.0


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.nodes = 0
        self.max_nodes = budget.max_nodes
        self.deadline = time.monotonic() + budget.max_seconds

    def tick(self) -> bool:
        """Count a node; True means the budget is spent."""
        self.nodes += 1
        if self.nodes >= self.max_nodes:
            return True
        return self.nodes % 4096 == 0 and time.monotonic() > self.deadline


def _skeletons(m: int, n: int, s: int, k: int, need_corner: bool):
    """All 0/1 patterns with s per row, k per column, rows chosen in order.

    Columns still owed as many cells as there are rows left are forced into
    every subsequent row, which prunes most dead branches early.
    """
    colneed = [k] * n
    rows: list = []

    def rec(i: int):
        if i == m:
            yield tuple(rows)
            return
        rem = m - i
        forced = [c for c in range(n) if colneed[c] == rem]
        if len(forced) > s:
            return
        optional = [c for c in range(n) if 0 < colneed[c] < rem]
        for extra in combinations(optional, s - len(forced)):
            cols = tuple(sorted(forced + list(extra)))
            if i == 0 and need_corner and cols[0] != 0:
                continue
            for c in cols:
                colneed[c] -= 1
            rows.append(cols)
            yield from rec(i + 1)
            rows.pop()
            for c in cols:
                colneed[c] += 1

    yield from rec(0)


def _assign(skeleton, p: Parameters, values, clock: _Clock, budget: SearchBudget):
    """Backtracking value assignment on one skeleton.

    Returns (status, cells-dict-or-None). Cells are visited row-major;
    the last open cell of a row or column has a forced value.
    """
    m, n = p.m, p.n
    cells = [(r, c) for r in range(m) for c in skeleton[r]]
    row_left = [len(skeleton[r]) for r in range(m)]
    col_left = [0] * n
    for r in range(m):
        for c in skeleton[r]:
            col_left[c] += 1
    row_sum = [0] * m
    col_sum = [0] * n
    avail = sorted(values, reverse=True)
    used = {v: False for v in avail}
    vmax = avail[0]
    assignment: dict = {}

    def reachable(partial: int, slots: int) -> bool:
        """Can some `slots` unused values cancel `partial` in the best case?"""
        total = 0
        count = 0
        for v in avail:
            if used[v]:
                continue
            total += v
            count += 1
            if count == slots:
                break
        return count >= slots and abs(partial) <= total

    def candidates(idx: int):
        r, c = cells[idx]
        if budget.fix_cell and idx == 0:
            return (vmax,)
        if row_left[r] == 1 and col_left[c] == 1:
            v = -row_sum[r]
            if v != -col_sum[c] or v == 0 or used.get(abs(v), True):
                return ()
            return (v,)
        if row_left[r] == 1:
            v = -row_sum[r]
            return (v,) if v != 0 and not used.get(abs(v), True) else ()
        if col_left[c] == 1:
            v = -col_sum[c]
            return (v,) if v != 0 and not used.get(abs(v), True) else ()
        out = []
        for v in avail:
            if used[v]:
                continue
            out.append(v)
            if v != vmax or not budget.fix_sign:
                out.append(-v)
        return out

    def rec(idx: int) -> str:
        if idx == len(cells):
            return FOUND
        if clock.tick():
            return BUDGET
        r, c = cells[idx]
        for v in candidates(idx):
            a = abs(v)
            used[a] = True
            row_sum[r] += v
            col_sum[c] += v
            row_left[r] -= 1
            col_left[c] -= 1
            ok = (row_left[r] > 0 or row_sum[r] == 0) and (col_left[c] > 0 or col_sum[c] == 0)
            if ok and row_left[r] > 0:
                ok = reachable(row_sum[r], row_left[r])
            if ok and col_left[c] > 0:
                ok = reachable(col_sum[c], col_left[c])
            if ok:
                assignment[(r, c)] = v
                status = rec(idx + 1)
                if status != EXHAUSTED:
                    return status
                del assignment[(r, c)]
            used[a] = False
            row_sum[r] -= v
            col_sum[c] -= v
            row_left[r] += 1
            col_left[c] += 1
        return EXHAUSTED

    status = rec(0)
    if status == FOUND:
        return status, {(r + 1, c + 1): v for (r, c), v in assignment.items()}
    return status, None


def search_small(p: Parameters, budget: SearchBudget | None = None) -> SearchOutcome:
    """Exhaustive existence search; intended for m*s up to roughly 24.

    Symmetry breaking (both toggles on by default): solutions are closed
    under global negation and under row/column permutations, so the largest
    support value may be pinned positive, and pinned to cell (1, 1) because
    every skeleton pattern is enumerated.
    """
    budget = budget or SearchBudget()
    values = target_support(p)
    if not values:
        raise PreconditionViolated("empty target support")
    clock = _Clock(budget)
    start = time.monotonic()
    skeleton_count = 0
    saw_budget = False
    for skeleton in _skeletons(p.m, p.n, p.s, p.k, budget.fix_cell):
        skeleton_count += 1
        status, cells = _assign(skeleton, p, values, clock, budget)
        if status == FOUND:
            array = PFArray.from_cells(p.m, p.n, cells)
            report = verify_full(array, p, mode="integer")
            if not report.overall:
                raise PreconditionViolated(
                    f"search produced an invalid array: {report.defects()}"
                )
            return SearchOutcome(
                status=FOUND,
                array=array,
                nodes=clock.nodes,
                skeletons=skeleton_count,
                seconds=time.monotonic() - start,
            )
        if status == BUDGET:
            saw_budget = True
            break
    return SearchOutcome(
        status=BUDGET if saw_budget else EXHAUSTED,
        array=None,
        nodes=clock.nodes,
        skeletons=skeleton_count,
        seconds=time.monotonic() - start,
    )


# ---------------------------------------------------------------------------
# sequence-support rechecks
# ---------------------------------------------------------------------------

@dataclass
class RecheckResult:
    builder: str
    params: dict
    passed: bool
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)
    duplicates: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def _enumerate_abs(blocks) -> tuple:
    seen: dict = {}
    dups = []
    for bi, blk in enumerate(blocks):
        for r, c, v in blk.cells():
            a = abs(v)
            if a in seen:
                dups.append((a, seen[a], (bi, r, c)))
            else:
                seen[a] = (bi, r, c)
    return seen, dups


def _formula(lo: int, hi: int, step: int, ban_until: int) -> set:
    """[lo, hi] minus the multiples of step that are at most ban_until."""
    return {x for x in range(lo, hi + 1) if x % step or x > ban_until}


def recheck_sequence_support(builder: str, params: dict) -> RecheckResult:
    """Replay one builder call and recompute its support claim by brute
    enumeration of every generated entry."""
    from . import sequences as seq
    from .catalog import make_Bab
    from .core import derive_parameters

    params = dict(params)
    old = params.pop("old", False)
    if builder == "F_rho":
        h, rho = params["h"], params["rho"]
        blocks = seq.build_F_rho(h, rho, old=old).blocks
        eta = 12 * h // (rho - 1)
        expected = _formula(1, 12 * h + eta, rho, eta * rho)
    elif builder == "G_tail":
        m, q, ell, width, t = (params[x] for x in ("m", "q", "ell", "width", "t"))
        blocks = seq.build_G_tail(m, q, ell, width, t, old=old).blocks
        n0 = 6 * m * q
        lo = n0 + n0 // (ell - 1) + 1
        hi = m * (6 * q + width) + t // 2
        expected = _formula(lo, hi, ell, (t // 2) * ell)
    elif builder in ("seqB", "seqB_OLD", "seq_8p", "seq_non8p"):
        m, s, t = params["m"], params["s"], params["t"]
        if builder == "seqB":
            blocks = seq.build_seqB(m, s, t, old=old).blocks
        elif builder == "seqB_OLD":
            blocks = seq.build_seqB_OLD(m, s, t).blocks
        elif builder == "seq_8p":
            blocks = seq.build_seq_8p(m, s, t, params["p"], old=old).blocks
        else:
            blocks = seq.build_seq_non8p(m, s, t, params["p"], old=old).blocks
        ell = 2 * m * s // t + 1
        expected = _formula(1, m * s + t // 2, ell, (t // 2) * ell)
    elif builder == "xset_k4":
        m, s, t, variant = (params[x] for x in ("m", "s", "t", "variant"))
        k = params.get("k", 4)
        n = m * s // k
        p = derive_parameters(m, n, s, k, t)
        xs = seq.xset_k4(p, variant)
        if variant == "run1":
            a, b = p.ell, 2 * p.ell
        elif variant == "run2":
            a, b = 1, p.ell
        else:
            a, b = 1, 2
        blocks = [make_Bab(a, b).shifted(x) for x in xs.values]
        expected = _formula(1, m * s + t // 2, p.ell, (t // 2) * p.ell)
    else:
        raise PreconditionViolated(f"unknown builder {builder!r}")

    seen, dups = _enumerate_abs(blocks)
    actual = set(seen)
    return RecheckResult(
        builder=builder,
        params={**params, "old": old},
        passed=not dups and actual == expected,
        missing=sorted(expected - actual),
        extra=sorted(actual - expected),
        duplicates=dups,
    )
