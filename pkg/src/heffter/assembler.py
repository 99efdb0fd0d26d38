"""Placement of blocks into full m x n arrays, and the top-level dispatcher.

Four arrangements:

* ``assemble_diagonal``: corner blocks walked along wrapped diagonals, for
  s and k both divisible by 4;
* ``assemble_P``: d blocks of two rows laid along wrapped diagonals of a
  2d x d frame, giving zero column sums whenever the sequence pairs its
  column sums;
* ``assemble_s2`` (and its transpose): the P-frames tiled into a grid, for
  s = 2 and k = 0 mod 4;
* ``assemble_sk2``: a square built from balanced-profile blocks stacked on
  a P-grid remainder, for s = k = 2 mod 4.

``construct`` dispatches on (s mod 4, k mod 4) and re-verifies every array
before returning it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .catalog import make_Bab
from .core import (
    Block,
    PFArray,
    Parameters,
    derive_parameters,
    mod1,
    support_of,
    transpose,
)
from .errors import (
    CellCollision,
    CountMismatch,
    NonExistent,
    OpenCase,
    PreconditionViolated,
    ShapeViolation,
    VerificationFailed,
)
from .sequences import XSet, build_seqB, build_seqB_OLD, xset_k4


@dataclass(frozen=True)
class ConstructionResult:
    array: PFArray
    params: Parameters
    trace: tuple


class _Grid:
    """Mutable staging area with toroidal 1-based placement."""

    def __init__(self, m: int, n: int):
        self.m = m
        self.n = n
        self.cells: dict = {}

    def place(self, r: int, c: int, value: int) -> None:
        key = (mod1(r, self.m), mod1(c, self.n))
        if key in self.cells:
            raise CellCollision(key, self.cells[key], value)
        self.cells[key] = value

    def place_block(self, block: Block, row0: int, col0: int) -> None:
        for dr, dc, v in block.cells():
            self.place(row0 + dr - 1, col0 + dc - 1, v)

    def paste(self, other: PFArray, row_off: int, col_off: int) -> None:
        for (r, c), v in other.cells.items():
            self.place(row_off + r, col_off + c, v)

    def freeze(self) -> PFArray:
        return PFArray(m=self.m, n=self.n, cells=dict(self.cells))


def assemble_diagonal(p: Parameters, a: int, b: int, X: XSet) -> PFArray:
    """Walk corner blocks B[a,b] shifted by the X values along the wrapped
    diagonals: the j-th block anchors its top-left entry at
    (j+1, 4*(j // lcm(m,n)) + j + 1)."""
    if p.s % 4 or p.k % 4:
        raise PreconditionViolated("diagonal assembly needs s and k divisible by 4")
    xs = sorted(X.values)
    if len(xs) != p.m * p.s // 4:
        raise CountMismatch(f"need {p.m * p.s // 4} shifts, got {len(xs)}")
    period = p.m * p.n // gcd(p.m, p.n)
    block = make_Bab(a, b)
    grid = _Grid(p.m, p.n)
    for j, x in enumerate(xs):
        band = j // period
        grid.place_block(block.shifted(x), j + 1, 4 * band + j + 1)
    return grid.freeze()


def assemble_P(blocks: Sequence[Block], d: int, a: int) -> PFArray:
    """The 2d x d frame: block i's first row starts at cell (i, i) and its
    second row at (d+i, i), columns wrapping modulo d."""
    blocks = list(blocks)
    if len(blocks) != d:
        raise CountMismatch(f"need exactly d={d} blocks, got {len(blocks)}")
    width = 2 * a
    if width < 1 or width > d:
        raise ShapeViolation(f"block width 2a={width} must lie in [1, d={d}]")
    for b in blocks:
        if b.height != 2 or b.width != width:
            raise ShapeViolation(f"{b.name}: expected a 2x{width} block")
    grid = _Grid(2 * d, d)
    for i, b in enumerate(blocks, start=1):
        for j in range(1, width + 1):
            col = mod1(i + j - 1, d)
            grid.place(i, col, b.entries[0][j - 1])
            grid.place(d + i, col, b.entries[1][j - 1])
    return grid.freeze()


def _tile_P(blocks: Sequence[Block], rows: int, n: int, s: int) -> PFArray:
    """Slice width-s blocks into width-a pieces and tile P-frames over a
    (rows/2d) x (n/d) grid, where d = gcd(rows/2, n) and a = s*d/n."""
    d = gcd(rows // 2, n)
    if (s * d) % n:
        raise PreconditionViolated(f"slice width s*d/n is not integral for s={s}, d={d}, n={n}")
    a = s * d // n
    if a % 2:
        raise PreconditionViolated(f"slice width a={a} must be even")
    mbar = rows // (2 * d)
    nbar = n // d
    grid = _Grid(rows, n)
    for i in range(mbar):
        batch = blocks[i * d : (i + 1) * d]
        for j in range(nbar):
            slices = [blk.columns(a * j + 1, a * (j + 1)) for blk in batch]
            frame = assemble_P(slices, d, a // 2)
            grid.paste(frame, i * 2 * d, j * d)
    return grid.freeze()


def assemble_s2(m: int, n: int, s: int, k: int, t: int) -> ConstructionResult:
    """Integer array for s = 2 (mod 4), k = 0 (mod 4); m must be even."""
    p = derive_parameters(m, n, s, k, t)
    if s % 4 != 2 or k % 4:
        raise PreconditionViolated("this assembly needs s = 2 and k = 0 modulo 4")
    if not (4 <= s <= n and 4 <= k <= m):
        raise PreconditionViolated("need 4 <= s <= n and 4 <= k <= m")
    if m % 2:
        raise NonExistent(f"no integer array exists for odd m={m} in this parity case")
    seq = build_seqB(m, s, t)
    array = _tile_P(seq.blocks, m, n, s)
    return ConstructionResult(array=array, params=p, trace=("asm:grid",) + seq.trace)


def assemble_s2_transposed(m: int, n: int, s: int, k: int, t: int) -> ConstructionResult:
    """Integer array for s = 0 (mod 4), k = 2 (mod 4); n must be even."""
    if s % 4 or k % 4 != 2:
        raise PreconditionViolated("this assembly needs s = 0 and k = 2 modulo 4")
    if n % 2:
        raise NonExistent(f"no integer array exists for odd n={n} in this parity case")
    inner = assemble_s2(n, m, k, s, t)
    p = derive_parameters(m, n, s, k, t)
    return ConstructionResult(
        array=transpose(inner.array), params=p, trace=("asm:gridT",) + inner.trace[1:]
    )


def assemble_sk2(m: int, n: int, s: int, k: int, t: int) -> ConstructionResult:
    """Integer array for s = k = 2 (mod 4) with m, n even.

    The first n/2 balanced-profile blocks fill an n x n square two rows at a
    time along the main diagonal; when m > n the remaining paired-profile
    blocks fill an (m-n) x n P-grid that is stacked underneath.
    """
    p = derive_parameters(m, n, s, k, t)
    if s % 4 != 2 or k % 4 != 2:
        raise PreconditionViolated("this assembly needs s = k = 2 modulo 4")
    if not (6 <= s <= n and 6 <= k <= m):
        raise PreconditionViolated("need 6 <= s <= n and 6 <= k <= m")
    if m % 2 and n % 2:
        raise OpenCase("both sides odd is outside the covered territory")
    if m % 2 or n % 2:
        raise PreconditionViolated("m and n must both be even when s = k = 2 mod 4")
    if m < n:
        inner = assemble_sk2(n, m, k, s, t)
        return ConstructionResult(
            array=transpose(inner.array), params=p, trace=("asm:stackT",) + inner.trace[1:]
        )

    paired = build_seqB(m, s, t)
    balanced = build_seqB_OLD(m, s, t)
    for b1, b2 in zip(paired.blocks, balanced.blocks):
        if support_of(b1) != support_of(b2):
            raise VerificationFailed("paired and balanced sequences disagree blockwise")

    square_part = balanced.blocks[: n // 2]
    grid = _Grid(m, n)
    for r, blk in enumerate(square_part, start=1):
        grid.place_block(blk, 2 * r - 1, 2 * r - 1)

    if m == n:
        label = "asm:square"
    else:
        label = "asm:stack"
        rest = paired.blocks[n // 2 :]
        lower = _tile_P(rest, m - n, n, s)
        grid.paste(lower, n, 0)
    trace = (label,) + balanced.trace + paired.trace
    return ConstructionResult(array=grid.freeze(), params=p, trace=trace)


def construct(m: int, n: int, s: int, k: int, t: int) -> ConstructionResult:
    """Build and verify an integer array for any covered parameter tuple.

    Raises NonExistent for parity obstructions, OpenCase for the uncovered
    both-odd case, PreconditionViolated for out-of-scope requests, and
    VerificationFailed if the built array fails its own check (a bug).
    """
    p = derive_parameters(m, n, s, k, t)
    if s % 2 or k % 2:
        raise PreconditionViolated("only even s and k are in scope")
    if not (4 <= s <= n and 4 <= k <= m):
        raise PreconditionViolated("need 4 <= s <= n and 4 <= k <= m")

    case = (s % 4, k % 4)
    if case == (0, 0):
        if t % 8 == 0:
            variant, a, b = "run1", p.ell, 2 * p.ell
        elif t % 8 == 4:
            variant, a, b = "run2", 1, p.ell
        else:
            variant, a, b = "run4", 1, 2
        xs = xset_k4(p, variant)
        array = assemble_diagonal(p, a, b, xs)
        result = ConstructionResult(array=array, params=p, trace=("asm:diag", f"diag:{xs.provenance}"))
    elif case == (2, 0):
        result = assemble_s2(m, n, s, k, t)
    elif case == (0, 2):
        result = assemble_s2_transposed(m, n, s, k, t)
    else:
        if m % 2 and n % 2:
            raise OpenCase(
                f"m={m}, n={n} both odd with s = k = 2 mod 4 is not covered"
            )
        result = assemble_sk2(m, n, s, k, t)

    from .verifier import verify_full  # local import keeps the verifier import-free of builders

    report = verify_full(result.array, p, mode="integer")
    if not report.overall:
        raise VerificationFailed(
            f"construction for {(m, n, s, k, t)} failed verification: {report.defects()}"
        )
    return result
