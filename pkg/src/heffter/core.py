"""Core types and primitives.

Parameters, partially filled arrays, blocks and block sequences, plus the
shared operations: index arithmetic, shifting, supports, row/column sums,
juxtaposition and transposition.

Index convention: rows live in [1, m] and columns in [1, n]; placements
reduce indices modulo m (rows) and modulo n (columns) into those ranges.
Stored entries are nonzero integers. All types here are immutable after
construction and safe to share between concurrent tasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Sequence, Union

from .errors import (
    DimensionMismatch,
    DuplicateAbsoluteValue,
    HeightMismatch,
    InvalidT,
    PreconditionViolated,
)

# Entry magnitudes are bounded by ms + t/2 <= v/2; this guard keeps all
# arithmetic far away from any fixed-width representation a consumer may use.
_MAX_GROUP_ORDER = 1 << 62

SupportSet = tuple  # sorted tuple of positive ints


def mod1(i: int, base: int) -> int:
    """Reduce an index into the 1-based residue range [1, base]."""
    return (i - 1) % base + 1


@dataclass(frozen=True)
class Parameters:
    """Validated parameter tuple (m, n, s, k, t) with derived quantities.

    v = 2ms + t is the group order, ell = 2ms/t + 1 the index such that
    v = t * ell, and half_t = floor(t / 2).
    """

    m: int
    n: int
    s: int
    k: int
    t: int
    v: int
    ell: int
    half_t: int


def derive_parameters(m: int, n: int, s: int, k: int, t: int) -> Parameters:
    """Validate (m, n, s, k, t) and compute v, ell and half_t."""
    for name, value in (("m", m), ("n", n), ("s", s), ("k", k), ("t", t)):
        if not isinstance(value, int) or value <= 0:
            raise PreconditionViolated(f"{name} must be a positive integer, got {value!r}")
    if m * s != n * k:
        raise DimensionMismatch(f"m*s = {m * s} but n*k = {n * k}")
    if (2 * m * s) % t != 0:
        raise InvalidT(f"t = {t} does not divide 2*m*s = {2 * m * s}")
    v = 2 * m * s + t
    if v > _MAX_GROUP_ORDER:
        raise PreconditionViolated(f"group order {v} exceeds supported range")
    ell = 2 * m * s // t + 1
    half_t = t // 2
    # v = t * ell and ms + floor(t/2) = floor(v/2) are algebraic identities.
    assert v == t * ell
    assert m * s + half_t == v // 2
    return Parameters(m=m, n=n, s=s, k=k, t=t, v=v, ell=ell, half_t=half_t)


def target_support(p: Parameters) -> SupportSet:
    """Support every integer array with these parameters must realize.

    [1, ms + floor(t/2)] minus the first floor(t/2) positive multiples of ell.
    """
    top = p.m * p.s + p.half_t
    banned = set(range(p.ell, p.half_t * p.ell + 1, p.ell))
    out = tuple(x for x in range(1, top + 1) if x not in banned)
    assert len(out) == p.m * p.s
    return out


@dataclass(frozen=True)
class Block:
    """A small grid of optional signed integers; None marks an empty cell."""

    name: str
    entries: tuple

    @property
    def height(self) -> int:
        return len(self.entries)

    @property
    def width(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def cells(self) -> Iterator[tuple]:
        """Yield (row, col, value) for filled cells, 1-based."""
        for r, row in enumerate(self.entries, start=1):
            for c, e in enumerate(row, start=1):
                if e is not None:
                    yield r, c, e

    def shifted(self, amount: int) -> "Block":
        if amount < 0:
            raise PreconditionViolated("shift amount must be nonnegative")
        if amount == 0:
            return self
        rows = tuple(
            tuple(None if e is None else (e + amount if e > 0 else e - amount) for e in row)
            for row in self.entries
        )
        return Block(name=f"{self.name}+{amount}", entries=rows)

    def columns(self, start: int, stop: int) -> "Block":
        """Vertical slice keeping columns start..stop (1-based, inclusive)."""
        if not (1 <= start <= stop <= self.width):
            raise PreconditionViolated(f"bad column slice {start}..{stop} of width {self.width}")
        rows = tuple(row[start - 1 : stop] for row in self.entries)
        return Block(name=f"{self.name}[{start}:{stop}]", entries=rows)


def make_block(name: str, *rows: Sequence) -> Block:
    """Build a Block from row sequences; use None for empty cells."""
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise PreconditionViolated("all block rows must have equal width")
    return Block(name=name, entries=tuple(tuple(r) for r in rows))


@dataclass(frozen=True, eq=False)
class PFArray:
    """A partially filled m x n array of nonzero integers.

    cells maps (row, col) with row in [1, m] and col in [1, n] to the entry.
    Treat instances as immutable; build new ones through from_cells.
    """

    m: int
    n: int
    cells: Mapping

    @classmethod
    def from_cells(cls, m: int, n: int, cells: Mapping) -> "PFArray":
        if m <= 0 or n <= 0:
            raise PreconditionViolated("array dimensions must be positive")
        reduced = {}
        for (r, c), v in cells.items():
            if v == 0:
                raise PreconditionViolated(f"cell ({r},{c}) holds 0; empty cells are absent keys")
            key = (mod1(r, m), mod1(c, n))
            if key in reduced:
                raise PreconditionViolated(f"cells collide at {key} after index reduction")
            reduced[key] = v
        return cls(m=m, n=n, cells=reduced)

    def get(self, r: int, c: int):
        return self.cells.get((mod1(r, self.m), mod1(c, self.n)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PFArray):
            return NotImplemented
        return self.m == other.m and self.n == other.n and dict(self.cells) == dict(other.cells)

    def shifted(self, amount: int) -> "PFArray":
        if amount < 0:
            raise PreconditionViolated("shift amount must be nonnegative")
        moved = {
            rc: (v + amount if v > 0 else v - amount) for rc, v in self.cells.items()
        }
        return PFArray(m=self.m, n=self.n, cells=moved)


class Contract(str, Enum):
    """Column-sum profiles a block sequence may promise."""

    BLOCCHI2 = "paired-columns"
    BLOCCHI = "paired-columns-zero-rows"
    BLOCCHI_OLD = "balanced-columns-zero-rows"


@dataclass(frozen=True)
class BlockSequence:
    """An ordered list of equally shaped blocks with a declared sum profile."""

    blocks: tuple
    contract: Contract
    sigma: tuple
    trace: tuple = field(default_factory=tuple)


def _check_paired(sigma: Sequence) -> None:
    if len(sigma) % 2 != 0:
        raise PreconditionViolated("paired-column contracts need even width")
    for i in range(0, len(sigma), 2):
        if sigma[i] != -sigma[i + 1]:
            raise PreconditionViolated(
                f"columns {i + 1},{i + 2} sum to {sigma[i]},{sigma[i + 1]}; expected negatives"
            )


def make_sequence(
    blocks: Sequence[Block],
    contract: Contract,
    trace: Sequence[str] = (),
) -> BlockSequence:
    """Assemble and validate a BlockSequence; sigma is read off the first block."""
    blocks = tuple(blocks)
    if not blocks:
        return BlockSequence(blocks=(), contract=contract, sigma=(), trace=tuple(trace))
    shape = (blocks[0].height, blocks[0].width)
    sigma = tuple(col_sums(blocks[0]))
    for b in blocks:
        if (b.height, b.width) != shape:
            raise PreconditionViolated(f"block {b.name} has shape {(b.height, b.width)} != {shape}")
        if tuple(col_sums(b)) != sigma:
            raise PreconditionViolated(f"block {b.name} breaks the shared column-sum profile")
        if contract in (Contract.BLOCCHI, Contract.BLOCCHI_OLD):
            if any(x != 0 for x in row_sums(b)):
                raise PreconditionViolated(f"block {b.name} has a nonzero row sum")
            if not _block_is_shiftable(b):
                raise PreconditionViolated(f"block {b.name} is not shiftable")
    if contract in (Contract.BLOCCHI2, Contract.BLOCCHI):
        _check_paired(sigma)
    elif contract is Contract.BLOCCHI_OLD:
        if sum(sigma[0::2]) != 0 or sum(sigma[1::2]) != 0:
            raise PreconditionViolated("odd/even column-sum totals must both vanish")
    return BlockSequence(blocks=blocks, contract=contract, sigma=sigma, trace=tuple(trace))


def _block_is_shiftable(b: Block) -> bool:
    for line in _lines(b):
        pos = sum(1 for e in line if e is not None and e > 0)
        neg = sum(1 for e in line if e is not None and e < 0)
        if pos != neg:
            return False
    return True


def _lines(b: Block):
    yield from b.entries
    for c in range(b.width):
        yield tuple(row[c] for row in b.entries)


Shiftable = Union[PFArray, Block, BlockSequence]


def shift(x: Shiftable, amount: int) -> Shiftable:
    """Add amount to positive entries and subtract it from negative ones."""
    if isinstance(x, BlockSequence):
        return BlockSequence(
            blocks=tuple(b.shifted(amount) for b in x.blocks),
            contract=x.contract,
            sigma=x.sigma,
            trace=x.trace,
        )
    return x.shifted(amount)


def _iter_entries(x: Shiftable):
    """Yield (location, value) pairs over all filled cells of x."""
    if isinstance(x, PFArray):
        for rc, v in sorted(x.cells.items()):
            yield rc, v
    elif isinstance(x, Block):
        for r, c, v in x.cells():
            yield (r, c), v
    elif isinstance(x, BlockSequence):
        for i, b in enumerate(x.blocks, start=1):
            for r, c, v in b.cells():
                yield (i, r, c), v
    else:
        raise PreconditionViolated(f"unsupported operand {type(x).__name__}")


def support_of(x: Shiftable) -> SupportSet:
    """Sorted absolute values of all entries; repeats are an error."""
    seen = {}
    for loc, v in _iter_entries(x):
        a = abs(v)
        if a in seen:
            raise DuplicateAbsoluteValue(a, [seen[a], loc])
        seen[a] = loc
    return tuple(sorted(seen))


def row_sums(x: Union[PFArray, Block]):
    """Per-row sums over filled cells; an empty row sums to 0."""
    if isinstance(x, Block):
        return [sum(e for e in row if e is not None) for row in x.entries]
    sums = [0] * x.m
    for (r, _), v in x.cells.items():
        sums[r - 1] += v
    return sums


def col_sums(x: Union[PFArray, Block]):
    """Per-column sums over filled cells; an empty column sums to 0."""
    if isinstance(x, Block):
        return [
            sum(row[c] for row in x.entries if row[c] is not None)
            for c in range(x.width)
        ]
    sums = [0] * x.n
    for (_, c), v in x.cells.items():
        sums[c - 1] += v
    return sums


def fill_counts(x: PFArray):
    """(per-row, per-column) counts of filled cells."""
    rows = [0] * x.m
    cols = [0] * x.n
    for r, c in x.cells:
        rows[r - 1] += 1
        cols[c - 1] += 1
    return rows, cols


def juxtapose(blocks: Sequence[Block]) -> Block:
    """Concatenate blocks side by side, preserving entry order."""
    blocks = list(blocks)
    if not blocks:
        raise PreconditionViolated("cannot juxtapose an empty list")
    h = blocks[0].height
    for b in blocks:
        if b.height != h:
            raise HeightMismatch(f"{b.name} has height {b.height}, expected {h}")
    rows = tuple(
        tuple(e for b in blocks for e in b.entries[r]) for r in range(h)
    )
    name = "|".join(b.name for b in blocks)
    return Block(name=name, entries=rows)


def transpose(a: PFArray) -> PFArray:
    """Exchange rows and columns; sums and support are preserved linewise."""
    return PFArray(
        m=a.n,
        n=a.m,
        cells={(c, r): v for (r, c), v in a.cells.items()},
    )
