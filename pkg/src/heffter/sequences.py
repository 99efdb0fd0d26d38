"""Builders for the block sequences behind every construction.

Three kinds of machinery live here:

* shift-set builders for the corner-block diagonal construction
  (``xset_k4``), one per divisibility regime of t;
* the width-6 chain builder ``build_F_rho`` that tiles supports while
  skipping every multiple of an odd gap rho;
* tail builders ``build_G_tail`` for widths 8 and 10, plus the wide-block
  builders ``build_seq_8p`` / ``build_seq_non8p`` used when t does not
  divide m*s;
* the dispatcher ``build_seqB`` (and its balanced-profile mirror
  ``build_seqB_OLD``) that assembles m/2 blocks of width s with support
  exactly ``target_support``.

Every builder validates its output sequence against the declared contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .catalog import lookup
from .core import (
    Block,
    BlockSequence,
    Contract,
    Parameters,
    juxtapose,
    make_sequence,
)
from .errors import BranchUnavailable, PreconditionViolated

# Optional invocation log: when set to a list, every public builder appends
# (builder-name, params) so a sweep can replay each call through the oracle.
_invocation_log: list | None = None


def _log(builder: str, **params) -> None:
    if _invocation_log is not None:
        _invocation_log.append((builder, tuple(sorted(params.items()))))


def set_invocation_log(log: list | None) -> None:
    global _invocation_log
    _invocation_log = log


# ---------------------------------------------------------------------------
# shift sets for the diagonal construction (s, k both divisible by 4)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class XSet:
    """Sorted nonnegative shifts plus the branch that produced them."""

    values: tuple
    provenance: str


def xset_k4(p: Parameters, variant: str) -> XSet:
    """Shift set of size m*s/4 for the corner-block diagonal construction.

    variant selects the stride of the generating runs: "run1" needs 8 | t,
    "run2" needs t | ms with 4 | t, "run4" needs t | ms/2 (odd t gets an
    extra half-length tail run).
    """
    m, s, t, ell = p.m, p.s, p.t, p.ell
    ms = m * s
    if s % 4 or p.k % 4:
        raise PreconditionViolated("diagonal shift sets need s and k divisible by 4")
    if variant == "run1":
        if t % 8:
            raise PreconditionViolated("run1 needs t divisible by 8")
        vals = [x for i in range(t // 8) for x in range(4 * i * ell, (4 * i + 1) * ell - 1)]
        prov = "run1"
    elif variant == "run2":
        if t % 4 or ms % t:
            raise PreconditionViolated("run2 needs 4 | t and t | m*s")
        vals = [x for i in range(t // 4) for x in range(2 * i * ell, (2 * i + 1) * ell - 2, 2)]
        prov = "run2"
    elif variant == "run4":
        if (ms // 2) % t:
            raise PreconditionViolated("run4 needs t | m*s/2")
        if t % 2 == 0:
            vals = [x for i in range(t // 2) for x in range(i * ell, (i + 1) * ell - 4, 4)]
            prov = "run4"
        else:
            # ell = 1 (mod 8) here; the last run is half length.
            vals = [x for i in range((t - 1) // 2) for x in range(i * ell, (i + 1) * ell - 4, 4)]
            base = (t - 1) // 2 * ell
            vals += list(range(base, base + (ell - 9) // 2 + 1, 4))
            prov = "run4odd"
    else:
        raise PreconditionViolated(f"unknown shift-set variant {variant!r}")
    if len(vals) != ms // 4:
        raise BranchUnavailable(f"shift set has {len(vals)} values, wanted {ms // 4}")
    _log("xset_k4", m=m, s=s, t=t, variant=variant)
    return XSet(values=tuple(sorted(vals)), provenance=prov)


# ---------------------------------------------------------------------------
# width-6 chains: h blocks whose union support is an initial interval with
# every multiple of an odd gap rho removed
# ---------------------------------------------------------------------------

def _chain(count: int, base: int) -> list:
    """count copies of the width-6 filler, starting at shift base, step 12."""
    return [("V13", base + 12 * i) for i in range(count)]


def _f_recipe(rho: int):
    """(label, items, period) for the width-6 chain with gap rho."""
    if rho == 3:
        return "f6:3", [("F3", 0)], 18
    if rho == 5:
        return "f6:5", [("F5", 0)], 15
    r = rho % 12
    if r == 7:
        x = (rho - 7) // 12
        items = _chain(x, 0) + [("V7", 12 * x)] + _chain(x, 12 * x + 13)
        return "f6:12x7", items, 2 * rho
    if r == 9:
        x = (rho - 9) // 12
        items = (
            _chain(x, 0)
            + [("V9", 12 * x)]
            + _chain(x, 12 * x + 13)
            + [("V5", 24 * x + 13)]
            + _chain(x, 24 * x + 26)
        )
        return "f6:12x9", items, 3 * rho
    if r == 11:
        x = (rho - 11) // 12
        items = (
            _chain(x, 0)
            + [("V11", 12 * x)]
            + _chain(x, 12 * x + 13)
            + [("V9", 24 * x + 13)]
            + _chain(x, 24 * x + 26)
            + [("V7", 36 * x + 26)]
            + _chain(x, 36 * x + 39)
            + [("V5", 48 * x + 39)]
            + _chain(x, 48 * x + 52)
            + [("V3", 60 * x + 52)]
            + _chain(x, 60 * x + 65)
        )
        return "f6:12x11", items, 6 * rho
    if r == 1:
        x = (rho - 13) // 12
        items = _chain(x, 0) + [("V13", 12 * x)]
        return "f6:12x13", items, rho
    if r == 3:
        x = (rho - 15) // 12
        items = (
            _chain(x + 1, 0)
            + [("V3", 12 * (x + 1))]
            + _chain(x, 12 * x + 25)
            + [("V5", 24 * x + 25)]
            + _chain(x, 24 * x + 38)
            + [("V7", 36 * x + 38)]
            + _chain(x, 36 * x + 51)
            + [("V9", 48 * x + 51)]
            + _chain(x, 48 * x + 64)
            + [("V11", 60 * x + 64)]
            + _chain(x + 1, 60 * x + 77)
        )
        return "f6:12x15", items, 6 * rho
    if r == 5:
        x = (rho - 17) // 12
        items = (
            _chain(x + 1, 0)
            + [("V5", 12 * (x + 1))]
            + _chain(x, 12 * x + 25)
            + [("V9", 24 * x + 25)]
            + _chain(x + 1, 24 * x + 38)
        )
        return "f6:12x17", items, 3 * rho
    raise BranchUnavailable(f"no width-6 chain for gap {rho}")


def _fam(width: int, old: bool) -> str:
    return f"{width}-2" if old else str(width)


def _stream_blocks(items: Sequence, period: int, fam: str) -> Iterator[Block]:
    """Endless stream: items shifted by 0, period, 2*period, ..."""
    c = 0
    while True:
        for name, off in items:
            yield lookup(f"{name}-{fam}").shifted(off + c * period)
        c += 1


def build_F_rho(h: int, rho: int, *, old: bool = False) -> BlockSequence:
    """h width-6 blocks covering [1, 12h + floor(12h/(rho-1))] minus the
    multiples of rho, sharing one column-sum profile."""
    if h < 0:
        raise PreconditionViolated("h must be nonnegative")
    if rho < 3 or rho % 2 == 0:
        raise PreconditionViolated("rho must be an odd integer >= 3")
    contract = Contract.BLOCCHI_OLD if old else Contract.BLOCCHI
    if h == 0:
        return make_sequence((), contract)
    label, items, period = _f_recipe(rho)
    if old:
        label = "old." + label
    stream = _stream_blocks(items, period, _fam(6, old))
    blocks = [next(stream) for _ in range(h)]
    _log("F_rho", h=h, rho=rho, old=old)
    return make_sequence(blocks, contract, trace=(label,))


# ---------------------------------------------------------------------------
# width 8 and width 10 tails
# ---------------------------------------------------------------------------

# Special basic sequences keyed by ell: either ("fixed", items, period) or
# ("residue", modulus, {m*q residue: items}, period).
_G8_SPECIAL = {
    3: ("fixed", [("F3", 0)], 24),
    5: ("fixed", [("F5", 0)], 20),
    7: ("fixed", [("W7_7", 0), ("W7_3", 18), ("W7_5", 37)], 56),
    13: ("fixed", [("V13", 0), ("V9", 17), ("V5", 34)], 52),
    9: ("residue", 4, {0: [("V9", 0)], 2: [("W9_5", 0)]}, 18),
    11: (
        "residue",
        10,
        {
            0: [("V11", 0), ("W11_5", 17), ("V9", 35), ("W11_3", 52), ("V7", 70)],
            2: [("V9", 0), ("W11_3", 17), ("V7", 35), ("V11", 53), ("W11_5", 70)],
            4: [("V7", 0), ("V11", 18), ("W11_5", 35), ("V9", 53), ("W11_3", 70)],
            6: [("W11_5", 0), ("V9", 18), ("W11_3", 35), ("V7", 53), ("V11", 71)],
            8: [("W11_3", 0), ("V7", 18), ("V11", 36), ("W11_5", 53), ("V9", 71)],
        },
        88,
    ),
    15: (
        "residue",
        14,
        {
            0: [("V15", 0), ("V13", 17), ("V11", 34), ("V9", 51), ("V7", 68), ("V5", 85), ("V3", 102)],
            2: [("V3", 0), ("V15", 18), ("V13", 35), ("V11", 52), ("V9", 69), ("V7", 86), ("V5", 103)],
            4: [("V5", 0), ("V3", 17), ("V15", 35), ("V13", 52), ("V11", 69), ("V9", 86), ("V7", 103)],
            6: [("V7", 0), ("V5", 17), ("V3", 34), ("V15", 52), ("V13", 69), ("V11", 86), ("V9", 103)],
            8: [("V9", 0), ("V7", 17), ("V5", 34), ("V3", 51), ("V15", 69), ("V13", 86), ("V11", 103)],
            10: [("V11", 0), ("V9", 17), ("V7", 34), ("V5", 51), ("V3", 68), ("V15", 86), ("V13", 103)],
            12: [("V13", 0), ("V11", 17), ("V9", 34), ("V7", 51), ("V5", 68), ("V3", 85), ("V15", 103)],
        },
        120,
    ),
}

_G10_SPECIAL = {
    3: ("fixed", [("F3", 0)], 30),
    5: ("fixed", [("F5", 0)], 25),
    7: ("fixed", [("W7_7", 0), ("W7_5", 23), ("W7_3", 46)], 70),
    11: ("fixed", [("V11", 0)], 22),
    13: ("fixed", [("V13", 0), ("W13_5", 21), ("V9", 43)], 65),
    19: (
        "fixed",
        [
            ("V19", 0), ("V17", 21), ("V15", 42), ("V13", 63), ("V11", 84),
            ("V9", 105), ("V7", 126), ("V5", 147), ("V3", 168),
        ],
        190,
    ),
    9: ("residue", 4, {0: [("W9_9", 0), ("W9_5", 22)], 2: [("W9_5", 0), ("W9_9", 23)]}, 45),
    15: (
        "residue",
        14,
        {
            0: [("V15", 0), ("V9", 21), ("W15_3", 42), ("V11", 64), ("W15_5", 85), ("V13", 107), ("V7", 128)],
            2: [("W15_3", 0), ("V11", 22), ("W15_5", 43), ("V13", 65), ("V7", 86), ("V15", 108), ("V9", 129)],
            4: [("W15_5", 0), ("V13", 22), ("V7", 43), ("V15", 65), ("V9", 86), ("W15_3", 107), ("V11", 129)],
            6: [("V7", 0), ("V15", 22), ("V9", 43), ("W15_3", 64), ("V11", 86), ("W15_5", 107), ("V13", 129)],
            8: [("V9", 0), ("W15_3", 21), ("V11", 43), ("W15_5", 64), ("V13", 86), ("V7", 107), ("V15", 129)],
            10: [("V11", 0), ("W15_5", 21), ("V13", 43), ("V7", 64), ("V15", 86), ("V9", 107), ("W15_3", 128)],
            12: [("V13", 0), ("V7", 21), ("V15", 43), ("V9", 64), ("W15_3", 85), ("V11", 107), ("W15_5", 128)],
        },
        150,
    ),
    17: (
        "residue",
        8,
        {
            0: [("V17", 0), ("V13", 21), ("V9", 42), ("V5", 63)],
            2: [("V5", 0), ("V17", 22), ("V13", 43), ("V9", 64)],
            4: [("V9", 0), ("V5", 21), ("V17", 43), ("V13", 64)],
            6: [("V13", 0), ("V9", 21), ("V5", 42), ("V17", 64)],
        },
        85,
    ),
}


def _generic_tail_stream(m, q, ell, width, t, fam) -> Iterator[Block]:
    """Window-walking stream for large odd ell (>= unit + 1).

    Chains of the widest filler block cover runs of unit consecutive values;
    at each multiple of ell a gap block V_r skips exactly that multiple.
    """
    unit = 16 if width == 8 else 20
    filler = "V17" if width == 8 else "V21"
    n0 = 6 * m * q
    eta = n0 // (ell - 1)
    N = n0 + eta
    val = (eta + 1) * ell - N
    base = 0
    steps = 0
    max_steps = t // 2 - eta + 1
    while True:
        h, r = divmod(val, unit)
        if r % 2 == 0 or r < 1:
            raise BranchUnavailable(f"gap residue {r} out of range at ell={ell}")
        for i in range(h):
            yield lookup(f"{filler}-{fam}").shifted(N + base + unit * i)
        yield lookup(f"V{r}-{fam}").shifted(N + base + unit * h)
        base += (unit + 1) + unit * h
        val = ell - (unit + 1) + r
        steps += 1
        if steps > max_steps:
            raise BranchUnavailable("tail stream exceeded its window budget")


def build_G_tail(m: int, q: int, ell: int, width: int, t: int, *, old: bool = False) -> BlockSequence:
    """m/2 blocks of the given width covering [N+1, ms + t//2] minus the
    multiples of ell past N, where s = 6q + width and N = 6mq + eta."""
    if width not in (8, 10):
        raise PreconditionViolated("tail width must be 8 or 10")
    if m < 2 or m % 2:
        raise PreconditionViolated("m must be even and at least 2")
    if q < 0:
        raise PreconditionViolated("q must be nonnegative")
    if ell < 3 or ell % 2 == 0:
        raise PreconditionViolated("ell must be odd and at least 3")
    s = 6 * q + width
    if t * (ell - 1) != 2 * m * s:
        raise PreconditionViolated(f"t={t} inconsistent with ell={ell} for m={m}, s={s}")
    fam = _fam(width, old)
    contract = Contract.BLOCCHI_OLD if old else Contract.BLOCCHI
    table = _G8_SPECIAL if width == 8 else _G10_SPECIAL
    unit = 16 if width == 8 else 20

    if ell in table:
        spec = table[ell]
        if spec[0] == "fixed":
            _, items, period = spec
            label = f"g{width}:l{ell}"
        else:
            _, modulus, cases, period = spec
            res = (m * q) % modulus
            if res not in cases:
                raise BranchUnavailable(f"no width-{width} tail case for ell={ell}, residue {res}")
            items = cases[res]
            label = f"g{width}:l{ell}:mq{res}"
        n0 = 6 * m * q
        N = n0 + n0 // (ell - 1)
        stream = _stream_blocks(items, period, fam)
        blocks = [next(stream).shifted(N) for _ in range(m // 2)]
    elif ell >= unit + 1:
        label = f"g{width}:gen"
        stream = _generic_tail_stream(m, q, ell, width, t, fam)
        blocks = [next(stream) for _ in range(m // 2)]
    else:
        raise BranchUnavailable(f"no width-{width} tail branch for ell={ell}")
    if old:
        label = "old." + label
    _log("G_tail", m=m, q=q, ell=ell, width=width, t=t, old=old)
    return make_sequence(blocks, contract, trace=(label,))


# ---------------------------------------------------------------------------
# wide builders for t not dividing m*s (even ell)
# ---------------------------------------------------------------------------

def _odd_prime_factor(s: int) -> int:
    """Smallest odd prime dividing s."""
    u = s
    while u % 2 == 0:
        u //= 2
    f = 3
    while f * f <= u:
        if u % f == 0:
            return f
        f += 2
    if u > 1:
        return u
    raise PreconditionViolated(f"{s} has no odd prime factor")


def build_seq_8p(m: int, s: int, t: int, p: int, *, old: bool = False) -> BlockSequence:
    """m/2 blocks of width s when 8p | t: W-blocks spread along runs of
    length ell-1 anchored at multiples of 4p*ell."""
    _validate_wide(m, s, t, p)
    if t % (8 * p):
        raise PreconditionViolated(f"t={t} is not a multiple of 8p={8 * p}")
    ell = 2 * m * s // t + 1
    fam = "blW3" if old else "blW1"
    w6 = lookup(f"W6-{fam}", {"l": ell})
    w4 = lookup(f"W4-{fam}", {"l": ell})
    base = juxtapose([w6] + [w4.shifted(c * ell) for c in range(12, 4 * p - 7, 8)])
    xs = [x for i in range(t // (8 * p)) for x in range(4 * p * i * ell, 4 * p * i * ell + ell - 1)]
    blocks = _group_wide(base, xs, m, s, p)
    label = ("old." if old else "") + "wide:lrun"
    _log("seq_8p", m=m, s=s, t=t, p=p, old=old)
    return make_sequence(blocks, Contract.BLOCCHI_OLD if old else Contract.BLOCCHI, trace=(label,))


def build_seq_non8p(m: int, s: int, t: int, p: int, *, old: bool = False) -> BlockSequence:
    """m/2 blocks of width s when 8 | t and t | 2ms/p: W-blocks spread along
    runs of length y = (ell-1)/p anchored at multiples of 4*ell."""
    _validate_wide(m, s, t, p)
    if t % 8:
        raise PreconditionViolated("t must be divisible by 8")
    if (2 * m * s // p) % t:
        raise PreconditionViolated(f"t={t} does not divide 2ms/p={2 * m * s // p}")
    ell = 2 * m * s // t + 1
    y = (ell - 1) // p
    if p * y + 1 != ell:
        raise PreconditionViolated(f"ell={ell} is not 1 mod p={p}")
    fam = "blW4" if old else "blW2"
    env = {"p": p, "y": y}
    w6 = lookup(f"W6-{fam}", env)
    w4 = lookup(f"W4-{fam}", env)
    base = juxtapose([w6] + [w4.shifted(c * y) for c in range(2, p - 2, 2)])
    xs = [4 * i * ell + u for i in range(t // 8) for u in range(y)]
    blocks = _group_wide(base, xs, m, s, p)
    label = ("old." if old else "") + "wide:yrun"
    _log("seq_non8p", m=m, s=s, t=t, p=p, old=old)
    return make_sequence(blocks, Contract.BLOCCHI_OLD if old else Contract.BLOCCHI, trace=(label,))


def _validate_wide(m: int, s: int, t: int, p: int) -> None:
    if m < 2 or m % 2 or s < 6 or s % 2:
        raise PreconditionViolated("need even m >= 2 and even s >= 6")
    if s % p:
        raise PreconditionViolated(f"p={p} must divide s={s}")
    if p < 3 or p % 2 == 0:
        raise PreconditionViolated("p must be an odd prime")
    if (2 * m * s) % t:
        raise PreconditionViolated(f"t={t} does not divide 2ms={2 * m * s}")


def _group_wide(base: Block, xs: list, m: int, s: int, p: int) -> list:
    """Shift the 2x2p base block over xs (ascending) and group h = s/2p
    consecutive copies into each output block."""
    h = s // (2 * p)
    if len(xs) != m * h // 2:
        raise BranchUnavailable(f"shift set has {len(xs)} values, wanted {m * h // 2}")
    shifted = [base.shifted(x) for x in sorted(xs)]
    return [juxtapose(shifted[i * h : (i + 1) * h]) for i in range(m // 2)]


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------

def _juxtapose_with_tail(front: BlockSequence, q: int, tail: BlockSequence, m: int) -> list:
    blocks = []
    for i in range(m // 2):
        parts = list(front.blocks[i * q : (i + 1) * q]) + [tail.blocks[i]]
        blocks.append(juxtapose(parts))
    return blocks


def build_seqB(m: int, s: int, t: int, *, old: bool = False) -> BlockSequence:
    """m/2 width-s blocks with support target_support(m, s, t).

    Dispatch: odd ell (t | ms) goes to the width-6 chains plus a width-8 or
    width-10 tail depending on s mod 6; even ell goes to the wide W-block
    builders, choosing the run type by whether t divides 2ms/p.
    """
    if m < 2 or m % 2:
        raise PreconditionViolated("m must be even and at least 2")
    if s < 6 or s % 4 != 2:
        raise PreconditionViolated("s must be at least 6 and congruent to 2 mod 4")
    if t < 1 or (2 * m * s) % t:
        raise PreconditionViolated(f"t={t} must divide 2ms={2 * m * s}")
    ell = 2 * m * s // t + 1
    prefix = "old." if old else ""
    contract = Contract.BLOCCHI_OLD if old else Contract.BLOCCHI

    if (m * s) % t == 0:
        r = s % 6
        if r == 0:
            q = s // 6
            front = build_F_rho(m * q // 2, ell, old=old)
            blocks = [juxtapose(front.blocks[i * q : (i + 1) * q]) for i in range(m // 2)]
            trace = (prefix + "seqb:six",) + front.trace
        else:
            width = 8 if r == 2 else 10
            q = (s - width) // 6
            front = build_F_rho(m * q // 2, ell, old=old)
            tail = build_G_tail(m, q, ell, width, t, old=old)
            blocks = _juxtapose_with_tail(front, q, tail, m)
            trace = (prefix + f"seqb:six{width}",) + front.trace + tail.trace
        _log("seqB_OLD" if old else "seqB", m=m, s=s, t=t)
        return make_sequence(blocks, contract, trace=trace)

    p = _odd_prime_factor(s)
    if (2 * m * s // p) % t == 0:
        seq = build_seq_non8p(m, s, t, p, old=old)
        route = prefix + "seqb:yrun"
    else:
        if t % p:
            raise BranchUnavailable(f"t={t} divides neither ms nor 2ms/p for p={p}")
        seq = build_seq_8p(m, s, t, p, old=old)
        route = prefix + "seqb:lrun"
    _log("seqB_OLD" if old else "seqB", m=m, s=s, t=t)
    return BlockSequence(
        blocks=seq.blocks, contract=seq.contract, sigma=seq.sigma, trace=(route,) + seq.trace
    )


def build_seqB_OLD(m: int, s: int, t: int) -> BlockSequence:
    """Mirror of build_seqB producing balanced-profile blocks with the same
    blockwise supports; used for the square part of the (2 mod 4, 2 mod 4)
    assembly."""
    return build_seqB(m, s, t, old=True)
