from __future__ import annotations

import pytest

from heffter.core import (
    Contract,
    col_sums,
    derive_parameters,
    row_sums,
    support_of,
)
from heffter.errors import PreconditionViolated
from heffter.sequences import (
    build_F_rho,
    build_G_tail,
    build_seq_8p,
    build_seq_non8p,
    build_seqB,
    build_seqB_OLD,
    xset_k4,
)


def expected_window(lo, hi, step, ban_until):
    return tuple(x for x in range(lo, hi + 1) if x % step or x > ban_until)


def seq_target(m, s, t):
    ell = 2 * m * s // t + 1
    return expected_window(1, m * s + t // 2, ell, (t // 2) * ell)


# --- shift sets ------------------------------------------------------------

def test_xset_run1_example():
    p = derive_parameters(5, 10, 8, 4, 16)
    xs = xset_k4(p, "run1")
    assert xs.values == tuple(list(range(0, 5)) + list(range(24, 29)))


def test_xset_run2_example():
    p = derive_parameters(9, 9, 8, 8, 12)
    xs = xset_k4(p, "run2")
    assert xs.values == tuple(
        list(range(0, 11, 2)) + list(range(26, 37, 2)) + list(range(52, 63, 2))
    )
    assert len(xs.values) == 18


def test_xset_run4_even_and_odd_tail():
    even = xset_k4(derive_parameters(5, 10, 8, 4, 10), "run4")
    assert even.values == (0, 4, 9, 13, 18, 22, 27, 31, 36, 40)
    odd = xset_k4(derive_parameters(6, 6, 4, 4, 3), "run4")
    assert odd.provenance == "run4odd"
    assert len(odd.values) == 6


def test_xset_preconditions():
    p = derive_parameters(5, 10, 8, 4, 10)
    with pytest.raises(PreconditionViolated):
        xset_k4(p, "run1")
    with pytest.raises(PreconditionViolated):
        xset_k4(derive_parameters(6, 6, 6, 6, 4), "run2")


# --- wide builders ----------------------------------------------------------

def test_seq_8p_matches_worked_example():
    seq = build_seq_8p(12, 10, 80, 5)
    assert len(seq.blocks) == 6
    assert seq.blocks[0].entries[0] == (1, -5, 17, -21, -33, 41, 49, -53, -65, 69)
    assert seq.blocks[0].entries[1] == (-9, 13, -25, 29, 37, -45, -57, 61, 73, -77)
    assert seq.blocks[3].entries[0] == (81, -85, 97, -101, -113, 121, 129, -133, -145, 149)
    assert all(row_sums(b) == [0, 0] for b in seq.blocks)
    assert support_of(seq) == seq_target(12, 10, 80)


def test_seq_8p_smallest_instance():
    seq = build_seq_8p(2, 6, 24, 3)
    assert len(seq.blocks) == 1
    assert support_of(seq) == tuple(range(1, 24, 2))
    assert support_of(seq) == seq_target(2, 6, 24)


def test_seq_non8p_matches_worked_example():
    seq = build_seq_non8p(12, 10, 16, 5)
    assert seq.blocks[0].entries[0] == (1, -17, 4, -20, -7, 39, 10, -26, -42, 58)
    assert seq.blocks[0].entries[1] == (-33, 49, -36, 52, 23, -55, -13, 29, 45, -61)
    assert support_of(seq) == seq_target(12, 10, 16)


def test_seq_non8p_smallest_instance():
    seq = build_seq_non8p(2, 6, 8, 3)
    assert support_of(seq) == seq_target(2, 6, 8)


# --- width-6 chains ---------------------------------------------------------

def test_f_rho_worked_example():
    f = build_F_rho(5, 15)
    rows = [b.entries[0] for b in f.blocks]
    assert rows == [
        (1, -2, 5, -6, -9, 11),
        (16, 19, -25, 24, -20, -14),
        (26, -27, 31, -32, -35, 37),
        (39, -40, 46, 49, -43, -51),
        (52, -53, 56, -57, -61, 63),
    ]


def test_f_rho_single_block_and_empty():
    single = build_F_rho(1, 3)
    assert single.blocks[0].entries == (
        (1, -4, -10, 16, 14, -17),
        (-2, 5, 7, -13, -8, 11),
    )
    assert build_F_rho(0, 7).blocks == ()


@pytest.mark.parametrize(
    "h, rho",
    [(1, 3), (2, 5), (3, 7), (4, 9), (5, 11), (4, 13), (5, 15), (3, 17),
     (4, 19), (2, 21), (3, 23), (2, 25), (6, 27), (3, 29), (7, 31)],
)
def test_f_rho_support_formula(h, rho):
    f = build_F_rho(h, rho)
    eta = 12 * h // (rho - 1)
    assert support_of(f) == expected_window(1, 12 * h + eta, rho, eta * rho)
    fo = build_F_rho(h, rho, old=True)
    assert fo.contract is Contract.BLOCCHI_OLD
    assert support_of(fo) == support_of(f)


def test_f_rho_example_skip7():
    f = build_F_rho(4, 7)
    assert support_of(f) == expected_window(1, 56, 7, 56)


def test_f_rho_rejects_bad_gap():
    with pytest.raises(PreconditionViolated):
        build_F_rho(2, 4)
    with pytest.raises(PreconditionViolated):
        build_F_rho(2, 1)


# --- tails ------------------------------------------------------------------

def tail_window(m, q, ell, width, t):
    n0 = 6 * m * q
    lo = n0 + n0 // (ell - 1) + 1
    hi = m * (6 * q + width) + t // 2
    return expected_window(lo, hi, ell, (t // 2) * ell)


@pytest.mark.parametrize(
    "m, q, ell, width, t",
    [
        (4, 1, 3, 8, 56), (4, 1, 5, 8, 28), (6, 1, 7, 8, 28), (4, 1, 9, 8, 14),
        (6, 1, 9, 8, 21), (10, 1, 11, 8, 28), (6, 1, 13, 8, 14),
        (14, 1, 15, 8, 28), (16, 1, 15, 8, 32), (4, 1, 17, 8, 7),
        (8, 1, 33, 8, 7), (4, 1, 113, 8, 1), (4, 1, 29, 8, 4),
        (4, 0, 3, 10, 40), (4, 0, 5, 10, 20), (6, 0, 7, 10, 20),
        (4, 0, 9, 10, 10), (6, 1, 9, 10, 24), (4, 0, 11, 10, 8),
        (6, 0, 13, 10, 10), (14, 0, 15, 10, 20), (4, 0, 17, 10, 5),
        (10, 1, 17, 10, 20), (12, 1, 17, 10, 24), (14, 1, 17, 10, 28),
        (18, 0, 19, 10, 20), (4, 0, 21, 10, 4), (6, 0, 41, 10, 3),
    ],
)
def test_g_tail_windows(m, q, ell, width, t):
    g = build_G_tail(m, q, ell, width, t)
    assert len(g.blocks) == m // 2
    assert support_of(g) == tail_window(m, q, ell, width, t)
    old = build_G_tail(m, q, ell, width, t, old=True)
    assert support_of(old) == support_of(g)
    for b1, b2 in zip(g.blocks, old.blocks):
        assert support_of(b1) == support_of(b2)


def test_g_tail_residue_selection():
    g = build_G_tail(6, 1, 9, 8, 21)
    assert g.trace == ("g8:l9:mq2",)
    assert all(b.name.startswith("W9_5") for b in g.blocks)


def test_g_tail_parameter_validation():
    with pytest.raises(PreconditionViolated):
        build_G_tail(6, 1, 9, 8, 20)  # t inconsistent with ell
    with pytest.raises(PreconditionViolated):
        build_G_tail(5, 1, 9, 8, 21)  # odd m


# --- dispatcher ---------------------------------------------------------------

def divisors(x):
    return [d for d in range(1, x + 1) if x % d == 0]


def test_seqB_support_and_shape_across_branches():
    for m, s in [(2, 6), (4, 6), (6, 6), (4, 10), (6, 10), (4, 14), (6, 14), (14, 6), (10, 10)]:
        for t in divisors(2 * m * s):
            seq = build_seqB(m, s, t)
            assert len(seq.blocks) == m // 2
            assert all(b.width == s and b.height == 2 for b in seq.blocks)
            assert support_of(seq) == seq_target(m, s, t)


def test_seqB_trivial_subgroup():
    seq = build_seqB(6, 6, 1)
    assert support_of(seq) == tuple(range(1, 37))


def test_seqB_wide_routes():
    assert "seqb:lrun" in build_seqB(12, 10, 80).trace
    assert "seqb:yrun" in build_seqB(12, 10, 16).trace


def test_seqB_OLD_mirrors_blockwise():
    for m, s, t in [(20, 6, 15), (16, 14, 32), (6, 6, 8), (6, 6, 72), (4, 10, 16)]:
        new = build_seqB(m, s, t)
        old = build_seqB_OLD(m, s, t)
        assert old.contract is Contract.BLOCCHI_OLD
        assert sum(old.sigma[0::2]) == 0 and sum(old.sigma[1::2]) == 0
        for b1, b2 in zip(new.blocks, old.blocks):
            assert support_of(b1) == support_of(b2)


def test_seqB_rejects_bad_shapes():
    with pytest.raises(PreconditionViolated):
        build_seqB(5, 6, 1)  # odd m
    with pytest.raises(PreconditionViolated):
        build_seqB(4, 8, 1)  # s = 0 mod 4
    with pytest.raises(PreconditionViolated):
        build_seqB(4, 6, 5)  # t does not divide 2ms


def test_sequences_share_column_profiles():
    for m, s, t in [(6, 6, 9), (4, 14, 14), (6, 10, 5)]:
        seq = build_seqB(m, s, t)
        for b in seq.blocks:
            assert tuple(col_sums(b)) == seq.sigma
