from __future__ import annotations

import pytest

from heffter.catalog import (
    SELFTEST_PY_VALUES,
    CatalogEntry,
    _check_instance,
    load_catalog,
    lookup,
    make_Bab,
    self_test_catalog,
)
from heffter.core import col_sums, support_of
from heffter.errors import InvalidBlockParams, PreconditionViolated, UnknownBlock


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (2, 5, ((1, -3), (None, None), (-6, 8))),
        (1, 2, ((1, -2), (None, None), (-3, 4))),
        (5, 10, ((1, -6), (None, None), (-11, 16))),
    ],
)
def test_make_Bab(a, b, expected):
    assert make_Bab(a, b).entries == expected


def test_make_Bab_rejects_nonpositive():
    with pytest.raises(PreconditionViolated):
        make_Bab(0, 2)


def test_lookup_concrete():
    f5 = lookup("F5-6")
    assert f5.entries == ((1, -2, 6, -7, -11, 13), (-3, 4, -8, 9, 12, -14))
    v13 = lookup("V13-8")
    assert v13.entries[0] == (1, -2, 17, 9, -7, 8, -11, -15)


def test_lookup_symbolic():
    w4 = lookup("W4-blW2", {"p": 5, "y": 3})
    assert w4.entries == ((4, -20, -36, 52), (-7, 23, 39, -55))
    assert col_sums(w4) == [-3, 3, 3, -3]


def test_lookup_errors():
    with pytest.raises(UnknownBlock):
        lookup("nope-6")
    with pytest.raises(InvalidBlockParams):
        lookup("W4-blW1")  # missing l
    with pytest.raises(InvalidBlockParams):
        lookup("F5-6", {"l": 3})  # unexpected parameter


def test_self_test_catalog_is_clean():
    assert self_test_catalog() == []


def test_declared_identities_spotchecks():
    assert col_sums(lookup("V9-6")) == [-2, 2, -2, 2, 1, -1]
    assert support_of(lookup("W9_5-8")) == tuple(x for x in range(1, 19) if x not in (5, 14))
    assert support_of(lookup("F3-10")) == tuple(x for x in range(1, 31) if x % 3)
    assert col_sums(lookup("V5-6-2")) == [-1, 4, -1, -2, 2, -2]


@pytest.mark.parametrize("p, y", SELFTEST_PY_VALUES)
def test_symbolic_py_families(p, y):
    for name in ("W4-blW2", "W6-blW2", "W4-blW4", "W6-blW4"):
        entry = load_catalog()[name]
        params = {"p": p, "y": y}
        blk = entry.instantiate(params)
        assert support_of(blk) == tuple(sorted(entry.declared_support(params)))
        assert col_sums(blk) == entry.declared_col_sums(params)


def test_corrupted_entry_is_detected():
    good = load_catalog()["V13-6"]
    bad = CatalogEntry(
        name=good.name,
        contract=good.contract,
        variables=good.variables,
        row_exprs=(("1", "-2", "5", "-6", "-9", "12"), good.row_exprs[1]),
        colsum_exprs=good.colsum_exprs,
        support_spec=good.support_spec,
    )
    defects: list = []
    _check_instance(bad, {}, defects)
    assert defects
    kinds = {d.kind for d in defects}
    assert "support" in kinds or "support-dup" in kinds
