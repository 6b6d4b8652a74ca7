import random

import numpy as np
import pytest

from testvariety import UniPoly, make_field, solve_quadratic_count
from testvariety.errors import CapExceeded
from testvariety.tables import get_table


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 6), (3, 1), (3, 3), (5, 2), (7, 2), (13, 1)])
def test_table_ops_match_scalar(p, k):
    F = make_field(p, k)
    table = get_table(F)
    rng = random.Random(11)
    n = F.order
    a = np.array([rng.randrange(n) for _ in range(200)], dtype=np.int64)
    b = np.array([rng.randrange(n) for _ in range(200)], dtype=np.int64)
    mul = table.mul(a, b)
    add = table.add(a, b)
    for i in range(len(a)):
        x, y = F.from_packed(int(a[i])), F.from_packed(int(b[i]))
        assert int(mul[i]) == (x * y).packed
        assert int(add[i]) == (x + y).packed
    for e in (0, 1, 2, 3, 7):
        powed = table.pow(a, e)
        for i in range(0, len(a), 17):
            assert int(powed[i]) == (F.from_packed(int(a[i])) ** e).packed


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 1), (2, 5), (7, 1)])
def test_quad_count_matches_scalar(p, k):
    F = make_field(p, k)
    table = get_table(F)
    n = F.order
    hv = np.repeat(np.arange(n, dtype=np.int64), n)
    fv = np.tile(np.arange(n, dtype=np.int64), n)
    counts = table.quad_count(hv, fv)
    for i in range(len(hv)):
        expect = solve_quadratic_count(F.from_packed(int(hv[i])), F.from_packed(int(fv[i])), F)
        assert int(counts[i]) == expect


def test_eval_poly_matches_unipoly():
    F = make_field(3, 2)
    table = get_table(F)
    rng = random.Random(5)
    coeffs = [rng.randrange(9) for _ in range(6)]
    poly = UniPoly(F, [F.from_packed(c) for c in coeffs])
    xs = table.all_elements()
    vals = table.eval_poly(coeffs, xs)
    for t in range(F.order):
        assert int(vals[t]) == poly.evaluate(F.from_packed(t)).packed


def test_inverse_table():
    F = make_field(5, 2)
    table = get_table(F)
    a = np.arange(1, F.order, dtype=np.int64)
    inv = table.inv(a)
    prod = table.mul(a, inv)
    assert (prod == F.one.packed).all()


def test_cap_enforced():
    F = make_field(2, 20)
    with pytest.raises(CapExceeded):
        get_table(F, cap=2**16)
