import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from testvariety import (
    FieldDesc,
    UniPoly,
    embed,
    make_field,
    poly_derivative,
    poly_gcd,
    solve_quadratic_count,
    tensor_split,
)
from testvariety.errors import DegreeNotDividing, NotPrime, SizeCapExceeded
from testvariety.gf import is_prime


def test_canonical_moduli():
    assert make_field(2, 1).modulus == (0, 1)
    assert make_field(2, 2).modulus == (1, 1, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)


def test_make_field_rejects_bad_input():
    with pytest.raises(NotPrime):
        make_field(6, 2)
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(SizeCapExceeded):
        make_field(2, 41)


def test_make_field_deterministic():
    assert make_field(5, 3) is make_field(5, 3)
    assert make_field(5, 3) == FieldDesc(5, 3, make_field(5, 3).modulus)


def test_element_arithmetic_f9():
    F9 = make_field(3, 2)
    elems = list(F9.elements())
    assert len(set(e.packed for e in elems)) == 9
    for a in elems:
        assert a ** 9 == a  # Frobenius orbit closure
        if not a.is_zero():
            assert a * a.inverse() == F9.one


def test_multiplicative_generator_exists():
    for (p, k) in [(2, 4), (3, 3), (5, 2), (7, 1), (2, 8)]:
        F = make_field(p, k)
        orders = set()
        for a in F.elements():
            if not a.is_zero():
                orders.add(a.multiplicative_order())
        assert max(orders) == F.order - 1


def test_embed_examples():
    F4, F16 = make_field(2, 2), make_field(2, 4)
    assert embed(F4.zero, F16) == F16.zero
    assert embed(F4.one, F16) == F16.one
    assert embed(F4.gen, F16).multiplicative_order() == 3


def test_embed_requires_divisibility():
    F4, F8 = make_field(2, 2), make_field(2, 3)
    with pytest.raises(DegreeNotDividing):
        embed(F4.gen, F8)


def test_embed_is_homomorphism():
    src, tgt = make_field(3, 2), make_field(3, 4)
    elems = list(src.elements())
    for a in elems:
        for b in elems:
            assert embed(a + b, tgt) == embed(a, tgt) + embed(b, tgt)
            assert embed(a * b, tgt) == embed(a, tgt) * embed(b, tgt)


def test_embed_tower_composition():
    # all proper divisor chains with p^c <= 2^12
    chains = []
    for p in (2, 3, 5):
        c = 2
        while p**c <= 2**12:
            for b in range(2, c):
                if c % b:
                    continue
                for a in range(1, b):
                    if b % a == 0:
                        chains.append((p, a, b, c))
            c += 1
    assert (2, 3, 6, 12) in chains
    for p, a, b, c in chains:
        Fa, Fb, Fc = make_field(p, a), make_field(p, b), make_field(p, c)
        for x in Fa.elements():
            assert embed(embed(x, Fb), Fc) == embed(x, Fc)


def test_solve_quadratic_examples():
    F3 = make_field(3, 1)
    assert solve_quadratic_count(F3.zero, F3.one, F3) == 2
    assert solve_quadratic_count(F3.zero, F3.scalar(2), F3) == 0
    F2 = make_field(2, 1)
    assert solve_quadratic_count(F2.one, F2.one, F2) == 0


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (2, 4)])
def test_quadratic_fiber_total(p, k):
    # summed over all c, the fibers of y^2 + h0*y partition the field
    F = make_field(p, k)
    for h0 in F.elements():
        total = sum(solve_quadratic_count(h0, c, F) for c in F.elements())
        assert total == F.order


def test_quadratic_count_matches_enumeration():
    rng = random.Random(7)
    for (p, k) in [(2, 2), (3, 2), (5, 1), (2, 3)]:
        F = make_field(p, k)
        for _ in range(20):
            h0 = F.from_packed(rng.randrange(F.order))
            c = F.from_packed(rng.randrange(F.order))
            direct = sum(1 for y in F.elements() if y * y + h0 * y == c)
            assert solve_quadratic_count(h0, c, F) == direct


def test_tensor_split_examples():
    assert tensor_split(6, 4) == (12, 2)
    assert tensor_split(5, 5) == (5, 5)
    assert tensor_split(3, 7) == (21, 1)


@given(st.integers(1, 100), st.integers(1, 100))
def test_tensor_split_property(m, n):
    from math import gcd

    l, c = tensor_split(m, n)
    assert l * c == m * n
    assert c == gcd(m, n)


def test_poly_gcd_examples():
    F3 = make_field(3, 1)
    a = UniPoly.from_ints(F3, [-1, 0, 1])  # x^2 - 1
    b = UniPoly.from_ints(F3, [-1, 1])  # x - 1
    assert poly_gcd(a, b) == UniPoly.from_ints(F3, [2, 1])
    f = UniPoly.from_ints(F3, [0, 0, 1])  # x^2
    assert poly_gcd(f, poly_derivative(f)) == UniPoly.from_ints(F3, [0, 1])
    F2 = make_field(2, 1)
    g = UniPoly.from_ints(F2, [1, 1, 0, 1])
    assert poly_derivative(g) == UniPoly.from_ints(F2, [1, 0, 1])


def test_poly_divmod_roundtrip():
    F5 = make_field(5, 1)
    rng = random.Random(3)
    for _ in range(50):
        a = UniPoly.from_ints(F5, [rng.randrange(5) for _ in range(rng.randrange(1, 8))])
        b = UniPoly.from_ints(F5, [rng.randrange(5) for _ in range(rng.randrange(1, 5))])
        if b.is_zero():
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_zero_polynomial_degree_marker():
    F2 = make_field(2, 1)
    z = UniPoly.zero(F2)
    assert z.degree == float("-inf")
    assert z.degree < 0


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_is_prime_agrees_with_trial_division(n):
    def trial(n):
        if n < 2:
            return False
        d = 2
        while d * d <= n:
            if n % d == 0:
                return False
            d += 1
        return True

    assert is_prime(n) == trial(n)
