from math import gcd, lcm

import pytest

from testvariety import (
    LPoly,
    UniPoly,
    build_test_variety,
    count,
    has_point,
    l_from_counts,
    make_field,
    new_curve,
    verify_prop21,
)
from testvariety.errors import AssertionFailed, BudgetExhausted
from testvariety.pointless import PointlessCertificate
from testvariety.variety import TestVariety, curve_count


@pytest.fixture(scope="module")
def v21():
    return build_test_variety(2, 1)


@pytest.fixture(scope="module")
def v32():
    return build_test_variety(3, 2)


@pytest.fixture(scope="module")
def v25():
    return build_test_variety(2, 5)


def test_build_examples(v21, v32, v25):
    assert v21.backing == "certificate"
    assert v21.genus == 3  # fallback from the exhausted genus 1
    assert v32.backing == "certificate"
    assert v32.genus == 5
    assert v25.backing == "bullet"  # F_32 search is out of desk range


def test_build_budget_zero():
    with pytest.raises(BudgetExhausted):
        build_test_variety(2, 5, budget=0)


def test_has_point_bullets(v25, v32):
    assert not has_point(v25, 5)  # m | n
    assert not has_point(v25, 1)
    assert has_point(v25, 4)  # lcm(4,5) = 20 = 4n
    assert has_point(v25, 6)
    assert not has_point(v32, 2)
    assert count(v32, 2) == curve_count(v32, 1) ** 2 == 0


def test_count_powers(v32):
    for m in (1, 2, 3, 4, 5, 6, 8, 12):
        j = lcm(m, 2) // 2
        assert count(v32, m) == curve_count(v32, j) ** gcd(m, 2)


def test_has_point_depends_only_on_lcm(v32, v21):
    for variety in (v32, v21):
        n = variety.n
        seen = {}
        for m in range(1, 49):
            key = lcm(m, n)
            value = has_point(variety, m)
            if key in seen:
                assert seen[key] == value
            seen[key] = value


def test_verify_prop21_passes(v32, v21):
    rep = verify_prop21(v32, 12)
    assert rep.passed
    assert sorted(rep.gap) == [3, 4, 6]
    assert [m for m, _ in rep.bullet1] == [1, 2]
    rep2 = verify_prop21(v21, 8)
    assert rep2.passed
    assert sorted(rep2.gap) == [2, 3]
    assert rep2.cross_checked


def test_verify_prop21_requires_enough_range(v21):
    with pytest.raises(ValueError):
        verify_prop21(v21, 2)


def test_bullets_hold_out_to_4n_plus_8(v32, v21):
    for variety in (v32, v21):
        n = variety.n
        for m in range(1, 4 * n + 9):
            hp = has_point(variety, m)
            if n % m == 0:
                assert not hp
            elif lcm(m, n) >= 4 * n:
                assert hp


def test_tampered_variety_fails():
    # a certificate whose curve is NOT pointless: N_1 = 1 elliptic over F_2
    F2 = make_field(2, 1)
    curve = new_curve(F2, 1, UniPoly.from_ints(F2, [1]), UniPoly.from_ints(F2, [1, 1, 0, 1]))
    fake_cert = PointlessCertificate(
        curve=curve,
        l_poly=l_from_counts(2, 1, [1]),
        verified_horizon=8,
        candidates_examined=0,
        elapsed_seconds=0.0,
        mode="exhaustive",
    )
    tampered = TestVariety(2, 1, F2, 2, fake_cert)
    with pytest.raises(AssertionFailed) as exc_info:
        verify_prop21(tampered, 8)
    assert exc_info.value.m == 1  # fails at m = n


def test_bullet_backed_count_refuses(v25):
    from testvariety.errors import TestVarietyError

    with pytest.raises(TestVarietyError):
        count(v25, 3)
