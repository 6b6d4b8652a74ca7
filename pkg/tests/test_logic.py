import random

import pytest

from testvariety import (
    MPoly,
    Prescription,
    apply_prescription,
    base_profile,
    build_test_variety,
    degree_count,
    encode_variety,
    evaluate,
    make_field,
    normalize,
    parse,
    print_sentence,
    reduction_check,
    satisfiable_direct,
)
from testvariety.errors import NotCompiled, PrescriptionInvalid, SentenceSyntaxError
from testvariety.gf import _fp_is_irreducible
from testvariety.logic import SAMPLE_ORACLES, Sentence, relevant_primes
from testvariety.variety import TestVariety
from testvariety.weilres import system_satisfiable


def test_parse_examples():
    s = parse("p: 7\n(exists (x) (= (* x x) 2))")
    assert s.prime == 7
    assert s.variables == ("x",)
    s2 = parse("p: 3\n(exists (x y) (and (= y 0) (!= x 0)))")
    assert s2.body[0] == "and"
    assert s2.body[1][1][0] == "!="
    with pytest.raises(SentenceSyntaxError):
        parse("p: 5\n(exists (x")
    with pytest.raises(SentenceSyntaxError):
        parse("(exists (x) (= x 0))")  # missing header
    with pytest.raises(SentenceSyntaxError):
        parse("p: 5\n(exists (x) (= y 0))")  # unbound variable


def test_print_parse_roundtrip():
    texts = [
        "p: 7\n(exists (x) (= (* x x) 2))",
        "p: 3\n(exists (x y) (or (= (+ x y) 0) (!= (^ x 3) 1)))",
        "p: 2\n(exists (a b c) (and (or (= a 0) (= b 0)) (!= c 0)))",
    ]
    for text in texts:
        s = parse(text)
        assert parse(print_sentence(s)) == s


def test_normalize_inequality():
    s = parse("p: 5\n(exists (x) (!= x 0))")
    systems = normalize(s)
    assert len(systems) == 1
    d = systems[0]
    assert d.num_vars == 2  # x plus the fresh inverse witness
    assert len(d.equations) == 1
    eq = d.equations[0]
    F5 = make_field(5, 1)
    assert eq == MPoly(F5, 2, [(F5.one, (1, 1)), (-F5.one, (0, 0))])


def test_normalize_dnf():
    s = parse("p: 5\n(exists (x) (or (= x 0) (= (+ x -1) 0)))")
    systems = normalize(s)
    assert len(systems) == 2
    assert all(len(d.equations) == 1 for d in systems)


def test_normalize_preserves_satisfiability_fixed_cases():
    cases = [
        ("p: 3\n(exists (x) (!= x 0))", True),
        ("p: 3\n(exists (x) (and (= x 0) (!= x 0)))", False),
        ("p: 2\n(exists (x y) (and (= (+ (* x x) y 1) 0) (!= y 0)))", True),
        ("p: 5\n(exists (x) (= (+ (* x x) 2) 0))", False),  # -2 = 3 is not a QR mod 5
        ("p: 5\n(exists (x) (= (+ (* x x) 1) 0))", True),  # -1 = 2^2
        ("p: 3\n(exists (x) (!= 0 0))", False),
        ("p: 3\n(exists (x) (= 0 0))", True),
    ]
    for text, expected in cases:
        s = parse(text)
        for m in (1, 2):
            direct = satisfiable_direct(s, m)
            normed = any(system_satisfiable(d, m) for d in normalize(s))
            assert direct == normed
        assert satisfiable_direct(s, 1) == expected


def _random_formula(rng, nvars, natoms, p):
    names = ["x", "y", "z"][:nvars]

    def poly():
        terms = []
        for _ in range(rng.randrange(1, 4)):
            factors = [("int", rng.randrange(p))]
            budget = 3
            for name in names:
                e = rng.randrange(0, min(budget, 3) + 1)
                if e:
                    factors.append(("^", ("var", name), e))
                    budget -= e
            terms.append(("*", tuple(factors)))
        return ("+", tuple(terms))

    atoms = [(rng.choice(["=", "!="]), poly()) for _ in range(natoms)]
    while len(atoms) > 1:
        op = rng.choice(["and", "or"])
        right = atoms.pop()
        left = atoms.pop()
        atoms.append((op, (left, right)))
    return Sentence(p, tuple(names), atoms[0])


def test_normalize_random_formulas_quick():
    rng = random.Random(99)
    for _ in range(25):
        p = rng.choice([2, 3])
        s = _random_formula(rng, rng.randrange(1, 4), rng.randrange(1, 4), p)
        for m in (1, 2):
            direct = satisfiable_direct(s, m)
            normed = any(system_satisfiable(d, m) for d in normalize(s))
            assert direct == normed


def test_degree_count_examples():
    assert degree_count(2, 1) == 2
    assert degree_count(2, 2) == 1
    assert degree_count(3, 3) == 8


def test_degree_count_against_scan():
    # count irreducible monic cubics over F_3 by testing all 27 of them
    found = 0
    for c0 in range(3):
        for c1 in range(3):
            for c2 in range(3):
                if _fp_is_irreducible([c0, c1, c2, 1], 3):
                    found += 1
    assert found == degree_count(3, 3)


def test_base_profile():
    bp = base_profile(2)
    assert all(bp.occurs(d) for d in range(1, 40))


def test_prescription_validation():
    with pytest.raises(PrescriptionInvalid):
        apply_prescription(base_profile(2), Prescription(frozenset({5}), frozenset({5})))
    with pytest.raises(PrescriptionInvalid):
        apply_prescription(base_profile(2), Prescription(frozenset({3}), frozenset({7})))
    with pytest.raises(PrescriptionInvalid):
        apply_prescription(base_profile(2), Prescription(frozenset({6}), frozenset()))
    with pytest.raises(PrescriptionInvalid):
        apply_prescription(base_profile(2), Prescription(frozenset({5}), frozenset({7}), multiplier=3))


def test_apply_prescription_examples():
    prof = apply_prescription(base_profile(2), Prescription(frozenset({5}), frozenset({7})))
    assert prof.occurs(5)  # condition (1)
    assert prof.occurs(8)  # base degree 2 goes inert: 8, and lcm(7,8) = 56 >= 28
    assert not prof.occurs(3)  # degrees 1,2,3 map to 4,8,12
    assert not prof.occurs(1)
    assert not prof.occurs(2)


def test_apply_prescription_randomized_conditions():
    from math import lcm

    rng = random.Random(4)
    primes = [p for p in range(5, 100) if all(p % d for d in range(2, p))]
    for _ in range(50):
        chosen = rng.sample(primes, rng.randrange(1, 6))
        half = rng.randrange(0, len(chosen) + 1)
        s1, s2 = frozenset(chosen[:half]), frozenset(chosen[half:])
        mult = rng.choice([1, 2, 4])
        prof = apply_prescription(base_profile(2), Prescription(s1, s2, multiplier=mult))
        for l in s1:
            assert prof.occurs(l)
        bound = 4 * max(s2) if s2 else 0
        for l in s2:
            for d in range(1, 4 * (bound + max(s1, default=0) + 8)):
                if prof.occurs(d):
                    assert lcm(l, d) >= 4 * l


@pytest.fixture(scope="module")
def v27():
    return build_test_variety(2, 7)


def test_evaluate_examples(v27):
    l = 7
    # occurs(l) forces emptiness
    prof = apply_prescription(base_profile(2), Prescription(frozenset({l}), frozenset()))
    assert not evaluate(v27, prof)
    # none of the six queried degrees occur: true
    prof2 = apply_prescription(base_profile(2), Prescription(frozenset(), frozenset({l})))
    assert evaluate(v27, prof2)
    # the base profile has occurs(1), and V is empty over the base field
    assert not evaluate(v27, base_profile(2))


def test_evaluate_monotone(v27):
    # enlarging the occurring set can only flip true -> false
    results = []
    for s1 in [frozenset(), frozenset({7})]:
        prof = apply_prescription(base_profile(2), Prescription(s1, frozenset()))
        results.append(evaluate(v27, prof))
    assert results[0] >= results[1]


def test_relevant_primes():
    assert relevant_primes(7) == [7]
    assert relevant_primes(13) == [13]


def test_reduction_check_samples():
    for l in (5, 7, 13):
        for name, oracle in SAMPLE_ORACLES.items():
            assert reduction_check(oracle, l) == bool(oracle(l)), (name, l)
    with pytest.raises(ValueError):
        reduction_check(SAMPLE_ORACLES["all"], 4)


def test_encode_variety(tmp_path):
    variety = build_test_variety(2, 2)
    sentence = encode_variety(variety)
    assert len(sentence.variables) == 4
    assert sentence.body[0] == "and"
    assert len(sentence.body[1]) == 2
    assert parse(print_sentence(sentence)) == sentence
    bare = TestVariety(2, 5, make_field(2, 1), 32, None, bullet_genus=15)
    with pytest.raises(NotCompiled):
        encode_variety(bare)


def test_encoded_sentence_satisfiability_matches_counts():
    variety = build_test_variety(2, 2)
    sentence = encode_variety(variety)
    from testvariety.variety import curve_count

    # target solutions over F_2 exist iff the curve has affine points over F_4;
    # the curve is pointless over F_4 and its two infinity points are absent here
    from testvariety.weilres import count_solutions

    affine = count_solutions(variety.compiled.target, 1)
    assert satisfiable_direct(sentence, 1) == (affine > 0)
