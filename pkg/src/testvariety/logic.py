"""Existential ring sentences, their normalization, and place-degree semantics.

Sentences are existentially closed positive boolean combinations of
polynomial (in)equations with integer coefficients mod p, written as
s-expressions with an out-of-band "p: <prime>" header line:

    sentence := (exists (var ...) formula)
    formula  := (and formula+) | (or formula+) | (= poly poly) | (!= poly poly)
    poly     := integer | var | (+ poly+) | (* poly+) | (^ poly integer)

The normalizer rewrites a sentence into finitely many conjunctive polynomial
systems: disjunctive normal form first, then each inequality g != 0 becomes
g * z - 1 = 0 with a fresh variable z. Satisfiability over any extension
field is preserved, which the direct evaluator cross-checks by enumeration.

Place-degree profiles stand in for families of discrete valuations: a
profile knows which residue-field degrees occur. The base profile of the
rational function field has every degree (there are monic irreducibles of
every degree); a prescription transforms it the way a degree-4 extension
with prescribed split/inert behaviour would, and the reduction from a set
of primes to sentence satisfaction runs on top of these profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import lcm
from typing import Callable

import numpy as np

from . import sexpr
from .errors import (
    CapExceeded,
    FieldMismatch,
    NotCompiled,
    PrescriptionInvalid,
    SentenceSyntaxError,
)
from .gf import is_prime, make_field
from .pointless import DEFAULT_BUDGET, DEFAULT_SEED
from .tables import DEFAULT_ENUM_CAP, get_table
from .variety import TestVariety, build_test_variety, has_point
from .weilres import MPoly, PolySystem, _assignment_block, _eval_terms

# ---------------------------------------------------------------------------
# sentences


@dataclass(frozen=True)
class Sentence:
    prime: int
    variables: tuple[str, ...]
    body: tuple  # formula AST over ("and" | "or" | "=" | "!=") nodes


def _check_poly(node, variables, pos=None):
    tag = node[0]
    if tag == "int":
        return
    if tag == "var":
        if node[1] not in variables:
            raise SentenceSyntaxError(f"unbound variable '{node[1]}'", pos)
        return
    if tag in ("+", "*"):
        for child in node[1]:
            _check_poly(child, variables, pos)
        return
    if tag == "^":
        _check_poly(node[1], variables, pos)
        return
    raise AssertionError(f"bad poly node {tag}")


def _poly_from_sexpr(node):
    if isinstance(node, int):
        return ("int", node)
    if isinstance(node, str):
        return ("var", node)
    if not isinstance(node, list) or not node:
        raise SentenceSyntaxError(f"bad polynomial {node!r}")
    head = node[0]
    if head == "+":
        if len(node) < 2:
            raise SentenceSyntaxError("(+) needs at least one argument")
        return ("+", tuple(_poly_from_sexpr(c) for c in node[1:]))
    if head == "*":
        if len(node) < 2:
            raise SentenceSyntaxError("(*) needs at least one argument")
        return ("*", tuple(_poly_from_sexpr(c) for c in node[1:]))
    if head == "^":
        if len(node) != 3 or not isinstance(node[2], int) or node[2] < 0:
            raise SentenceSyntaxError("(^ poly e) needs a nonnegative integer exponent")
        return ("^", _poly_from_sexpr(node[1]), node[2])
    raise SentenceSyntaxError(f"unknown polynomial operator '{head}'")


def _formula_from_sexpr(node):
    if not isinstance(node, list) or not node:
        raise SentenceSyntaxError(f"bad formula {node!r}")
    head = node[0]
    if head in ("and", "or"):
        if len(node) < 2:
            raise SentenceSyntaxError(f"({head}) needs at least one subformula")
        return (head, tuple(_formula_from_sexpr(c) for c in node[1:]))
    if head in ("=", "!="):
        if len(node) != 3:
            raise SentenceSyntaxError(f"({head} lhs rhs) needs exactly two arguments")
        lhs = _poly_from_sexpr(node[1])
        rhs = _poly_from_sexpr(node[2])
        if rhs == ("int", 0):
            return (head, lhs)
        return (head, ("+", (lhs, ("*", (("int", -1), rhs)))))
    raise SentenceSyntaxError(f"unknown connective '{head}'")


def parse(text: str) -> Sentence:
    """Parse a sentence document: a 'p: <prime>' header line, then the body."""
    lines = text.lstrip().split("\n", 1)
    if not lines or not lines[0].startswith("p:"):
        raise SentenceSyntaxError("missing 'p: <prime>' header line")
    try:
        prime = int(lines[0][2:].strip())
    except ValueError:
        raise SentenceSyntaxError(f"bad prime in header: {lines[0]!r}") from None
    if not is_prime(prime):
        raise SentenceSyntaxError(f"{prime} is not prime")
    if len(lines) < 2:
        raise SentenceSyntaxError("missing sentence body")
    node = sexpr.parse(lines[1])
    if not (isinstance(node, list) and len(node) == 3 and node[0] == "exists"):
        raise SentenceSyntaxError("expected (exists (vars...) formula)")
    var_node = node[1]
    if not isinstance(var_node, list) or not all(isinstance(v, str) for v in var_node):
        raise SentenceSyntaxError("variable list must hold symbols")
    if len(set(var_node)) != len(var_node):
        raise SentenceSyntaxError("duplicate variable names")
    body = _formula_from_sexpr(node[2])
    _check_formula(body, set(var_node))
    return Sentence(prime, tuple(var_node), body)


def _check_formula(node, variables):
    if node[0] in ("and", "or"):
        for child in node[1]:
            _check_formula(child, variables)
    else:
        _check_poly(node[1], variables)


def _poly_to_sexpr(node):
    tag = node[0]
    if tag == "int":
        return node[1]
    if tag == "var":
        return node[1]
    if tag in ("+", "*"):
        return [tag] + [_poly_to_sexpr(c) for c in node[1]]
    if tag == "^":
        return ["^", _poly_to_sexpr(node[1]), node[2]]
    raise AssertionError(f"bad poly node {tag}")


def _formula_to_sexpr(node):
    tag = node[0]
    if tag in ("and", "or"):
        return [tag] + [_formula_to_sexpr(c) for c in node[1]]
    return [tag, _poly_to_sexpr(node[1]), 0]


def print_sentence(s: Sentence) -> str:
    body = sexpr.dump(["exists", list(s.variables), _formula_to_sexpr(s.body)])
    return f"p: {s.prime}\n{body}\n"


# ---------------------------------------------------------------------------
# normalization (DNF + inequality elimination)


def _dnf(node) -> list[list[tuple]]:
    """List of disjuncts, each a list of atom nodes."""
    tag = node[0]
    if tag in ("=", "!="):
        return [[node]]
    if tag == "or":
        out = []
        for child in node[1]:
            out.extend(_dnf(child))
        return out
    if tag == "and":
        acc = [[]]
        for child in node[1]:
            child_d = _dnf(child)
            acc = [left + right for left in acc for right in child_d]
        return acc
    raise AssertionError(f"bad formula node {tag}")


def _poly_to_mpoly(node, owner, num_vars, var_index) -> MPoly:
    tag = node[0]
    if tag == "int":
        return MPoly.constant(owner, num_vars, owner.scalar(node[1]))
    if tag == "var":
        return MPoly.variable(owner, num_vars, var_index[node[1]])
    if tag == "+":
        acc = MPoly.zero(owner, num_vars)
        for child in node[1]:
            acc = acc + _poly_to_mpoly(child, owner, num_vars, var_index)
        return acc
    if tag == "*":
        acc = MPoly.constant(owner, num_vars, owner.one)
        for child in node[1]:
            acc = acc * _poly_to_mpoly(child, owner, num_vars, var_index)
        return acc
    if tag == "^":
        return _poly_to_mpoly(node[1], owner, num_vars, var_index) ** node[2]
    raise AssertionError(f"bad poly node {tag}")


def normalize(s: Sentence) -> list[PolySystem]:
    """Conjunctive systems D_1..D_r equivalent to s over every extension of F_p.

    Each disjunct of the DNF becomes one system; an inequality g != 0 turns
    into g*z - 1 = 0 with a fresh variable z, so a solution of the system
    exhibits the inverse of g as a witness.
    """
    owner = make_field(s.prime, 1)
    systems = []
    for disjunct in _dnf(s.body):
        n_ineq = sum(1 for atom in disjunct if atom[0] == "!=")
        nv = len(s.variables) + n_ineq
        var_index = {name: i for i, name in enumerate(s.variables)}
        eqs = []
        z = len(s.variables)
        for atom in disjunct:
            poly = _poly_to_mpoly(atom[1], owner, nv, var_index)
            if atom[0] == "=":
                if not poly.is_zero():
                    eqs.append(poly)
            else:
                zvar = MPoly.variable(owner, nv, z)
                one = MPoly.constant(owner, nv, owner.one)
                eqs.append(poly * zvar - one)
                z += 1
        systems.append(PolySystem(owner, nv, tuple(eqs)))
    return systems


# ---------------------------------------------------------------------------
# direct (oracle) evaluation of a sentence by enumeration

_CHUNK = 1 << 16


def _eval_poly_block(node, table, var_arrays, count):
    tag = node[0]
    if tag == "int":
        return np.full(count, table.field.scalar(node[1]).packed, dtype=np.int64)
    if tag == "var":
        return var_arrays[node[1]]
    if tag == "+":
        acc = _eval_poly_block(node[1][0], table, var_arrays, count)
        for child in node[1][1:]:
            acc = table.add(acc, _eval_poly_block(child, table, var_arrays, count))
        return acc
    if tag == "*":
        acc = _eval_poly_block(node[1][0], table, var_arrays, count)
        for child in node[1][1:]:
            acc = table.mul(acc, _eval_poly_block(child, table, var_arrays, count))
        return acc
    if tag == "^":
        return table.pow(_eval_poly_block(node[1], table, var_arrays, count), node[2])
    raise AssertionError(f"bad poly node {tag}")


def _eval_formula_block(node, table, var_arrays, count):
    tag = node[0]
    if tag == "and":
        acc = _eval_formula_block(node[1][0], table, var_arrays, count)
        for child in node[1][1:]:
            acc &= _eval_formula_block(child, table, var_arrays, count)
        return acc
    if tag == "or":
        acc = _eval_formula_block(node[1][0], table, var_arrays, count)
        for child in node[1][1:]:
            acc |= _eval_formula_block(child, table, var_arrays, count)
        return acc
    vals = _eval_poly_block(node[1], table, var_arrays, count)
    return vals == 0 if tag == "=" else vals != 0


def satisfiable_direct(s: Sentence, m: int, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Truth of the sentence over F_{p^m}, by direct enumeration.

    This handles != natively and never looks at the normalizer, so it is an
    independent oracle for it.
    """
    ext = make_field(s.prime, m)
    table = get_table(ext, cap)
    v = len(s.variables)
    total = ext.order**v
    if total > cap:
        raise CapExceeded(f"{total} assignments exceed the cap {cap}")
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        block = _assignment_block(table, v, start, count)
        var_arrays = {name: block[i] for i, name in enumerate(s.variables)}
        if bool(_eval_formula_block(s.body, table, var_arrays, count).any()):
            return True
    return False


# ---------------------------------------------------------------------------
# encoding a compiled variety as a sentence


def encode_variety(variety: TestVariety) -> Sentence:
    """The existential sentence 'the compiled restriction has a common zero'.

    Variable X_{j,i} (coordinate i of source variable j) is named xj_i; the
    sentence is over the prime field the target system lives on.
    """
    if variety.compiled is None:
        raise NotCompiled("variety carries no compiled restriction")
    target = variety.compiled.target
    if target.owner.k != 1:
        raise FieldMismatch("sentence coefficients need a prime target field")
    n = variety.compiled.n
    names = tuple(f"x{t // n}_{t % n}" for t in range(target.num_vars))
    atoms = []
    for eq in target.equations:
        if eq.is_zero():
            atoms.append(("=", ("int", 0)))
            continue
        terms = []
        for c, e in eq.terms:
            factors: list = [("int", c.packed)]
            for j, exp in enumerate(e):
                if exp:
                    factors.append(("^", ("var", names[j]), exp))
            terms.append(("*", tuple(factors)))
        atoms.append(("=", ("+", tuple(terms))))
    body = atoms[0] if len(atoms) == 1 else ("and", tuple(atoms))
    return Sentence(target.owner.p, names, body)


# ---------------------------------------------------------------------------
# place-degree profiles


def _mobius(n: int) -> int:
    mu = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


def degree_count(p: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_p (necklace formula)."""
    if d < 1:
        raise ValueError("degree must be positive")
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * p ** (d // e)
    assert total % d == 0
    return total // d


@dataclass(frozen=True)
class PlaceProfile:
    """Which residue-field degrees occur among the simulated places."""

    p: int
    provenance: str
    rule: Callable[[int], bool]
    overrides: dict = dc_field(default_factory=dict)

    def occurs(self, d: int) -> bool:
        if d < 1:
            raise ValueError("degrees are positive")
        if d in self.overrides:
            return self.overrides[d]
        return self.rule(d)


def base_profile(p: int) -> PlaceProfile:
    """The function-field base: places of every residue degree exist."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return PlaceProfile(p, "base", rule=lambda d: True)


@dataclass(frozen=True)
class Prescription:
    """Split/inert table for a simulated cyclic degree-4 extension.

    Degrees in s1 split completely (stay); degrees not in s1 up to
    4*max(s2) go inert (multiply by 4); larger degrees get the configured
    multiplier.
    """

    s1: frozenset
    s2: frozenset
    multiplier: int = 4

    def validate(self):
        if self.s1 & self.s2:
            raise PrescriptionInvalid(f"overlap {sorted(self.s1 & self.s2)}")
        for member in self.s1 | self.s2:
            if member <= 4:
                raise PrescriptionInvalid(f"member {member} is not > 4")
            if not is_prime(member):
                raise PrescriptionInvalid(f"member {member} is not prime")
        if self.multiplier not in (1, 2, 4):
            raise PrescriptionInvalid(f"multiplier {self.multiplier} not in {{1,2,4}}")

    @property
    def inert_bound(self) -> int:
        return 4 * max(self.s2) if self.s2 else 0


def apply_prescription(base: PlaceProfile, pres: Prescription) -> PlaceProfile:
    """Degrees occurring after the prescribed degree-4 extension.

    A base degree d contributes d when d is in s1; 4d when d <= inert_bound
    and d not in s1; multiplier*d beyond the bound. The two conditions the
    construction must guarantee are re-verified on a finite window: every
    degree in s1 occurs, and every occurring degree d' has
    lcm(l, d') >= 4l for each l in s2.
    """
    pres.validate()
    s1 = pres.s1
    bound = pres.inert_bound
    mult = pres.multiplier

    def rule(d: int) -> bool:
        if d in s1 and base.occurs(d):
            return True
        if d % 4 == 0:
            src = d // 4
            if src not in s1 and 1 <= src <= bound and base.occurs(src):
                return True
        if d % mult == 0:
            src = d // mult
            if src >= 1 and src > bound and src not in s1 and base.occurs(src):
                return True
        return False

    result = PlaceProfile(base.p, "extension", rule=rule)
    for l in sorted(s1):
        if not result.occurs(l):
            raise PrescriptionInvalid(f"condition (1) fails: {l} does not occur")
    window = 4 * (bound + max(s1, default=0) + 4)
    for l in sorted(pres.s2):
        for d in range(1, window + 1):
            if result.occurs(d) and lcm(l, d) < 4 * l:
                raise PrescriptionInvalid(
                    f"condition (2) fails: degree {d} occurs with lcm({l},{d}) < {4 * l}"
                )
    return result


# ---------------------------------------------------------------------------
# evaluation semantics and the reduction


def evaluate(variety: TestVariety, profile: PlaceProfile) -> bool:
    """Whether the variety has points over every occurring residue field.

    Only degrees d with lcm(l, d) < 4l can fail to have points (l = the
    variety's extension parameter), i.e. d in {1, 2, 3, l, 2l, 3l}; all
    other degrees are nonempty outright, so the check is finite.
    """
    l = variety.n
    if variety.base.order != profile.p:
        raise FieldMismatch("variety base field and profile prime disagree")
    if not (is_prime(l) and l > 4):
        raise ValueError("evaluation needs n = l prime > 4")
    for d in sorted({1, 2, 3, l, 2 * l, 3 * l}):
        if profile.occurs(d) and not has_point(variety, d):
            return False
    return True


def relevant_primes(l: int) -> list[int]:
    """Primes > 4 among the queryable degrees {l, 2l, 3l} and the small window."""
    window = [1, 2, 3, l, 2 * l, 3 * l]
    return sorted({d for d in window if d > 4 and is_prime(d)})


def reduction_check(
    membership: Callable[[int], bool],
    l: int,
    *,
    p: int = 2,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    cap: int = DEFAULT_ENUM_CAP,
    cache=None,
    variety: TestVariety | None = None,
) -> bool:
    """Run the many-one reduction instance for the prime l against the set S.

    Builds the finite prescription fragment (S1 = relevant primes outside S,
    S2 = relevant primes in S), applies it to the base profile, and evaluates
    the variety for (q = p, n = l). The contract is: the result equals l in S.
    """
    if not (is_prime(l) and l > 4):
        raise ValueError("l must be a prime > 4")
    rel = relevant_primes(l)
    s1 = frozenset(r for r in rel if not membership(r))
    s2 = frozenset(r for r in rel if membership(r))
    if variety is None:
        variety = build_test_variety(p, l, budget, seed=seed, cap=cap, cache=cache)
    profile = apply_prescription(base_profile(p), Prescription(s1, s2))
    return evaluate(variety, profile)


SAMPLE_ORACLES: dict[str, Callable[[int], bool]] = {
    "mod4eq1": lambda l: l % 4 == 1,
    "evenbits": lambda l: bin(l).count("1") % 2 == 0,
    "all": lambda l: True,
}
