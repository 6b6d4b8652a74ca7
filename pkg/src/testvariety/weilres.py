"""Multivariate polynomial systems and restriction of scalars.

A system over F_{q^n} compiles to a system over F_q by writing each variable
X_j as X_{j,0} + X_{j,1} b + ... + X_{j,n-1} b^{n-1} along the power basis
(b the class of the modulus variable of F_{q^n}), expanding, and splitting
every equation into its n coordinate components. Solutions over any F_{q^m}
then biject with solutions of the source over the tensor algebra
F_{q^m} (x) F_{q^n}, which is what verify_bijection checks by enumeration.

Only affine data is handled here; projective bookkeeping is done by the
callers through curve counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

import numpy as np

from .errors import CapExceeded, FieldMismatch, NotASolution
from . import sexpr
from .gf import FieldDesc, FieldElem, embed, make_field
from .tables import DEFAULT_ENUM_CAP, get_table

Term = tuple[FieldElem, tuple[int, ...]]


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class MPoly:
    """Sparse multivariate polynomial, terms in descending graded-lex order."""

    __slots__ = ("owner", "num_vars", "terms")

    def __init__(self, owner: FieldDesc, num_vars: int, terms):
        merged: dict[tuple[int, ...], FieldElem] = {}
        for coeff, exps in terms:
            if len(exps) != num_vars:
                raise ValueError("exponent vector length mismatch")
            if exps in merged:
                merged[exps] = merged[exps] + coeff
            else:
                merged[exps] = coeff
        clean = [(c, e) for e, c in merged.items() if not c.is_zero()]
        clean.sort(key=lambda t: _grlex_key(t[1]), reverse=True)
        self.owner = owner
        self.num_vars = num_vars
        self.terms = tuple(clean)

    @classmethod
    def zero(cls, owner, num_vars):
        return cls(owner, num_vars, [])

    @classmethod
    def constant(cls, owner, num_vars, c: FieldElem):
        return cls(owner, num_vars, [(c, (0,) * num_vars)])

    @classmethod
    def variable(cls, owner, num_vars, j):
        e = [0] * num_vars
        e[j] = 1
        return cls(owner, num_vars, [(owner.one, tuple(e))])

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for _, e in self.terms)

    def __add__(self, other):
        return MPoly(self.owner, self.num_vars, list(self.terms) + list(other.terms))

    def __sub__(self, other):
        neg = [(-c, e) for c, e in other.terms]
        return MPoly(self.owner, self.num_vars, list(self.terms) + neg)

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return MPoly(self.owner, self.num_vars, [(c * other, e) for c, e in self.terms])
        out = []
        for c1, e1 in self.terms:
            for c2, e2 in other.terms:
                out.append((c1 * c2, tuple(a + b for a, b in zip(e1, e2))))
        return MPoly(self.owner, self.num_vars, out)

    def __pow__(self, n: int):
        acc = MPoly.constant(self.owner, self.num_vars, self.owner.one)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def partial(self, j: int) -> "MPoly":
        out = []
        for c, e in self.terms:
            if e[j]:
                ee = list(e)
                ee[j] -= 1
                out.append((c * self.owner.scalar(e[j]), tuple(ee)))
        return MPoly(self.owner, self.num_vars, out)

    def evaluate(self, point) -> FieldElem:
        """Value at a point over the owner field or an extension of it."""
        ext = point[0].owner if point else self.owner
        acc = ext.zero
        for c, e in self.terms:
            v = embed(c, ext)
            for x, exp in zip(point, e):
                if exp:
                    v = v * x**exp
            acc = acc + v
        return acc

    def total_degree(self):
        return max((sum(e) for _, e in self.terms), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, MPoly)
            and self.owner == other.owner
            and self.num_vars == other.num_vars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.owner, self.num_vars, self.terms))

    def __repr__(self):
        if not self.terms:
            return "MPoly(0)"
        bits = []
        for c, e in self.terms:
            mono = "*".join(f"x{j}^{k}" for j, k in enumerate(e) if k)
            bits.append(f"{list(c.coeffs)}{'*' + mono if mono else ''}")
        return "MPoly(" + " + ".join(bits) + ")"


@dataclass(frozen=True)
class PolySystem:
    owner: FieldDesc
    num_vars: int
    equations: tuple[MPoly, ...]

    def __post_init__(self):
        for eq in self.equations:
            if eq.owner != self.owner or eq.num_vars != self.num_vars:
                raise FieldMismatch("equation does not match the system header")


@dataclass(frozen=True)
class RestrictedSystem:
    source: PolySystem
    target: PolySystem
    basis: tuple[FieldElem, ...]  # 1, b, ..., b^{n-1} in the source field
    n: int


# ---------------------------------------------------------------------------
# coordinate decomposition along the power basis


@lru_cache(maxsize=None)
def _decomposition_matrix(big: FieldDesc, n: int):
    """Inverse, over F_p, of (c_0..c_{n-1}) in F_q^n -> sum embed(c_i) b^i."""
    if big.k % n:
        raise FieldMismatch(f"{big} is not a degree-{n} extension")
    k = big.k // n
    base = make_field(big.p, k)
    b = big.gen if big.k > 1 else big.one
    cols = []
    for i in range(n):
        bi = b**i
        for j in range(k):
            unit = base.from_packed(base.p**j)
            cols.append((embed(unit, big) * bi).coeffs)
    # invert the K x K matrix whose columns are cols, over F_p
    K, p = big.k, big.p
    aug = [[cols[c][r] for c in range(K)] + [1 if i == r else 0 for i in range(K)]
           for r in range(K)]
    for col in range(K):
        piv = next((i for i in range(col, K) if aug[i][col]), None)
        if piv is None:
            raise AssertionError("basis matrix is singular; unreachable")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [v * inv % p for v in aug[col]]
        for i in range(K):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(aug[i][j] - f * aug[col][j]) % p for j in range(2 * K)]
    inverse_rows = [row[K:] for row in aug]
    return base, inverse_rows


def decompose(z: FieldElem, n: int):
    """Coordinates of z in F_{q^n} along 1, b, ..., b^{n-1} over F_q."""
    big = z.owner
    base, inv_rows = _decomposition_matrix(big, n)
    K, p = big.k, big.p
    vec = [sum(inv_rows[r][c] * z.coeffs[c] for c in range(K)) % p for r in range(K)]
    k = base.k
    return [base.element(vec[i * k : (i + 1) * k]) for i in range(n)]


def restrict(system: PolySystem, n: int) -> RestrictedSystem:
    """Compile a system over F_{q^n} into its scalar restriction over F_q."""
    big = system.owner
    if big.k % n:
        raise FieldMismatch(f"{big} is not a degree-{n} extension")
    base, _ = _decomposition_matrix(big, n)
    s = system.num_vars
    nv = n * s
    b = big.gen if big.k > 1 else big.one
    basis = tuple(b**i for i in range(n))
    # X_j -> sum_i b^i X_{j,i}, as an MPoly over the big field in n*s variables
    subs = []
    for j in range(s):
        terms = []
        for i in range(n):
            e = [0] * nv
            e[j * n + i] = 1
            terms.append((basis[i], tuple(e)))
        subs.append(MPoly(big, nv, terms))
    target_eqs = []
    for eq in system.equations:
        expanded = MPoly.zero(big, nv)
        for c, e in eq.terms:
            term = MPoly.constant(big, nv, c)
            for j, exp in enumerate(e):
                if exp:
                    term = term * subs[j] ** exp
            expanded = expanded + term
        components = [[] for _ in range(n)]
        for c, e in expanded.terms:
            for i, coord in enumerate(decompose(c, n)):
                if not coord.is_zero():
                    components[i].append((coord, e))
        for comp in components:
            target_eqs.append(MPoly(base, nv, comp))
    target = PolySystem(base, nv, tuple(target_eqs))
    return RestrictedSystem(source=system, target=target, basis=basis, n=n)


# ---------------------------------------------------------------------------
# enumeration


def _extension_and_table(system: PolySystem, m: int, cap: int):
    ext = make_field(system.owner.p, system.owner.k * m)
    if ext.order > cap:
        raise CapExceeded(f"extension of order {ext.order} exceeds the cap {cap}")
    return ext, get_table(ext, cap)


def _embedded_terms(eq: MPoly, ext: FieldDesc):
    return [(embed(c, ext).packed, e) for c, e in eq.terms]


def _eval_terms(table, terms, var_arrays, count):
    acc = np.zeros(count, dtype=np.int64)
    for coeff, exps in terms:
        t = np.full(count, coeff, dtype=np.int64)
        for j, e in enumerate(exps):
            if e:
                t = table.mul(t, table.pow(var_arrays[j], e))
        acc = table.add(acc, t)
    return acc


def _assignment_block(table, num_vars, start, count):
    """Variable value arrays for assignment indices [start, start+count).

    Index order is lexicographic in the coordinate vector with variable 0
    most significant, coordinates ordered by packed value.
    """
    idx = np.arange(start, start + count, dtype=np.int64)
    N = table.N
    out = []
    for j in range(num_vars):
        out.append((idx // N ** (num_vars - 1 - j)) % N)
    return out

_CHUNK = 1 << 16


def brute_solutions(system: PolySystem, m: int, cap: int = DEFAULT_ENUM_CAP):
    """All common zeros over F_{q^m}, as tuples of FieldElem, in lex order."""
    ext, table = _extension_and_table(system, m, cap)
    v = system.num_vars
    total = ext.order**v
    if total > cap:
        raise CapExceeded(f"{total} assignments exceed the cap {cap}")
    eqs = [_embedded_terms(eq, ext) for eq in system.equations]
    sols = []
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        var_arrays = _assignment_block(table, v, start, count)
        ok = np.ones(count, dtype=bool)
        for terms in eqs:
            ok &= _eval_terms(table, terms, var_arrays, count) == 0
            if not ok.any():
                break
        for offset in np.flatnonzero(ok):
            sols.append(tuple(ext.from_packed(int(arr[offset])) for arr in var_arrays))
    return sols


def count_solutions(system: PolySystem, m: int, cap: int = DEFAULT_ENUM_CAP) -> int:
    """|brute_solutions| without materializing the solution list."""
    ext, table = _extension_and_table(system, m, cap)
    v = system.num_vars
    total = ext.order**v
    if total > cap:
        raise CapExceeded(f"{total} assignments exceed the cap {cap}")
    eqs = [_embedded_terms(eq, ext) for eq in system.equations]
    found = 0
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        var_arrays = _assignment_block(table, v, start, count)
        ok = np.ones(count, dtype=bool)
        for terms in eqs:
            ok &= _eval_terms(table, terms, var_arrays, count) == 0
        found += int(ok.sum())
    return found


def system_satisfiable(system: PolySystem, m: int, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Exhaustive existence check, scanning single-equation variables on
    their own axis.

    Variables occurring in exactly one equation (such as the fresh variables
    introduced by inequality elimination) are quantified per equation: the
    grid runs over the remaining variables and each such equation contributes
    'some value of its private variables works', checked by scanning the full
    axis. This is still a complete search of the assignment space, organized
    to keep the enumerated grid within the cap.
    """
    ext, table = _extension_and_table(system, m, cap)
    v = system.num_vars
    occurs_in = [set() for _ in range(v)]
    for i, eq in enumerate(system.equations):
        for _, e in eq.terms:
            for j, exp in enumerate(e):
                if exp:
                    occurs_in[j].add(i)
    pendant = [j for j in range(v) if len(occurs_in[j]) == 1]
    unused = {j for j in range(v) if not occurs_in[j]}  # any value works
    grid_vars = [j for j in range(v) if j not in pendant and j not in unused]
    # equations with no pendant variables filter the grid; the rest reduce
    pendant_of_eq: dict[int, list[int]] = {}
    for j in pendant:
        (i,) = occurs_in[j]
        pendant_of_eq.setdefault(i, []).append(j)
    N = ext.order
    total = N ** len(grid_vars)
    if total > cap:
        raise CapExceeded(f"{total} grid assignments exceed the cap {cap}")
    for i in pendant_of_eq:
        if N ** len(pendant_of_eq[i]) > cap:
            raise CapExceeded("pendant axis larger than the cap")
    eqs = [_embedded_terms(eq, ext) for eq in system.equations]
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        block = _assignment_block(table, len(grid_vars), start, count)
        var_arrays: list = [None] * v
        for pos, j in enumerate(grid_vars):
            var_arrays[j] = block[pos]
        ok = np.ones(count, dtype=bool)
        for i, terms in enumerate(eqs):
            if i in pendant_of_eq:
                continue
            ok &= _eval_terms(table, terms, var_arrays, count) == 0
            if not ok.any():
                break
        if not ok.any():
            continue
        # narrow to grid survivors before scanning the per-equation axes
        keep = np.flatnonzero(ok)
        alive = len(keep)
        if alive < count:
            for j in grid_vars:
                var_arrays[j] = var_arrays[j][keep]
        ok = np.ones(alive, dtype=bool)
        for i, zs in pendant_of_eq.items():
            axis = N ** len(zs)
            hit = np.zeros(alive, dtype=bool)
            for zidx in range(axis):
                zz = zidx
                for j in zs:
                    var_arrays[j] = np.full(alive, zz % N, dtype=np.int64)
                    zz //= N
                hit |= _eval_terms(table, eqs[i], var_arrays, alive) == 0
            ok &= hit
            if not ok.any():
                break
        if ok.any():
            return True
    return False


def verify_bijection(restricted: RestrictedSystem, m: int, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Solution count of the target over F_{q^m} equals the tensor-side count.

    The tensor algebra F_{q^m} (x) F_{q^n} is a product of gcd(m, n) copies
    of F_{q^lcm(m,n)}, so the right-hand side is the source solution count
    over the degree lcm(m,n)/n extension, raised to gcd(m, n).
    """
    n = restricted.n
    j = lcm(m, n) // n
    copies = gcd(m, n)
    left = count_solutions(restricted.target, m, cap)
    right = count_solutions(restricted.source, j, cap) ** copies
    return left == right


def jacobian_smooth_at(system: PolySystem, point, expected_codim: int) -> bool:
    """Rank of the Jacobian at a solution is at least the expected codimension."""
    point = tuple(point)
    ext = point[0].owner if point else system.owner
    for eq in system.equations:
        if not eq.evaluate(point).is_zero():
            raise NotASolution(f"point does not satisfy {eq!r}")
    rows = []
    for eq in system.equations:
        rows.append([eq.partial(j).evaluate(point) for j in range(system.num_vars)])
    # exact Gaussian elimination over the point's field
    rank = 0
    ncols = system.num_vars
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [v * inv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not rows[i][col].is_zero():
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank >= expected_codim


# ---------------------------------------------------------------------------
# curve chart bridge and serialization


def affine_chart_system(curve, over: FieldDesc | None = None) -> PolySystem:
    """The affine chart y^2 + h(x) y - f(x) = 0 as a 2-variable system.

    Variables are (x, y). With `over` set, coefficients are embedded into
    that extension and the system is owned by it.
    """
    owner = over if over is not None else curve.base
    terms = [(owner.one, (0, 2))]
    for i, c in enumerate(curve.h.coeffs):
        if not c.is_zero():
            terms.append((embed(c, owner), (i, 1)))
    for i, c in enumerate(curve.f.coeffs):
        if not c.is_zero():
            terms.append((-embed(c, owner), (i, 0)))
    eq = MPoly(owner, 2, terms)
    return PolySystem(owner, 2, (eq,))


def system_to_sexpr(system: PolySystem) -> str:
    owner = system.owner
    eqs = []
    for eq in system.equations:
        terms = []
        for c, e in eq.terms:
            terms.append([list(c.coeffs), list(e)])
        eqs.append(["eq"] + terms)
    node = [
        "system",
        ["field", owner.p, owner.k, list(owner.modulus)],
        ["vars", system.num_vars],
    ] + eqs
    return sexpr.dump(node)


def system_from_sexpr(text: str) -> PolySystem:
    node = sexpr.parse(text)
    if not (isinstance(node, list) and node and node[0] == "system"):
        raise ValueError("not a (system ...) expression")
    _, field_node, vars_node, *eq_nodes = node
    if field_node[0] != "field" or vars_node[0] != "vars":
        raise ValueError("malformed system header")
    p, k = field_node[1], field_node[2]
    owner = make_field(p, k)
    if list(owner.modulus) != field_node[3]:
        raise ValueError("modulus in file does not match the canonical modulus")
    num_vars = vars_node[1]
    eqs = []
    for eq_node in eq_nodes:
        if eq_node[0] != "eq":
            raise ValueError("expected (eq ...)")
        terms = []
        for coeffs, exps in eq_node[1:]:
            terms.append((owner.element(coeffs), tuple(exps)))
        eqs.append(MPoly(owner, num_vars, terms))
    return PolySystem(owner, num_vars, tuple(eqs))
