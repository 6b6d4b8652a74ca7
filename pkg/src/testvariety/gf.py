"""Exact arithmetic in F_{p^k} and univariate polynomials over it.

Fields are presented as F_p[x]/(modulus) with a canonical modulus: the
lexicographically smallest monic irreducible of the requested degree,
comparing coefficient tuples (c_{k-1}, ..., c_0). Elements are coefficient
vectors; every operation is exact integer arithmetic, no floats anywhere.

An element with coefficients (c_0, ..., c_{k-1}) packs into the integer
sum(c_i * p^i); packed values enumerate the field as 0, 1, ..., p^k - 1 and
define the element ordering used everywhere (search order, lex-min roots,
solution listings).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DegreeNotDividing, FieldMismatch, NotPrime, SizeCapExceeded

FIELD_SIZE_CAP = 2**40
SUBFIELD_ENUM_CAP = 2**22

NEG_INFINITY = float("-inf")

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the field size cap."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# dense F_p[x] helpers on plain int lists (coefficients low to high)

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        c = a[-1]
        if c:
            off = len(a) - 1 - dm
            for i in range(dm):
                a[off + i] = (a[off + i] - c * m[i]) % p
        a.pop()
    return _fp_trim(a)


def _fp_mulmod(a, b, m, p):
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _fp_mod(res, m, p)


def _fp_powmod(a, e, m, p):
    r = [1]
    b = _fp_mod(list(a), m, p)
    while e:
        if e & 1:
            r = _fp_mulmod(r, b, m, p)
        b = _fp_mulmod(b, b, m, p)
        e >>= 1
    return r


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        bm = [c * inv % p for c in b]
        a = _fp_mod(a, bm, p)
        a, b = b, a
    return a


def _fp_is_irreducible(f, p):
    """Rabin test: x^{p^k} = x mod f and gcd(x^{p^{k/l}} - x, f) = 1 for l | k."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    xq = _fp_powmod(x, p**k, f, p)
    diff = _fp_trim([(xi - (1 if i == 1 else 0)) % p for i, xi in enumerate(xq + [0, 0])])
    if diff:
        return False
    for ell in _prime_factors(k):
        xql = _fp_powmod(x, p ** (k // ell), f, p)
        g = [(xi - (1 if i == 1 else 0)) % p for i, xi in enumerate(xql + [0, 0])]
        if len(_fp_gcd(f, g, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def _min_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lex-smallest monic irreducible of degree k over F_p.

    Candidates are scanned by the integer t whose base-p digits, high to low,
    are (c_{k-1}, ..., c_0); that is exactly ascending lex order on the tuple.
    """
    if k == 1:
        return (0, 1)
    for t in range(p**k):
        digits = []
        tt = t
        for _ in range(k):
            digits.append(tt % p)
            tt //= p
        f = digits + [1]
        if _fp_is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible found; unreachable for prime p")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDesc:
    """A concrete finite field F_{p^k} = F_p[x]/(modulus)."""

    p: int
    k: int
    modulus: tuple[int, ...]  # length k+1, monic

    @property
    def order(self) -> int:
        return self.p**self.k

    # -- element construction ------------------------------------------------

    def element(self, coeffs) -> "FieldElem":
        c = tuple(int(v) % self.p for v in coeffs)
        if len(c) != self.k:
            c = (c + (0,) * self.k)[: self.k]
        return FieldElem(self, c)

    def scalar(self, n: int) -> "FieldElem":
        """The image of the integer n under F_p -> F_{p^k}."""
        return FieldElem(self, (n % self.p,) + (0,) * (self.k - 1))

    @property
    def zero(self) -> "FieldElem":
        return self.scalar(0)

    @property
    def one(self) -> "FieldElem":
        return self.scalar(1)

    @property
    def gen(self) -> "FieldElem":
        """The class of x, the root of the modulus."""
        if self.k == 1:
            return self.zero
        return FieldElem(self, (0, 1) + (0,) * (self.k - 2))

    def from_packed(self, t: int) -> "FieldElem":
        coeffs = []
        for _ in range(self.k):
            coeffs.append(t % self.p)
            t //= self.p
        return FieldElem(self, tuple(coeffs))

    def elements(self):
        """All field elements in ascending packed order."""
        for t in range(self.order):
            yield self.from_packed(t)

    # -- coefficient-tuple arithmetic ---------------------------------------

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul(self, a, b):
        p, k, m = self.p, self.k, self.modulus
        if k == 1:
            return (a[0] * b[0] % p,)
        res = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    res[i + j] = (res[i + j] + ai * bj) % p
        for d in range(2 * k - 2, k - 1, -1):
            c = res[d]
            if c:
                off = d - k
                for i in range(k):
                    res[off + i] = (res[off + i] - c * m[i]) % p
            res[d] = 0
        return tuple(res[:k])

    def _inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero field element")
        if self.k == 1:
            return (pow(a[0], -1, self.p),)
        # extended Euclid in F_p[x] against the modulus
        p = self.p
        r0, r1 = list(self.modulus), _fp_trim(list(a))
        s0, s1 = [], [1]
        while r1:
            inv_lead = pow(r1[-1], -1, p)
            q = [0] * (len(r0) - len(r1) + 1)
            r = list(r0)
            while len(r) >= len(r1) and r:
                d = len(r) - len(r1)
                c = r[-1] * inv_lead % p
                q[d] = c
                for i in range(len(r1)):
                    r[d + i] = (r[d + i] - c * r1[i]) % p
                _fp_trim(r)
            # s = s0 - q*s1
            qs = [0] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs[i + j] = (qs[i + j] + qi * sj) % p
            s = [( (s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)) % p
                 for i in range(max(len(s0), len(qs), 1))]
            r0, r1 = r1, r
            s0, s1 = s1, _fp_trim(s)
        # r0 is the gcd, a unit since the modulus is irreducible
        c = pow(r0[0], -1, p)
        out = [v * c % p for v in s0]
        out = (out + [0] * self.k)[: self.k]
        return tuple(out)

    def _pack(self, coeffs) -> int:
        t = 0
        for c in reversed(coeffs):
            t = t * self.p + c
        return t

    def __repr__(self):
        return f"F_{self.p}^{self.k}" if self.k > 1 else f"F_{self.p}"


def make_field(p: int, k: int) -> FieldDesc:
    """The canonical description of F_{p^k}; deterministic across runs."""
    if not is_prime(p):
        raise NotPrime(p)
    if k < 1:
        raise ValueError(f"extension degree must be positive, got {k}")
    if p**k > FIELD_SIZE_CAP:
        raise SizeCapExceeded(f"p^k = {p}^{k} exceeds the field size cap 2^40")
    return _make_field_cached(p, k)


@lru_cache(maxsize=None)
def _make_field_cached(p, k):
    return FieldDesc(p, k, _min_irreducible(p, k))


class FieldElem:
    """An element of a FieldDesc, as an immutable coefficient vector."""

    __slots__ = ("owner", "coeffs")

    def __init__(self, owner: FieldDesc, coeffs: tuple[int, ...]):
        self.owner = owner
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.owner != self.owner:
                raise FieldMismatch(f"{self.owner} vs {other.owner}")
            return other
        if isinstance(other, int):
            return self.owner.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElem(self.owner, self.owner._add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElem(self.owner, self.owner._sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElem(self.owner, self.owner._sub(other.coeffs, self.coeffs))

    def __neg__(self):
        return FieldElem(self.owner, self.owner._neg(self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElem(self.owner, self.owner._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElem(self.owner, self.owner._mul(self.coeffs, self.owner._inv(other.coeffs)))

    def inverse(self):
        return FieldElem(self.owner, self.owner._inv(self.coeffs))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.owner.one
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.owner.scalar(other)
        return (
            isinstance(other, FieldElem)
            and self.owner == other.owner
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.owner.p, self.owner.k, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def packed(self) -> int:
        return self.owner._pack(self.coeffs)

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.owner.order - 1
        order = n
        for ell in _prime_factors(n):
            while order % ell == 0 and (self ** (order // ell)) == 1:
                order //= ell
        return order

    def __repr__(self):
        return f"{list(self.coeffs)}@{self.owner!r}"


# ---------------------------------------------------------------------------
# embeddings


def _frobenius_matrix(field: FieldDesc):
    """Matrix of a -> a^p on the power basis, columns = images of x^j."""
    cols = []
    for j in range(field.k):
        img = _fp_powmod([0] * j + [1], field.p, list(field.modulus), field.p)
        cols.append([(img[i] if i < len(img) else 0) for i in range(field.k)])
    return cols


def _subfield_packed(field: FieldDesc, d: int) -> list[int]:
    """All packed elements of the degree-d subfield, ascending.

    The subfield is the kernel of Frob^d - id, computed by exact Gaussian
    elimination over F_p.
    """
    p, k = field.p, field.k
    if p**d > SUBFIELD_ENUM_CAP:
        raise SizeCapExceeded(f"subfield of size {p}^{d} too large to enumerate")
    if d == k:
        return list(range(field.order))
    cols = _frobenius_matrix(field)
    # iterate Frobenius d times:  M = A^d  (as column maps)
    mat = [[1 if i == j else 0 for j in range(k)] for i in range(k)]  # identity rows
    # represent A as rows for multiplication: A[i][j] = cols[j][i]
    A = [[cols[j][i] for j in range(k)] for i in range(k)]
    for _ in range(d):
        mat = [[sum(A[i][t] * mat[t][j] for t in range(k)) % p for j in range(k)] for i in range(k)]
    for i in range(k):
        mat[i][i] = (mat[i][i] - 1) % p
    # kernel of mat via Gaussian elimination
    rows = [row[:] for row in mat]
    pivots = {}
    r = 0
    for c in range(k):
        piv = None
        for i in range(r, k):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(k):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(rows[i][j] - f * rows[r][j]) % p for j in range(k)]
        pivots[c] = r
        r += 1
    free = [c for c in range(k) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * k
        vec[fc] = 1
        for c, pr in pivots.items():
            vec[c] = (-rows[pr][fc]) % p
        basis.append(tuple(vec))
    if len(basis) != d:
        raise AssertionError("subfield dimension mismatch")
    out = []
    for t in range(p**d):
        acc = [0] * k
        tt = t
        for vec in basis:
            c = tt % p
            tt //= p
            if c:
                for i in range(k):
                    acc[i] = (acc[i] + c * vec[i]) % p
        out.append(field._pack(acc))
    out.sort()
    return out


def _eval_fp_poly(field: FieldDesc, coeffs, r: "FieldElem") -> "FieldElem":
    acc = field.zero
    for c in reversed(coeffs):
        acc = acc * r + field.scalar(c)
    return acc


@lru_cache(maxsize=None)
def _subfield_roots(p: int, K: int) -> dict[int, int]:
    """Packed image of the degree-d modulus root in F_{p^K}, for each d | K.

    Chosen per divisor (ascending) as the packed-smallest root compatible with
    the roots already fixed for its own divisors; independently lex-minimal
    roots are not tower-coherent, this filtered choice is.
    """
    field = _make_field_cached(p, K)
    roots: dict[int, int] = {1: 0}  # modulus of F_p is x, root 0
    for d in sorted(_divisors(K)):
        if d == 1 or d > K or K % d:
            continue
        m_d = _min_irreducible(p, d)
        candidates = []
        for t in _subfield_packed(field, d):
            r = field.from_packed(t)
            if _eval_fp_poly(field, m_d, r).is_zero():
                candidates.append(t)
                if len(candidates) == d:
                    break
        sub = _make_field_cached(p, d)
        sub_roots = _subfield_roots(p, d) if d < K else None
        for t in candidates:
            r = field.from_packed(t)
            pows = [r**i for i in range(d)]
            ok = True
            for g, rg in (sub_roots or {}).items():
                if g == d:
                    continue
                # image of the degree-g root under the embedding x_d -> r
                src = sub.from_packed(rg)
                img = field.zero
                for ci, rp in zip(src.coeffs, pows):
                    img = img + field.scalar(ci) * rp
                if img.packed != roots[g]:
                    ok = False
                    break
            if ok:
                roots[d] = t
                break
        else:
            raise AssertionError("no compatible root; unreachable")
    return roots


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


@lru_cache(maxsize=None)
def _embedding_powers(src: FieldDesc, tgt: FieldDesc) -> tuple:
    roots = _subfield_roots(tgt.p, tgt.k)
    r = tgt.from_packed(roots[src.k])
    return tuple(r**i for i in range(src.k))


def embed(a: FieldElem, target: FieldDesc) -> FieldElem:
    """Image of a under the canonical embedding F_{p^k} -> F_{p^K}, k | K."""
    src = a.owner
    if src == target:
        return a
    if src.p != target.p:
        raise FieldMismatch(f"different characteristics {src.p} vs {target.p}")
    if target.k % src.k:
        raise DegreeNotDividing(f"{src.k} does not divide {target.k}")
    pows = _embedding_powers(src, target)
    acc = target.zero
    for ci, rp in zip(a.coeffs, pows):
        if ci:
            acc = acc + target.scalar(ci) * rp
    return acc


# ---------------------------------------------------------------------------
# quadratic fibers and the tensor identity


def absolute_trace(a: FieldElem) -> int:
    """Trace down to the prime field, returned as an integer in [0, p)."""
    acc = a
    frob = a
    for _ in range(a.owner.k - 1):
        frob = frob**a.owner.p
        acc = acc + frob
    return acc.coeffs[0]


def solve_quadratic_count(h0: FieldElem, c: FieldElem, field: FieldDesc) -> int:
    """Number of y in the field with y^2 + h0*y = c; always in {0, 1, 2}."""
    if h0.owner != field or c.owner != field:
        raise FieldMismatch("h0 and c must lie in the given field")
    q = field.order
    if field.p == 2:
        if h0.is_zero():
            return 1  # squaring is a bijection
        w = c * (h0 * h0).inverse()
        return 2 if absolute_trace(w) == 0 else 0
    u = h0 * h0 + field.scalar(4) * c
    if u.is_zero():
        return 1
    chi = u ** ((q - 1) // 2)
    return 2 if chi == field.one else 0


def tensor_split(m: int, n: int) -> tuple[int, int]:
    """Decompose the tensor of the degree-m and degree-n extensions.

    Returns (lcm(m, n), gcd(m, n)): the tensor product is a product of
    gcd(m, n) copies of the degree-lcm extension.
    """
    if m < 1 or n < 1:
        raise ValueError("degrees must be positive")
    from math import gcd

    g = gcd(m, n)
    return (m * n // g, g)


# ---------------------------------------------------------------------------
# univariate polynomials over a FieldDesc


class UniPoly:
    """Dense univariate polynomial with FieldElem coefficients."""

    __slots__ = ("owner", "coeffs")

    def __init__(self, owner: FieldDesc, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.owner = owner
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, owner: FieldDesc, ints) -> "UniPoly":
        return cls(owner, [owner.scalar(v) for v in ints])

    @classmethod
    def zero(cls, owner: FieldDesc) -> "UniPoly":
        return cls(owner, [])

    @classmethod
    def x(cls, owner: FieldDesc) -> "UniPoly":
        return cls(owner, [owner.zero, owner.one])

    @property
    def degree(self):
        """Degree, with the zero polynomial at minus infinity."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INFINITY

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> FieldElem:
        return self.coeffs[i] if i < len(self.coeffs) else self.owner.zero

    def _check(self, other):
        if self.owner != other.owner:
            raise FieldMismatch("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.owner, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.owner, [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self):
        return UniPoly(self.owner, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return UniPoly(self.owner, [c * other for c in self.coeffs])
        self._check(other)
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.owner)
        res = [self.owner.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    res[i + j] = res[i + j] + a * b
        return UniPoly(self.owner, res)

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv_lead = other.coeffs[-1].inverse()
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly.zero(self.owner), self
        quot = [self.owner.zero] * (dq + 1)
        for d in range(dq, -1, -1):
            if len(rem) == d + len(other.coeffs):
                c = rem[-1] * inv_lead
                quot[d] = c
                for i, b in enumerate(other.coeffs):
                    rem[d + i] = rem[d + i] - c * b
                while rem and rem[-1].is_zero():
                    rem.pop()
        return UniPoly(self.owner, quot), UniPoly(self.owner, rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.owner == other.owner
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.owner, self.coeffs))

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * self.coeffs[-1].inverse()

    def evaluate(self, x: FieldElem) -> FieldElem:
        acc = x.owner.zero
        for c in reversed(self.coeffs):
            cc = c if c.owner == x.owner else embed(c, x.owner)
            acc = acc * x + cc
        return acc

    def reversed_within(self, length: int) -> "UniPoly":
        """Coefficient reversal padded to the given length: u^(length-1) * f(1/u)."""
        if len(self.coeffs) > length:
            raise ValueError("polynomial longer than the reversal window")
        padded = list(self.coeffs) + [self.owner.zero] * (length - len(self.coeffs))
        return UniPoly(self.owner, padded[::-1])

    def map_coefficients(self, target: FieldDesc) -> "UniPoly":
        return UniPoly(target, [embed(c, target) for c in self.coeffs])

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                terms.append(f"{list(c.coeffs)}*x^{i}")
        return "UniPoly(" + " + ".join(terms) + ")"


def poly_derivative(a: UniPoly) -> UniPoly:
    """Formal derivative; in characteristic p the x^p term drops out."""
    out = []
    for i in range(1, len(a.coeffs)):
        out.append(a.coeffs[i] * a.owner.scalar(i))
    return UniPoly(a.owner, out)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero when both inputs are zero)."""
    if a.owner != b.owner:
        raise FieldMismatch("gcd of polynomials over different fields")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()
