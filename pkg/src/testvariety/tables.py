"""Dense exp/log tables for enumeration-scale fields, with numpy kernels.

Elements are handled as packed integers (base-p digit vectors). A table is
built once per field, in O(order) time via block doubling, and provides
vectorized multiply/add/pow plus the quadratic-fiber count used by point
counting. Everything stays exact: the arrays hold small nonnegative ints.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import CapExceeded
from .gf import FieldDesc, FieldElem, _prime_factors, absolute_trace

DEFAULT_ENUM_CAP = 2**22


def _find_generator(field: FieldDesc) -> FieldElem:
    """Smallest packed element generating the multiplicative group."""
    n = field.order - 1
    if n == 1:
        return field.one
    factors = _prime_factors(n)
    for t in range(2, field.order):
        g = field.from_packed(t)
        if g.is_zero():
            continue
        if all((g ** (n // ell)) != field.one for ell in factors):
            return g
    raise AssertionError("no generator found; unreachable")


class FieldTable:
    """Vectorized arithmetic for one field; all arrays are packed int64."""

    def __init__(self, field: FieldDesc):
        self.field = field
        self.p = field.p
        self.k = field.k
        self.N = field.order
        self._powers_of_p = [field.p**i for i in range(field.k)]
        self._build()

    # -- construction --------------------------------------------------------

    def _build(self):
        N, p, k = self.N, self.p, self.k
        field = self.field
        self.generator = _find_generator(field)
        exp = np.zeros(max(N - 1, 1), dtype=np.int64)
        exp[0] = 1
        t = 1
        while t < N - 1:
            c = self.generator**t
            block = exp[:min(t, N - 1 - t)]
            exp[t : t + len(block)] = self._mul_const(c, block)
            t += len(block)
        self.exp = exp
        self.exp2 = np.concatenate([exp, exp])
        log = np.full(N, -1, dtype=np.int64)
        log[exp] = np.arange(len(exp), dtype=np.int64)
        log[self.field.one.packed] = 0
        self.log = log
        if p == 2:
            mask = 0
            xi = field.one
            for i in range(k):
                if absolute_trace(xi) == 1:
                    mask |= 1 << i
                xi = xi * field.gen if k > 1 else xi
            if k == 1:
                mask = 1
            self.trace_mask = mask
        else:
            chi = np.where(log % 2 == 0, np.int64(1), np.int64(-1))
            chi[0] = 0
            self.chi = chi

    def _mul_const(self, c: FieldElem, arr: np.ndarray) -> np.ndarray:
        """c * arr via the F_p-linear digit decomposition of arr."""
        field, p, k = self.field, self.p, self.k
        luts = []
        cxi = c
        for _ in range(k):
            lut = np.empty(p, dtype=np.int64)
            for d in range(p):
                lut[d] = (field.scalar(d) * cxi).packed
            luts.append(lut)
            cxi = cxi * field.gen if k > 1 else cxi
        out = np.zeros(len(arr), dtype=np.int64)
        for i in range(k):
            dig = (arr // self._powers_of_p[i]) % p
            out = self.add(out, luts[i][dig])
        return out

    # -- vectorized kernels ---------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        out = 0
        for pi in self._powers_of_p:
            out = out + ((a // pi + b // pi) % self.p) * pi
        return np.asarray(out, dtype=np.int64)

    def neg(self, a):
        if self.p == 2:
            return np.asarray(a, dtype=np.int64)
        out = 0
        for pi in self._powers_of_p:
            out = out + ((self.p - a // pi % self.p) % self.p) * pi
        return np.asarray(out, dtype=np.int64)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        zero = (la < 0) | (lb < 0)
        out = self.exp2[np.where(zero, 0, la + lb)]
        out[zero] = 0
        return out

    def inv(self, a):
        """Inverse of nonzero entries; zeros map to zero (callers mask)."""
        a = np.asarray(a, dtype=np.int64)
        la = self.log[a]
        zero = la < 0
        out = self.exp2[np.where(zero, 0, (self.N - 1) - la)]
        out[zero] = 0
        return out

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.full(a.shape, self.field.one.packed, dtype=np.int64)
        la = self.log[a]
        zero = la < 0
        out = self.exp2[np.where(zero, 0, (la * e) % (self.N - 1))]
        out[zero] = 0
        return out

    def eval_poly(self, coeffs_packed, xs):
        """Horner evaluation of a univariate polynomial at a packed array."""
        if not coeffs_packed:
            return np.zeros(len(xs), dtype=np.int64)
        acc = np.full(len(xs), coeffs_packed[-1], dtype=np.int64)
        for c in coeffs_packed[-2::-1]:
            acc = self.mul(acc, xs)
            if c:
                acc = self.add(acc, np.int64(c))
        return acc

    def trace_to_f2(self, a):
        """Absolute trace for characteristic 2, as a 0/1 array."""
        v = np.bitwise_and(np.asarray(a, dtype=np.int64), self.trace_mask)
        for shift in (16, 8, 4, 2, 1):
            v = np.bitwise_xor(v, v >> shift)
        return np.bitwise_and(v, 1)

    def quad_count(self, hv, fv):
        """Fiber sizes of y^2 + h*y = f over packed arrays h, f."""
        if self.p == 2:
            hz = hv == 0
            safe_h = np.where(hz, 1, hv)
            w = self.mul(fv, self.pow(self.inv(safe_h), 2))
            tr = self.trace_to_f2(w)
            return np.where(hz, 1, np.where(tr == 0, 2, 0)).astype(np.int64)
        u = self.add(self.mul(hv, hv), self.mul(np.full(len(hv), self.field.scalar(4).packed), fv))
        return 1 + self.chi[u]

    def all_elements(self):
        return np.arange(self.N, dtype=np.int64)


@lru_cache(maxsize=8)
def _table_cached(field: FieldDesc) -> FieldTable:
    return FieldTable(field)


def get_table(field: FieldDesc, cap: int = DEFAULT_ENUM_CAP) -> FieldTable:
    if field.order > cap:
        raise CapExceeded(f"field of order {field.order} exceeds the enumeration cap {cap}")
    return _table_cached(field)
