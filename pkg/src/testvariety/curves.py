"""Hyperelliptic models y^2 + h(x) y = f(x) in every characteristic.

A curve of genus g is the two-chart weighted projective model with
deg h <= g+1 and deg f <= 2g+2; the infinity chart is obtained by the
coefficient reversals h~(u) = u^{g+1} h(1/u), f~(u) = u^{2g+2} f(1/u).
Validity means both charts are nonsingular, which pins the genus to g.
Genus 1 is admitted: the downstream constructions only need a pointless
double cover, not a classically hyperelliptic (g >= 2) curve.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceeded, DegreeBoundViolated, FieldMismatch, SingularModel
from .gf import (
    FieldDesc,
    UniPoly,
    embed,
    make_field,
    poly_derivative,
    poly_gcd,
    solve_quadratic_count,
)
from .tables import DEFAULT_ENUM_CAP, get_table


@dataclass(frozen=True)
class Curve:
    base: FieldDesc
    g: int
    h: UniPoly
    f: UniPoly

    @property
    def q(self) -> int:
        return self.base.order

    def infinity_pair(self):
        """(h~(0), f~(0)): the top coefficients governing points at infinity."""
        return self.h.coeff(self.g + 1), self.f.coeff(2 * self.g + 2)

    def extension(self, m: int) -> FieldDesc:
        return make_field(self.base.p, self.base.k * m)


def _squarefree(poly: UniPoly) -> bool:
    if poly.is_zero():
        return False
    return poly_gcd(poly, poly_derivative(poly)).degree == 0


def _find_root_in_base(poly: UniPoly):
    for x in poly.owner.elements():
        if poly.evaluate(x).is_zero():
            return x
    return None


def is_nonsingular(base: FieldDesc, g: int, h: UniPoly, f: UniPoly):
    """Check both charts; returns (ok, chart, witness_x).

    Odd characteristic: the chart is smooth iff h^2 + 4f (resp. its
    reversal) is squarefree; a repeated root in the base field is reported
    as a witness. Characteristic 2: smooth iff gcd(h, f'^2 + h'^2 f) = 1,
    and h = 0 is rejected outright (the model is inseparable).
    """
    if base.p == 2:
        if h.is_zero():
            return False, "affine", None
        charts = [
            ("affine", h, f),
            ("infinity", h.reversed_within(g + 2), f.reversed_within(2 * g + 3)),
        ]
        for name, hh, ff in charts:
            dh, df = poly_derivative(hh), poly_derivative(ff)
            expr = df * df + dh * dh * ff
            gcd = poly_gcd(hh, expr)
            if gcd.degree != 0:
                return False, name, _find_root_in_base(gcd)
        return True, None, None
    four = base.scalar(4)
    big = h * h + f * four
    charts = [
        ("affine", big),
        ("infinity", big.reversed_within(2 * g + 3)),
    ]
    for name, poly in charts:
        if poly.is_zero():
            return False, name, None
        gcd = poly_gcd(poly, poly_derivative(poly))
        if gcd.degree != 0:
            return False, name, _find_root_in_base(gcd)
    return True, None, None


def new_curve(base: FieldDesc, g: int, h: UniPoly, f: UniPoly) -> Curve:
    """Validated genus-g model; rejects bad degrees and singular charts."""
    if g < 1:
        raise DegreeBoundViolated(f"genus must be >= 1, got {g}")
    if h.owner != base or f.owner != base:
        raise FieldMismatch("h and f must be defined over the base field")
    if h.degree > g + 1:
        raise DegreeBoundViolated(f"deg h = {h.degree} > g+1 = {g + 1}")
    if f.degree > 2 * g + 2:
        raise DegreeBoundViolated(f"deg f = {f.degree} > 2g+2 = {2 * g + 2}")
    ok, chart, witness = is_nonsingular(base, g, h, f)
    if not ok:
        raise SingularModel(chart, witness)
    return Curve(base, g, h, f)


def _packed_coeffs(poly: UniPoly, ext: FieldDesc):
    return [embed(c, ext).packed for c in poly.coeffs]


def count_points_affine(curve: Curve, m: int, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Number of affine-chart points over F_{q^m}, by full x-enumeration."""
    ext = curve.extension(m)
    if ext.order > cap:
        raise CapExceeded(f"q^m = {ext.order} exceeds the enumeration cap {cap}")
    table = get_table(ext, cap)
    xs = table.all_elements()
    hv = table.eval_poly(_packed_coeffs(curve.h, ext), xs)
    fv = table.eval_poly(_packed_coeffs(curve.f, ext), xs)
    return int(table.quad_count(hv, fv).sum())


def count_points_at_infinity(curve: Curve, m: int) -> int:
    """Points on the infinity chart over F_{q^m}; always 0, 1 or 2."""
    ext = curve.extension(m)
    h_top, f_top = curve.infinity_pair()
    return solve_quadratic_count(embed(h_top, ext), embed(f_top, ext), ext)


def count_points(curve: Curve, m: int, cap: int = DEFAULT_ENUM_CAP) -> int:
    """N_m = |C(F_{q^m})| of the smooth projective model, by brute force."""
    return count_points_affine(curve, m, cap) + count_points_at_infinity(curve, m)
