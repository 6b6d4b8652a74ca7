"""L-polynomials: reconstruction from initial counts and exact extrapolation.

Everything is bookkeeping on exact integers. The reciprocal roots are never
materialized; point counts flow through the power sums S_m = q^m + 1 - N_m
and Newton's identities relating them to the coefficients a_i = (-1)^i e_i.
Weil-bound plausibility is checked in the squared integer form throughout,
so no square roots (and no floats) appear anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentCounts, NegativeCount


@dataclass(frozen=True)
class LPoly:
    """Numerator of the zeta function: coefficients a_0..a_{2g}, a_0 = 1."""

    q: int
    g: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.g + 1:
            raise InconsistentCounts(
                f"expected {2 * self.g + 1} coefficients, got {len(self.coeffs)}"
            )
        if self.coeffs[0] != 1:
            raise InconsistentCounts("a_0 must be 1")


def weil_bound_ok(q: int, g: int, m: int, s: int) -> bool:
    """Whether a power sum S_m is admissible: S_m^2 <= 4 g^2 q^m."""
    return s * s <= 4 * g * g * q**m


def hasse_weil_ok(q: int, g: int, m: int, n: int) -> bool:
    """Integer form of |N - (q^m + 1)| <= 2 g sqrt(q^m)."""
    d = n - (q**m + 1)
    return d * d <= 4 * g * g * q**m


def l_from_counts(q: int, g: int, counts) -> LPoly:
    """Reconstruct L(T) from the g initial point counts N_1..N_g.

    Power sums come from S_m = q^m + 1 - N_m, elementary symmetric functions
    from Newton's identities, and the top half of the coefficients from the
    functional equation. Any non-integral step or Weil-bound violation means
    the counts cannot come from a genus-g curve over F_q.
    """
    counts = list(counts)
    if len(counts) != g:
        raise InconsistentCounts(f"need exactly {g} counts, got {len(counts)}")
    if any(n < 0 for n in counts):
        raise InconsistentCounts("point counts must be nonnegative")
    s = [0] * (g + 1)
    for m in range(1, g + 1):
        s[m] = q**m + 1 - counts[m - 1]
        if not weil_bound_ok(q, g, m, s[m]):
            raise InconsistentCounts(f"S_{m} = {s[m]} violates the Weil bound")
    e = [0] * (g + 1)
    e[0] = 1
    for m in range(1, g + 1):
        acc = s[m]
        for j in range(1, m):
            acc -= (-1) ** (j - 1) * e[j] * s[m - j]
        num = (-1) ** (m - 1) * acc
        if num % m:
            raise InconsistentCounts(f"Newton step {m} is non-integral")
        e[m] = num // m
    a = [0] * (2 * g + 1)
    a[0] = 1
    for i in range(1, g + 1):
        a[i] = (-1) ** i * e[i]
    for i in range(g):
        a[2 * g - i] = q ** (g - i) * a[i]
    return LPoly(q, g, tuple(a))


def power_sums(lp: LPoly, up_to: int) -> list[int]:
    """S_1..S_{up_to} via the Newton recurrence on the coefficients."""
    a = lp.coeffs
    deg = 2 * lp.g
    s = [0] * (up_to + 1)
    for m in range(1, up_to + 1):
        acc = 0
        for j in range(1, min(m, deg) + 1):
            acc -= a[j] * s[m - j]
        if m <= deg:
            acc -= m * a[m]
        s[m] = acc
    return s[1:]


def counts_from_l(lp: LPoly, m: int) -> int:
    """N_m derived from the L-polynomial; exact for every m >= 1."""
    if m < 1:
        raise ValueError("m must be positive")
    s = power_sums(lp, m)
    n = lp.q**m + 1 - s[m - 1]
    if n < 0:
        raise NegativeCount(f"N_{m} = {n} < 0; the L-polynomial is invalid")
    return n


def functional_equation_ok(lp: LPoly) -> bool:
    """a_{2g-i} = q^{g-i} a_i for all 0 <= i <= g."""
    a, q, g = lp.coeffs, lp.q, lp.g
    return all(a[2 * g - i] == q ** (g - i) * a[i] for i in range(g + 1))


def lang_weil_threshold(q: int, g: int) -> int:
    """Least m0 with q^{m/2} > 2g for all m >= m0 (so N_m > 0 is forced).

    Integer form: least m with q^m > 4 g^2. Beyond it the Hasse-Weil lower
    bound q^m + 1 - 2 g q^{m/2} is strictly positive, so every genus-g curve
    over F_q has points over F_{q^m}.
    """
    bound = 4 * g * g
    m = 1
    while q**m <= bound:
        m += 1
    return m


def validate_l_poly(lp: LPoly, horizon: int = 12) -> bool:
    """Functional equation plus Hasse-Weil on all derived counts <= horizon."""
    if not functional_equation_ok(lp):
        return False
    try:
        return all(hasse_weil_ok(lp.q, lp.g, m, counts_from_l(lp, m)) for m in range(1, horizon + 1))
    except NegativeCount:
        return False
