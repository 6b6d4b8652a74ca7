"""Search for pointless hyperelliptic curves and certify them.

The genus comes from the Becker-Glass recipe: the least g > (q-3)/2 with
g = -1 mod p. At that genus a pointless curve exists for all but the
smallest fields; where exhaustion proves nonexistence (e.g. q = 2, g = 1,
ruled out by Hasse-Weil), the auto search falls back to g + p, keeping the
congruence.

In odd characteristic every model is isomorphic to one with h = 0
(complete the square), so only f is enumerated there and exhaustion of the
f-space settles existence for the full (h, f) space. In characteristic 2
the (h, f) pairs are enumerated jointly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field

from .curves import Curve, count_points, is_nonsingular, new_curve
from .errors import BudgetExhausted, InconsistentCounts, SizeCapExceeded
from .gf import FieldDesc, UniPoly, is_prime, make_field, solve_quadratic_count
from .tables import DEFAULT_ENUM_CAP
from .zeta import LPoly, counts_from_l, l_from_counts, validate_l_poly

EXHAUSTIVE_THRESHOLD = 2**24
DEFAULT_SEED = 0x7E57AB1E
DEFAULT_BUDGET = 200_000
VERIFIED_HORIZON = 8


def prime_power(q: int) -> tuple[int, int]:
    """Write q = p^k with p prime, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = q
    for d in range(2, q + 1):
        if d * d > q:
            break
        if q % d == 0:
            p = d
            break
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    if q != 1:
        raise ValueError(f"{q * p**k} is not a prime power")
    return p, k


def becker_glass_genus(q: int, p: int) -> int:
    """Least g > (q-3)/2 with g = -1 (mod p), computed in closed form."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    start = max(1, (q - 3) // 2 + 1)
    return start + (-1 - start) % p


@dataclass(frozen=True)
class PointlessCertificate:
    """A verified pointless curve: N_1 = 0 and N_e > 0 for 4 <= e <= horizon."""

    curve: Curve
    l_poly: LPoly
    verified_horizon: int
    candidates_examined: int
    elapsed_seconds: float
    mode: str  # "exhaustive" or "random"
    seed: int | None = None
    exhausted_genera: tuple[int, ...] = dc_field(default=())


def _poly_from_packed(field: FieldDesc, packed: int, ncoeffs: int) -> UniPoly:
    q = field.order
    coeffs = []
    for _ in range(ncoeffs):
        coeffs.append(field.from_packed(packed % q))
        packed //= q
    return UniPoly(field, coeffs)


def _candidate(field: FieldDesc, g: int, idx: int):
    """Decode a candidate index into a model; h = 0 in odd characteristic."""
    qf = field.order ** (2 * g + 3)
    if field.p == 2:
        h = _poly_from_packed(field, idx // qf, g + 2)
        f = _poly_from_packed(field, idx % qf, 2 * g + 3)
    else:
        h = UniPoly.zero(field)
        f = _poly_from_packed(field, idx, 2 * g + 3)
    return h, f


def search_space_size(field: FieldDesc, g: int) -> int:
    q = field.order
    return q ** (3 * g + 5) if field.p == 2 else q ** (2 * g + 3)


def _is_pointless_model(field: FieldDesc, g: int, h: UniPoly, f: UniPoly) -> bool:
    for x in field.elements():
        if solve_quadratic_count(h.evaluate(x), f.evaluate(x), field):
            return False
    h_top, f_top = h.coeff(g + 1), f.coeff(2 * g + 2)
    return solve_quadratic_count(h_top, f_top, field) == 0


def _certify(curve: Curve, cap: int) -> LPoly | None:
    """Build and check the L-polynomial; None when the model fails the horizon."""
    counts = [0] + [count_points(curve, m, cap) for m in range(2, curve.g + 1)]
    try:
        lp = l_from_counts(curve.q, curve.g, counts)
    except InconsistentCounts:
        return None
    if not validate_l_poly(lp, horizon=12):
        return None
    if any(counts_from_l(lp, e) <= 0 for e in range(4, VERIFIED_HORIZON + 1)):
        return None
    return lp


def find_pointless(
    q: int,
    g: int,
    budget: int = DEFAULT_BUDGET,
    *,
    exhaustive: bool | None = None,
    seed: int = DEFAULT_SEED,
    cap: int = DEFAULT_ENUM_CAP,
) -> PointlessCertificate:
    """Search genus g over F_q for a model with no rational points.

    Exhaustive mode scans candidate indices in ascending order, so the
    result is deterministic; random mode samples indices from a seeded
    generator. BudgetExhausted.space_exhausted reports whether failure
    means proven nonexistence.
    """
    p, k = prime_power(q)
    field = make_field(p, k)
    needed = field.order**g if g >= 2 else field.order
    if needed > cap:
        raise SizeCapExceeded(
            f"certifying genus {g} over F_{q} needs counts beyond the enumeration cap"
        )
    space = search_space_size(field, g)
    if exhaustive is None:
        exhaustive = space <= EXHAUSTIVE_THRESHOLD
    start = time.monotonic()
    examined = 0
    if exhaustive:
        indices = range(min(space, budget))
    else:
        rng = random.Random(seed)
        indices = (rng.randrange(space) for _ in range(budget))
    for idx in indices:
        examined += 1
        h, f = _candidate(field, g, idx)
        if not _is_pointless_model(field, g, h, f):
            continue
        ok, _, _ = is_nonsingular(field, g, h, f)
        if not ok:
            continue
        curve = Curve(field, g, h, f)
        lp = _certify(curve, cap)
        if lp is None:
            continue
        return PointlessCertificate(
            curve=curve,
            l_poly=lp,
            verified_horizon=VERIFIED_HORIZON,
            candidates_examined=examined,
            elapsed_seconds=time.monotonic() - start,
            mode="exhaustive" if exhaustive else "random",
            seed=None if exhaustive else seed,
        )
    space_exhausted = exhaustive and examined >= space
    raise BudgetExhausted(
        f"no pointless genus-{g} curve over F_{q} within {examined} candidates"
        + (" (space exhausted: none exists)" if space_exhausted else ""),
        space_exhausted=space_exhausted,
    )


def find_pointless_auto(
    q: int,
    p: int,
    budget: int = DEFAULT_BUDGET,
    *,
    seed: int = DEFAULT_SEED,
    cap: int = DEFAULT_ENUM_CAP,
    max_genus_steps: int = 3,
) -> PointlessCertificate:
    """find_pointless at the Becker-Glass genus, falling back to g + p, g + 2p, ...

    Fallback happens only on a fully-exhausted genus (proven nonexistence
    there); a plain budget failure propagates, since retrying at a larger
    genus could mask a too-small budget.
    """
    g0 = becker_glass_genus(q, p)
    exhausted = []
    for step in range(max_genus_steps + 1):
        g = g0 + step * p
        try:
            cert = find_pointless(q, g, budget, seed=seed, cap=cap)
        except BudgetExhausted as exc:
            if exc.space_exhausted:
                exhausted.append(g)
                continue
            raise
        if exhausted:
            cert = PointlessCertificate(
                curve=cert.curve,
                l_poly=cert.l_poly,
                verified_horizon=cert.verified_horizon,
                candidates_examined=cert.candidates_examined,
                elapsed_seconds=cert.elapsed_seconds,
                mode=cert.mode,
                seed=cert.seed,
                exhausted_genera=tuple(exhausted),
            )
        return cert
    raise BudgetExhausted(
        f"no pointless curve over F_{q} at genera {exhausted} (all exhausted)",
        space_exhausted=True,
    )
