"""Pointless hyperelliptic curves, zeta point counts, Weil restriction,
and existential-sentence reductions over finite fields."""

from .curves import Curve, count_points, is_nonsingular, new_curve
from .gf import (
    FieldDesc,
    FieldElem,
    UniPoly,
    embed,
    make_field,
    poly_derivative,
    poly_gcd,
    solve_quadratic_count,
    tensor_split,
)
from .logic import (
    PlaceProfile,
    Prescription,
    Sentence,
    apply_prescription,
    base_profile,
    degree_count,
    encode_variety,
    evaluate,
    normalize,
    parse,
    print_sentence,
    reduction_check,
    satisfiable_direct,
)
from .pointless import (
    PointlessCertificate,
    becker_glass_genus,
    find_pointless,
    find_pointless_auto,
)
from .variety import TestVariety, build_test_variety, count, has_point, verify_prop21
from .weilres import (
    MPoly,
    PolySystem,
    RestrictedSystem,
    affine_chart_system,
    brute_solutions,
    jacobian_smooth_at,
    restrict,
    verify_bijection,
)
from .zeta import (
    LPoly,
    counts_from_l,
    functional_equation_ok,
    hasse_weil_ok,
    l_from_counts,
    lang_weil_threshold,
)

__version__ = "0.1.0"
