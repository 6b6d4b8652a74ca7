"""Command-line surface.

Exit codes: 0 success, 1 assertion/verification failure, 2 usage error,
3 budget or cap exhaustion. Machine-readable JSON goes to stdout under
--json; human diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import logic, weilres
from .config import Config, CurveCache, certificate_to_record
from .curves import Curve, count_points, new_curve
from .errors import (
    AssertionFailed,
    BudgetExhausted,
    CapExceeded,
    SizeCapExceeded,
    TestVarietyError,
)
from .gf import UniPoly, make_field
from .pointless import find_pointless, find_pointless_auto, prime_power
from .variety import build_test_variety, count, has_point, verify_prop21
from .zeta import LPoly, counts_from_l, functional_equation_ok, l_from_counts

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="testvariety",
        description="pointless curves, test varieties and existential reductions",
    )
    top.add_argument("--json", action="store_true", help="machine-readable output")
    top.add_argument("--cap", type=int, default=None, help="enumeration cap (assignments)")
    top.add_argument("--budget", type=int, default=None, help="search budget (candidates)")
    top.add_argument("--seed", type=int, default=None, help="seed for randomized search")
    top.add_argument("--cache", default=None, help="curve cache path")
    top.add_argument("--jobs", type=int, default=None, help="worker count (advisory)")
    sub = top.add_subparsers(dest="command", required=True)

    field = sub.add_parser("field", help="finite field utilities")
    field_sub = field.add_subparsers(dest="subcommand", required=True)
    f_make = field_sub.add_parser("make", help="canonical modulus for F_{p^k}")
    f_make.add_argument("p", type=int)
    f_make.add_argument("k", type=int)

    curve = sub.add_parser("curve", help="curve point counting")
    curve_sub = curve.add_subparsers(dest="subcommand", required=True)
    c_count = curve_sub.add_parser("count", help="brute-force N_m from a curve file")
    c_count.add_argument("curve_json")
    c_count.add_argument("m", type=int)

    zeta = sub.add_parser("zeta", help="L-polynomial reconstruction and counts")
    zeta_sub = zeta.add_subparsers(dest="subcommand", required=True)
    z_from = zeta_sub.add_parser("from-counts", help="L(T) from N_1..N_g")
    z_from.add_argument("q", type=int)
    z_from.add_argument("g", type=int)
    z_from.add_argument("counts", type=int, nargs="+")
    z_ext = zeta_sub.add_parser("extrapolate", help="N_m from L-polynomial coefficients")
    z_ext.add_argument("q", type=int)
    z_ext.add_argument("g", type=int)
    z_ext.add_argument("m", type=int)
    z_ext.add_argument("--l", required=True, help="comma-separated a_0,...,a_2g")

    search = sub.add_parser("search-pointless", help="find a pointless curve")
    search.add_argument("q", type=int)
    search.add_argument("g", type=int, nargs="?", default=None)
    search.add_argument("--exhaustive", action="store_true")

    testvar = sub.add_parser("testvar", help="the restricted-variety family")
    testvar_sub = testvar.add_subparsers(dest="subcommand", required=True)
    tv_build = testvar_sub.add_parser("build", help="construct the variety for (q, n)")
    tv_build.add_argument("q", type=int)
    tv_build.add_argument("n", type=int)
    tv_check = testvar_sub.add_parser("check", help="verify emptiness/nonemptiness bullets")
    tv_check.add_argument("q", type=int)
    tv_check.add_argument("n", type=int)
    tv_check.add_argument("--mmax", type=int, required=True)

    wr = sub.add_parser("weilres", help="restriction of scalars on systems")
    wr_sub = wr.add_subparsers(dest="subcommand", required=True)
    wr_compile = wr_sub.add_parser("compile", help="restrict a system file by degree n")
    wr_compile.add_argument("system_sx")
    wr_compile.add_argument("n", type=int)
    wr_verify = wr_sub.add_parser("verify", help="check the point bijection at degree m")
    wr_verify.add_argument("system_sx")
    wr_verify.add_argument("n", type=int)
    wr_verify.add_argument("--m", type=int, required=True)

    lg = sub.add_parser("logic", help="sentences, normalization, reduction")
    lg_sub = lg.add_subparsers(dest="subcommand", required=True)
    lg_norm = lg_sub.add_parser("normalize", help="DNF + inequality elimination")
    lg_norm.add_argument("sentence_sx")
    lg_enc = lg_sub.add_parser("encode", help="sentence for the compiled variety (q, n)")
    lg_enc.add_argument("q", type=int)
    lg_enc.add_argument("n", type=int)
    lg_red = lg_sub.add_parser("reduce", help="many-one reduction instance")
    lg_red.add_argument("--set", required=True, dest="set_name",
                        choices=sorted(logic.SAMPLE_ORACLES))
    lg_red.add_argument("--l", required=True, type=int, dest="ell")

    report = sub.add_parser("report", help="verification reports")
    report_sub = report.add_subparsers(dest="subcommand", required=True)
    r_prop = report_sub.add_parser("prop21", help="full family verification for (q, n)")
    r_prop.add_argument("q", type=int)
    r_prop.add_argument("n", type=int)
    r_prop.add_argument("--mmax", type=int, default=None)
    return top


def _config_from_args(args) -> Config:
    cfg = Config()
    if args.cap is not None:
        cfg.enumeration_cap = args.cap
    if args.budget is not None:
        cfg.search_budget = args.budget
    if args.seed is not None:
        cfg.rng_seed = args.seed
    if args.cache is not None:
        cfg.cache_path = args.cache
    if args.jobs is not None:
        cfg.jobs = args.jobs
    return cfg


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        json.dump(payload, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
    else:
        print(human)


def _load_curve(path: str) -> Curve:
    with open(path) as fh:
        rec = json.load(fh)
    field = make_field(rec["p"], rec["k"])
    if list(field.modulus) != rec["modulus"]:
        raise ValueError("curve file modulus is not the canonical one")
    h = UniPoly(field, [field.element(c) for c in rec["h"]])
    f = UniPoly(field, [field.element(c) for c in rec["f"]])
    return new_curve(field, rec["g"], h, f)


def _cmd_field_make(args, cfg):
    field = make_field(args.p, args.k)
    _emit(
        args,
        {"p": field.p, "k": field.k, "modulus": list(field.modulus)},
        f"F_{args.p}^{args.k}: modulus coefficients (low to high) {list(field.modulus)}",
    )
    return EXIT_OK


def _cmd_curve_count(args, cfg):
    curve = _load_curve(args.curve_json)
    n = count_points(curve, args.m, cfg.enumeration_cap)
    _emit(args, {"q": curve.q, "m": args.m, "count": n},
          f"N_{args.m} = {n} over F_{curve.q}^{args.m}")
    return EXIT_OK


def _cmd_zeta_from_counts(args, cfg):
    lp = l_from_counts(args.q, args.g, args.counts)
    _emit(args, {"q": args.q, "g": args.g, "coeffs": list(lp.coeffs)},
          f"L(T) coefficients a_0..a_{2 * args.g}: {list(lp.coeffs)}")
    return EXIT_OK


def _cmd_zeta_extrapolate(args, cfg):
    coeffs = tuple(int(v) for v in args.l.split(","))
    lp = LPoly(args.q, args.g, coeffs)
    if not functional_equation_ok(lp):
        raise AssertionFailed("coefficients violate the functional equation")
    n = counts_from_l(lp, args.m)
    _emit(args, {"q": args.q, "g": args.g, "m": args.m, "count": n},
          f"N_{args.m} = {n}")
    return EXIT_OK


def _cmd_search_pointless(args, cfg):
    p, _ = prime_power(args.q)
    cache = CurveCache(cfg.cache_path, cfg.enumeration_cap)
    if args.g is None:
        cert = find_pointless_auto(args.q, p, cfg.search_budget,
                                   seed=cfg.rng_seed, cap=cfg.enumeration_cap)
    else:
        cert = find_pointless(args.q, args.g, cfg.search_budget,
                              exhaustive=args.exhaustive or None,
                              seed=cfg.rng_seed, cap=cfg.enumeration_cap)
    cache.store(cert, cfg.rng_seed)
    rec = certificate_to_record(cert, cfg.rng_seed)
    human = (
        f"pointless curve over F_{args.q}, genus {cert.curve.g}: "
        f"h = {rec['h']}, f = {rec['f']}\n"
        f"L-polynomial {rec['l_poly']}; N_e > 0 verified for 4 <= e <= {cert.verified_horizon}\n"
        f"{cert.candidates_examined} candidates in {cert.elapsed_seconds:.2f}s "
        f"({cert.mode} mode); cached to {cfg.cache_path}"
    )
    _emit(args, rec, human)
    return EXIT_OK


def _cmd_testvar_build(args, cfg):
    cache = CurveCache(cfg.cache_path, cfg.enumeration_cap)
    variety = build_test_variety(args.q, args.n, cfg.search_budget,
                                 seed=cfg.rng_seed, cap=cfg.enumeration_cap, cache=cache)
    payload = {
        "q": args.q,
        "n": args.n,
        "backing": variety.backing,
        "genus": variety.genus,
        "compiled": variety.compiled is not None,
    }
    if variety.certificate is not None:
        payload["certificate"] = certificate_to_record(variety.certificate, cfg.rng_seed)
    if variety.compiled is not None:
        payload["target_system"] = weilres.system_to_sexpr(variety.compiled.target)
    _emit(args, payload,
          f"test variety (q={args.q}, n={args.n}): {variety.backing}-backed, "
          f"genus {variety.genus}, compiled={variety.compiled is not None}")
    return EXIT_OK


def _cmd_testvar_check(args, cfg):
    cache = CurveCache(cfg.cache_path, cfg.enumeration_cap)
    variety = build_test_variety(args.q, args.n, cfg.search_budget,
                                 seed=cfg.rng_seed, cap=cfg.enumeration_cap, cache=cache)
    report = verify_prop21(variety, args.mmax, cfg.enumeration_cap)
    payload = {
        "q": report.q,
        "n": report.n,
        "backing": report.backing,
        "genus": report.genus,
        "bullet1_checked": [m for m, _ in report.bullet1],
        "bullet2_checked": [m for m, _ in report.bullet2],
        "gap": {str(m): v for m, v in report.gap.items()},
        "cross_checked": report.cross_checked,
        "passed": report.passed,
        "seed": cfg.rng_seed,
    }
    gap_str = ", ".join(f"m={m}: {'nonempty' if v else 'empty'}" for m, v in sorted(report.gap.items()))
    human = (
        f"Prop 2.1 verification for (q={args.q}, n={args.n}), m <= {args.mmax}: PASS\n"
        f"  emptiness asserted at m | n: {[m for m, _ in report.bullet1]}\n"
        f"  nonemptiness asserted at lcm(m,n) >= 4n: {[m for m, _ in report.bullet2]}\n"
        f"  gap degrees (reported, not asserted): {gap_str or 'none'}\n"
        f"  enumeration cross-checks at m = {report.cross_checked}"
    )
    _emit(args, payload, human)
    return EXIT_OK


def _cmd_weilres_compile(args, cfg):
    with open(args.system_sx) as fh:
        system = weilres.system_from_sexpr(fh.read())
    restricted = weilres.restrict(system, args.n)
    out = weilres.system_to_sexpr(restricted.target)
    if args.json:
        json.dump({"target": out, "n": args.n,
                   "num_vars": restricted.target.num_vars,
                   "num_equations": len(restricted.target.equations)}, sys.stdout)
        sys.stdout.write("\n")
    else:
        print(out)
    return EXIT_OK


def _cmd_weilres_verify(args, cfg):
    with open(args.system_sx) as fh:
        system = weilres.system_from_sexpr(fh.read())
    restricted = weilres.restrict(system, args.n)
    ok = weilres.verify_bijection(restricted, args.m, cfg.enumeration_cap)
    _emit(args, {"n": args.n, "m": args.m, "bijection": ok},
          f"bijection at m = {args.m}: {'true' if ok else 'false'}")
    return EXIT_OK if ok else EXIT_ASSERTION


def _cmd_logic_normalize(args, cfg):
    with open(args.sentence_sx) as fh:
        sentence = logic.parse(fh.read())
    systems = logic.normalize(sentence)
    texts = [weilres.system_to_sexpr(d) for d in systems]
    if args.json:
        json.dump({"prime": sentence.prime, "systems": texts}, sys.stdout)
        sys.stdout.write("\n")
    else:
        for text in texts:
            print(text)
    return EXIT_OK


def _cmd_logic_encode(args, cfg):
    cache = CurveCache(cfg.cache_path, cfg.enumeration_cap)
    variety = build_test_variety(args.q, args.n, cfg.search_budget,
                                 seed=cfg.rng_seed, cap=cfg.enumeration_cap, cache=cache)
    sentence = logic.encode_variety(variety)
    text = logic.print_sentence(sentence)
    if args.json:
        json.dump({"q": args.q, "n": args.n, "sentence": text}, sys.stdout)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_logic_reduce(args, cfg):
    membership = logic.SAMPLE_ORACLES[args.set_name]
    cache = CurveCache(cfg.cache_path, cfg.enumeration_cap)
    result = logic.reduction_check(
        membership, args.ell,
        budget=cfg.search_budget, seed=cfg.rng_seed,
        cap=cfg.enumeration_cap, cache=cache,
    )
    _emit(args, {"set": args.set_name, "l": args.ell, "result": result},
          "true" if result else "false")
    return EXIT_OK


def _cmd_report_prop21(args, cfg):
    cache = CurveCache(cfg.cache_path, cfg.enumeration_cap)
    variety = build_test_variety(args.q, args.n, cfg.search_budget,
                                 seed=cfg.rng_seed, cap=cfg.enumeration_cap, cache=cache)
    m_max = args.mmax if args.mmax is not None else 4 * args.n + 8
    report = verify_prop21(variety, m_max, cfg.enumeration_cap)
    lines = [
        f"proposition verification report  (q={args.q}, n={args.n}, m <= {m_max})",
        f"  backing: {report.backing} (genus {report.genus}); seed {cfg.rng_seed}",
        f"  bullet 1 (empty at m | n): {len(report.bullet1)} degrees checked, all empty",
        f"  bullet 2 (nonempty at lcm >= 4n): {len(report.bullet2)} degrees checked, all nonempty",
    ]
    for m, v in sorted(report.gap.items()):
        lines.append(f"  gap m={m}: {'nonempty' if v else 'empty'} (not asserted)")
    lines.append(f"  enumeration cross-checks: m = {report.cross_checked}")
    payload = {
        "q": args.q, "n": args.n, "m_max": m_max, "backing": report.backing,
        "genus": report.genus, "gap": {str(m): v for m, v in report.gap.items()},
        "cross_checked": report.cross_checked, "passed": report.passed,
        "seed": cfg.rng_seed,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


_HANDLERS = {
    ("field", "make"): _cmd_field_make,
    ("curve", "count"): _cmd_curve_count,
    ("zeta", "from-counts"): _cmd_zeta_from_counts,
    ("zeta", "extrapolate"): _cmd_zeta_extrapolate,
    ("search-pointless", None): _cmd_search_pointless,
    ("testvar", "build"): _cmd_testvar_build,
    ("testvar", "check"): _cmd_testvar_check,
    ("weilres", "compile"): _cmd_weilres_compile,
    ("weilres", "verify"): _cmd_weilres_verify,
    ("logic", "normalize"): _cmd_logic_normalize,
    ("logic", "encode"): _cmd_logic_encode,
    ("logic", "reduce"): _cmd_logic_reduce,
    ("report", "prop21"): _cmd_report_prop21,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = _config_from_args(args)
    handler = _HANDLERS[(args.command, getattr(args, "subcommand", None))]
    try:
        return handler(args, cfg)
    except (BudgetExhausted, CapExceeded, SizeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except AssertionFailed as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except (TestVarietyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
