"""Run configuration and the on-disk certificate cache.

The cache is one JSON file mapping "p^k:g<g>" keys to curve records. Records
are self-describing (they carry the field presentation), and loading
re-validates: the model must be nonsingular, recount to N_1 = 0, and the
stored L-polynomial must satisfy the functional equation. Entries failing
validation are reported and treated as misses. Writes take an advisory
flock and go through a temp file rename.
"""

from __future__ import annotations

import fcntl
import json
import os
import sys
import tempfile
from dataclasses import dataclass

from .curves import count_points, new_curve
from .gf import UniPoly, make_field
from .pointless import DEFAULT_BUDGET, DEFAULT_SEED, PointlessCertificate
from .tables import DEFAULT_ENUM_CAP
from .zeta import LPoly, functional_equation_ok

TOOL_VERSION = "0.1.0"
CACHE_ENV_VAR = "POINTLESS_CACHE"
DEFAULT_CACHE_PATH = "curve_cache.json"


@dataclass
class Config:
    enumeration_cap: int = DEFAULT_ENUM_CAP
    search_budget: int = DEFAULT_BUDGET
    rng_seed: int = DEFAULT_SEED
    cache_path: str = DEFAULT_CACHE_PATH
    jobs: int = 1

    def __post_init__(self):
        if self.enumeration_cap <= 0 or self.search_budget < 0 or self.jobs < 1:
            raise ValueError("caps must be positive, budget nonnegative, jobs >= 1")
        env = os.environ.get(CACHE_ENV_VAR)
        if env and self.cache_path == DEFAULT_CACHE_PATH:
            self.cache_path = env


def certificate_to_record(cert: PointlessCertificate, seed: int) -> dict:
    curve = cert.curve
    return {
        "p": curve.base.p,
        "k": curve.base.k,
        "modulus": list(curve.base.modulus),
        "g": curve.g,
        "h": [list(c.coeffs) for c in curve.h.coeffs],
        "f": [list(c.coeffs) for c in curve.f.coeffs],
        "l_poly": list(cert.l_poly.coeffs),
        "verified_horizon": cert.verified_horizon,
        "candidates_examined": cert.candidates_examined,
        "elapsed_seconds": cert.elapsed_seconds,
        "mode": cert.mode,
        "seed": cert.seed if cert.seed is not None else seed,
        "exhausted_genera": list(cert.exhausted_genera),
        "tool_version": TOOL_VERSION,
    }


def certificate_from_record(rec: dict, cap: int = DEFAULT_ENUM_CAP) -> PointlessCertificate:
    """Rebuild and re-validate a cached certificate; raises on tampering."""
    field = make_field(rec["p"], rec["k"])
    if list(field.modulus) != rec["modulus"]:
        raise ValueError("cached modulus is not the canonical one")
    h = UniPoly(field, [field.element(c) for c in rec["h"]])
    f = UniPoly(field, [field.element(c) for c in rec["f"]])
    curve = new_curve(field, rec["g"], h, f)
    lp = LPoly(field.order, rec["g"], tuple(rec["l_poly"]))
    if not functional_equation_ok(lp):
        raise ValueError("cached L-polynomial fails the functional equation")
    if count_points(curve, 1, cap) != 0:
        raise ValueError("cached curve is not pointless")
    return PointlessCertificate(
        curve=curve,
        l_poly=lp,
        verified_horizon=rec["verified_horizon"],
        candidates_examined=rec["candidates_examined"],
        elapsed_seconds=rec["elapsed_seconds"],
        mode=rec["mode"],
        seed=rec.get("seed"),
        exhausted_genera=tuple(rec.get("exhausted_genera", ())),
    )


class CurveCache:
    """Keyed certificate store; safe for one writer at a time."""

    def __init__(self, path: str, cap: int = DEFAULT_ENUM_CAP):
        self.path = path
        self.cap = cap

    @staticmethod
    def _key(field, g: int) -> str:
        return f"{field.p}^{field.k}:g{g}"

    def _read_all(self) -> dict:
        if not os.path.exists(self.path):
            return {}
        with open(self.path) as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                return json.load(fh)
            except json.JSONDecodeError:
                return {}
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def lookup(self, field, genera) -> PointlessCertificate | None:
        data = self._read_all()
        for g in genera:
            rec = data.get(self._key(field, g))
            if rec is None:
                continue
            try:
                return certificate_from_record(rec, self.cap)
            except Exception as exc:  # invalid entry: treat as a miss
                print(f"cache entry {self._key(field, g)} rejected: {exc}", file=sys.stderr)
        return None

    def store(self, cert: PointlessCertificate, seed: int) -> None:
        data = self._read_all()
        data[self._key(cert.curve.base, cert.curve.g)] = certificate_to_record(cert, seed)
        directory = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fcntl.flock(fh, fcntl.LOCK_EX)
                json.dump(data, fh, indent=1, sort_keys=True)
                fh.write("\n")
                fcntl.flock(fh, fcntl.LOCK_UN)
            os.replace(tmp, self.path)
        except BaseException:
            os.unlink(tmp)
            raise
