"""End-to-end reproduction run: every acceptance check, one JSON bundle.

The bundle has a hashable section (everything except wall-clock timings) so
that two runs with the same seed can be compared byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cubic import (
    CubicHypersurface,
    PlaneFivePointConfig,
    build_plane_sigma,
    build_sigma,
    check_configuration,
    fixes_cubic_pointwise,
    is_involution,
    random_cubic_with_point,
)
from .exact.fields import QQ
from .exact.matrix import identity, mat_mul, matrix_to_json
from .exact.unipoly import UniPoly
from .picard import (
    PicBasis,
    all_reduced_words,
    alpha_vector,
    dyndeg_data,
    growth_invariants,
    plane_twist_matrices,
    predicted_degree,
    sigma_action,
)
from .plane.certify import NO_OBSTRUCTION, OBSTRUCTION, certify_batch, certify_nonregularizable, negative_control
from .plane.maps import QUADRATIC_REPRESENTATIVES, QuadraticClass, chi_model, classify_quadratic
from .ratmap import RationalMapN, compose, compose_all, degree_certificate

# reference values the checks compare against
EXPECTED_HEF = ((3, 2, 4), (-2, -1, -4), (-1, -1, -1))
EXPECTED_TWIST_CHARPOLY = {1: (-1, 2, 0, 0, 0, 0, -2, 1), 2: (-1, 3, 0, -3, 1)}
EXPECTED_TWIST_ROOT = {1: Fraction("1.946856"), 2: Fraction("2.618034")}
GOLDEN_SQUARE = UniPoly([1, -3, 1])      # (3 + sqrt 5) / 2
SILVER_PRODUCT = UniPoly([1, -18, 1])    # 9 + 4 sqrt 5
SQRT5_ROOT = Fraction("17.944271909999158785636694674925")

FERMAT_SURFACE = "x0^3 + x1^3 + x2^3 + x3^3"
FERMAT_POINTS = ((3, 4, 5, -6), (1, 6, 8, -9), (9, 10, -1, -12))

# named corruptions of fixed constants; each should make exactly one check fail
FAULTS = {
    "hef": {"hef": ((3, 2, 4), (-2, -1, -4), (-1, -1, 0))},
    "plane_six_point": {"plane_six_point": tuple(tuple(int(i == j) * (2 if i == 0 else 1) for j in range(6))
                                                 for i in range(6))},
    "twist1": {"twist1_sigma": ((3, 2, 1, 0, 3, 0, 0), (-2, -1, -1, 0, -3, 0, 0), (-1, -1, -1, 0, 0, 0, 0),
                                (0, 0, 0, 1, 0, 0, 0), (-1, -1, 0, 0, -1, 0, 0), (0, 0, 0, 0, 0, 1, 0),
                                (0, 0, 0, 0, 0, 0, 2))},
    "twist2": {"twist2_tau": ((1, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 0), (0, 0, 0, 1))},
}


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    details: dict
    seconds: float = 0.0

    def hashable(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed, "details": self.details}

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.name}"


@dataclass
class ReproConfig:
    seed: int = 0
    cubic_samples: tuple[int, int, int] = (4, 3, 3)   # samples for n = 2, 3, 4
    tau_count: int = 10
    iterations: int = 3
    tau_audit: bool = False
    constants: dict = field(default_factory=dict)
    fault: str | None = None

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "cubic_samples": list(self.cubic_samples),
            "tau_count": self.tau_count,
            "iterations": self.iterations,
            "tau_audit": self.tau_audit,
            "fault": self.fault,
        }


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(_canonical(obj).encode()).hexdigest()


# the individual checks


def check_involutions(cfg: ReproConfig, sigmas: list) -> Criterion:
    rng = random.Random(f"cubics:{cfg.seed}")
    rows = []
    for n, count in zip((2, 3, 4), cfg.cubic_samples):
        got = 0
        while got < count:
            Q, p = random_cubic_with_point(n, rng)
            sd = build_sigma(Q, p)
            if sd.degenerate:
                continue
            got += 1
            sigma = sd.sigma
            cert = degree_certificate(sigma, cfg.seed)
            rows.append({
                "n": n,
                "cubic": Q.equation.to_string(),
                "point": p.to_json(),
                "involution": is_involution(sigma),
                "effective_degree": cert.degree,
                "primes": list(cert.primes),
            })
            sigmas.append((sigma, Q))
    ok = len(rows) >= 10 and all(r["involution"] and r["effective_degree"] == 3 for r in rows)
    return Criterion(1, "involution law", ok, {"samples": rows})


def check_pointwise(cfg: ReproConfig, sigmas: list) -> Criterion:
    extra = []
    Q = CubicHypersurface.parse(FERMAT_SURFACE)
    for p in FERMAT_POINTS:
        extra.append((build_sigma(Q, p).sigma, Q))
    extra.append(build_plane_sigma(PlaneFivePointConfig(2, 3, 5)))
    results = [fixes_cubic_pointwise(s, C) for s, C in sigmas + extra]
    return Criterion(2, "pointwise fixing", all(results) and len(results) > 0,
                     {"checked": len(results), "divisible": results})


def check_lattice(cfg: ReproConfig) -> Criterion:
    hef = sigma_action(PicBasis.hef(), 1, cfg.constants)
    six = sigma_action(PicBasis.plane_six_point(), 1, cfg.constants)
    d = {
        "hef": matrix_to_json(hef),
        "hef_matches": hef == EXPECTED_HEF,
        "hef_squares_to_identity": mat_mul(hef, hef) == identity(3),
        "six_point": matrix_to_json(six),
        "six_point_squares_to_identity": mat_mul(six, six) == identity(6),
    }
    ok = d["hef_matches"] and d["hef_squares_to_identity"] and d["six_point_squares_to_identity"]
    return Criterion(3, "lattice constants", ok, d)


def check_dyndeg(cfg: ReproConfig) -> Criterion:
    a = dyndeg_data([1, 2], Fraction(1, 10**12))
    cube = UniPoly([-1, 3, -3, 1])
    b = dyndeg_data([1, 2, 3], Fraction(1, 10**12))
    tol = Fraction(1, 10**9)
    x = b.dyndeg
    d = {
        "two_letters": a.to_json(),
        "two_letters_charpoly_is_cube": a.charpoly == cube,
        "two_letters_dyndeg_is_one": a.dyndeg.is_rational and a.dyndeg.exact == 1,
        "three_letters": b.to_json(),
        "three_letters_within_tolerance": SQRT5_ROOT - tol <= x.lo and x.hi <= SQRT5_ROOT + tol,
        "quadratic_factor_divides": SILVER_PRODUCT.divides(b.charpoly),
        "root_of_quadratic_factor": x.is_root_of(SILVER_PRODUCT),
    }
    ok = all(v for k, v in d.items() if isinstance(v, bool))
    return Criterion(4, "dynamical degrees", ok, d)


def check_twists(cfg: ReproConfig) -> Criterion:
    d = {}
    ok = True
    for case in (1, 2):
        r = plane_twist_matrices(case, Fraction(1, 10**12), cfg.constants)
        cp = tuple(r.charpoly.integer_coeffs())
        root = r.dyndeg
        close = abs(root.midpoint() - EXPECTED_TWIST_ROOT[case]) <= Fraction(1, 10**5)
        row = {
            "result": r.to_json(),
            "charpoly_matches": cp == EXPECTED_TWIST_CHARPOLY[case],
            "root_within_tolerance": close,
            "sigma_is_involution": mat_mul(r.sigma, r.sigma) == identity(len(r.sigma)),
        }
        if case == 2:
            row["root_is_golden_square"] = root.is_root_of(GOLDEN_SQUARE)
        d[f"case{case}"] = row
        ok = ok and all(v for v in row.values() if isinstance(v, bool))
    return Criterion(5, "plane twists", ok, d)


def check_degree_formula(cfg: ReproConfig) -> Criterion:
    Q = CubicHypersurface.parse(FERMAT_SURFACE)
    config_ok = check_configuration(Q, FERMAT_POINTS)
    sig = [build_sigma(Q, p).sigma for p in FERMAT_POINTS]
    rows = []
    for w in all_reduced_words(3, 3):
        if not w:
            continue
        f = compose_all([sig[a - 1] for a in w])
        eff = degree_certificate(f, cfg.seed).degree
        rows.append({"word": list(w), "effective_degree": eff, "predicted_degree": predicted_degree(w, 3)})
    ok = config_ok and all(r["effective_degree"] == r["predicted_degree"] for r in rows)
    return Criterion(6, "degree formula", ok, {"configuration_ok": config_ok, "words": rows})


def check_growth(cfg: ReproConfig) -> Criterion:
    counts = {}
    failures = []
    for k in range(1, 5):
        n = 0
        for w in all_reduced_words(10, k):
            n += 1
            inv = growth_invariants(alpha_vector(w, k))
            if not all(inv.values()):
                failures.append({"k": k, "word": list(w), "invariants": inv})
        counts[str(k)] = n
    return Criterion(7, "growth invariants", not failures, {"words_checked": counts, "failures": failures[:20]})


def check_chi(cfg: ReproConfig) -> Criterion:
    model = chi_model(QQ)
    checks = model.checks(cfg.seed)
    fa, fb = model.forests(cfg.seed)
    audits = [fa.noether_audit(), fb.noether_audit()]
    d = {
        "checks": checks,
        "forest": fa.to_json(),
        "forest_inverse": fb.to_json(),
        "noether": [a.to_json() for a in audits],
        "single_towers": [fa.is_single_tower(), fb.is_single_tower()],
        "sizes": [len(fa), len(fb)],
        "isomorphic": fa.isomorphic_to(fb),
    }
    ok = (
        checks["chi_after_inverse_is_identity"]
        and checks["inverse_after_chi_is_identity"]
        and checks["degree_chi"] == 6
        and checks["degree_chi_inv"] == 6
        and checks["jacobian_is_constant_times_z15"]
        and d["sizes"] == [8, 8]
        and all(d["single_towers"])
        and all(a.ok and (a.sum_m, a.sum_m2) == (15, 35) for a in audits)
        and not d["isomorphic"]
    )
    return Criterion(8, "chi model", ok, d)


def check_certificates(cfg: ReproConfig) -> Criterion:
    ident = certify_nonregularizable([[1, 0, 0], [0, 1, 0], [0, 0, 1]], cfg.iterations, cfg.seed, audit=True)
    batch = certify_batch(cfg.tau_count, cfg.iterations, cfg.seed, audit=cfg.tau_audit)
    neg = negative_control(cfg.iterations, cfg.seed)
    reports = [ident] + batch
    d = {
        "identity": ident.to_json(),
        "random": [r.to_json() for r in batch],
        "negative_control": neg.to_json(),
    }
    ok = (
        len(batch) >= 10
        and all(r.verdict == OBSTRUCTION and r.audit_ok for r in reports)
        and neg.verdict == NO_OBSTRUCTION
    )
    return Criterion(9, "non-regularizability certificates", ok, d)


def check_quadratic(cfg: ReproConfig) -> Criterion:
    rows = []
    for expected, comps in QUADRATIC_REPRESENTATIVES.items():
        f = RationalMapN.from_strings(comps, QQ, 2)
        cls, forest = classify_quadratic(f, cfg.seed)
        proper = len(forest.roots)
        rows.append({
            "map": list(comps),
            "expected": expected.value,
            "class": cls.value,
            "proper_points": proper,
            "shape": [forest.shape()[0], list(forest.shape()[1])],
        })
    order = [QuadraticClass.THREE_PROPER, QuadraticClass.TWO_PROPER_ONE_INF_NEAR, QuadraticClass.ONE_PROPER_TOWER]
    ok = [r["class"] for r in rows] == [c.value for c in order] and all(
        r["proper_points"] == 3 - i for i, r in enumerate(rows))
    return Criterion(10, "quadratic classes", ok, {"maps": rows})


def _run_checks(cfg: ReproConfig, log: Callable[[str], None] | None) -> list[Criterion]:
    sigmas: list = []
    steps = [
        lambda: check_involutions(cfg, sigmas),
        lambda: check_pointwise(cfg, sigmas),
        lambda: check_lattice(cfg),
        lambda: check_dyndeg(cfg),
        lambda: check_twists(cfg),
        lambda: check_degree_formula(cfg),
        lambda: check_growth(cfg),
        lambda: check_chi(cfg),
        lambda: check_certificates(cfg),
        lambda: check_quadratic(cfg),
    ]
    out = []
    for step in steps:
        t0 = time.perf_counter()
        c = step()
        c.seconds = time.perf_counter() - t0
        if log:
            log(c.line())
        out.append(c)
    return out


def reproduce_paper(seed: int = 0, fault: str | None = None, *, tau_count: int = 10, tau_audit: bool = False,
                    repeat: bool = True, log: Callable[[str], None] | None = None) -> dict:
    """Run checks 1 to 10, and check 11 by running them all a second time.

    ``fault`` names an entry of FAULTS whose corrupted constants are used.
    """
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {sorted(FAULTS)}")
    cfg = ReproConfig(seed=seed, tau_count=tau_count, tau_audit=tau_audit,
                      constants=FAULTS.get(fault, {}), fault=fault)
    t0 = time.perf_counter()
    first = _run_checks(cfg, log)
    hashable = [c.hashable() for c in first]
    timings = {f"criterion_{c.number}": round(c.seconds, 3) for c in first}
    if repeat:
        t1 = time.perf_counter()
        second = _run_checks(cfg, None)
        a, b = digest(hashable), digest([c.hashable() for c in second])
        det = Criterion(11, "determinism", a == b, {"first": a, "second": b})
        det.seconds = time.perf_counter() - t1
        timings["criterion_11"] = round(det.seconds, 3)
        if log:
            log(det.line())
        hashable.append(det.hashable())
        first.append(det)
    timings["total"] = round(time.perf_counter() - t0, 3)
    section = {
        "command": "reproduce-paper",
        "config": cfg.to_json(),
        "criteria": hashable,
        "failed": [c.number for c in first if not c.passed],
        "all_passed": all(c.passed for c in first),
    }
    return {"hashable": section, "digest": digest(section), "timings": timings}


def summary_lines(bundle: dict) -> list[str]:
    return [f"{'PASS' if c['passed'] else 'FAIL'} criterion {c['number']}: {c['name']}"
            for c in bundle["hashable"]["criteria"]]


__all__ = ["FAULTS", "Criterion", "ReproConfig", "digest", "reproduce_paper", "summary_lines"]
