"""Finite certificate that tau o chi is not conjugate to a surface automorphism.

For ``phi = tau o chi`` the point ``p3`` (third point of the base tower of
chi) should be a base point of every ``phi^i`` and of no ``phi^-i``.  Along
the way the base points of ``phi^(i+1)`` are predicted as the base points
of ``phi`` together with their images under ``(phi^-1)•`` up to ``i`` times,
and the prediction is checked against the Noether equalities.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..errors import BasePointError
from ..exact.fields import GF, QQ, FieldSpec, random_primes
from ..exact.matrix import det_bareiss
from ..ratmap import DEFAULT_WORK_BOUND, RationalMapN, compose
from .bullet import bullet
from .forest import base_point_forest, is_base_point, multiplicities
from .maps import ChiModel, chi_model
from .points import InfNearPoint

OBSTRUCTION = "obstruction found"
NO_OBSTRUCTION = "no obstruction at p3"


def adjugate(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer adjugate of a 3x3 matrix, a scalar multiple of its inverse."""
    (a, b, c), (d, e, f), (g, h, i) = m
    return [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]


def random_tau(rng: random.Random, height: int = 10) -> list[list[int]]:
    while True:
        m = [[rng.randint(-height, height) for _ in range(3)] for _ in range(3)]
        if det_bareiss(m) != 0:
            return m


@dataclass(frozen=True)
class AuditStep:
    power: int
    degree: int
    predicted: int
    distinct: bool
    all_base_points: bool
    sum_m: int
    sum_m2: int
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        d = self.degree
        return (
            self.error is None
            and self.distinct
            and self.all_base_points
            and (self.sum_m, self.sum_m2) == (3 * (d - 1), d * d - 1)
        )

    def to_json(self) -> dict:
        return {
            "power": self.power,
            "degree": self.degree,
            "predicted_points": self.predicted,
            "distinct": self.distinct,
            "all_base_points": self.all_base_points,
            "sum_m": self.sum_m,
            "sum_m2": self.sum_m2,
            "ok": self.ok,
            "error": self.error,
        }


@dataclass(frozen=True)
class CertificateReport:
    tau: tuple
    N: int
    tracked: InfNearPoint
    forward: tuple[bool, ...]
    backward: tuple[bool, ...]
    degrees_forward: tuple[int, ...]
    degrees_backward: tuple[int, ...]
    audit: tuple[AuditStep, ...] = field(default=())
    label: str = "tau o chi"
    audit_field: Optional[str] = None

    @property
    def verdict(self) -> str:
        return OBSTRUCTION if all(self.forward) and not any(self.backward) else NO_OBSTRUCTION

    @property
    def audit_ok(self) -> bool:
        return all(a.ok for a in self.audit)

    def to_json(self) -> dict:
        return {
            "map": self.label,
            "tau": [list(r) for r in self.tau],
            "N": self.N,
            "tracked": self.tracked.to_json(),
            "forward": list(self.forward),
            "backward": list(self.backward),
            "degrees_forward": list(self.degrees_forward),
            "degrees_backward": list(self.degrees_backward),
            "verdict": self.verdict,
            "audit_field": self.audit_field,
            "audit": [a.to_json() for a in self.audit],
            "audit_ok": self.audit_ok,
        }


def _powers(f: RationalMapN, N: int, work_bound) -> list[RationalMapN]:
    out = [f]
    for _ in range(N - 1):
        out.append(compose(out[-1], f, work_bound))
    return out


def _audit(phi: RationalMapN, phi_inv: RationalMapN, powers: list[RationalMapN], seed: int,
           field: FieldSpec) -> list[AuditStep]:
    """Base points of phi^(i+1) against the predicted set, checked by the Noether equalities.

    The predicted points are distinct base points of phi^(i+1); if their
    multiplicities already exhaust both Noether sums there is no room for any
    other base point, so the prediction is the whole base locus.
    """
    base = [q.reduce(field) for q in base_point_forest(phi, seed).points]
    phi_inv = phi_inv.reduce(field)
    layers = [base]
    steps = []
    for i in range(1, len(powers)):
        target = powers[i].reduce(field)  # phi^(i+1)
        try:
            layers.append([bullet(phi_inv, q) for q in layers[-1]])
        except BasePointError as exc:
            steps.append(AuditStep(i + 1, target.degree, 0, False, False, 0, 0, str(exc)))
            break
        pts = [q for layer in layers for q in layer]
        ms = multiplicities(target, pts)
        steps.append(
            AuditStep(
                i + 1,
                target.degree,
                len(pts),
                len(set(pts)) == len(pts),
                all(m > 0 for m in ms),
                sum(ms),
                sum(m * m for m in ms),
            )
        )
    return steps


def certify_pair(
    phi: RationalMapN,
    phi_inv: RationalMapN,
    tracked: InfNearPoint,
    N: int = 3,
    seed: int = 0,
    audit: bool = True,
    work_bound: int | None = DEFAULT_WORK_BOUND,
    tau=((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    label: str = "tau o chi",
    backward: tuple[RationalMapN, InfNearPoint] | None = None,
    audit_field: FieldSpec | None = None,
) -> CertificateReport:
    """Forward and backward base-point checks of ``tracked``, plus the optional audit.

    ``backward = (psi, q)`` stands for a conjugate ``phi^-1 = L psi L^-1`` by a
    linear ``L`` with ``q = (L^-1)•tracked``: then ``tracked`` is a base point of
    ``phi^-i`` iff ``q`` is one of ``psi^i``, and the degrees agree.
    """
    if N < 1:
        raise ValueError("need at least one iteration")
    psi, q = backward if backward is not None else (phi_inv, tracked)
    fwd = _powers(phi, N, work_bound)
    bwd = _powers(psi, N, work_bound)
    forward = tuple(is_base_point(f, tracked) for f in fwd)
    backward_hits = tuple(is_base_point(g, q) for g in bwd)
    fld = audit_field or phi.field
    steps = tuple(_audit(phi, phi_inv, fwd, seed, fld)) if audit else ()
    return CertificateReport(
        tuple(tuple(r) for r in tau),
        N,
        tracked,
        forward,
        backward_hits,
        tuple(f.degree for f in fwd),
        tuple(g.degree for g in bwd),
        steps,
        label,
        str(fld) if audit else None,
    )


def tracked_point(model: ChiModel, seed: int = 0) -> InfNearPoint:
    """The height-2 point of the base tower of chi."""
    forest = base_point_forest(model.chi, seed)
    if not forest.is_single_tower() or len(forest) < 3:
        raise BasePointError("chi should have a single tower of base points")
    return forest.nodes[2].point


def certify_nonregularizable(
    tau: Sequence[Sequence[int]],
    N: int = 3,
    seed: int = 0,
    audit: bool = True,
    work_bound: int | None = DEFAULT_WORK_BOUND,
    field: FieldSpec = QQ,
    audit_prime: int | None = None,
) -> CertificateReport:
    """Certificate for ``phi = tau o chi``; the audit runs modulo ``audit_prime`` when given."""
    tau = [[int(v) for v in row] for row in tau]
    if len(tau) != 3 or any(len(r) != 3 for r in tau):
        raise ValueError("tau must be a 3x3 matrix")
    if field(det_bareiss(tau)) == 0:
        raise ValueError("tau is singular")
    model = chi_model(field)
    T = RationalMapN.linear(tau, field)
    Tinv = RationalMapN.linear(adjugate(tau), field)
    phi = compose(T, model.chi, work_bound)
    phi_inv = compose(model.chi_inv, Tinv, work_bound)
    # phi^-1 = T psi T^-1 with psi = T^-1 chi^-1, whose powers stay sparse
    psi = compose(Tinv, model.chi_inv, work_bound)
    p3 = tracked_point(model, seed)
    return certify_pair(
        phi, phi_inv, p3, N, seed, audit, work_bound, tau,
        backward=(psi, bullet(Tinv, p3)),
        audit_field=GF(audit_prime) if audit_prime else None,
    )


def negative_control(N: int = 3, seed: int = 0, field: FieldSpec = QQ) -> CertificateReport:
    """The roles of chi and its inverse swapped while still tracking p3."""
    model = chi_model(field)
    return certify_pair(model.chi_inv, model.chi, tracked_point(model, seed), N, seed, False,
                        label="chi^-1 (roles swapped)")


def certify_batch(count: int, N: int = 3, seed: int = 0, height: int = 10, audit: bool = True,
                  modular_audit: bool = True) -> list[CertificateReport]:
    """Certificates for ``count`` seeded random tau; the audits run modulo seeded primes by default."""
    rng = random.Random(f"tau:{seed}")
    taus = [random_tau(rng, height) for _ in range(count)]
    primes = random_primes(seed, count) if modular_audit else [None] * count
    return [certify_nonregularizable(t, N, seed, audit, audit_prime=p) for t, p in zip(taus, primes)]


__all__ = [
    "AuditStep", "CertificateReport", "NO_OBSTRUCTION", "OBSTRUCTION", "adjugate", "certify_batch",
    "certify_nonregularizable", "certify_pair", "negative_control", "random_tau", "tracked_point",
]
