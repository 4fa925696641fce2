"""Base points of plane birational maps, proper and infinitely near."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import BasePointError, ResidualBaseLocusError
from ..exact.elim import common_zeros
from ..ratmap import ProjectivePoint, RationalMapN
from .points import (
    MAX_HEIGHT, InfNearPoint, directions, local_system, order, root_system, transform, truncate, with_precision,
)


@dataclass(frozen=True)
class ForestNode:
    id: int
    point: InfNearPoint
    multiplicity: int
    parent: Optional[int]
    proximate_to: tuple[int, ...]  # parent first, then any other earlier point

    @property
    def height(self) -> int:
        return self.point.height

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "height": self.height,
            "parent": self.parent,
            "coords": self.point.root.to_json(),
            "chart_path": self.point.chart_path(),
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class NoetherAudit:
    degree: int
    sum_m: int
    sum_m2: int
    complete: bool

    @property
    def expected(self) -> tuple[int, int]:
        return 3 * (self.degree - 1), self.degree**2 - 1

    @property
    def ok(self) -> bool:
        return self.complete and (self.sum_m, self.sum_m2) == self.expected

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "sum_m": self.sum_m,
            "sum_m2": self.sum_m2,
            "expected": list(self.expected),
            "complete": self.complete,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class BasePointForest:
    degree: int
    nodes: tuple[ForestNode, ...]
    residual: tuple[str, ...] = field(default=())

    def __post_init__(self):
        for nd in self.nodes:
            if nd.parent is not None:
                if nd.parent >= nd.id or not nd.proximate_to or nd.proximate_to[0] != nd.parent:
                    raise BasePointError("forest invariant broken: parent must precede and be proximate")
                anc = set(self.ancestors(nd.id))
                if not set(nd.proximate_to) <= anc:
                    raise BasePointError("proximity to a non-ancestor")

    def __len__(self):
        return len(self.nodes)

    def node(self, i: int) -> ForestNode:
        return self.nodes[i]

    def ancestors(self, i: int) -> list[int]:
        out = []
        p = self.nodes[i].parent
        while p is not None:
            out.append(p)
            p = self.nodes[p].parent
        return out

    @property
    def points(self) -> list[InfNearPoint]:
        return [nd.point for nd in self.nodes]

    @property
    def multiplicities(self) -> list[int]:
        return [nd.multiplicity for nd in self.nodes]

    @property
    def roots(self) -> list[ForestNode]:
        return [nd for nd in self.nodes if nd.parent is None]

    def children(self, i: int) -> list[ForestNode]:
        return [nd for nd in self.nodes if nd.parent == i]

    def find(self, pt: InfNearPoint) -> Optional[ForestNode]:
        for nd in self.nodes:
            if nd.point == pt:
                return nd
        return None

    def proximity_edges(self) -> list[tuple[int, int]]:
        return [(nd.id, j) for nd in self.nodes for j in nd.proximate_to]

    def extra_proximity_edges(self) -> list[tuple[int, int]]:
        """Proximity edges other than child -> parent."""
        return [(nd.id, j) for nd in self.nodes for j in nd.proximate_to[1:]]

    def is_single_tower(self) -> bool:
        return len(self.roots) == 1 and all(len(self.children(nd.id)) <= 1 for nd in self.nodes)

    def noether_audit(self) -> NoetherAudit:
        ms = self.multiplicities
        return NoetherAudit(self.degree, sum(ms), sum(m * m for m in ms), not self.residual)

    def shape(self) -> tuple[int, tuple[int, ...]]:
        """Number of proper points and the sorted sizes of the trees."""
        sizes = []
        for r in self.roots:
            count, stack = 0, [r.id]
            while stack:
                i = stack.pop()
                count += 1
                stack.extend(c.id for c in self.children(i))
            sizes.append(count)
        return len(self.roots), tuple(sorted(sizes, reverse=True))

    def canonical_form(self) -> str:
        """Isomorphism invariant of the marked forest (parents plus proximity)."""

        def enc(i: int) -> str:
            nd = self.nodes[i]
            anc = [nd.id] + self.ancestors(nd.id)
            dist = sorted(anc.index(j) for j in nd.proximate_to)
            kids = sorted(enc(c.id) for c in self.children(i))
            return f"[{','.join(map(str, dist))}|{''.join(kids)}]"

        return "".join(sorted(enc(r.id) for r in self.roots))

    def isomorphic_to(self, other: BasePointForest) -> bool:
        return self.canonical_form() == other.canonical_form()

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "nodes": [nd.to_json() for nd in self.nodes],
            "proximity": [list(e) for e in self.proximity_edges()],
            "residual": list(self.residual),
            "noether": self.noether_audit().to_json(),
        }

    def proximity_json(self) -> dict:
        return {
            "nodes": [{"id": nd.id, "height": nd.height, "point": repr(nd.point)} for nd in self.nodes],
            "proximity": [list(e) for e in self.proximity_edges()],
            "extra": [list(e) for e in self.extra_proximity_edges()],
        }

    def to_dot(self, name: str = "proximity", prefix: str = "p") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for nd in self.nodes:
            lines.append(f'  {prefix}{nd.id + 1} [label="{prefix}{nd.id + 1} (m={nd.multiplicity})"];')
        for a, b in self.proximity_edges():
            style = "" if self.nodes[a].parent == b else " [style=dashed]"
            lines.append(f"  {prefix}{a + 1} -> {prefix}{b + 1}{style};")
        lines.append("}")
        return "\n".join(lines)


def proper_base_points(f: RationalMapN, seed: int = 0) -> tuple[list[ProjectivePoint], list[str]]:
    if f.n != 2:
        raise ValueError("base point forests are computed for plane maps only")
    sols = common_zeros(list(f.components), seed)
    pts = sorted({ProjectivePoint(c, f.field) for c, _ in sols.points}, key=lambda p: p.coords)
    return pts, [str(r) for r in sols.residual]


def base_point_forest(f: RationalMapN, seed: int = 0, strict: bool = False) -> BasePointForest:
    """Resolve the base points of a plane map into towers of infinitely near points.

    Directions or proper points not defined over the working field are kept
    in ``residual``; with ``strict`` they raise instead.
    """
    roots, residual0 = proper_base_points(f, seed)

    def run(prec):
        residual = list(residual0)
        nodes: list[ForestNode] = []

        def grow(pt, system, prec, exact, parent, prox, curve_s, curve_t):
            m = order(system, exact)
            if m == 0:
                return
            if pt.height > MAX_HEIGHT:
                raise BasePointError("tower exceeds the height limit")
            me = len(nodes)
            nodes.append(ForestNode(me, pt, m, parent, prox))
            d = directions(system, m)
            if d.residual is not None:
                residual.append(f"{pt!r}: {d.residual}")
            for st in d.steps:
                child_sys, kept = truncate(transform(system, st, m), prec - m)
                if st[0] == "A":
                    new_s, new_t, other = me, (curve_t if st[1] == 0 else None), (curve_t if st[1] == 0 else None)
                else:
                    new_s, new_t, other = curve_s, me, curve_s
                cprox = (me,) + ((other,) if other is not None else ())
                grow(pt.child(st), child_sys, prec - m, exact and kept, me, cprox, new_s, new_t)

        for r in roots:
            system, exact = truncate(root_system(f.components, r), prec)
            grow(InfNearPoint(r), system, prec, exact, None, (), None, None)
        return nodes, residual

    nodes, residual = with_precision(run)
    if strict and residual:
        raise ResidualBaseLocusError("; ".join(residual))
    return BasePointForest(f.degree, tuple(nodes), tuple(residual))


def is_base_point(f: RationalMapN, pt: InfNearPoint) -> bool:
    """True iff the strict transform of the system still vanishes at ``pt``."""
    pt = pt.reduce(f.field)
    _, mults = local_system(f.components, pt)
    return all(m > 0 for m in mults)


def multiplicity(f: RationalMapN, pt: InfNearPoint) -> int:
    """Multiplicity of the linear system of ``f`` at ``pt`` (0 if not a base point)."""
    _, mults = local_system(f.components, pt.reduce(f.field))
    return mults[-1] if all(m > 0 for m in mults) else 0


def multiplicities(f: RationalMapN, pts, prec: int | None = None) -> list[int]:
    """Multiplicities at several points, walking each maximal tower only once.

    ``prec`` is the starting jet order; it only affects speed.
    """
    pts = [q.reduce(f.field) for q in pts]
    tops = [q for q in pts if not any(o.is_infinitely_near(q) for o in pts)]
    along: dict[InfNearPoint, int] = {}
    for top in tops:
        _, ms = local_system(f.components, top, prec)
        alive = True
        for h, m in enumerate(ms):
            alive = alive and m > 0
            along[InfNearPoint(top.root, top.path[:h])] = m if alive else 0
    return [along[q] for q in pts]


def proximity_graph(f: RationalMapN, seed: int = 0) -> dict:
    return base_point_forest(f, seed).proximity_json()


__all__ = [
    "BasePointForest", "ForestNode", "NoetherAudit", "base_point_forest", "is_base_point", "multiplicities",
    "multiplicity",
    "proper_base_points", "proximity_graph",
]
