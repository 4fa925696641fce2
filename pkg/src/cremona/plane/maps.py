"""Named plane maps and structural checks on them."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations

from ..errors import ConfigurationError
from ..exact.fields import GF, QQ, FieldSpec, cube_root_of_unity, random_primes
from ..exact.mpoly import MultiPoly
from ..ratmap import (
    ContractionReport,
    RationalMapN,
    _matrix_rank,
    compose,
    contracts,
    effective_degree,
    is_identity,
    jacobian_det,
    same_map,
)
from .forest import BasePointForest, base_point_forest

CHI_TEXT = ("x*z^5 + (y*z^2 + x^3)^2", "y*z^5 + x^3*z^3", "z^6")
CHI_INV_TEXT = ("x*z^5 - y^2*z^4", "y*z^5 - (x*z - y^2)^3", "z^6")


def squarefree_part(f: MultiPoly) -> MultiPoly:
    """Radical of a form in characteristic zero (or large characteristic)."""
    g = f
    for d in f.gradient():
        if not d.is_zero():
            g = g.gcd(d)
    return f.exact_div(g).monic() if not g.is_constant() else f.monic()


@dataclass(frozen=True)
class ChiModel:
    chi: RationalMapN
    chi_inv: RationalMapN
    contracted_line: MultiPoly      # curve contracted by chi
    contracted_line_inv: MultiPoly  # curve contracted by the inverse

    def checks(self, seed: int = 0) -> dict:
        z = MultiPoly.gen(2, 3, self.chi.field)
        jac = jacobian_det(self.chi)
        jac_inv = jacobian_det(self.chi_inv)
        c15 = jac.coefficient((0, 0, 15))
        return {
            "chi_after_inverse_is_identity": is_identity(compose(self.chi, self.chi_inv)),
            "inverse_after_chi_is_identity": is_identity(compose(self.chi_inv, self.chi)),
            "degree_chi": effective_degree(self.chi, seed),
            "degree_chi_inv": effective_degree(self.chi_inv, seed),
            "jacobian": str(jac),
            "jacobian_is_constant_times_z15": c15 != 0 and jac == z**15 * c15,
            "jacobian_inv": str(jac_inv),
            "contracted_line": str(self.contracted_line),
            "contracted_line_inv": str(self.contracted_line_inv),
        }

    def contraction(self, seed: int = 0) -> ContractionReport:
        return contracts(self.chi, self.contracted_line, seed)

    def forests(self, seed: int = 0) -> tuple[BasePointForest, BasePointForest]:
        return base_point_forest(self.chi, seed), base_point_forest(self.chi_inv, seed)


@lru_cache(maxsize=None)
def chi_model(field: FieldSpec = QQ) -> ChiModel:
    chi = RationalMapN.from_strings(CHI_TEXT, field, 2)
    chi_inv = RationalMapN.from_strings(CHI_INV_TEXT, field, 2)
    return ChiModel(chi, chi_inv, squarefree_part(jacobian_det(chi)), squarefree_part(jacobian_det(chi_inv)))


def psi_lambda(lam, field: FieldSpec = QQ) -> RationalMapN:
    """Cubic map (yz(y - z + (l-1)x) : xy(z - l y) : xz(z - l y))."""
    lam = field(lam)
    if lam == 0 or lam == 1:
        raise ConfigurationError("the parameter must avoid 0 and 1")
    x, y, z = MultiPoly.gens(3, field)
    w = z - y * lam
    return RationalMapN([y * z * (y - z + x * (lam - 1)), x * y * w, x * z * w])


def hessian_cubic(lam, field: FieldSpec = QQ) -> MultiPoly:
    lam = field(lam)
    if field.mul(field.mul(lam, lam), lam) == field(-27):
        raise ConfigurationError("singular member of the Hesse pencil")
    x, y, z = MultiPoly.gens(3, field)
    return x**3 + y**3 + z**3 + x * y * z * lam


def translation_generators(p: int) -> tuple[RationalMapN, RationalMapN, int]:
    """(y:z:x) and (x:wy:w^2z) over GF(p), p = 1 mod 3, with w a primitive cube root of 1."""
    fld = GF(p)
    w = cube_root_of_unity(p)
    x, y, z = MultiPoly.gens(3, fld)
    return RationalMapN([y, z, x]), RationalMapN([x, y * w, z * (w * w % p)]), w


def preserves(form: MultiPoly, g: RationalMapN) -> bool:
    """form o g is a nonzero constant multiple of form."""
    h = form.compose(*g.components)
    if h.is_zero():
        return False
    lc = h.terms()
    e, c = next(iter(sorted(lc.items())))
    c0 = form.coefficient(e)
    if c0 == 0:
        return False
    return h == form * form.field.div(c, c0)


def generated_group(gens, limit: int = 1000) -> list[RationalMapN]:
    """Closure of the generators under composition, up to projective equality."""
    n = gens[0].n
    elems = [RationalMapN.identity(n, gens[0].field)]
    frontier = list(elems)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = compose(g, a)
                if not any(same_map(b, e) for e in elems):
                    elems.append(b)
                    new.append(b)
                    if len(elems) > limit:
                        raise ConfigurationError("group closure exceeded the limit")
        frontier = new
    return elems


class QuadraticClass(str, Enum):
    THREE_PROPER = "ThreeProper"
    TWO_PROPER_ONE_INF_NEAR = "TwoProperOneInfNear"
    ONE_PROPER_TOWER = "OneProperTower"


QUADRATIC_REPRESENTATIVES = {
    QuadraticClass.THREE_PROPER: ("y*z", "x*z", "x*y"),
    QuadraticClass.TWO_PROPER_ONE_INF_NEAR: ("y^2", "x*y", "x*z"),
    QuadraticClass.ONE_PROPER_TOWER: ("x^2", "x*y", "y^2 - x*z"),
}


def classify_quadratic(f: RationalMapN, seed: int = 0) -> tuple[QuadraticClass, BasePointForest]:
    d = effective_degree(f, seed)
    if d != 2:
        raise ConfigurationError(f"expected a quadratic map, effective degree is {d}")
    forest = base_point_forest(f, seed)
    if forest.residual or not forest.noether_audit().ok:
        raise ConfigurationError("base points of the quadratic map are not all defined over the field")
    shape = forest.shape()
    table = {
        (3, (1, 1, 1)): QuadraticClass.THREE_PROPER,
        (2, (2, 1)): QuadraticClass.TWO_PROPER_ONE_INF_NEAR,
        (1, (3,)): QuadraticClass.ONE_PROPER_TOWER,
    }
    if shape not in table:
        raise ConfigurationError(f"unexpected base point shape {shape}")
    return table[shape], forest


def build_examples(field: FieldSpec = QQ, lam=2, prime: int | None = None, seed: int = 0) -> dict:
    """Named example maps with their structural checks."""
    out = {}
    psi = psi_lambda(lam, field)
    forest = base_point_forest(psi, seed)
    simple = [nd.point.root for nd in forest.roots if nd.multiplicity == 1]
    out["psi_lambda"] = {
        "map": psi,
        "degree": effective_degree(psi, seed),
        "forest": forest,
        "collinear_triples": _collinear_triples(simple),
    }
    if prime is None:
        prime = random_primes(seed, 1, one_mod_three=True)[0]
    a, b, w = translation_generators(prime)
    hess = hessian_cubic(0, GF(prime))
    group = generated_group([a, b])
    out["hessian"] = {
        "cubic": hess,
        "prime": prime,
        "omega": w,
        "generators": (a, b),
        "preserved": [preserves(hess, g) for g in (a, b)],
        "group_order": len(group),
        "group_preserves": all(preserves(hess, g) for g in group),
        "pencil_preserved": all(preserves(hessian_cubic(k, GF(prime)), g) for k in (1, 2, 5) for g in (a, b)),
    }
    model = chi_model(field)
    out["chi"] = {"model": model, "checks": model.checks(seed)}
    return out


def _collinear_triples(pts) -> list:
    out = []
    for tri in combinations(pts, 3):
        if _matrix_rank([list(p.coords) for p in tri], tri[0].field) < 3:
            out.append(tri)
    return out


__all__ = [
    "CHI_INV_TEXT", "CHI_TEXT", "ChiModel", "QUADRATIC_REPRESENTATIVES", "QuadraticClass", "build_examples",
    "chi_model", "classify_quadratic", "generated_group", "hessian_cubic", "preserves", "psi_lambda",
    "squarefree_part", "translation_generators",
]
