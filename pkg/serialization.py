"""
JSON Documents
Pydantic models for every result the workbench prints. Loading a document
rebuilds the domain object through its validating constructor, so a JSON
file that loads is also mathematically valid.
"""
from typing import Any, Dict, List, Optional, Type

import numpy as np
from pydantic import BaseModel, Field

import fp_poly
from config import VERSION
from duality import CheckVerdict, FiniteSetObj, SetMap, Spectrum, dualize_set_map
from fpalgebra import AlgebraHom, FiniteAlgebra, build_from_structure_constants, function_algebra
from pearl import PearlResult, UniversalityVerdict
from profinite import ClosedSubtower, OpenCylinderFamily, Tower, clopen_to_idempotent, complement_closed
from sheafmod import CSModule, SheafOnFiniteSet, module_to_sheaf
from spectrum import Idempotent, PiZeroResult


class AlgebraDoc(BaseModel):
    """Structure constants of a FiniteAlgebra"""

    p: int
    dim: int
    labels: List[str]
    mul: List[List[List[int]]]
    one: List[int]
    content_hash: Optional[str] = None

    @classmethod
    def from_algebra(cls, a: FiniteAlgebra) -> "AlgebraDoc":
        return cls(p=a.p, dim=a.dim, labels=list(a.labels), mul=a.mul.tolist(), one=a.one.tolist(),
                   content_hash=a.content_hash())

    def to_algebra(self) -> FiniteAlgebra:
        a = build_from_structure_constants(self.p, self.dim, self.mul, self.one, self.labels)
        if self.content_hash is not None and a.content_hash() != self.content_hash:
            raise ValueError("content hash does not match the structure constants")
        return a

    to_domain = to_algebra


class HomDoc(BaseModel):
    source: AlgebraDoc
    target: AlgebraDoc
    matrix: List[List[int]]

    @classmethod
    def from_hom(cls, h: AlgebraHom) -> "HomDoc":
        return cls(source=AlgebraDoc.from_algebra(h.source), target=AlgebraDoc.from_algebra(h.target),
                   matrix=h.matrix.tolist())

    def to_hom(self) -> AlgebraHom:
        source, target = self.source.to_algebra(), self.target.to_algebra()
        matrix = np.asarray(self.matrix, dtype=np.int64).reshape(target.dim, source.dim)
        return AlgebraHom(source, target, matrix)

    to_domain = to_hom


class PearlDoc(BaseModel):
    ambient: AlgebraDoc
    ambient_hash: str
    pearl: AlgebraDoc
    basis: List[List[int]]
    inclusion: List[List[int]]
    p_boolean: bool

    @classmethod
    def from_result(cls, r: PearlResult) -> "PearlDoc":
        return cls(
            ambient=AlgebraDoc.from_algebra(r.ambient),
            ambient_hash=r.ambient.content_hash(),
            pearl=AlgebraDoc.from_algebra(r.pearl_algebra),
            basis=r.basis.tolist(),
            inclusion=r.inclusion.matrix.tolist(),
            p_boolean=r.pearl_algebra.dim == r.ambient.dim,
        )

    def to_domain(self) -> PearlResult:
        ambient, sub = self.ambient.to_algebra(), self.pearl.to_algebra()
        matrix = np.asarray(self.inclusion, dtype=np.int64).reshape(ambient.dim, sub.dim)
        return PearlResult(ambient=ambient, pearl_algebra=sub, inclusion=AlgebraHom(sub, ambient, matrix))


class QuotientDoc(BaseModel):
    """Q(A) with the projection A -> Q(A)"""

    ambient: AlgebraDoc
    quotient: AlgebraDoc
    projection: List[List[int]]

    @classmethod
    def from_projection(cls, proj: AlgebraHom) -> "QuotientDoc":
        return cls(ambient=AlgebraDoc.from_algebra(proj.source), quotient=AlgebraDoc.from_algebra(proj.target),
                   projection=proj.matrix.tolist())

    def to_domain(self) -> AlgebraHom:
        return HomDoc(source=self.ambient, target=self.quotient, matrix=self.projection).to_hom()


class PiZeroDoc(BaseModel):
    ambient: AlgebraDoc
    components: List[List[int]]
    factors: List[AlgebraDoc]
    reconstruction: List[List[int]]

    @classmethod
    def from_result(cls, a: FiniteAlgebra, r: PiZeroResult) -> "PiZeroDoc":
        return cls(
            ambient=AlgebraDoc.from_algebra(a),
            components=[e.tolist() for e in r.components],
            factors=[AlgebraDoc.from_algebra(f) for f in r.factors],
            reconstruction=r.reconstruction_iso.matrix.tolist(),
        )

    def to_domain(self) -> List[Idempotent]:
        a = self.ambient.to_algebra()
        components = [Idempotent(a, v) for v in self.components]
        for f in self.factors:
            f.to_algebra()
        return components


class SetMapDoc(BaseModel):
    source: List[str]
    target: List[str]
    assignment: Dict[str, str]

    @classmethod
    def from_map(cls, f: SetMap) -> "SetMapDoc":
        return cls(source=list(f.source.elements), target=list(f.target.elements), assignment=f.as_dict())

    def to_domain(self) -> SetMap:
        return SetMap.from_labels(FiniteSetObj(tuple(self.source)), FiniteSetObj(tuple(self.target)),
                                  self.assignment)


class SpectrumDoc(BaseModel):
    algebra: AlgebraDoc
    points: List[str]
    idempotents: List[List[int]]
    point_homs: List[List[int]]

    @classmethod
    def from_spectrum(cls, b: FiniteAlgebra, spec: Spectrum) -> "SpectrumDoc":
        return cls(
            algebra=AlgebraDoc.from_algebra(b),
            points=list(spec.points.elements),
            idempotents=[e.tolist() for e in spec.idempotents],
            point_homs=[h.matrix[0].tolist() for h in spec.point_homs],
        )

    def to_domain(self) -> FiniteSetObj:
        b = self.algebra.to_algebra()
        for v in self.idempotents:
            Idempotent(b, v)
        return FiniteSetObj(tuple(self.points))


class TowerDoc(BaseModel):
    depth: int = Field(ge=0)
    levels: List[List[str]]
    transitions: List[List[int]]
    surjective: bool = True

    @classmethod
    def from_tower(cls, t: Tower) -> "TowerDoc":
        return cls(depth=t.depth, levels=[list(lv) for lv in t.levels],
                   transitions=[list(tr) for tr in t.transitions], surjective=t.surjective)

    def to_domain(self) -> Tower:
        tower = Tower(tuple(tuple(lv) for lv in self.levels), tuple(tuple(tr) for tr in self.transitions),
                      surjective=self.surjective)
        if tower.depth != self.depth:
            raise ValueError(f"depth {self.depth} does not match {len(self.levels)} levels")
        return tower


class SubtowerDoc(BaseModel):
    """A closed subtower or an open cylinder family as index lists per level"""

    kind: str = Field(pattern="^(closed|open)$")
    tower: TowerDoc
    subsets: List[List[int]]

    @classmethod
    def from_closed(cls, c: ClosedSubtower) -> "SubtowerDoc":
        return cls(kind="closed", tower=TowerDoc.from_tower(c.ambient), subsets=[sorted(s) for s in c.subsets])

    @classmethod
    def from_open(cls, u: OpenCylinderFamily) -> "SubtowerDoc":
        return cls(kind="open", tower=TowerDoc.from_tower(u.ambient), subsets=[sorted(s) for s in u.subsets])

    def to_domain(self):
        tower = self.tower.to_domain()
        if self.kind == "closed":
            return ClosedSubtower(tower, tuple(self.subsets))
        return OpenCylinderFamily(tower, tuple(self.subsets))


class ModuleDoc(BaseModel):
    p: int
    points: List[str]
    module_dim: int = Field(ge=0)
    projectors: List[List[List[int]]]
    stalk_dims: List[int]

    @classmethod
    def from_module(cls, m: CSModule) -> "ModuleDoc":
        return cls(p=m.p, points=list(m.points), module_dim=m.module_dim,
                   projectors=[rho.tolist() for rho in m.projectors], stalk_dims=m.stalk_dims())

    def to_domain(self) -> CSModule:
        algebra = function_algebra(self.p, self.points)
        mats = [np.asarray(r, dtype=np.int64).reshape(self.module_dim, self.module_dim) for r in self.projectors]
        return CSModule(algebra, mats, module_dim=self.module_dim)


class SheafDoc(BaseModel):
    p: int
    points: List[str]
    total_dim: int = Field(ge=0)
    stalk_dims: List[int]
    stalks: List[List[List[int]]]

    @classmethod
    def from_sheaf(cls, s: SheafOnFiniteSet) -> "SheafDoc":
        return cls(p=s.p, points=list(s.points.elements), total_dim=s.total_dim, stalk_dims=s.stalk_dims(),
                   stalks=[b.tolist() for b in s.stalks])

    def to_domain(self) -> SheafOnFiniteSet:
        stalks = [np.asarray(b, dtype=np.int64).reshape(self.total_dim, d)
                  for b, d in zip(self.stalks, self.stalk_dims)]
        return SheafOnFiniteSet(FiniteSetObj(tuple(self.points)), self.p, self.total_dim, stalks)


class PolyDoc(BaseModel):
    p: int
    coeffs: List[int]
    text: str

    @classmethod
    def from_poly(cls, p: int, f: fp_poly.Poly) -> "PolyDoc":
        return cls(p=p, coeffs=list(f), text=fp_poly.format_poly(f))

    def to_domain(self) -> fp_poly.Poly:
        f = fp_poly.trim(self.coeffs, self.p)
        if f != tuple(self.coeffs):
            raise ValueError("coefficients are not reduced")
        return f


class FactorCountDoc(BaseModel):
    poly: PolyDoc
    count: int = Field(ge=0)

    def to_domain(self) -> int:
        self.poly.to_domain()
        return self.count


class FactorDoc(BaseModel):
    poly: PolyDoc
    factors: List[PolyDoc]

    def to_domain(self) -> List[fp_poly.Poly]:
        f = self.poly.to_domain()
        factors = [d.to_domain() for d in self.factors]
        if fp_poly.product(factors, self.poly.p) != f:
            raise ValueError("factors do not multiply to the polynomial")
        return factors


class VerdictDoc(BaseModel):
    ok: bool
    checks: Dict[str, bool] = Field(default_factory=dict)
    counts: Dict[str, int] = Field(default_factory=dict)
    counterexamples: List[Dict[str, Any]] = Field(default_factory=list)

    @classmethod
    def from_verdict(cls, v) -> "VerdictDoc":
        if isinstance(v, UniversalityVerdict):
            return cls(ok=v.ok, counts={"left": v.left_count, "right": v.right_count},
                       counterexamples=[{"matrix": v.counterexample}] if v.counterexample else [])
        if isinstance(v, CheckVerdict):
            return cls(**v.to_dict())
        raise TypeError(f"no verdict document for {type(v).__name__}")

    def to_domain(self) -> bool:
        return self.ok


class DualSetDoc(BaseModel):
    """GF(p)^S with its duality checks and optionally one dualized map out of S"""

    p: int
    points: List[str]
    algebra: AlgebraDoc
    verdict: VerdictDoc
    set_map: Optional[SetMapDoc] = None
    dual_map: Optional[HomDoc] = None

    def to_domain(self) -> FiniteSetObj:
        points = FiniteSetObj(tuple(self.points))
        if self.algebra.to_algebra() != function_algebra(self.p, points.elements):
            raise ValueError("algebra is not the function algebra on the points")
        if self.set_map is not None:
            f = self.set_map.to_domain()
            if self.dual_map is None or self.dual_map.to_hom() != dualize_set_map(self.p, f):
                raise ValueError("dual map does not match the set map")
        return points


class ComplementDoc(BaseModel):
    closed: SubtowerDoc
    complement: SubtowerDoc
    stable_from: Optional[int] = None

    @classmethod
    def from_closed(cls, closed: ClosedSubtower) -> "ComplementDoc":
        family = complement_closed(closed)
        return cls(closed=SubtowerDoc.from_closed(closed), complement=SubtowerDoc.from_open(family),
                   stable_from=family.stable_from())

    def to_domain(self) -> ClosedSubtower:
        closed = self.closed.to_domain()
        if complement_closed(closed) != self.complement.to_domain():
            raise ValueError("open family is not the complement of the closed subtower")
        return closed


class ClopenDoc(BaseModel):
    """A stabilized cylinder family and its idempotent at the stabilization level"""

    family: SubtowerDoc
    p: int
    level: int = Field(ge=0)
    idempotent: List[int]

    def to_domain(self) -> Idempotent:
        n, e = clopen_to_idempotent(self.family.to_domain(), self.p)
        if n != self.level or e.tolist() != self.idempotent:
            raise ValueError("idempotent does not match the family")
        return e


class SheafDemoDoc(BaseModel):
    module: ModuleDoc
    sheaf: SheafDoc
    tensor: ModuleDoc
    verdict: VerdictDoc

    def to_domain(self) -> CSModule:
        module = self.module.to_domain()
        if module_to_sheaf(module).stalk_dims() != self.sheaf.to_domain().stalk_dims():
            raise ValueError("sheaf stalks do not match the module")
        self.tensor.to_domain()
        return module


class SuiteDoc(BaseModel):
    name: str
    seed: int
    passed: bool
    cases: int = Field(ge=0)
    failures: List[Dict[str, Any]] = Field(default_factory=list)
    elapsed: float = 0.0


class CheckDoc(BaseModel):
    seed: int
    ok: bool
    suites: List[SuiteDoc]

    def to_domain(self) -> bool:
        if self.ok != all(s.passed for s in self.suites):
            raise ValueError("overall verdict disagrees with the suites")
        return self.ok


class Envelope(BaseModel):
    """Top-level CLI output: {"command", "input", "result", "version"}"""

    command: str
    input: str
    result: Dict[str, Any]
    version: str = VERSION


def envelope(command: str, text: str, doc: BaseModel) -> Envelope:
    return Envelope(command=command, input=text, result=doc.model_dump(mode="json"))


def dumps(env: Envelope) -> str:
    return env.model_dump_json(indent=2)


def load_document(doc_type: Type[BaseModel], payload: Dict[str, Any]):
    """Validate a result payload and rebuild its domain object."""
    return doc_type.model_validate(payload).to_domain()
