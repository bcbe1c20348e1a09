"""
Finite Stone Duality
Finite sets and maps on one side, p-Boolean algebras and ring maps on the
other; the two contravariant functors between them and round-trip checks
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from errors import (
    EnumerationCapExceeded,
    InvalidSetMap,
    NoPreimagePoint,
    ScalarResolutionFailure,
    SourceMismatch,
)
from fpalgebra import AlgebraHom, FiniteAlgebra, enumerate_homs, function_algebra
from pearl import PBooleanAlgebra, certify
from spectrum import Idempotent, primitive_idempotents

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteSetObj:
    """A finite set given by an ordered tuple of distinct labels"""

    elements: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(str(x) for x in self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise InvalidSetMap("set labels must be distinct", {"elements": list(self.elements)})

    @classmethod
    def of_size(cls, n: int, prefix: str = "s") -> "FiniteSetObj":
        return cls(tuple(f"{prefix}{i}" for i in range(n)))

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise InvalidSetMap(f"{label!r} is not an element of the set") from None


@dataclass(frozen=True)
class SetMap:
    """A total function source -> target; ``assignment[i]`` is the target index of source element i"""

    source: FiniteSetObj
    target: FiniteSetObj
    assignment: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(t) for t in self.assignment))
        if len(self.assignment) != len(self.source):
            raise InvalidSetMap(
                f"map assigns {len(self.assignment)} values for a source of size {len(self.source)}"
            )
        for i, t in enumerate(self.assignment):
            if not 0 <= t < len(self.target):
                raise InvalidSetMap(
                    f"{self.source.elements[i]} is sent outside the target", {"index": i, "value": t}
                )

    @classmethod
    def from_labels(cls, source: FiniteSetObj, target: FiniteSetObj, mapping: Dict[str, str]) -> "SetMap":
        missing = [s for s in source if s not in mapping]
        if missing:
            raise InvalidSetMap(f"map is undefined on {missing}")
        return cls(source, target, tuple(target.index(mapping[s]) for s in source))

    @classmethod
    def identity(cls, s: FiniteSetObj) -> "SetMap":
        return cls(s, s, tuple(range(len(s))))

    def __call__(self, label: str) -> str:
        return self.target.elements[self.assignment[self.source.index(label)]]

    def as_dict(self) -> Dict[str, str]:
        return {s: self.target.elements[t] for s, t in zip(self.source, self.assignment)}

    def compose(self, inner: "SetMap") -> "SetMap":
        """self after inner."""
        if inner.target != self.source:
            raise SourceMismatch("composition of set maps with mismatched middle set")
        return SetMap(inner.source, self.target, tuple(self.assignment[t] for t in inner.assignment))

    def is_injective(self) -> bool:
        return len(set(self.assignment)) == len(self.assignment)

    def is_surjective(self) -> bool:
        return set(self.assignment) == set(range(len(self.target)))


def all_set_maps(s: FiniteSetObj, t: FiniteSetObj) -> Iterator[SetMap]:
    """Every map S -> T, in lexicographic order of assignments."""
    for assignment in itertools.product(range(len(t)), repeat=len(s)):
        yield SetMap(s, t, assignment)


def ground_field(p: int) -> FiniteAlgebra:
    """GF(p) as the one-point function algebra."""
    return function_algebra(p, ["*"])


def dual_of_set(p: int, s: FiniteSetObj) -> PBooleanAlgebra:
    return PBooleanAlgebra(function_algebra(p, s.elements))


@dataclass
class Spectrum:
    """Points of Spec B as primitive idempotents, with their evaluation homs B -> GF(p)"""

    points: FiniteSetObj
    idempotents: List[Idempotent]
    point_homs: List[AlgebraHom]

    def point_of(self, e: Idempotent) -> str:
        for label, candidate in zip(self.points, self.idempotents):
            if candidate == e:
                return label
        raise NoPreimagePoint(f"{e!r} is not a point of this spectrum")


def _basis_label(b: FiniteAlgebra, e: Idempotent) -> Optional[str]:
    support = np.nonzero(e.vector)[0]
    if support.size == 1 and e.vector[support[0]] == 1:
        return b.labels[int(support[0])]
    return None


def _point_labels(b: FiniteAlgebra, prims: Sequence[Idempotent]) -> List[str]:
    """Basis labels where the idempotent is a basis vector, else ``pt<k>`` primed until unused."""
    named = [_basis_label(b, e) for e in prims]
    taken = {name for name in named if name is not None}
    labels: List[str] = []
    for k, name in enumerate(named):
        if name is None or name in labels:
            name = f"pt{k}"
            while name in taken or name in labels:
                name += "'"
        labels.append(name)
    return labels


def spectrum_of_p_boolean(b) -> Spectrum:
    """Spec B for p-Boolean B: one point per primitive idempotent e.

    The point hom sends x to the scalar c with e * x == c * e. A point whose
    idempotent is a basis vector is named by that basis label.
    """
    b = certify(b).algebra
    p = b.p
    target = ground_field(p)
    prims = primitive_idempotents(b)
    homs = []
    for e in prims:
        pivot = int(np.nonzero(e.vector)[0][0])
        inv = pow(int(e.vector[pivot]), -1, p)
        row = np.zeros((1, b.dim), dtype=np.int64)
        for i in range(b.dim):
            ex = b.multiply(e.vector, b.basis_vector(i))
            c = (int(ex[pivot]) * inv) % p
            if not np.array_equal(ex, (c * e.vector) % p):
                raise ScalarResolutionFailure(
                    f"e * {b.labels[i]} is not a multiple of the primitive idempotent e",
                    {"idempotent": e.tolist(), "basis_index": i},
                )
            row[0, i] = c
        homs.append(AlgebraHom(b, target, row))
    labels = _point_labels(b, prims)
    return Spectrum(points=FiniteSetObj(tuple(labels)), idempotents=prims, point_homs=homs)


def dualize_set_map(p: int, f: SetMap) -> AlgebraHom:
    """GF(p)^T -> GF(p)^S, precomposition with f: indicator of t goes to the indicator of f^-1(t)."""
    source = function_algebra(p, f.target.elements)
    target = function_algebra(p, f.source.elements)
    matrix = np.zeros((len(f.source), len(f.target)), dtype=np.int64)
    for s, t in enumerate(f.assignment):
        matrix[s, t] = 1
    return AlgebraHom(source, target, matrix)


def dualize_alg_hom(g: AlgebraHom) -> SetMap:
    """Spec C -> Spec B for g: B -> C; a point e of C goes to the point e' of B with e * g(e') == e."""
    spec_b = spectrum_of_p_boolean(g.source)
    spec_c = spectrum_of_p_boolean(g.target)
    c = g.target
    assignment = []
    for e in spec_c.idempotents:
        hits = [
            k for k, e_b in enumerate(spec_b.idempotents)
            if np.array_equal(c.multiply(e.vector, g.apply(e_b.vector)), e.vector)
        ]
        if len(hits) != 1:
            raise NoPreimagePoint(
                f"point {e.tolist()} has {len(hits)} candidate images",
                {"idempotent": e.tolist(), "candidates": hits},
            )
        assignment.append(hits[0])
    return SetMap(spec_c.points, spec_b.points, tuple(assignment))


def evaluation_iso(b) -> AlgebraHom:
    """B -> GF(p)^{Spec B}, x -> (phi(x))_phi; bijective for p-Boolean B."""
    b = certify(b).algebra
    spec = spectrum_of_p_boolean(b)
    target = function_algebra(b.p, spec.points.elements)
    rows = [h.matrix for h in spec.point_homs]
    matrix = np.vstack(rows) if rows else np.zeros((0, b.dim), dtype=np.int64)
    return AlgebraHom(b, target, matrix)


@dataclass
class CheckVerdict:
    """Named pass/fail checks with counts and the counterexamples found"""

    ok: bool
    checks: Dict[str, bool] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    counterexamples: List[Dict[str, object]] = field(default_factory=list)

    def record(self, name: str, passed: bool, witness: Optional[Dict[str, object]] = None):
        self.checks[name] = self.checks.get(name, True) and passed
        if not passed:
            self.ok = False
            if witness is not None:
                self.counterexamples.append({"check": name, **witness})

    def to_dict(self) -> Dict[str, object]:
        return {
            "ok": self.ok,
            "checks": dict(self.checks),
            "counts": dict(self.counts),
            "counterexamples": list(self.counterexamples),
        }


def check_duality_round_trip(p: int, s: FiniteSetObj, maps: Sequence[SetMap] = (),
                             algebras: Iterable = ()) -> CheckVerdict:
    """Unit and counit of the duality at S, plus naturality on the given maps out of S.

    Spec(GF(p)^S) must be S with each point carried by the indicator of its
    label; every sample p-Boolean algebra B (and GF(p)^S itself) must be
    isomorphic to GF(p)^{Spec B} through evaluation.
    """
    verdict = CheckVerdict(ok=True)
    dual = dual_of_set(p, s)
    spec = spectrum_of_p_boolean(dual)
    verdict.counts["points"] = len(spec.points)

    unit_ok = spec.points.elements == s.elements and all(
        np.array_equal(e.vector, dual.algebra.basis_vector(i)) for i, e in enumerate(spec.idempotents)
    )
    verdict.record("unit", unit_ok, {"points": list(spec.points.elements), "set": list(s.elements)})

    for b in [dual, *algebras]:
        iso = evaluation_iso(b)
        verdict.record("counit", iso.is_bijective(), {"dim": iso.source.dim, "rank": iso.rank()})

    for f in maps:
        if f.source != s:
            raise SourceMismatch("naturality samples must be maps out of the tested set")
        back = dualize_alg_hom(dualize_set_map(p, f))
        verdict.record("naturality", back == f,
                       {"map": f.as_dict(), "round_trip": back.as_dict()})
    if not verdict.ok:
        logger.warning("duality round trip failed at %d points over GF(%d)", len(s), p)
    return verdict


def check_full_faithfulness(p: int, s: FiniteSetObj, t: FiniteSetObj) -> CheckVerdict:
    """dualize_set_map must biject Hom(S, T) onto the independently enumerated Hom(GF(p)^T, GF(p)^S)."""
    expected = len(t) ** len(s)
    cap = get_config().enumeration_cap
    if expected > cap:
        raise EnumerationCapExceeded(
            f"|T|^|S| = {expected} exceeds the enumeration cap {cap}", {"count": expected, "cap": cap}
        )
    duals = {dualize_set_map(p, f).key(): f for f in all_set_maps(s, t)}
    homs = enumerate_homs(function_algebra(p, t.elements), function_algebra(p, s.elements))
    keys = {h.key() for h in homs}

    verdict = CheckVerdict(ok=True, counts={"set_maps": expected, "algebra_homs": len(homs)})
    verdict.record("injective", len(duals) == expected)
    verdict.record("counts", len(homs) == expected)
    missing = keys - set(duals)
    verdict.record("surjective", not missing,
                   {"hom": list(next(iter(missing)))} if missing else None)
    return verdict


def stone_cech(s: FiniteSetObj) -> Tuple[bool, Dict[str, str]]:
    """Points of Spec(GF(2)^S) against S: the finite Stone-Cech compactification is S itself."""
    spec = spectrum_of_p_boolean(dual_of_set(2, s))
    identification = dict(zip(spec.points.elements, s.elements))
    return spec.points == s, identification
