"""
Pearl and Stone Quotient
The largest p-Boolean subalgebra A° (Frobenius fixed points) and the universal
p-Boolean quotient Q(A) = A/(a^p - a), with checks of their universal properties
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

import fp_linalg as la
from errors import InternalClosureFailure, NotInjectiveInput, NotPBoolean
from fpalgebra import (
    AlgebraHom,
    FiniteAlgebra,
    enumerate_homs,
    frobenius_matrix,
    function_algebra,
    power,
    product,
    quotient_by_ideal,
    relative_tensor,
    right_inverse,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PBooleanVerdict:
    ok: bool
    witness: Optional[int] = None

    def __bool__(self):
        return self.ok


def is_p_boolean(a: FiniteAlgebra) -> PBooleanVerdict:
    """True iff the Frobenius matrix is the identity.

    Frobenius is linear, so fixing every basis element fixes every element;
    on failure the first basis index with b^p != b is returned as witness.
    """
    frob = frobenius_matrix(a).entries
    for i in range(a.dim):
        if not np.array_equal(frob[:, i], a.basis_vector(i)):
            return PBooleanVerdict(False, i)
    return PBooleanVerdict(True)


@dataclass(frozen=True)
class PBooleanAlgebra:
    """A FiniteAlgebra certified to satisfy a^p = a for every element"""

    algebra: FiniteAlgebra

    def __post_init__(self):
        verdict = is_p_boolean(self.algebra)
        if not verdict:
            i = verdict.witness
            raise NotPBoolean(
                f"basis element {self.algebra.labels[i]} is not fixed by Frobenius",
                {"witness": i},
            )

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return self.algebra.dim


def as_algebra(value) -> FiniteAlgebra:
    return value.algebra if isinstance(value, PBooleanAlgebra) else value


def certify(value) -> PBooleanAlgebra:
    return value if isinstance(value, PBooleanAlgebra) else PBooleanAlgebra(value)


@dataclass(frozen=True)
class PearlResult:
    """The pearl of ``ambient`` and its inclusion"""

    ambient: FiniteAlgebra
    pearl_algebra: FiniteAlgebra
    inclusion: AlgebraHom

    @property
    def basis(self) -> np.ndarray:
        """Pearl basis vectors as rows in ambient coordinates."""
        return self.inclusion.matrix.T

    def contains(self, x) -> bool:
        return la.in_span(self.basis, x, self.ambient.p)

    def coordinates(self, x) -> np.ndarray:
        coords = la.solve(self.inclusion.matrix, x, self.ambient.p)
        if coords is None:
            raise ValueError("element does not lie in the pearl")
        return coords


def induced_subalgebra(ambient: FiniteAlgebra, basis_rows: np.ndarray,
                       unit=None, labels=None) -> Tuple[FiniteAlgebra, np.ndarray]:
    """Structure constants of a multiplicatively closed subspace.

    ``unit`` defaults to the ambient unit; pass another idempotent to build a
    factor algebra eA. Returns the algebra and its embedding matrix (columns
    are the basis rows). Raises InternalClosureFailure if the span is not closed.
    """
    p = ambient.p
    basis_rows = np.asarray(basis_rows, dtype=np.int64)
    if basis_rows.ndim == 1:
        basis_rows = basis_rows.reshape(1, -1)
    k = basis_rows.shape[0]
    embed = basis_rows.T
    products = np.einsum("ai,bj,ijl->lab", basis_rows, basis_rows, ambient.mul, optimize=True) % p
    coords = la.solve(embed, products.reshape(ambient.dim, k * k), p) if k else np.zeros((0, 0))
    if coords is None:
        raise InternalClosureFailure("subspace is not closed under multiplication")
    mul = np.asarray(coords, dtype=np.int64).reshape(k, k, k).transpose(1, 2, 0)

    unit = ambient.one if unit is None else unit
    one = la.solve(embed, unit, p) if k else np.zeros(0, dtype=np.int64)
    if one is None:
        raise InternalClosureFailure("subspace does not contain its unit")
    labels = labels if labels is not None else [f"v{i}" for i in range(k)]
    sub = FiniteAlgebra(ambient.field, mul, one, labels=labels, validate=False)
    return sub, embed


def pearl(a: FiniteAlgebra) -> PearlResult:
    """A° = ker(F - I), on the reduced row-echelon basis of that kernel."""
    frob = frobenius_matrix(a)
    fixed = la.nullspace((frob.entries - la.identity(a.dim)) % a.p, a.p)
    sub, embed = induced_subalgebra(a, fixed, labels=[f"e{i}" for i in range(fixed.shape[0])])
    logger.debug("pearl of %r has dimension %d", a, sub.dim)
    return PearlResult(ambient=a, pearl_algebra=sub, inclusion=AlgebraHom(sub, a, embed))


def stone_quotient(a: FiniteAlgebra) -> Tuple[PBooleanAlgebra, AlgebraHom]:
    """Q(A) = A / (b^p - b : b a basis element), with its projection.

    x -> x^p - x is additive in characteristic p, so basis generators span
    the same ideal as all x^p - x.
    """
    gens = [(power(a, a.basis_vector(i), a.p) - a.basis_vector(i)) % a.p for i in range(a.dim)]
    quotient, proj = quotient_by_ideal(a, gens)
    return PBooleanAlgebra(quotient), proj


def frobenius_fixed_point_count(a: FiniteAlgebra) -> int:
    """Number of GF(p)-points of Spec A, i.e. |Hom(A, GF(p))|."""
    return len(enumerate_homs(a, function_algebra(a.p, ["*"])))


@dataclass
class UniversalityVerdict:
    """Outcome of a hom-set bijection check"""

    ok: bool
    left_count: int
    right_count: int
    counterexample: Optional[List[List[int]]] = None
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "ok": self.ok,
            "left_count": self.left_count,
            "right_count": self.right_count,
            "counterexample": self.counterexample,
            **self.details,
        }


def check_pearl_universal(b, a: FiniteAlgebra) -> UniversalityVerdict:
    """Hom(B, A°) -> Hom(B, A) by composing with the inclusion must be bijective."""
    b = certify(b).algebra
    result = pearl(a)
    into_ambient = enumerate_homs(b, a)
    into_pearl = enumerate_homs(b, result.pearl_algebra)

    pushed = {result.inclusion.compose(h).key() for h in into_pearl}
    injective = len(pushed) == len(into_pearl)
    outside = [h for h in into_ambient if h.key() not in pushed]
    ok = injective and not outside and len(into_ambient) == len(into_pearl)
    if not ok:
        logger.warning("pearl universality failed for %r -> %r", b, a)
    return UniversalityVerdict(
        ok=ok,
        left_count=len(into_pearl),
        right_count=len(into_ambient),
        counterexample=outside[0].matrix.tolist() if outside else None,
    )


def check_q_universal(a: FiniteAlgebra, b) -> UniversalityVerdict:
    """Hom(Q(A), B) -> Hom(A, B) by precomposing with A -> Q(A) must be bijective."""
    b = certify(b).algebra
    q, proj = stone_quotient(a)
    from_quotient = enumerate_homs(q.algebra, b)
    from_ambient = enumerate_homs(a, b)

    pulled = {h.compose(proj).key() for h in from_quotient}
    missing = [h for h in from_ambient if h.key() not in pulled]
    ok = len(pulled) == len(from_quotient) and not missing and len(from_quotient) == len(from_ambient)
    if not ok:
        logger.warning("Q universality failed for %r -> %r", a, b)
    return UniversalityVerdict(
        ok=ok,
        left_count=len(from_quotient),
        right_count=len(from_ambient),
        counterexample=missing[0].matrix.tolist() if missing else None,
    )


@dataclass
class ComparisonVerdict:
    """The canonical map B°(x)_A B° -> (B(x)_A B)° and its properties"""

    comparison: AlgebraHom
    source_dim: int
    target_dim: int
    injective: bool
    surjective: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "injective": self.injective,
            "surjective": self.surjective,
            "matrix": self.comparison.matrix.tolist(),
        }


def check_pearl_comparison(a, f: AlgebraHom) -> ComparisonVerdict:
    """Build the comparison map on pearls for an injective f: A -> B with A p-Boolean.

    Injectivity stands in for faithful flatness over p-Boolean algebras.
    """
    a = certify(a).algebra
    if f.source != a:
        raise NotInjectiveInput("f must have the given p-Boolean algebra as source")
    if not f.is_injective():
        raise NotInjectiveInput("f is not injective", {"rank": f.rank(), "dim": a.dim})
    b = f.target
    p = b.p

    b_pearl = pearl(b)
    # f lands in B° because A is p-Boolean
    restricted = la.solve(b_pearl.inclusion.matrix, f.matrix, p)
    if restricted is None:
        raise InternalClosureFailure("image of a p-Boolean algebra is not inside the pearl")
    f_pearl = AlgebraHom(a, b_pearl.pearl_algebra, restricted)

    source = relative_tensor(b_pearl.pearl_algebra, b_pearl.pearl_algebra, f_pearl, f_pearl)
    whole = relative_tensor(b, b, f, f)
    target = pearl(whole.algebra)

    incl = b_pearl.inclusion.matrix
    lift = right_inverse(source.projection)
    in_whole = la.matmul(whole.projection.matrix, la.matmul(np.kron(incl, incl), lift, p), p)
    coords = la.solve(target.inclusion.matrix, in_whole, p)
    if coords is None:
        raise InternalClosureFailure("comparison map does not land in the pearl")
    comparison = AlgebraHom(source.algebra, target.pearl_algebra, coords)
    return ComparisonVerdict(
        comparison=comparison,
        source_dim=source.algebra.dim,
        target_dim=target.pearl_algebra.dim,
        injective=comparison.is_injective(),
        surjective=comparison.is_surjective(),
    )


def pearl_product_comparison(a: FiniteAlgebra, b: FiniteAlgebra) -> AlgebraHom:
    """The canonical map A° x B° -> (A x B)°; bijective since pearls preserve products."""
    pa, pb = pearl(a), pearl(b)
    left, _, _ = product(pa.pearl_algebra, pb.pearl_algebra)
    whole, _, _ = product(a, b)
    pw = pearl(whole)
    block = np.zeros((a.dim + b.dim, pa.pearl_algebra.dim + pb.pearl_algebra.dim), dtype=np.int64)
    block[: a.dim, : pa.pearl_algebra.dim] = pa.inclusion.matrix
    block[a.dim:, pa.pearl_algebra.dim:] = pb.inclusion.matrix
    coords = la.solve(pw.inclusion.matrix, block, a.p)
    if coords is None:
        raise InternalClosureFailure("product of pearls does not land in the pearl of the product")
    return AlgebraHom(left, pw.pearl_algebra, coords)
