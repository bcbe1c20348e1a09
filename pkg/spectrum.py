"""
Idempotents and Connected Components
Idempotent enumeration, splitting p-Boolean algebras into primitive
idempotents, the pi_0 decomposition of a finite algebra, the clopen lattice
and polynomial factoring through the Frobenius-fixed subalgebra
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

import fp_linalg as la
import fp_poly
from errors import (
    AlgebraMismatch,
    InternalClosureFailure,
    NotIdempotent,
    NotSquarefree,
    SystemValidationFailure,
)
from fpalgebra import (
    AlgebraHom,
    FiniteAlgebra,
    ideal_span,
    is_reduced,
    power,
    product_many,
    univariate_quotient,
)
from pearl import PBooleanAlgebra, certify, induced_subalgebra, pearl

logger = logging.getLogger(__name__)


class Idempotent:
    """An element e of ``algebra`` with e * e == e"""

    def __init__(self, algebra: FiniteAlgebra, vector, validate: bool = True):
        self.algebra = algebra
        self.vector = algebra.element(vector)
        self.vector.setflags(write=False)
        if validate and not np.array_equal(algebra.multiply(self.vector, self.vector), self.vector):
            raise NotIdempotent(f"{self.vector.tolist()} is not idempotent", {"vector": self.vector.tolist()})

    def key(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.vector)

    def is_zero(self) -> bool:
        return not self.vector.any()

    def tolist(self) -> List[int]:
        return self.vector.tolist()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Idempotent)
            and self.algebra == other.algebra
            and np.array_equal(self.vector, other.vector)
        )

    def __hash__(self):
        return hash((hash(self.algebra), self.key()))

    def __repr__(self):
        return f"Idempotent({self.tolist()})"


def enumerate_idempotents(a: FiniteAlgebra) -> List[Idempotent]:
    """Brute-force scan of every element, in lexicographic order (capped)."""
    table = a.element_table()
    squares = a.multiply_batch(table, table)
    hits = table[np.all(squares == table, axis=1)]
    logger.debug("found %d idempotents among %d elements", hits.shape[0], table.shape[0])
    return [Idempotent(a, row, validate=False) for row in hits]


def _is_scalar_multiple(x: np.ndarray, e: np.ndarray, p: int) -> bool:
    support = np.nonzero(e)[0]
    if support.size == 0:
        return not x.any()
    j = int(support[0])
    c = (int(x[j]) * pow(int(e[j]), -1, p)) % p
    return np.array_equal(x, (c * e) % p)


def split_by_element(b, a) -> List[Idempotent]:
    """The complete orthogonal system e_0..e_{p-1} cut out by the values of ``a``.

    e_i = 1 - (a - i)^(p-1) for i >= 1 and e_0 = 1 - sum(e_i), so e_i is the
    indicator of the locus where a takes the value i. The system is checked
    for idempotence, orthogonality and a == sum(i * e_i).
    """
    b = certify(b).algebra
    p = b.p
    a = b.element(a)
    one = b.one
    system = []
    for i in range(1, p):
        shifted = b.sub(a, b.scalar(i))
        system.append(b.sub(one, power(b, shifted, p - 1)))
    e0 = b.sub(one, np.sum(system, axis=0) % p if system else b.zero())
    system.insert(0, e0)

    for i, e in enumerate(system):
        if not np.array_equal(b.multiply(e, e), e):
            raise SystemValidationFailure(f"e_{i} is not idempotent", {"index": i})
        for j in range(i + 1, p):
            if b.multiply(e, system[j]).any():
                raise SystemValidationFailure(f"e_{i} and e_{j} are not orthogonal", {"pair": [i, j]})
    recombined = sum((i * e for i, e in enumerate(system)), b.zero()) % p
    if not np.array_equal(recombined, a):
        raise SystemValidationFailure("a != sum(i * e_i)", {"element": a.tolist()})
    return [Idempotent(b, e, validate=False) for e in system]


def primitive_idempotents(b) -> List[Idempotent]:
    """Primitive idempotents of a p-Boolean algebra by repeated splitting.

    Starting from the partition {1}, a block e is refined by the first basis
    element a whose product with e is not a scalar multiple of e. The result
    has exactly dim(B) members, sorted in decreasing lexicographic order (for
    GF(p)^S this is the order of S).
    """
    b = certify(b).algebra
    p = b.p
    if b.dim == 0:
        return []
    blocks = [b.one.copy()]
    changed = True
    while changed:
        changed = False
        refined = []
        for e in blocks:
            pivot = next(
                (i for i in range(b.dim)
                 if not _is_scalar_multiple(b.multiply(e, b.basis_vector(i)), e, p)),
                None,
            )
            if pivot is None:
                refined.append(e)
                continue
            changed = True
            for piece in split_by_element(b, b.basis_vector(pivot)):
                part = b.multiply(e, piece.vector)
                if part.any():
                    refined.append(part)
        blocks = refined

    if len(blocks) != b.dim:
        raise InternalClosureFailure(
            f"splitting produced {len(blocks)} blocks in a {b.dim}-dimensional p-Boolean algebra"
        )
    result = [Idempotent(b, e, validate=False) for e in blocks]
    result.sort(key=Idempotent.key, reverse=True)
    return result


@dataclass
class PiZeroResult:
    """Connected components of Spec A as primitive idempotents of A"""

    components: List[Idempotent]
    factors: List[FiniteAlgebra]
    embeddings: List[np.ndarray]
    reconstruction_iso: AlgebraHom

    @property
    def count(self) -> int:
        return len(self.components)


def factor_algebra(a: FiniteAlgebra, e) -> Tuple[FiniteAlgebra, np.ndarray, np.ndarray]:
    """eA with unit e on the echelon basis of the subspace eA.

    Returns the factor, its embedding matrix into A and the projection
    matrix x -> e * x.
    """
    e = a.element(e)
    mult = a.left_multiplication(e)
    basis = la.row_space(mult.T, a.p, width=a.dim)
    sub, embed = induced_subalgebra(a, basis, unit=e)
    proj = la.solve(embed, mult, a.p)
    if proj is None:
        raise InternalClosureFailure("e * A is not spanned by its echelon basis")
    return sub, embed, proj


def pi_zero(a: FiniteAlgebra) -> PiZeroResult:
    """Split A as the product of eA over the primitive idempotents e of its pearl."""
    result = pearl(a)
    prims = primitive_idempotents(PBooleanAlgebra(result.pearl_algebra))
    components = [Idempotent(a, result.inclusion.apply(e.vector)) for e in prims]

    factors, embeddings, projections = [], [], []
    for e in components:
        sub, embed, proj = factor_algebra(a, e.vector)
        factors.append(sub)
        embeddings.append(embed)
        projections.append(proj)

    target = product_many(factors, a.p)
    stacked = np.vstack(projections) if projections else np.zeros((0, a.dim), dtype=np.int64)
    iso = AlgebraHom(a, target, stacked)
    if not iso.is_bijective():
        raise InternalClosureFailure("the product of the factors is not isomorphic to A")
    logger.debug("pi_0 of %r: %d components of dims %s", a, len(components), [f.dim for f in factors])
    return PiZeroResult(components=components, factors=factors, embeddings=embeddings,
                        reconstruction_iso=iso)


class IdempotentLattice:
    """The Boolean lattice of idempotents of A, i.e. the clopens of Spec A"""

    def __init__(self, algebra: FiniteAlgebra):
        self.algebra = algebra

    def _coerce(self, e) -> Idempotent:
        if isinstance(e, Idempotent):
            if e.algebra != self.algebra:
                raise AlgebraMismatch("idempotent belongs to another algebra")
            return e
        return Idempotent(self.algebra, e)

    def top(self) -> Idempotent:
        return Idempotent(self.algebra, self.algebra.one, validate=False)

    def bottom(self) -> Idempotent:
        return Idempotent(self.algebra, self.algebra.zero(), validate=False)

    def meet(self, e, f) -> Idempotent:
        e, f = self._coerce(e), self._coerce(f)
        return Idempotent(self.algebra, self.algebra.multiply(e.vector, f.vector), validate=False)

    def join(self, e, f) -> Idempotent:
        e, f = self._coerce(e), self._coerce(f)
        a = self.algebra
        ef = a.multiply(e.vector, f.vector)
        return Idempotent(a, a.sub(a.add(e.vector, f.vector), ef), validate=False)

    def complement(self, e) -> Idempotent:
        e = self._coerce(e)
        return Idempotent(self.algebra, self.algebra.sub(self.algebra.one, e.vector), validate=False)

    def leq(self, e, f) -> bool:
        e, f = self._coerce(e), self._coerce(f)
        return np.array_equal(self.algebra.multiply(e.vector, f.vector), e.vector)

    def is_atom(self, e, universe: Optional[List[Idempotent]] = None) -> bool:
        """Minimal nonzero element; ``universe`` defaults to every idempotent."""
        e = self._coerce(e)
        if e.is_zero():
            return False
        universe = enumerate_idempotents(self.algebra) if universe is None else universe
        return all(f.is_zero() or f == e or not self.leq(f, e) for f in universe)


def primitive_by_enumeration(a: FiniteAlgebra) -> List[Idempotent]:
    """Atoms of the brute-force idempotent lattice, sorted like primitive_idempotents."""
    lattice = IdempotentLattice(a)
    everything = enumerate_idempotents(a)
    atoms = [e for e in everything if lattice.is_atom(e, everything)]
    atoms.sort(key=Idempotent.key, reverse=True)
    return atoms


def idempotent_generator(b, gens: Sequence) -> Idempotent:
    """The idempotent generating the ideal (gens) of a p-Boolean algebra.

    Each a generates the same ideal as the idempotent a^(p-1); two
    idempotents e, f generate the ideal of e + f - ef.
    """
    b = certify(b).algebra
    lattice = IdempotentLattice(b)
    result = lattice.bottom()
    for g in gens:
        e = Idempotent(b, power(b, b.element(g), b.p - 1))
        result = lattice.join(result, e)
    if len(gens) and not la.same_span(ideal_span(b, list(gens)), ideal_span(b, [result.vector]), b.p, b.dim):
        raise InternalClosureFailure("idempotent does not generate the given ideal")
    return result


def is_field(a: FiniteAlgebra) -> bool:
    """A finite algebra is a field iff it is reduced and connected."""
    if a.dim == 0:
        return False
    return is_reduced(a) and pearl(a).pearl_algebra.dim == 1


def factor_count_via_pearl(p: int, f: Sequence[int]) -> int:
    """Distinct monic irreducible factors of f, read off as dim of the pearl of GF(p)[x]/(f)."""
    f = fp_poly.trim(f, p)
    fp_poly.require_monic(f)
    if fp_poly.degree(f) == 0:
        return 0
    return pearl(univariate_quotient(p, f)).pearl_algebra.dim


def _pearl_polynomial_basis(p: int, g: fp_poly.Poly) -> List[fp_poly.Poly]:
    result = pearl(univariate_quotient(p, g))
    return [fp_poly.trim([int(c) for c in row], p) for row in result.basis]


def factor_via_pearl(p: int, f: Sequence[int]) -> List[fp_poly.Poly]:
    """Monic irreducible factors of a squarefree monic f, by gcd splitting.

    A non-constant fixed point a of Frobenius on GF(p)[x]/(g) satisfies
    g = prod_c gcd(g, a - c), with at least two nontrivial factors.
    """
    f = fp_poly.trim(f, p)
    fp_poly.require_monic(f)
    if not fp_poly.is_squarefree(f, p):
        raise NotSquarefree(f"{fp_poly.format_poly(f)} is not squarefree over GF({p})",
                            {"coeffs": list(f)})
    pending = [f] if fp_poly.degree(f) > 0 else []
    done: List[fp_poly.Poly] = []
    while pending:
        g = pending.pop()
        if fp_poly.degree(g) == 1:
            done.append(g)
            continue
        splitters = [a for a in _pearl_polynomial_basis(p, g) if fp_poly.degree(a) > 0]
        if not splitters:
            done.append(g)
            continue
        a = splitters[0]
        for c in range(p):
            h = fp_poly.gcd(g, fp_poly.sub(a, (c,), p), p)
            if 0 < fp_poly.degree(h) < fp_poly.degree(g):
                pending.append(h)
                pending.append(fp_poly.divmod_poly(g, h, p)[0])
                break
        else:
            raise InternalClosureFailure(f"no constant splits {fp_poly.format_poly(g)}")
    done.sort(key=fp_poly.sort_key)
    logger.debug("factored %s into %d irreducibles", fp_poly.format_poly(f), len(done))
    return done
