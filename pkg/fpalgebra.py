"""
Finite Commutative GF(p)-Algebras
Prime fields, algebras given by structure constants, unital ring maps and the
standard constructions (quotients, products, tensor products, Frobenius)
"""
import functools
import hashlib
import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

import fp_linalg as la
import fp_poly
from config import MAX_PRIME, get_config
from errors import (
    BadUnit,
    DimCapExceeded,
    EnumerationCapExceeded,
    FieldMismatch,
    InvalidStructureConstants,
    NotAssociative,
    NotCommutative,
    NotHomomorphism,
    NotMonic,
    NotPrime,
    SourceMismatch,
    ZeroDegree,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrimeField:
    """The base field GF(p) for a prime 2 <= p <= 251"""

    p: int

    def __post_init__(self):
        if not (2 <= self.p <= MAX_PRIME) or not fp_poly.is_prime(self.p):
            raise NotPrime(f"{self.p} is not a prime in [2, {MAX_PRIME}]", {"p": self.p})

    def __str__(self):
        return f"GF({self.p})"


def check_dim(n: int):
    cap = get_config().dim_cap
    if n > cap:
        raise DimCapExceeded(
            f"algebra of dimension {n} exceeds the dimension cap {cap}", {"dim": n, "cap": cap}
        )


class FiniteAlgebra:
    """Commutative unital GF(p)-algebra on a distinguished basis b_0..b_{n-1}.

    ``mul[i, j, k]`` is the coefficient of b_k in b_i * b_j and ``one`` holds
    the coordinates of the unit. Instances are immutable.
    """

    def __init__(self, field: PrimeField, mul, one, labels: Optional[Sequence[str]] = None,
                 validate: bool = True):
        p = field.p
        one = la.as_fp(np.asarray(one, dtype=np.int64).reshape(-1), p)
        n = one.shape[0]
        check_dim(n)
        mul = np.asarray(mul, dtype=np.int64)
        if n == 0:
            mul = np.zeros((0, 0, 0), dtype=np.int64)
        if mul.shape != (n, n, n):
            raise InvalidStructureConstants(
                f"structure constants have shape {mul.shape}, expected {(n, n, n)}"
            )

        self.field = field
        self.mul = mul % p
        self.one = one
        self.labels: Tuple[str, ...] = tuple(labels) if labels is not None else tuple(
            f"b{i}" for i in range(n)
        )
        if len(self.labels) != n:
            raise InvalidStructureConstants(f"{len(self.labels)} labels for dimension {n}")
        self.mul.setflags(write=False)
        self.one.setflags(write=False)

        if validate:
            self._validate_laws()

    # basic data

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return self.one.shape[0]

    @property
    def size(self) -> int:
        return self.p ** self.dim

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero()
        v[i] = 1
        return v

    def element(self, coords) -> np.ndarray:
        v = la.as_fp(coords, self.p)
        if v.shape != (self.dim,):
            raise ValueError(f"element of {self.dim}-dimensional algebra expected, got shape {v.shape}")
        return v

    def scalar(self, c: int) -> np.ndarray:
        return (c * self.one) % self.p

    # arithmetic

    def add(self, x, y) -> np.ndarray:
        return (np.asarray(x) + np.asarray(y)) % self.p

    def sub(self, x, y) -> np.ndarray:
        return (np.asarray(x) - np.asarray(y)) % self.p

    def scale(self, c: int, x) -> np.ndarray:
        return (c * np.asarray(x)) % self.p

    def multiply(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mul, optimize=True) % self.p

    def multiply_batch(self, xs, ys) -> np.ndarray:
        """Row-wise products of two (N x n) stacks of elements."""
        return np.einsum("ni,nj,ijk->nk", xs, ys, self.mul, optimize=True) % self.p

    def left_multiplication(self, x) -> np.ndarray:
        """Matrix L with L @ y == x * y."""
        return np.einsum("i,ijk->kj", x, self.mul, optimize=True) % self.p

    def power(self, a, e: int) -> np.ndarray:
        return power(self, a, e)

    # enumeration

    def element_table(self) -> np.ndarray:
        """All p^n elements as rows, in lexicographic order (capped)."""
        cap = get_config().enumeration_cap
        if self.size > cap:
            raise EnumerationCapExceeded(
                f"{self} has {self.size} elements, above the enumeration cap {cap}",
                {"size": self.size, "cap": cap},
            )
        return _element_table(self.p, self.dim)

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, size=self.dim, dtype=np.int64)

    # identity

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"p={self.p};dim={self.dim};".encode())
        h.update(self.one.tobytes())
        h.update(self.mul.tobytes())
        return h.hexdigest()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteAlgebra)
            and self.p == other.p
            and self.dim == other.dim
            and np.array_equal(self.one, other.one)
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self):
        return hash((self.p, self.dim, self.one.tobytes(), self.mul.tobytes()))

    def __repr__(self):
        return f"FiniteAlgebra(GF({self.p}), dim={self.dim})"

    def __str__(self):
        return f"{self.dim}-dimensional algebra over GF({self.p})"

    # validation

    def _validate_laws(self):
        c, n, p = self.mul, self.dim, self.p

        asym = np.argwhere(c != c.transpose(1, 0, 2))
        if asym.size:
            i, j, _ = (int(t) for t in asym[0])
            raise NotCommutative(
                f"b{i}*b{j} != b{j}*b{i}", {"pair": [i, j]}
            )

        flat = c.reshape(n, n * n)
        for i in range(n):
            # (b_i b_j) b_k and b_i (b_j b_k), indexed [j, k, l]
            left = (c[i] @ flat).reshape(n, n, n) % p
            right = np.einsum("jkm,ml->jkl", c, c[i], optimize=True) % p
            bad = np.argwhere(left != right)
            if bad.size:
                j, k, _ = (int(t) for t in bad[0])
                raise NotAssociative(
                    f"(b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})", {"triple": [i, j, k]}
                )

        unit_action = np.einsum("i,ijk->jk", self.one, c, optimize=True) % p
        if not np.array_equal(unit_action, la.identity(n)):
            bad = np.argwhere(unit_action != la.identity(n))
            raise BadUnit(
                "the given unit does not act as the identity",
                {"basis_index": int(bad[0][1])},
            )


@functools.lru_cache(maxsize=64)
def _element_table(p: int, n: int) -> np.ndarray:
    table = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(p ** n, n)
    table.setflags(write=False)
    return table


class AlgebraHom:
    """A GF(p)-linear map between algebras that is a unital ring map.

    ``matrix`` has shape (target.dim, source.dim); column i is the image of b_i.
    """

    def __init__(self, source: FiniteAlgebra, target: FiniteAlgebra, matrix, validate: bool = True):
        if source.p != target.p:
            raise FieldMismatch(f"hom from GF({source.p}) to GF({target.p})")
        self.source = source
        self.target = target
        self.matrix = la.as_fp(np.asarray(matrix, dtype=np.int64).reshape(target.dim, source.dim),
                               source.p)
        self.matrix.setflags(write=False)
        if validate:
            self._validate()

    @property
    def p(self) -> int:
        return self.source.p

    def _validate(self):
        p, M = self.p, self.matrix
        if not np.array_equal(M @ self.source.one % p, self.target.one):
            raise NotHomomorphism("the unit is not sent to the unit")
        lhs = np.einsum("ijk,lk->ijl", self.source.mul, M, optimize=True) % p
        images = M.T
        rhs = np.einsum("ia,jb,abl->ijl", images, images, self.target.mul, optimize=True) % p
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, j, _ = (int(t) for t in bad[0])
            raise NotHomomorphism(
                f"f(b{i}*b{j}) != f(b{i})*f(b{j})", {"pair": [i, j]}
            )

    def apply(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=np.int64) % self.p

    def compose(self, inner: "AlgebraHom") -> "AlgebraHom":
        """self after inner."""
        if inner.target != self.source:
            raise SourceMismatch("composition of homs with mismatched middle algebra")
        return AlgebraHom(inner.source, self.target,
                          la.matmul(self.matrix, inner.matrix, self.p), validate=False)

    def rank(self) -> int:
        return la.rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def kernel(self) -> np.ndarray:
        return la.nullspace(self.matrix, self.p)

    def image(self) -> np.ndarray:
        """Canonical basis of the image, as rows."""
        return la.row_space(self.matrix.T, self.p, width=self.target.dim)

    def key(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.matrix.reshape(-1))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraHom)
            and self.source == other.source
            and self.target == other.target
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((hash(self.source), hash(self.target), self.matrix.tobytes()))

    def __repr__(self):
        return f"AlgebraHom(dim {self.source.dim} -> dim {self.target.dim}, matrix={self.matrix.tolist()})"

    @classmethod
    def identity(cls, algebra: FiniteAlgebra) -> "AlgebraHom":
        return cls(algebra, algebra, la.identity(algebra.dim), validate=False)


def right_inverse(hom: AlgebraHom) -> np.ndarray:
    """A linear section of a surjective hom: matrix L with hom.matrix @ L == I."""
    lift = la.solve(hom.matrix, la.identity(hom.target.dim), hom.p)
    if lift is None:
        raise ValueError("hom is not surjective; no linear section exists")
    return lift


def _same_field(a: FiniteAlgebra, b: FiniteAlgebra):
    if a.p != b.p:
        raise FieldMismatch(f"algebras over GF({a.p}) and GF({b.p})", {"p": [a.p, b.p]})


# constructors

def build_from_structure_constants(p: int, dim: int, mul, one,
                                   labels: Optional[Sequence[str]] = None) -> FiniteAlgebra:
    """Build and exhaustively validate an algebra from raw structure constants.

    Args:
        p: Prime modulus.
        dim: Dimension n (0 for the zero ring).
        mul: n x n x n nested lists, mul[i][j][k] = coefficient of b_k in b_i b_j.
        one: Coordinates of the unit.
        labels: Optional basis names.

    Returns:
        A validated FiniteAlgebra.
    """
    field = PrimeField(p)
    one_arr = np.asarray(one, dtype=np.int64).reshape(-1)
    mul_arr = np.asarray(mul, dtype=np.int64)
    if dim == 0:
        mul_arr = mul_arr.reshape(0, 0, 0) if mul_arr.size == 0 else mul_arr
    if one_arr.shape != (dim,) or mul_arr.shape != (dim, dim, dim):
        raise InvalidStructureConstants(
            f"dimension {dim} does not match one{tuple(one_arr.shape)} / mul{tuple(mul_arr.shape)}"
        )
    if ((one_arr < 0) | (one_arr >= p)).any() or ((mul_arr < 0) | (mul_arr >= p)).any():
        raise InvalidStructureConstants(f"entries must lie in [0, {p})")
    return FiniteAlgebra(field, mul_arr, one_arr, labels=labels, validate=True)


def zero_ring(p: int) -> FiniteAlgebra:
    return FiniteAlgebra(PrimeField(p), np.zeros((0, 0, 0)), [], labels=[], validate=False)


def _power_label(var: str, d: int) -> str:
    if d == 0:
        return "1"
    return var if d == 1 else f"{var}^{d}"


def univariate_quotient(p: int, f: Sequence[int], var: str = "x") -> FiniteAlgebra:
    """GF(p)[x]/(f) on the basis 1, x, ..., x^(deg f - 1).

    Args:
        p: Prime modulus.
        f: Coefficients of a monic polynomial, lowest degree first.
        var: Name of the indeterminate used for basis labels.
    """
    field = PrimeField(p)
    f = fp_poly.trim(f, p)
    if not fp_poly.is_monic(f):
        raise NotMonic(f"{fp_poly.format_poly(f, var)} is not monic", {"coeffs": list(f)})
    n = fp_poly.degree(f)
    if n < 1:
        raise ZeroDegree("the modulus must have degree at least 1")
    check_dim(n)

    # x^k mod f for k < 2n - 1
    powers = []
    current: fp_poly.Poly = (1,)
    x = (0, 1)
    for _ in range(2 * n - 1):
        powers.append(current + (0,) * (n - len(current)))
        current = fp_poly.mod(fp_poly.mul(current, x, p), f, p)

    mul = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            mul[i, j] = powers[i + j]
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1
    logger.debug("built GF(%d)[%s]/(%s)", p, var, fp_poly.format_poly(f, var))
    return FiniteAlgebra(field, mul, one, labels=[_power_label(var, d) for d in range(n)],
                         validate=False)


def function_algebra(p: int, points: Iterable) -> FiniteAlgebra:
    """GF(p)^S with pointwise product; basis = indicator functions of the points."""
    field = PrimeField(p)
    labels = [str(s) for s in points]
    n = len(labels)
    check_dim(n)
    mul = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        mul[i, i, i] = 1
    return FiniteAlgebra(field, mul, np.ones(n, dtype=np.int64), labels=labels, validate=False)


def product(a: FiniteAlgebra, b: FiniteAlgebra) -> Tuple[FiniteAlgebra, AlgebraHom, AlgebraHom]:
    """A x B with its two projections."""
    _same_field(a, b)
    na, nb = a.dim, b.dim
    n = na + nb
    check_dim(n)
    mul = np.zeros((n, n, n), dtype=np.int64)
    mul[:na, :na, :na] = a.mul
    mul[na:, na:, na:] = b.mul
    one = np.concatenate([a.one, b.one])
    labels = [f"({lab},0)" for lab in a.labels] + [f"(0,{lab})" for lab in b.labels]
    prod = FiniteAlgebra(a.field, mul, one, labels=labels, validate=False)

    proj_a = np.hstack([la.identity(na), np.zeros((na, nb), dtype=np.int64)])
    proj_b = np.hstack([np.zeros((nb, na), dtype=np.int64), la.identity(nb)])
    return prod, AlgebraHom(prod, a, proj_a, validate=False), AlgebraHom(prod, b, proj_b, validate=False)


def product_many(factors: Sequence[FiniteAlgebra], p: int) -> FiniteAlgebra:
    """Product of several algebras as one block-diagonal algebra; empty -> zero ring.

    Basis labels are ``label@k`` for the k-th factor.
    """
    for factor in factors:
        if factor.p != p:
            raise FieldMismatch(f"factor over GF({factor.p}) in a product over GF({p})")
    n = sum(f.dim for f in factors)
    check_dim(n)
    mul = np.zeros((n, n, n), dtype=np.int64)
    one = np.zeros(n, dtype=np.int64)
    labels: List[str] = []
    offset = 0
    for k, factor in enumerate(factors):
        block = slice(offset, offset + factor.dim)
        mul[block, block, block] = factor.mul
        one[block] = factor.one
        labels.extend(f"{lab}@{k}" for lab in factor.labels)
        offset += factor.dim
    return FiniteAlgebra(PrimeField(p), mul, one, labels=labels, validate=False)


def tensor(a: FiniteAlgebra, b: FiniteAlgebra) -> Tuple[FiniteAlgebra, AlgebraHom, AlgebraHom]:
    """A (x) B on the Kronecker basis b_i (x) b'_j, with the two coprojections."""
    _same_field(a, b)
    na, nb = a.dim, b.dim
    n = na * nb
    check_dim(n)
    mul = np.einsum("ijk,abc->iajbkc", a.mul, b.mul).reshape(n, n, n) % a.p
    one = np.kron(a.one, b.one) % a.p
    labels = [f"{x}(x){y}" for x in a.labels for y in b.labels]
    t = FiniteAlgebra(a.field, mul, one, labels=labels, validate=False)

    left = np.kron(la.identity(na), b.one.reshape(-1, 1))
    right = np.kron(a.one.reshape(-1, 1), la.identity(nb))
    return t, AlgebraHom(a, t, left, validate=False), AlgebraHom(b, t, right, validate=False)


def ideal_span(a: FiniteAlgebra, gens) -> np.ndarray:
    """Canonical (RREF) basis of the ideal generated by ``gens``.

    The span is closed under multiplication by every basis element until
    its dimension stabilizes.
    """
    n, p = a.dim, a.p
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, n) if n else np.zeros((0, 0), dtype=np.int64)
    ideal = la.row_space(gens, p, width=n)
    while 0 < ideal.shape[0] < n:
        products = np.einsum("ri,ijk->rjk", ideal, a.mul, optimize=True).reshape(-1, n) % p
        grown = la.row_space(np.vstack([ideal, products]), p, width=n)
        if grown.shape[0] == ideal.shape[0]:
            break
        ideal = grown
    return ideal


def quotient_by_ideal(a: FiniteAlgebra, gens) -> Tuple[FiniteAlgebra, AlgebraHom]:
    """A/I for the ideal I generated by ``gens``, with the projection A -> A/I.

    The quotient basis is the set of basis vectors b_j whose index is not a
    pivot column of the RREF basis of I.
    """
    n, p = a.dim, a.p
    ideal = ideal_span(a, gens)
    pivots = [int(np.nonzero(row)[0][0]) for row in ideal]
    kept = [j for j in range(n) if j not in pivots]

    eye = la.identity(n)
    reduced = (eye - eye[:, pivots] @ ideal) % p if pivots else eye
    proj = reduced[:, kept].T.copy()

    kept_mul = a.mul[np.ix_(kept, kept, range(n))]
    mul = np.einsum("abk,qk->abq", kept_mul, proj, optimize=True) % p
    one = proj @ a.one % p
    quotient = FiniteAlgebra(a.field, mul, one, labels=[a.labels[j] for j in kept], validate=False)
    logger.debug("quotient of dim %d by ideal of dim %d", n, len(pivots))
    return quotient, AlgebraHom(a, quotient, proj, validate=False)


@dataclass(frozen=True)
class RelativeTensor:
    """B (x)_A C as a quotient of B (x) C, with its structure maps"""

    algebra: FiniteAlgebra
    projection: AlgebraHom
    left: AlgebraHom
    right: AlgebraHom


def relative_tensor(b: FiniteAlgebra, c: FiniteAlgebra, f: AlgebraHom, g: AlgebraHom) -> RelativeTensor:
    """(B (x) C) / (f(a) (x) 1 - 1 (x) g(a) : a in a basis of A)."""
    _same_field(b, c)
    _same_field(f.source, b)
    if f.source != g.source:
        raise SourceMismatch("f and g must share their source algebra")
    if f.target != b or g.target != c:
        raise SourceMismatch("f must land in B and g in C")

    t, into_left, into_right = tensor(b, c)
    gens = (into_left.matrix @ f.matrix - into_right.matrix @ g.matrix).T % b.p
    quotient, proj = quotient_by_ideal(t, gens)
    return RelativeTensor(
        algebra=quotient,
        projection=proj,
        left=proj.compose(into_left),
        right=proj.compose(into_right),
    )


def power(a: FiniteAlgebra, x, e: int) -> np.ndarray:
    """x^e by square-and-multiply; x^0 is the unit."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    result = a.one.copy()
    base = np.asarray(x, dtype=np.int64) % a.p
    while e:
        if e & 1:
            result = a.multiply(result, base)
        base = a.multiply(base, base)
        e >>= 1
    return result


def frobenius_matrix(a: FiniteAlgebra) -> la.FpMatrix:
    """Matrix of the GF(p)-linear map x -> x^p; column i is b_i^p."""
    n = a.dim
    cols = [power(a, a.basis_vector(i), a.p) for i in range(n)]
    entries = np.column_stack(cols) if cols else np.zeros((0, 0), dtype=np.int64)
    return la.FpMatrix(a.p, entries)


def nilradical(a: FiniteAlgebra) -> np.ndarray:
    """Basis of the nilpotent elements: the kernel of a high enough Frobenius power."""
    n, p = a.dim, a.p
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    frob = frobenius_matrix(a)
    iterate = frob
    reach = p
    while reach < n:
        iterate = iterate @ frob
        reach *= p
    return iterate.kernel()


def is_reduced(a: FiniteAlgebra) -> bool:
    return nilradical(a).shape[0] == 0


def reduction(a: FiniteAlgebra) -> Tuple[FiniteAlgebra, AlgebraHom]:
    """A / nil(A)."""
    return quotient_by_ideal(a, nilradical(a))


# hom enumeration

@dataclass(frozen=True)
class _Presentation:
    """Generators of an algebra and a basis of words in them.

    Word 0 is the unit; every other word is (parent word, generator slot).
    ``levels[j]`` lists the words introduced by generator j and the relations
    (word, generator slot, coefficients over words) closing the span.
    """

    generators: Tuple[int, ...]
    words: Tuple[Tuple[int, int], ...]
    to_basis: np.ndarray
    levels: Tuple[Tuple[int, int, Tuple[Tuple[int, int, np.ndarray], ...]], ...]


@functools.lru_cache(maxsize=256)
def _presentation(a: FiniteAlgebra) -> _Presentation:
    n, p = a.dim, a.p
    words: List[Tuple[int, int]] = [(-1, -1)]
    coords: List[np.ndarray] = [a.one.copy()]
    generators: List[int] = []
    levels = []

    for idx in range(n):
        if la.in_span(np.array(coords), a.basis_vector(idx), p):
            continue
        generators.append(idx)
        slot = len(generators) - 1
        first_new = len(words)
        relations = []
        queue = [(w, slot) for w in range(len(words))]
        head = 0
        while head < len(queue):
            w, g = queue[head]
            head += 1
            v = a.multiply(coords[w], a.basis_vector(generators[g]))
            lam = la.solve(np.column_stack(coords), v, p)
            if lam is None:
                words.append((w, g))
                coords.append(v)
                queue.extend((len(words) - 1, g2) for g2 in range(len(generators)))
            else:
                padded = np.zeros(n, dtype=np.int64)
                padded[: lam.shape[0]] = lam
                relations.append((w, g, padded))
        levels.append((first_new, len(words), tuple(relations)))

    word_matrix = np.column_stack(coords)
    return _Presentation(
        generators=tuple(generators),
        words=tuple(words),
        to_basis=la.inverse(word_matrix, p),
        levels=tuple(levels),
    )


def enumerate_homs(a: FiniteAlgebra, b: FiniteAlgebra) -> List[AlgebraHom]:
    """Every unital ring map A -> B, sorted lexicographically by matrix.

    Generators of A are assigned images one at a time; after each
    assignment the images of the new words are formed and every relation
    w * g = sum(lam_u u) is checked in B, pruning partial assignments that
    cannot extend to a ring map.
    """
    _same_field(a, b)
    p = a.p
    if a.dim == 0:
        return [AlgebraHom(a, b, np.zeros((0, 0)))] if b.dim == 0 else []
    if b.dim == 0:
        return [AlgebraHom(a, b, np.zeros((0, a.dim)), validate=False)]

    table = b.element_table()
    pres = _presentation(a)
    db = b.dim
    word_images = b.one.reshape(1, 1, db).copy()
    gen_images = np.zeros((1, 0, db), dtype=np.int64)

    for slot, (start, end, relations) in enumerate(pres.levels):
        count = word_images.shape[0]
        if count == 0:
            break
        m = table.shape[0]
        imgs = np.repeat(word_images, m, axis=0)
        gens = np.concatenate(
            [np.repeat(gen_images, m, axis=0), np.tile(table, (count, 1))[:, None, :]], axis=1
        )
        new_words = []
        for w in range(start, end):
            parent, g = pres.words[w]
            parent_img = imgs[:, parent] if parent < imgs.shape[1] else new_words[parent - imgs.shape[1]]
            new_words.append(b.multiply_batch(parent_img, gens[:, g]))
        if new_words:
            imgs = np.concatenate([imgs, np.stack(new_words, axis=1)], axis=1)

        for w, g, lam in relations:
            if imgs.shape[0] == 0:
                break
            lhs = b.multiply_batch(imgs[:, w], gens[:, g])
            rhs = np.einsum("w,nwd->nd", lam[:end], imgs, optimize=True) % p
            keep = np.all(lhs == rhs, axis=1)
            imgs, gens = imgs[keep], gens[keep]
        word_images, gen_images = imgs, gens
        logger.debug("hom search: generator %d leaves %d partial maps", slot, imgs.shape[0])

    homs = [
        AlgebraHom(a, b, la.matmul(images.T, pres.to_basis, p))
        for images in word_images
    ]
    homs.sort(key=AlgebraHom.key)
    return homs
