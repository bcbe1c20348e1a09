"""
Modules over Function Algebras as Sheaves
A module over GF(p)^S is a vector space with one projector per point of S;
the equivalent sheaf on the finite set S has the images of those projectors
as stalks. Tensor products are computed stalk-wise.
"""
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

import fp_linalg as la
from duality import CheckVerdict, FiniteSetObj
from errors import AlgebraMismatch, InvalidModule
from fpalgebra import FiniteAlgebra, function_algebra

logger = logging.getLogger(__name__)


def _is_function_algebra(a: FiniteAlgebra) -> bool:
    n = a.dim
    diagonal = np.zeros((n, n, n), dtype=np.int64)
    idx = np.arange(n)
    diagonal[idx, idx, idx] = 1
    return np.array_equal(a.mul, diagonal) and np.array_equal(a.one, np.ones(n, dtype=np.int64))


class CSModule:
    """A module over GF(p)^S given by the projectors rho(chi_s), s in S.

    The action of a general element sum(c_s chi_s) is sum(c_s rho(chi_s)).
    """

    def __init__(self, algebra: FiniteAlgebra, projectors: Sequence, module_dim: Optional[int] = None):
        if not _is_function_algebra(algebra):
            raise InvalidModule("modules are only supported over function algebras GF(p)^S")
        p = algebra.p
        mats = [la.as_fp(m, p) for m in projectors]
        if module_dim is None:
            module_dim = mats[0].shape[0] if mats else 0
        m = module_dim
        if len(mats) != algebra.dim:
            raise InvalidModule(f"{len(mats)} projectors for {algebra.dim} points")
        for s, mat in enumerate(mats):
            if mat.size == 0 and m == 0:
                mat = mats[s] = mat.reshape(0, 0)
            if mat.shape != (m, m):
                raise InvalidModule(f"projector of {algebra.labels[s]} has shape {mat.shape}, expected {(m, m)}")
            mat.setflags(write=False)

        self.algebra = algebra
        self.module_dim = m
        self.projectors: Tuple[np.ndarray, ...] = tuple(mats)
        self._validate()

    def _validate(self):
        p, m = self.p, self.module_dim
        total = np.zeros((m, m), dtype=np.int64)
        for s, rho in enumerate(self.projectors):
            if not np.array_equal(la.matmul(rho, rho, p), rho):
                raise InvalidModule(f"rho({self.points[s]}) is not idempotent", {"point": s})
            for t in range(s + 1, len(self.projectors)):
                if la.matmul(rho, self.projectors[t], p).any():
                    raise InvalidModule(
                        f"rho({self.points[s]}) and rho({self.points[t]}) are not orthogonal",
                        {"pair": [s, t]},
                    )
            total = (total + rho) % p
        if not np.array_equal(total, la.identity(m)):
            raise InvalidModule("the projectors do not sum to the identity")

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def points(self) -> Tuple[str, ...]:
        return self.algebra.labels

    def action(self, x) -> np.ndarray:
        x = self.algebra.element(x)
        out = np.zeros((self.module_dim, self.module_dim), dtype=np.int64)
        for c, rho in zip(x, self.projectors):
            out = (out + int(c) * rho) % self.p
        return out

    def stalk_dims(self) -> List[int]:
        return [la.rank(rho, self.p) for rho in self.projectors]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CSModule)
            and self.algebra == other.algebra
            and self.module_dim == other.module_dim
            and all(np.array_equal(a, b) for a, b in zip(self.projectors, other.projectors))
        )

    def __repr__(self):
        return f"CSModule(GF({self.p})^{len(self.points)}, dim={self.module_dim}, stalks={self.stalk_dims()})"


class SheafOnFiniteSet:
    """Stalks F_s as subspaces of a total space of dimension m, one column basis per point"""

    def __init__(self, points: FiniteSetObj, p: int, total_dim: int, stalks: Sequence):
        self.points = points
        self.p = p
        self.total_dim = total_dim
        bases = []
        for mat in stalks:
            mat = la.as_fp(mat, p)
            if mat.size == 0:
                mat = mat.reshape(total_dim, 0)
            if mat.shape[0] != total_dim:
                raise InvalidModule(f"stalk basis has {mat.shape[0]} rows in a {total_dim}-dimensional space")
            mat.setflags(write=False)
            bases.append(mat)
        if len(bases) != len(points):
            raise InvalidModule(f"{len(bases)} stalks for {len(points)} points")
        self.stalks: Tuple[np.ndarray, ...] = tuple(bases)

        dims = self.stalk_dims()
        if sum(dims) != total_dim:
            raise InvalidModule(f"stalk dimensions {dims} do not add up to {total_dim}")
        if total_dim and la.rank(self.basis(), p) != total_dim:
            raise InvalidModule("stalk subspaces are not independent")

    @classmethod
    def from_stalk_dims(cls, points: FiniteSetObj, p: int, dims: Sequence[int]) -> "SheafOnFiniteSet":
        """Stalks on consecutive coordinate blocks of GF(p)^{sum dims}."""
        total = sum(dims)
        eye = la.identity(total)
        offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
        stalks = [eye[:, offsets[k]:offsets[k + 1]] for k in range(len(dims))]
        return cls(points, p, total, stalks)

    def stalk_dims(self) -> List[int]:
        return [b.shape[1] for b in self.stalks]

    def basis(self) -> np.ndarray:
        """All stalk bases side by side (an invertible m x m matrix)."""
        if not self.stalks:
            return np.zeros((self.total_dim, 0), dtype=np.int64)
        return np.hstack(self.stalks)

    def sections(self, clopen: Iterable[str]) -> np.ndarray:
        """F(U) as the direct sum of the stalks over U, returned as columns."""
        chosen = set(clopen)
        unknown = chosen - set(self.points)
        if unknown:
            raise InvalidModule(f"{sorted(unknown)} are not points of the base set")
        cols = [b for s, b in zip(self.points, self.stalks) if s in chosen]
        if not cols:
            return np.zeros((self.total_dim, 0), dtype=np.int64)
        return np.hstack(cols)

    def section_dim(self, clopen: Iterable[str]) -> int:
        return self.sections(clopen).shape[1]


def module_to_sheaf(module: CSModule) -> SheafOnFiniteSet:
    """Stalk at s = image of rho(chi_s), on its echelon column basis."""
    stalks = [la.column_space(rho, module.p) for rho in module.projectors]
    return SheafOnFiniteSet(FiniteSetObj(module.points), module.p, module.module_dim, stalks)


def sheaf_to_module(sheaf: SheafOnFiniteSet) -> CSModule:
    """rho(chi_s) = B D_s B^-1 where B stacks the stalk bases and D_s selects the block of s."""
    p, m = sheaf.p, sheaf.total_dim
    algebra = function_algebra(p, sheaf.points.elements)
    basis = sheaf.basis()
    inv = la.inverse(basis, p) if m else np.zeros((0, 0), dtype=np.int64)
    projectors = []
    offset = 0
    for d in sheaf.stalk_dims():
        selector = np.zeros((m, m), dtype=np.int64)
        selector[offset:offset + d, offset:offset + d] = la.identity(d)
        projectors.append(la.matmul(basis, la.matmul(selector, inv, p), p))
        offset += d
    return CSModule(algebra, projectors, module_dim=m)


def _restrict_to_subspace(projectors: Sequence[np.ndarray], space: np.ndarray, p: int) -> List[np.ndarray]:
    out = []
    for rho in projectors:
        coords = la.solve(space, la.matmul(rho, space, p), p)
        if coords is None:
            raise InvalidModule("subspace is not stable under the action")
        out.append(coords)
    return out


def restrict_to_clopen(module: CSModule, clopen: Iterable[str]) -> CSModule:
    """chi_U M as a module over GF(p)^U, U listed in the order of S."""
    chosen = set(clopen)
    unknown = chosen - set(module.points)
    if unknown:
        raise InvalidModule(f"{sorted(unknown)} are not points of the base set")
    keep = [k for k, s in enumerate(module.points) if s in chosen]
    p, m = module.p, module.module_dim
    chi = np.zeros((m, m), dtype=np.int64)
    for k in keep:
        chi = (chi + module.projectors[k]) % p
    space = la.column_space(chi, p)
    algebra = function_algebra(p, [module.points[k] for k in keep])
    projectors = _restrict_to_subspace([module.projectors[k] for k in keep], space, p)
    return CSModule(algebra, projectors, module_dim=space.shape[1])


def _same_algebra(m: CSModule, n: CSModule):
    if m.algebra != n.algebra or m.points != n.points:
        raise AlgebraMismatch("modules live over different function algebras")


def tensor_space(m: CSModule, n: CSModule) -> np.ndarray:
    """M (x)_A N inside M (x) N: the image of sum_s rho_s (x) sigma_s, as columns."""
    _same_algebra(m, n)
    p = m.p
    diag = np.zeros((m.module_dim * n.module_dim,) * 2, dtype=np.int64)
    for rho, sigma in zip(m.projectors, n.projectors):
        diag = (diag + np.kron(rho, sigma)) % p
    return la.column_space(diag, p)


def tensor_modules(m: CSModule, n: CSModule) -> CSModule:
    """M (x)_{GF(p)^S} N; its stalk at s is stalk_M(s) (x) stalk_N(s)."""
    space = tensor_space(m, n)
    p = m.p
    projectors = _restrict_to_subspace(
        [np.kron(rho, sigma) % p for rho, sigma in zip(m.projectors, n.projectors)], space, p
    )
    result = CSModule(m.algebra, projectors, module_dim=space.shape[1])
    logger.debug("tensor of stalks %s and %s -> %s", m.stalk_dims(), n.stalk_dims(), result.stalk_dims())
    return result


class ModuleMap:
    """A GF(p)^S-linear map; ``matrix`` has shape (target dim, source dim)"""

    def __init__(self, source: CSModule, target: CSModule, matrix):
        _same_algebra(source, target)
        p = source.p
        self.source = source
        self.target = target
        self.matrix = la.as_fp(np.asarray(matrix, dtype=np.int64).reshape(target.module_dim, source.module_dim), p)
        for s, (rho, sigma) in enumerate(zip(source.projectors, target.projectors)):
            if not np.array_equal(la.matmul(self.matrix, rho, p), la.matmul(sigma, self.matrix, p)):
                raise InvalidModule(f"map does not commute with the action of {source.points[s]}", {"point": s})

    def is_injective(self) -> bool:
        return la.rank(self.matrix, self.source.p) == self.source.module_dim

    def is_surjective(self) -> bool:
        return la.rank(self.matrix, self.source.p) == self.target.module_dim


def tensor_map(m: CSModule, f: ModuleMap) -> ModuleMap:
    """M (x) f: M (x) N -> M (x) N'."""
    p = m.p
    source = tensor_modules(m, f.source)
    target = tensor_modules(m, f.target)
    src_space = tensor_space(m, f.source)
    tgt_space = tensor_space(m, f.target)
    pushed = la.matmul(np.kron(la.identity(m.module_dim), f.matrix), src_space, p)
    coords = la.solve(tgt_space, pushed, p)
    if coords is None:
        raise InvalidModule("tensored map leaves the relative tensor product")
    return ModuleMap(source, target, coords)


def tensor_preserves_injectivity(m: CSModule, f: ModuleMap) -> bool:
    """For injective f, M (x) f is injective: every module over GF(p)^S is flat."""
    if not f.is_injective():
        raise InvalidModule("flatness is tested on injective maps only")
    return tensor_map(m, f).is_injective()


def free_module(p: int, points: FiniteSetObj, rank: int = 1) -> CSModule:
    return module_from_stalk_dims(p, points, [rank] * len(points))


def zero_module(p: int, points: FiniteSetObj) -> CSModule:
    return module_from_stalk_dims(p, points, [0] * len(points))


def module_from_stalk_dims(p: int, points: FiniteSetObj, dims: Sequence[int]) -> CSModule:
    if len(dims) != len(points) or any(d < 0 for d in dims):
        raise InvalidModule(f"stalk dimensions {list(dims)} do not fit {len(points)} points")
    return sheaf_to_module(SheafOnFiniteSet.from_stalk_dims(points, p, dims))


def _random_clopens(points: Sequence[str], rng: np.random.Generator, count: int) -> List[List[str]]:
    out = []
    for _ in range(count):
        mask = rng.integers(0, 2, size=len(points))
        out.append([s for s, keep in zip(points, mask) if keep])
    return out


def check_monoidal_equivalence(m: CSModule, n: CSModule, clopens: Optional[Sequence[Sequence[str]]] = None,
                               rng: Optional[np.random.Generator] = None, samples: int = 4) -> CheckVerdict:
    """Stalks of M (x) N are products of stalks, and restriction to clopens commutes with tensor.

    Without explicit clopens, ``samples`` random subsets are drawn from ``rng``
    (seeded at 0 when absent) together with the empty set and all of S.
    """
    _same_algebra(m, n)
    tensor = tensor_modules(m, n)
    verdict = CheckVerdict(ok=True)

    expected = [a * b for a, b in zip(m.stalk_dims(), n.stalk_dims())]
    got = module_to_sheaf(tensor).stalk_dims()
    verdict.counts["total_dim"] = tensor.module_dim
    verdict.record("stalks", got == expected, {"expected": expected, "got": got})

    if clopens is None:
        rng = rng if rng is not None else np.random.default_rng(0)
        clopens = [[], list(m.points)] + _random_clopens(m.points, rng, samples)
    for u in clopens:
        left = restrict_to_clopen(tensor, u)
        right = tensor_modules(restrict_to_clopen(m, u), restrict_to_clopen(n, u))
        same = left.points == right.points and left.stalk_dims() == right.stalk_dims()
        verdict.record("restriction", same,
                       {"clopen": list(u), "restricted": left.stalk_dims(), "tensored": right.stalk_dims()})
    if not verdict.ok:
        logger.warning("monoidal check failed for stalks %s and %s", m.stalk_dims(), n.stalk_dims())
    return verdict
