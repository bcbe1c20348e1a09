"""
Test Corpus and Random Inputs
Named algebras for the property suites and seeded generators for random
polynomials, closed subtowers, modules and submodule inclusions
"""
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import fp_linalg as la
import fp_poly
from duality import FiniteSetObj
from expr_parser import eval_algebra_expr, parse_algebra_expr
from fpalgebra import FiniteAlgebra, function_algebra
from profinite import ClosedSubtower, Tower
from sheafmod import CSModule, ModuleMap, SheafOnFiniteSet, module_from_stalk_dims, module_to_sheaf, sheaf_to_module

# small algebras (dim <= 4) over GF(2) and GF(3)
CORPUS: Dict[str, str] = {
    "F4": "GF(2)[x]/(x^2+x+1)",
    "dual2": "GF(2)[x]/(x^2)",
    "x3+x": "GF(2)[x]/(x^3+x)",
    "trunc3": "GF(2)[x]/(x^3)",
    "F8": "GF(2)[x]/(x^3+x+1)",
    "F2^2": "Fn(2,2)",
    "F2^3": "Fn(2,3)",
    "F4xF2": "GF(2)[x]/(x^2+x+1) * Fn(2,1)",
    "F4(x)F4": "GF(2)[x]/(x^2+x+1) (x) GF(2)[x]/(x^2+x+1)",
    "dual2xdual2": "GF(2)[x]/(x^2) * GF(2)[y]/(y^2)",
    "x4+x3+x+1": "GF(2)[x]/(x^4+x^3+x+1)",
    "F9": "GF(3)[x]/(x^2+1)",
    "x2-1": "GF(3)[x]/(x^2+2)",
    "dual3": "GF(3)[x]/(x^2)",
    "x3-x": "GF(3)[x]/(x^3+2x)",
    "F3^2": "Fn(3,2)",
    "F9xF3": "GF(3)[x]/(x^2+1) * Fn(3,1)",
}


def corpus_algebra(name: str) -> FiniteAlgebra:
    return eval_algebra_expr(parse_algebra_expr(CORPUS[name]))


def corpus(p: Optional[int] = None) -> List[Tuple[str, FiniteAlgebra]]:
    out = [(name, corpus_algebra(name)) for name in CORPUS]
    return [(n, a) for n, a in out if p is None or a.p == p]


def p_boolean_algebras(p: int, max_dim: int = 3) -> List[FiniteAlgebra]:
    """Every p-Boolean algebra of dimension <= max_dim, up to isomorphism: GF(p)^n."""
    return [function_algebra(p, [f"s{i}" for i in range(n)]) for n in range(max_dim + 1)]


def random_monic(p: int, max_degree: int, rng: np.random.Generator) -> fp_poly.Poly:
    d = int(rng.integers(1, max_degree + 1))
    low = [int(c) for c in rng.integers(0, p, size=d)]
    return tuple(low) + (1,)


def random_closed_subtower(tower: Tower, rng: np.random.Generator) -> ClosedSubtower:
    """Image tower of a random subset of the deepest level."""
    top = np.nonzero(rng.integers(0, 2, size=tower.size(tower.depth)))[0]
    return ClosedSubtower.from_deepest(tower, (int(i) for i in top))


def random_invertible(p: int, m: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        mat = rng.integers(0, p, size=(m, m), dtype=np.int64)
        if la.rank(mat, p) == m:
            return mat


def random_full_rank(p: int, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """A rows x cols matrix of rank cols (cols <= rows)."""
    while True:
        mat = rng.integers(0, p, size=(rows, cols), dtype=np.int64)
        if la.rank(mat, p) == cols:
            return mat


def random_stalk_dims(n_points: int, max_dim: int, rng: np.random.Generator) -> List[int]:
    total = int(rng.integers(0, max_dim + 1))
    if n_points == 0:
        return []
    cuts = np.sort(rng.integers(0, total + 1, size=n_points - 1))
    bounds = np.concatenate([[0], cuts, [total]])
    return [int(b - a) for a, b in zip(bounds[:-1], bounds[1:])]


def random_module(p: int, points: FiniteSetObj, max_dim: int, rng: np.random.Generator) -> CSModule:
    """Random stalk dimensions in a random basis of the total space."""
    return module_with_stalk_dims(p, points, random_stalk_dims(len(points), max_dim, rng), rng)


def module_with_stalk_dims(p: int, points: FiniteSetObj, dims: Sequence[int], rng: np.random.Generator) -> CSModule:
    m = sum(dims)
    basis = random_invertible(p, m, rng) if m else np.zeros((0, 0), dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    stalks = [basis[:, offsets[k]:offsets[k + 1]] for k in range(len(dims))]
    return sheaf_to_module(SheafOnFiniteSet(points, p, m, stalks))


def random_submodule_inclusion(module: CSModule, rng: np.random.Generator) -> ModuleMap:
    """An injective module map into ``module`` from a module with smaller stalks."""
    p = module.p
    sheaf = module_to_sheaf(module)
    dims = [int(rng.integers(0, d + 1)) for d in sheaf.stalk_dims()]
    sub = module_from_stalk_dims(p, FiniteSetObj(module.points), dims)
    blocks = [
        la.matmul(basis, random_full_rank(p, basis.shape[1], d, rng), p)
        for basis, d in zip(sheaf.stalks, dims)
    ]
    matrix = np.hstack(blocks) if blocks else np.zeros((module.module_dim, 0), dtype=np.int64)
    return ModuleMap(sub, module, matrix)


def sample_points(n: int) -> FiniteSetObj:
    return FiniteSetObj.of_size(n)


def all_subsets(points: Sequence[str]) -> List[List[str]]:
    out = []
    for mask in range(2 ** len(points)):
        out.append([s for i, s in enumerate(points) if mask >> i & 1])
    return out
