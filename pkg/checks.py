"""
Property Suites
Seeded end-to-end checks of the workbench's laws. Every suite is a plain
function of a seed returning a SuiteReport; run_suites fans several of them
out on worker threads.
"""
import asyncio
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

import fp_linalg as la
import fp_poly
from config import get_config
from duality import FiniteSetObj, SetMap, all_set_maps, check_full_faithfulness, dualize_set_map
from errors import InvalidInput
from expr_parser import eval_algebra_expr, parse_algebra_expr
from fpalgebra import enumerate_homs
from generators import (
    corpus,
    corpus_algebra,
    p_boolean_algebras,
    random_closed_subtower,
    random_module,
    random_monic,
    random_submodule_inclusion,
    sample_points,
)
from pearl import check_pearl_comparison, check_pearl_universal, check_q_universal, is_p_boolean, pearl, stone_quotient
from profinite import (
    OpenCylinderFamily,
    Tower,
    cantor_tower,
    clopen_to_idempotent,
    complement_closed,
    complement_open,
    full_shift_tower,
    pullback_function,
)
from sheafmod import (
    check_monoidal_equivalence,
    module_to_sheaf,
    sheaf_to_module,
    tensor_preserves_injectivity,
)
from spectrum import factor_count_via_pearl, pi_zero, primitive_by_enumeration, primitive_idempotents

logger = logging.getLogger(__name__)


@dataclass
class SuiteReport:
    """Cases run by one suite and the failures it found"""

    name: str
    seed: int
    cases: int = 0
    failures: List[Dict[str, object]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def case(self, ok: bool, **witness):
        self.cases += 1
        if not ok:
            self.failures.append(witness)

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "seed": self.seed,
            "passed": self.passed,
            "cases": self.cases,
            "failures": list(self.failures),
            "elapsed": round(self.elapsed, 3),
        }


def factor_count_suite(report: SuiteReport, rng: np.random.Generator):
    """dim of (GF(p)[x]/f)° against trial-division factoring on random monic f."""
    for p in (2, 3, 5):
        for _ in range(100):
            f = random_monic(p, 10, rng)
            got = factor_count_via_pearl(p, f)
            want = fp_poly.count_distinct_irreducible_factors(f, p)
            report.case(got == want, p=p, poly=fp_poly.format_poly(f), pearl=got, trial_division=want)


GALOIS_PEARLS = {
    "GF(2)[x]/(x^2+x+1) (x) GF(2)[y]/(y^2+y+1)": 2,
    "GF(2)[x]/(x^3+x+1) (x) GF(2)[y]/(y^3+y+1)": 3,
    "GF(3)[x]/(x^2+1) (x) GF(3)[y]/(y^2+1)": 2,
}


def galois_suite(report: SuiteReport, rng: np.random.Generator):
    """L (x) L for a degree-d field extension L has a d-dimensional pearl."""
    for text, want in GALOIS_PEARLS.items():
        got = pearl(eval_algebra_expr(parse_algebra_expr(text))).pearl_algebra.dim
        report.case(got == want, expr=text, pearl_dim=got, expected=want)


def full_faithfulness_suite(report: SuiteReport, rng: np.random.Generator, max_size: int = 4):
    """Hom(S, T) ~ Hom(GF(p)^T, GF(p)^S), and dualizing respects identities and composition."""
    for p in (2, 3):
        sets = [sample_points(n) for n in range(max_size + 1)]
        for s in sets:
            for t in sets:
                verdict = check_full_faithfulness(p, s, t)
                report.case(verdict.ok, p=p, source=len(s), target=len(t), checks=verdict.checks)

        for s in sets:
            ident = dualize_set_map(p, SetMap.identity(s))
            report.case(np.array_equal(ident.matrix, la.identity(len(s))), p=p, law="identity", size=len(s))

        duals: Dict[tuple, np.ndarray] = {}

        def dual_matrix(f):
            key = (len(f.source), len(f.target), f.assignment)
            if key not in duals:
                duals[key] = dualize_set_map(p, f).matrix
            return duals[key]

        # composition over every composable pair with sets up to three points
        small = sets[:4]
        for s in small:
            for t in small:
                for u in small:
                    bad = next(
                        ((f, g) for f in all_set_maps(s, t) for g in all_set_maps(t, u)
                         if not np.array_equal(dual_matrix(g.compose(f)),
                                               la.matmul(dual_matrix(f), dual_matrix(g), p))),
                        None,
                    )
                    report.case(bad is None, p=p, law="composition", sizes=[len(s), len(t), len(u)],
                                f=bad[0].as_dict() if bad else None, g=bad[1].as_dict() if bad else None)


def pearl_universality_suite(report: SuiteReport, rng: np.random.Generator):
    for name, a in corpus():
        for b in p_boolean_algebras(a.p, 3):
            verdict = check_pearl_universal(b, a)
            report.case(verdict.ok, algebra=name, p_boolean_dim=b.dim,
                        left=verdict.left_count, right=verdict.right_count)


def q_universality_suite(report: SuiteReport, rng: np.random.Generator):
    q, _ = stone_quotient(corpus_algebra("F4"))
    report.case(q.dim == 0, algebra="F4", quotient_dim=q.dim)
    for name, a in corpus():
        for b in p_boolean_algebras(a.p, 3):
            verdict = check_q_universal(a, b)
            report.case(verdict.ok, algebra=name, p_boolean_dim=b.dim,
                        left=verdict.left_count, right=verdict.right_count)


def idempotent_suite(report: SuiteReport, rng: np.random.Generator, max_size: int = 2 ** 12):
    """Splitting and pi_0 against brute-force atoms of the idempotent lattice."""
    for name, a in corpus():
        if a.p ** a.dim > max_size:
            continue
        atoms = set(primitive_by_enumeration(a))
        result = pi_zero(a)
        report.case(set(result.components) == atoms, algebra=name, method="pi_zero",
                    components=[e.tolist() for e in result.components], atoms=[e.tolist() for e in atoms])
        total = np.sum([e.vector for e in result.components], axis=0) % a.p if result.components else a.zero()
        report.case(np.array_equal(total, a.one), algebra=name, method="partition_of_unity")
        if is_p_boolean(a):
            split = primitive_idempotents(a)
            report.case(set(split) == atoms, algebra=name, method="splitting",
                        split=[e.tolist() for e in split])


def _random_tower(rng: np.random.Generator) -> Tower:
    d = int(rng.integers(1, 7))
    return cantor_tower(d) if rng.integers(0, 2) == 0 else full_shift_tower(3, d)


def _check_clopen(report: SuiteReport, family: OpenCylinderFamily, p: int, origin: str):
    tower = family.ambient
    n, e = clopen_to_idempotent(family, p)
    ok = all(
        np.array_equal(pullback_function(tower, e.vector, n, m, p), family.indicator(m, p))
        for m in range(n, tower.depth + 1)
    )
    report.case(ok, law="clopen_pullback", origin=origin, level=n, depth=tower.depth)


def complement_suite(report: SuiteReport, rng: np.random.Generator, samples: int = 200):
    """Complement is an involution on closed subtowers; clopens pull back to their own indicators."""
    for _ in range(samples):
        tower = _random_tower(rng)
        closed = random_closed_subtower(tower, rng)
        family = complement_closed(closed)
        back = complement_open(family)
        report.case(back == closed, law="involution", depth=tower.depth,
                    top=sorted(closed.subsets[-1]))
        if family.stable_from() is not None:
            _check_clopen(report, family, 2, "complement")

        n = int(rng.integers(0, tower.depth))
        base = np.nonzero(rng.integers(0, 2, size=tower.size(n)))[0]
        cylinders = OpenCylinderFamily.cylinders(tower, n, (int(i) for i in base))
        report.case(cylinders.stable_from() is not None and cylinders.stable_from() <= n,
                    law="cylinders_stabilize", level=n, depth=tower.depth)
        _check_clopen(report, cylinders, int(rng.choice([2, 3])), "cylinders")


def _same_columns(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    if a.shape != b.shape:
        return False
    joint = la.rank(np.hstack([a, b]), p)
    return joint == la.rank(a, p) == la.rank(b, p)


def sheaf_suite(report: SuiteReport, rng: np.random.Generator, samples: int = 100, pairs: int = 50):
    """Module/sheaf round trips, additivity on disjoint clopens, flatness and the monoidal check."""
    modules = []
    for _ in range(samples):
        p = int(rng.choice([2, 3]))
        points = sample_points(int(rng.integers(1, 5)))
        m = random_module(p, points, 6, rng)
        modules.append(m)

        report.case(sheaf_to_module(module_to_sheaf(m)) == m, law="module_round_trip", stalks=m.stalk_dims())
        sheaf = module_to_sheaf(m)
        again = module_to_sheaf(sheaf_to_module(sheaf))
        report.case(all(_same_columns(x, y, p) for x, y in zip(sheaf.stalks, again.stalks)),
                    law="sheaf_round_trip", stalks=sheaf.stalk_dims())

        side = rng.integers(0, 3, size=len(points))
        left = [s for s, k in zip(points, side) if k == 0]
        right = [s for s, k in zip(points, side) if k == 1]
        additive = sheaf.section_dim(left + right) == sheaf.section_dim(left) + sheaf.section_dim(right)
        report.case(additive, law="additivity", left=left, right=right)

        inclusion = random_submodule_inclusion(m, rng)
        report.case(tensor_preserves_injectivity(m, inclusion), law="flatness", stalks=m.stalk_dims())

    for _ in range(pairs):
        m = modules[int(rng.integers(0, len(modules)))]
        n = random_module(m.p, FiniteSetObj(m.points), 6, rng)
        verdict = check_monoidal_equivalence(m, n, rng=rng)
        report.case(verdict.ok, law="monoidal", left=m.stalk_dims(), right=n.stalk_dims(),
                    checks=verdict.checks)


COMPARISON_SOURCES = ("Fn(2,1)", "Fn(2,2)")
COMPARISON_TARGETS = ("F4", "F2^2", "F4xF2")


def comparison_suite(report: SuiteReport, rng: np.random.Generator):
    """B°(x)_A B° -> (B(x)_A B)° is injective, and onto exactly when B is itself p-Boolean."""
    for source in COMPARISON_SOURCES:
        a = eval_algebra_expr(parse_algebra_expr(source))
        for target in COMPARISON_TARGETS:
            b = corpus_algebra(target)
            for f in (h for h in enumerate_homs(a, b) if h.is_injective()):
                verdict = check_pearl_comparison(a, f)
                expected_onto = bool(is_p_boolean(b))
                report.case(verdict.injective and verdict.surjective == expected_onto,
                            source=source, target=target, **verdict.to_dict())


SUITES: Dict[str, Callable[[SuiteReport, np.random.Generator], None]] = {
    "factor-count": factor_count_suite,
    "galois": galois_suite,
    "full-faithfulness": full_faithfulness_suite,
    "pearl-universal": pearl_universality_suite,
    "q-universal": q_universality_suite,
    "idempotents": idempotent_suite,
    "complements": complement_suite,
    "sheaf": sheaf_suite,
    "comparison": comparison_suite,
}


def run_suite(name: str, seed: Optional[int] = None) -> SuiteReport:
    if name not in SUITES:
        raise InvalidInput(f"unknown suite {name!r}", {"known": sorted(SUITES)})
    seed = get_config().seed if seed is None else seed
    report = SuiteReport(name=name, seed=seed)
    start = time.perf_counter()
    SUITES[name](report, np.random.default_rng(seed))
    report.elapsed = time.perf_counter() - start
    logger.info("suite %s: %d cases, %d failures in %.2fs", name, report.cases, len(report.failures),
                report.elapsed)
    return report


async def run_suites(names: Sequence[str], seed: Optional[int] = None) -> List[SuiteReport]:
    """Run suites concurrently on worker threads, keeping the requested order."""
    tasks = [asyncio.to_thread(run_suite, name, seed) for name in names]
    return list(await asyncio.gather(*tasks))
