"""
Workbench Commands
One function per verb, shared by the command line and the MCP tool server.
Each returns the JSON document, a human-readable rendering and, where the
verb has one, a DOT drawing.
"""
import asyncio
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

import fp_poly
from checks import SUITES, run_suites
from config import get_config
from duality import FiniteSetObj, SetMap, check_duality_round_trip, dual_of_set, dualize_set_map, spectrum_of_p_boolean
from dot_export import pi_zero_dot, set_map_dot, tower_dot
from errors import InvalidInput
from expr_parser import eval_algebra_expr, format_expr, parse_algebra_expr, parse_polynomial
from fpalgebra import FiniteAlgebra
from generators import module_with_stalk_dims
from pearl import pearl, stone_quotient
from profinite import (
    ClosedSubtower,
    OpenCylinderFamily,
    Tower,
    cantor_tower,
    clopen_to_idempotent,
    closed_to_quotient_algebra,
    complement_closed,
    full_shift_tower,
    transition_hom,
)
from serialization import (
    AlgebraDoc,
    CheckDoc,
    ClopenDoc,
    ComplementDoc,
    DualSetDoc,
    Envelope,
    FactorCountDoc,
    FactorDoc,
    HomDoc,
    ModuleDoc,
    PearlDoc,
    PiZeroDoc,
    PolyDoc,
    QuotientDoc,
    SetMapDoc,
    SheafDemoDoc,
    SheafDoc,
    SpectrumDoc,
    SubtowerDoc,
    SuiteDoc,
    TowerDoc,
    VerdictDoc,
    envelope,
)
from sheafmod import check_monoidal_equivalence, module_to_sheaf, tensor_modules
from spectrum import factor_count_via_pearl, factor_via_pearl, pi_zero

logger = logging.getLogger(__name__)

TOWER_KINDS = {"cantor": 2, "ternary": 3}


@dataclass
class CommandResult:
    command: str
    input: str
    doc: BaseModel
    text: str
    dot: Optional[str] = None
    ok: bool = True

    def envelope(self) -> Envelope:
        return envelope(self.command, self.input, self.doc)


def _algebra(text: str) -> FiniteAlgebra:
    return eval_algebra_expr(parse_algebra_expr(text))


def _rows(matrix: np.ndarray) -> List[str]:
    return ["  " + " ".join(str(int(c)) for c in row) for row in matrix]


def _header(text: str, a: FiniteAlgebra) -> str:
    return f"A = {format_expr(parse_algebra_expr(text))}  (p={a.p}, dim {a.dim})"


def pearl_command(text: str) -> CommandResult:
    a = _algebra(text)
    result = pearl(a)
    lines = [
        _header(text, a),
        f"pearl dim {result.pearl_algebra.dim}",
        f"basis in coordinates {', '.join(a.labels)}:",
        *_rows(result.basis),
    ]
    return CommandResult("pearl", text, PearlDoc.from_result(result), "\n".join(lines))


def pi0_command(text: str) -> CommandResult:
    a = _algebra(text)
    result = pi_zero(a)
    lines = [_header(text, a), f"{result.count} connected component(s)"]
    for k, (e, factor) in enumerate(zip(result.components, result.factors)):
        lines.append(f"  e{k} = {e.tolist()}  factor dim {factor.dim}")
    return CommandResult("pi0", text, PiZeroDoc.from_result(a, result), "\n".join(lines), dot=pi_zero_dot(a, result))


def quotient_command(text: str) -> CommandResult:
    a = _algebra(text)
    q, proj = stone_quotient(a)
    lines = [_header(text, a), f"Q(A) dim {q.dim}", "projection:", *_rows(proj.matrix)]
    return CommandResult("q", text, QuotientDoc.from_projection(proj), "\n".join(lines))


def dual_set_command(n: int, p: int, assignment: Optional[Sequence[int]] = None,
                     target_size: Optional[int] = None) -> CommandResult:
    """GF(p)^S for |S| = n; with an assignment, also the dual of the map S -> T it describes."""
    if n < 0:
        raise InvalidInput("set size must be non-negative", {"n": n})
    s = FiniteSetObj.of_size(n)
    f = None
    if assignment is not None:
        if len(assignment) != n:
            raise InvalidInput(f"map needs {n} target indices, got {len(assignment)}", {"map": list(assignment)})
        size = target_size if target_size is not None else max(assignment, default=-1) + 1
        f = SetMap(s, FiniteSetObj.of_size(size, prefix="t"), tuple(assignment))
    dual = dual_of_set(p, s)
    verdict = check_duality_round_trip(p, s, maps=[f] if f is not None else ())
    doc = DualSetDoc(p=p, points=list(s.elements), algebra=AlgebraDoc.from_algebra(dual.algebra),
                     verdict=VerdictDoc.from_verdict(verdict))
    lines = [f"GF({p})^S with |S| = {n}: dim {dual.dim}, Spec has {verdict.counts['points']} point(s)"]
    lines += [f"  {'✅' if ok else '❌'} {name}" for name, ok in verdict.checks.items()]
    if f is not None:
        h = dualize_set_map(p, f)
        doc.set_map, doc.dual_map = SetMapDoc.from_map(f), HomDoc.from_hom(h)
        lines += [f"dual of {f.as_dict()}:", *_rows(h.matrix)]
    text = f"{n}" if assignment is None else f"{n} map={','.join(str(i) for i in assignment)}"
    return CommandResult("dual set", text, doc, "\n".join(lines),
                         dot=set_map_dot(f) if f is not None else None, ok=verdict.ok)


def dual_spec_command(text: str) -> CommandResult:
    b = _algebra(text)
    spec = spectrum_of_p_boolean(b)
    lines = [_header(text, b), f"Spec has {len(spec.points)} point(s)"]
    lines += [f"  {s}: {e.tolist()}" for s, e in zip(spec.points, spec.idempotents)]
    return CommandResult("dual spec", text, SpectrumDoc.from_spectrum(b, spec), "\n".join(lines))


def factor_count_command(p: int, text: str) -> CommandResult:
    f = parse_polynomial(text, p)
    count = factor_count_via_pearl(p, f)
    doc = FactorCountDoc(poly=PolyDoc.from_poly(p, f), count=count)
    return CommandResult("factor-count", text, doc,
                         f"{fp_poly.format_poly(f)} over GF({p}): {count} distinct irreducible factor(s)")


def factor_command(p: int, text: str) -> CommandResult:
    f = parse_polynomial(text, p)
    factors = factor_via_pearl(p, f)
    doc = FactorDoc(poly=PolyDoc.from_poly(p, f), factors=[PolyDoc.from_poly(p, g) for g in factors])
    shown = " * ".join(f"({fp_poly.format_poly(g)})" for g in factors)
    return CommandResult("factor", text, doc, f"{fp_poly.format_poly(f)} = {shown} over GF({p})")


def build_tower(kind: str, depth: int) -> Tower:
    if kind not in TOWER_KINDS:
        raise InvalidInput(f"unknown tower {kind!r}", {"known": sorted(TOWER_KINDS)})
    return cantor_tower(depth) if kind == "cantor" else full_shift_tower(TOWER_KINDS[kind], depth)


def _level_indices(tower: Tower, n: int, indices: Optional[Sequence[int]], what: str) -> List[int]:
    tower.check_level(n)
    indices = list(indices or [])
    bad = [i for i in indices if not 0 <= i < tower.size(n)]
    if bad:
        raise InvalidInput(f"{what} indices {bad} are outside level {n}", {"level": n, "size": tower.size(n)})
    return indices


def tower_command(kind: str, depth: int, action: Optional[str] = None, p: int = 2,
                  top: Optional[Sequence[int]] = None, level: int = 0,
                  base: Optional[Sequence[int]] = None) -> CommandResult:
    """The tower itself, or one of: complement of a closed subtower, clopen idempotent, level algebra map."""
    tower = build_tower(kind, depth)
    text = f"{kind} depth={depth}" + (f" {action}" if action else "")
    sizes = ", ".join(str(tower.size(n)) for n in range(depth + 1))

    if action is None:
        return CommandResult("tower", text, TowerDoc.from_tower(tower),
                             f"{kind} tower, level sizes {sizes}", dot=tower_dot(tower))

    if action == "complement":
        closed = ClosedSubtower.from_deepest(tower, _level_indices(tower, depth, top, "top"))
        family = complement_closed(closed)
        doc = ComplementDoc.from_closed(closed)
        lines = [f"closed subtower through {closed.labels(depth)}"]
        lines += [f"  level {n}: closed {closed.labels(n)}  open {family.labels(n)}" for n in range(depth + 1)]
        stable = family.stable_from()
        lines.append("complement is clopen from level %d" % stable if stable is not None
                     else "complement is not clopen at this depth")
        return CommandResult("tower", text, doc, "\n".join(lines),
                             dot=tower_dot(tower, [sorted(s) for s in closed.subsets]))

    if action == "clopen":
        family = OpenCylinderFamily.cylinders(tower, level, _level_indices(tower, level, base, "base"))
        n, e = clopen_to_idempotent(family, p)
        doc = ClopenDoc(family=SubtowerDoc.from_open(family), p=p, level=n, idempotent=e.tolist())
        lines = [f"cylinders over {family.labels(level)} at level {level}",
                 f"stable from level {n}; idempotent {e.tolist()} in GF({p})^S_{n}"]
        return CommandResult("tower", text, doc, "\n".join(lines),
                             dot=tower_dot(tower, [sorted(s) for s in family.subsets]))

    if action == "algebra":
        if top:
            closed = ClosedSubtower.from_deepest(tower, _level_indices(tower, depth, top, "top"))
            hom = closed_to_quotient_algebra(closed, level, p)
            title = f"restriction GF({p})^S_{level} -> GF({p})^T_{level}"
        else:
            tower.check_level(level + 1)
            hom = transition_hom(tower, level, level + 1, p)
            title = f"transition GF({p})^S_{level} -> GF({p})^S_{level + 1}"
        lines = [title, *_rows(hom.matrix)]
        return CommandResult("tower", text, HomDoc.from_hom(hom), "\n".join(lines))

    raise InvalidInput(f"unknown tower action {action!r}", {"known": ["complement", "clopen", "algebra"]})


def sheaf_demo_command(p: int, dims: Sequence[int], seed: Optional[int] = None) -> CommandResult:
    """A module with the given stalk dimensions in a random basis, its sheaf, and M (x) M."""
    if any(d < 0 for d in dims):
        raise InvalidInput("stalk dimensions must be non-negative", {"dims": list(dims)})
    seed = get_config().seed if seed is None else seed
    rng = np.random.default_rng(seed)
    points = FiniteSetObj.of_size(len(dims))
    module = module_with_stalk_dims(p, points, dims, rng)
    sheaf = module_to_sheaf(module)
    square = tensor_modules(module, module)
    verdict = check_monoidal_equivalence(module, module, rng=rng)
    doc = SheafDemoDoc(module=ModuleDoc.from_module(module), sheaf=SheafDoc.from_sheaf(sheaf),
                       tensor=ModuleDoc.from_module(square), verdict=VerdictDoc.from_verdict(verdict))
    lines = [
        f"module over GF({p})^{{{', '.join(points)}}} of dim {module.module_dim} (seed {seed})",
        f"  stalks {sheaf.stalk_dims()}",
        f"  M (x) M stalks {square.stalk_dims()}",
        f"  {'✅' if verdict.ok else '❌'} monoidal check ({len(verdict.checks)} named checks)",
    ]
    text = f"p={p} dims={','.join(str(d) for d in dims)}"
    return CommandResult("sheaf demo", text, doc, "\n".join(lines), ok=verdict.ok)


def check_command(names: Sequence[str], seed: Optional[int] = None) -> CommandResult:
    names = list(SUITES) if not names or list(names) == ["all"] else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InvalidInput(f"unknown suite(s) {unknown}", {"known": sorted(SUITES)})
    seed = get_config().seed if seed is None else seed
    reports = asyncio.run(run_suites(names, seed))
    ok = all(r.passed for r in reports)
    doc = CheckDoc(seed=seed, ok=ok, suites=[SuiteDoc(**r.to_dict()) for r in reports])
    lines = [f"seed {seed}"]
    for r in reports:
        mark = "✅" if r.passed else "❌"
        lines.append(f"{mark} {r.name}: {r.cases} cases, {len(r.failures)} failure(s), {r.elapsed:.2f}s")
        lines += [f"    {failure}" for failure in r.failures[:3]]
    return CommandResult("check", " ".join(names), doc, "\n".join(lines), ok=ok)
