"""
Graphviz DOT output for components, set maps and towers
"""
from typing import Iterable, List, Optional

from duality import SetMap
from fpalgebra import FiniteAlgebra
from profinite import Tower
from spectrum import PiZeroResult


def _quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def pi_zero_dot(a: FiniteAlgebra, result: PiZeroResult) -> str:
    """One node per connected component of Spec A, labeled by its idempotent and factor dimension."""
    lines = ["graph pi0 {", f"  label={_quote(f'pi_0 Spec of {a}')};", "  node [shape=ellipse];"]
    for k, (e, factor) in enumerate(zip(result.components, result.factors)):
        lines.append(f"  c{k} [label={_quote(f'e{k} = {e.tolist()} | dim {factor.dim}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def set_map_dot(f: SetMap) -> str:
    """Bipartite drawing: source points on the left, target points on the right."""
    lines = ["digraph setmap {", "  rankdir=LR;", "  subgraph cluster_source {", "    label=\"source\";"]
    lines += [f"    s{i} [label={_quote(s)}];" for i, s in enumerate(f.source)]
    lines += ["  }", "  subgraph cluster_target {", "    label=\"target\";"]
    lines += [f"    t{j} [label={_quote(t)}];" for j, t in enumerate(f.target)]
    lines.append("  }")
    lines += [f"  s{i} -> t{j};" for i, j in enumerate(f.assignment)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def tower_dot(tower: Tower, highlight: Optional[List[Iterable[int]]] = None) -> str:
    """Levels as ranks of a tree, edges along the transitions; highlighted nodes are filled."""
    marked = [set(h) for h in highlight] if highlight is not None else [set() for _ in tower.levels]
    lines = ["digraph tower {", "  rankdir=TB;", "  node [shape=circle];"]
    for n, level in enumerate(tower.levels):
        names = []
        for i, label in enumerate(level):
            style = " style=filled fillcolor=gray" if i in marked[n] else ""
            lines.append(f"  n{n}_{i} [label={_quote(label)}{style}];")
            names.append(f"n{n}_{i}")
        lines.append("  { rank=same; " + " ".join(names) + " }")
    for n, tr in enumerate(tower.transitions):
        lines += [f"  n{n}_{t} -> n{n + 1}_{j};" for j, t in enumerate(tr)]
    lines.append("}")
    return "\n".join(lines) + "\n"
