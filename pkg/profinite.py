"""
Light Profinite Sets as Towers
A profinite set S = lim S_n is truncated at an explicit depth d and stored as
finite levels S_0..S_d with transition maps S_{n+1} -> S_n. Closed subsets
are subtowers, open subsets are monotone cylinder families, and functions
are presented level by level as the directed system GF(p)^{S_n}.

Every statement here holds "at depth d": errors distinguish a false claim
from one the truncation cannot decide.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from duality import FiniteSetObj, SetMap, dualize_set_map
from errors import (
    EnumerationCapExceeded,
    InvalidAtDepth,
    InvalidSubtower,
    InvalidTower,
    LevelOutOfRange,
    NaturalityFailure,
    NotClopenAtThisDepth,
)
from fpalgebra import AlgebraHom, FiniteAlgebra, function_algebra
from spectrum import Idempotent

logger = logging.getLogger(__name__)

LevelSubsets = Tuple[FrozenSet[int], ...]


@dataclass(frozen=True)
class Tower:
    """Levels S_0..S_d (labels) and transitions tau_n: S_{n+1} -> S_n (index tuples)"""

    levels: Tuple[Tuple[str, ...], ...]
    transitions: Tuple[Tuple[int, ...], ...]
    surjective: bool = True

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(tuple(str(x) for x in lv) for lv in self.levels))
        object.__setattr__(self, "transitions", tuple(tuple(int(t) for t in tr) for tr in self.transitions))
        if not self.levels:
            raise InvalidTower("a tower needs at least the level S_0")
        if len(self.transitions) != len(self.levels) - 1:
            raise InvalidTower(
                f"{len(self.levels)} levels need {len(self.levels) - 1} transitions, got {len(self.transitions)}"
            )
        for n, level in enumerate(self.levels):
            if len(set(level)) != len(level):
                raise InvalidTower(f"level {n} has repeated labels", {"level": n})
        for n, tr in enumerate(self.transitions):
            if len(tr) != len(self.levels[n + 1]):
                raise InvalidTower(f"transition {n} is not total on level {n + 1}", {"level": n})
            if any(not 0 <= t < len(self.levels[n]) for t in tr):
                raise InvalidTower(f"transition {n} leaves level {n}", {"level": n})
            if self.surjective and set(tr) != set(range(len(self.levels[n]))):
                raise InvalidTower(f"transition {n} is not surjective", {"level": n})

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def check_level(self, n: int):
        if not 0 <= n <= self.depth:
            raise LevelOutOfRange(f"level {n} outside 0..{self.depth}", {"level": n, "depth": self.depth})

    def size(self, n: int) -> int:
        self.check_level(n)
        return len(self.levels[n])

    def level(self, n: int) -> FiniteSetObj:
        self.check_level(n)
        return FiniteSetObj(self.levels[n])

    def transition_map(self, n: int) -> SetMap:
        """tau_n as a SetMap S_{n+1} -> S_n."""
        if not 0 <= n < self.depth:
            raise LevelOutOfRange(f"no transition out of level {n + 1}", {"level": n, "depth": self.depth})
        return SetMap(self.level(n + 1), self.level(n), self.transitions[n])

    def projection(self, upper: int, lower: int) -> np.ndarray:
        """Composite S_upper -> S_lower as an index array, for lower <= upper."""
        self.check_level(upper)
        self.check_level(lower)
        if lower > upper:
            raise LevelOutOfRange(f"cannot project level {upper} up to level {lower}")
        indices = np.arange(len(self.levels[upper]))
        for n in range(upper - 1, lower - 1, -1):
            indices = np.asarray(self.transitions[n], dtype=np.int64)[indices]
        return indices

    def preimage(self, n: int, subset: Iterable[int]) -> FrozenSet[int]:
        """tau_n^-1(subset) inside S_{n+1}."""
        subset = set(subset)
        return frozenset(j for j, t in enumerate(self.transitions[n]) if t in subset)

    def image(self, n: int, subset: Iterable[int]) -> FrozenSet[int]:
        """tau_n(subset) inside S_n, for a subset of S_{n+1}."""
        return frozenset(self.transitions[n][j] for j in subset)


def full_shift_tower(k: int, d: int) -> Tower:
    """S_n = {0..k-1}^n, truncating the last letter; S_0 is the point '*'."""
    if not 2 <= k <= 10:
        raise InvalidTower(f"alphabet size {k} outside 2..10")
    if d < 0:
        raise InvalidTower("depth must be non-negative")
    cap = get_config().enumeration_cap
    if k ** d > cap:
        raise EnumerationCapExceeded(
            f"{k}^{d} words at the top level exceed the enumeration cap {cap}",
            {"count": k ** d, "cap": cap},
        )
    levels = [("*",)]
    for n in range(1, d + 1):
        levels.append(tuple("".join(map(str, w)) for w in itertools.product(range(k), repeat=n)))
    # words are listed in base-k order, so dropping the last letter is idx // k
    transitions = [tuple(j // k for j in range(k ** (n + 1))) for n in range(d)]
    return Tower(tuple(levels), tuple(transitions), surjective=True)


def cantor_tower(d: int) -> Tower:
    return full_shift_tower(2, d)


def constant_tower(labels: Sequence[str], d: int) -> Tower:
    labels = tuple(labels)
    identity = tuple(range(len(labels)))
    return Tower(tuple(labels for _ in range(d + 1)), tuple(identity for _ in range(d)), surjective=True)


@dataclass(frozen=True)
class TowerMap:
    """Level maps f_n: S_n -> T_n between towers of equal depth, commuting with the transitions"""

    source: Tower
    target: Tower
    level_maps: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "level_maps", tuple(tuple(int(v) for v in m) for m in self.level_maps))
        if self.source.depth != self.target.depth:
            raise InvalidTower("tower maps need towers of equal depth")
        if len(self.level_maps) != self.source.depth + 1:
            raise InvalidTower("one level map per level is required")
        for n in range(self.source.depth + 1):
            self.level_map(n)
        for n in range(self.source.depth):
            f_n, f_up = self.level_maps[n], self.level_maps[n + 1]
            for j, t in enumerate(self.source.transitions[n]):
                if f_n[t] != self.target.transitions[n][f_up[j]]:
                    raise NaturalityFailure(
                        f"square at level {n} does not commute", {"level": n, "element": j}
                    )

    def level_map(self, n: int) -> SetMap:
        return SetMap(self.source.level(n), self.target.level(n), self.level_maps[n])

    def is_levelwise_injective(self) -> bool:
        return all(self.level_map(n).is_injective() for n in range(self.source.depth + 1))

    def is_levelwise_surjective(self) -> bool:
        return all(self.level_map(n).is_surjective() for n in range(self.source.depth + 1))

    def dualize(self, p: int) -> List[AlgebraHom]:
        """GF(p)^{T_n} -> GF(p)^{S_n} for every level."""
        return [dualize_set_map(p, self.level_map(n)) for n in range(self.source.depth + 1)]


@dataclass(frozen=True)
class TowerLevelAlgebra:
    """GF(p)^{S_n} and, below the top level, the hom into GF(p)^{S_{n+1}} dual to tau_n"""

    level: int
    algebra: FiniteAlgebra
    transition: Optional[AlgebraHom]


def tower_function_algebra(tower: Tower, n: int, p: int) -> TowerLevelAlgebra:
    tower.check_level(n)
    algebra = function_algebra(p, tower.levels[n])
    transition = dualize_set_map(p, tower.transition_map(n)) if n < tower.depth else None
    return TowerLevelAlgebra(level=n, algebra=algebra, transition=transition)


def transition_hom(tower: Tower, lower: int, upper: int, p: int) -> AlgebraHom:
    """GF(p)^{S_lower} -> GF(p)^{S_upper} dual to the composite projection."""
    proj = tower.projection(upper, lower)
    f = SetMap(tower.level(upper), tower.level(lower), tuple(int(i) for i in proj))
    return dualize_set_map(p, f)


def pullback_function(tower: Tower, u, lower: int, upper: int, p: int) -> np.ndarray:
    """u in GF(p)^{S_lower} as a function on S_upper."""
    u = np.asarray(u, dtype=np.int64) % p
    if u.shape != (tower.size(lower),):
        raise ValueError(f"function on level {lower} must have {tower.size(lower)} values")
    return u[tower.projection(upper, lower)]


def colimit_element_eq(tower: Tower, p: int, left: Tuple[int, Sequence[int]],
                       right: Tuple[int, Sequence[int]]) -> bool:
    """Equality of germs: both functions agree after pulling back to the deeper level."""
    (m, u), (n, v) = left, right
    top = max(m, n)
    return np.array_equal(pullback_function(tower, u, m, top, p), pullback_function(tower, v, n, top, p))


def _as_subsets(tower: Tower, subsets: Sequence[Iterable[int]]) -> LevelSubsets:
    subsets = tuple(frozenset(int(i) for i in s) for s in subsets)
    if len(subsets) != tower.depth + 1:
        raise InvalidSubtower(f"expected {tower.depth + 1} level subsets, got {len(subsets)}")
    for n, s in enumerate(subsets):
        if any(not 0 <= i < tower.size(n) for i in s):
            raise InvalidSubtower(f"subset at level {n} leaves the level", {"level": n})
    return subsets


def _indicator(tower: Tower, n: int, subset: FrozenSet[int], p: int) -> np.ndarray:
    chi = np.zeros(tower.size(n), dtype=np.int64)
    chi[sorted(subset)] = 1
    return chi % p


@dataclass(frozen=True)
class ClosedSubtower:
    """Subsets T_n of S_n with tau_n(T_{n+1}) == T_n: the closed set lim T_n"""

    ambient: Tower
    subsets: LevelSubsets

    def __post_init__(self):
        object.__setattr__(self, "subsets", _as_subsets(self.ambient, self.subsets))
        for n in range(self.ambient.depth):
            if self.ambient.image(n, self.subsets[n + 1]) != self.subsets[n]:
                raise InvalidSubtower(
                    f"level {n} is not the image of level {n + 1}", {"level": n}
                )

    @classmethod
    def normalize(cls, ambient: Tower, subsets: Sequence[Iterable[int]]) -> "ClosedSubtower":
        """Canonical representative: every level replaced by the image of the deepest one."""
        subsets = _as_subsets(ambient, subsets)
        return cls.from_deepest(ambient, subsets[-1])

    @classmethod
    def from_deepest(cls, ambient: Tower, top: Iterable[int]) -> "ClosedSubtower":
        levels = [frozenset(top)]
        for n in range(ambient.depth - 1, -1, -1):
            levels.append(ambient.image(n, levels[-1]))
        return cls(ambient, tuple(reversed(levels)))

    @classmethod
    def whole(cls, ambient: Tower) -> "ClosedSubtower":
        return cls.from_deepest(ambient, range(ambient.size(ambient.depth)))

    @classmethod
    def empty(cls, ambient: Tower) -> "ClosedSubtower":
        return cls(ambient, tuple(frozenset() for _ in range(ambient.depth + 1)))

    def labels(self, n: int) -> List[str]:
        return [self.ambient.levels[n][i] for i in sorted(self.subsets[n])]

    def indicator(self, n: int, p: int) -> np.ndarray:
        return _indicator(self.ambient, n, self.subsets[n], p)


@dataclass(frozen=True)
class OpenCylinderFamily:
    """Subsets A_n of S_n with tau_n^-1(A_n) inside A_{n+1}: the open set of all cylinders over some A_n"""

    ambient: Tower
    subsets: LevelSubsets

    def __post_init__(self):
        object.__setattr__(self, "subsets", _as_subsets(self.ambient, self.subsets))
        for n in range(self.ambient.depth):
            if not self.ambient.preimage(n, self.subsets[n]) <= self.subsets[n + 1]:
                raise InvalidSubtower(
                    f"cylinders over level {n} are missing at level {n + 1}", {"level": n}
                )

    @classmethod
    def cylinders(cls, ambient: Tower, n: int, base: Iterable[int]) -> "OpenCylinderFamily":
        """All cylinders over ``base`` in S_n, pulled up to every deeper level."""
        ambient.check_level(n)
        levels: List[FrozenSet[int]] = [frozenset() for _ in range(n)]
        levels.append(frozenset(base))
        for m in range(n, ambient.depth):
            levels.append(ambient.preimage(m, levels[-1]))
        return cls(ambient, tuple(levels))

    @classmethod
    def empty(cls, ambient: Tower) -> "OpenCylinderFamily":
        return cls(ambient, tuple(frozenset() for _ in range(ambient.depth + 1)))

    @classmethod
    def full(cls, ambient: Tower) -> "OpenCylinderFamily":
        return cls(ambient, tuple(frozenset(range(ambient.size(n))) for n in range(ambient.depth + 1)))

    def labels(self, n: int) -> List[str]:
        return [self.ambient.levels[n][i] for i in sorted(self.subsets[n])]

    def indicator(self, n: int, p: int) -> np.ndarray:
        return _indicator(self.ambient, n, self.subsets[n], p)

    def stable_from(self) -> Optional[int]:
        """Smallest n < depth with tau_m^-1(A_m) == A_{m+1} for every m >= n."""
        tower = self.ambient
        start = None
        for m in range(tower.depth - 1, -1, -1):
            if tower.preimage(m, self.subsets[m]) != self.subsets[m + 1]:
                break
            start = m
        return start


def complement_closed(closed: ClosedSubtower) -> OpenCylinderFamily:
    tower = closed.ambient
    return OpenCylinderFamily(
        tower,
        tuple(frozenset(range(tower.size(n))) - closed.subsets[n] for n in range(tower.depth + 1)),
    )


def complement_open(family: OpenCylinderFamily) -> ClosedSubtower:
    """Levelwise complement; raises InvalidAtDepth when it is not yet a subtower at this depth."""
    tower = family.ambient
    subsets = tuple(frozenset(range(tower.size(n))) - family.subsets[n] for n in range(tower.depth + 1))
    for n in range(tower.depth):
        if tower.image(n, subsets[n + 1]) != subsets[n]:
            raise InvalidAtDepth(
                f"complement does not close up between levels {n} and {n + 1} at depth {tower.depth}",
                {"level": n, "depth": tower.depth},
            )
    return ClosedSubtower(tower, subsets)


def clopen_to_idempotent(family: OpenCylinderFamily, p: int) -> Tuple[int, Idempotent]:
    """The level n where the family stabilizes and the indicator of A_n in GF(p)^{S_n}."""
    n = family.stable_from()
    if n is None:
        raise NotClopenAtThisDepth(
            f"family does not stabilize before depth {family.ambient.depth}",
            {"depth": family.ambient.depth},
        )
    algebra = function_algebra(p, family.ambient.levels[n])
    return n, Idempotent(algebra, family.indicator(n, p))


def closed_to_quotient_algebra(closed: ClosedSubtower, n: int, p: int) -> AlgebraHom:
    """Restriction GF(p)^{S_n} -> GF(p)^{T_n}, checked surjective and natural in n."""
    tower = closed.ambient
    tower.check_level(n)
    restriction = _restriction(closed, n, p)
    if not restriction.is_surjective():
        raise NaturalityFailure("restriction to a closed subtower is not surjective", {"level": n})

    if n < tower.depth:
        upper = _restriction(closed, n + 1, p)
        kept = sorted(closed.subsets[n])
        kept_up = sorted(closed.subsets[n + 1])
        sub_transition = SetMap(
            FiniteSetObj(tuple(closed.labels(n + 1))),
            FiniteSetObj(tuple(closed.labels(n))),
            tuple(kept.index(tower.transitions[n][j]) for j in kept_up),
        )
        left = upper.compose(dualize_set_map(p, tower.transition_map(n)))
        right = dualize_set_map(p, sub_transition).compose(restriction)
        if not np.array_equal(left.matrix, right.matrix):
            raise NaturalityFailure(f"restriction square at level {n} does not commute", {"level": n})
    return restriction


def _restriction(closed: ClosedSubtower, n: int, p: int) -> AlgebraHom:
    tower = closed.ambient
    source = function_algebra(p, tower.levels[n])
    target = function_algebra(p, closed.labels(n))
    matrix = np.zeros((target.dim, source.dim), dtype=np.int64)
    for row, i in enumerate(sorted(closed.subsets[n])):
        matrix[row, i] = 1
    return AlgebraHom(source, target, matrix)
