"""
Tests for towers of finite sets, subtowers, cylinder families and their algebras
"""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import fp_linalg as la
from config import override_config
from errors import (
    EnumerationCapExceeded,
    InvalidAtDepth,
    InvalidSubtower,
    InvalidTower,
    LevelOutOfRange,
    NaturalityFailure,
    NotClopenAtThisDepth,
)
from fpalgebra import ideal_span
from generators import random_closed_subtower
from profinite import (
    ClosedSubtower,
    OpenCylinderFamily,
    Tower,
    TowerMap,
    cantor_tower,
    clopen_to_idempotent,
    closed_to_quotient_algebra,
    colimit_element_eq,
    complement_closed,
    complement_open,
    constant_tower,
    full_shift_tower,
    pullback_function,
    tower_function_algebra,
    transition_hom,
)
from spectrum import enumerate_idempotents


def test_cantor_levels():
    tower = cantor_tower(2)
    assert [tower.size(n) for n in range(3)] == [1, 2, 4]
    assert tower.levels[2] == ("00", "01", "10", "11")
    assert cantor_tower(0).levels == (("*",),)
    assert full_shift_tower(3, 2).size(2) == 9


def test_tower_validation():
    with pytest.raises(InvalidTower):
        Tower((("a",), ("b", "c")), ())
    with pytest.raises(InvalidTower):
        Tower((("a", "b"), ("c",)), ((0,),))
    assert not Tower((("a", "b"), ("c",)), ((0,),), surjective=False).surjective
    with pytest.raises(LevelOutOfRange):
        cantor_tower(2).size(3)
    with pytest.raises(InvalidTower):
        full_shift_tower(1, 2)


def test_tower_size_is_capped_before_building():
    with override_config(enumeration_cap=8):
        assert cantor_tower(3).size(3) == 8
        with pytest.raises(EnumerationCapExceeded) as err:
            cantor_tower(4)
        assert err.value.details == {"count": 16, "cap": 8}
        with pytest.raises(EnumerationCapExceeded):
            full_shift_tower(3, 2)


def test_projection_drops_letters():
    tower = cantor_tower(3)
    assert tower.projection(3, 1).tolist() == [0, 0, 0, 0, 1, 1, 1, 1]
    assert tower.projection(2, 2).tolist() == [0, 1, 2, 3]
    with pytest.raises(LevelOutOfRange):
        tower.projection(1, 2)


def test_level_algebras():
    tower = cantor_tower(2)
    level = tower_function_algebra(tower, 1, 2)
    assert level.algebra.dim == 2
    assert level.transition.matrix.tolist() == [[1, 0], [1, 0], [0, 1], [0, 1]]
    assert level.transition.is_injective()
    assert tower_function_algebra(tower, 2, 2).transition is None
    assert cantor_tower(3).size(3) == tower_function_algebra(cantor_tower(3), 3, 3).algebra.dim == 8


def test_constant_tower_gives_a_constant_chain():
    tower = constant_tower(["a", "b"], 3)
    for n in range(3):
        assert tower_function_algebra(tower, n, 2).transition.is_bijective()


def test_transition_homs_compose():
    tower = full_shift_tower(3, 3)
    composed = transition_hom(tower, 1, 2, 3).compose(transition_hom(tower, 0, 1, 3))
    assert composed == transition_hom(tower, 0, 2, 3)
    composed = transition_hom(tower, 2, 3, 2).compose(transition_hom(tower, 1, 2, 2))
    assert composed == transition_hom(tower, 1, 3, 2)


def test_colimit_equality():
    tower = cantor_tower(2)
    assert colimit_element_eq(tower, 2, (1, [1, 0]), (1, [1, 0]))
    assert colimit_element_eq(tower, 2, (0, [1]), (2, [1, 1, 1, 1]))
    assert colimit_element_eq(tower, 2, (1, [1, 0]), (2, [1, 1, 0, 0]))
    assert not colimit_element_eq(tower, 2, (1, [1, 0]), (2, [1, 0, 0, 0]))
    with pytest.raises(ValueError):
        pullback_function(tower, [1, 0, 1], 1, 2, 2)


def test_closed_subtower_validation():
    tower = cantor_tower(2)
    with pytest.raises(InvalidSubtower):
        ClosedSubtower(tower, ({0}, {0, 1}, {0}))
    normal = ClosedSubtower.normalize(tower, ({0}, {0, 1}, {0}))
    assert normal.subsets == (frozenset({0}), frozenset({0}), frozenset({0}))
    with pytest.raises(InvalidSubtower):
        ClosedSubtower(tower, ({0}, {0}))


def test_complement_of_a_branch():
    tower = cantor_tower(2)
    closed = ClosedSubtower.from_deepest(tower, [0])
    family = complement_closed(closed)
    assert family.labels(1) == ["1"]
    assert family.labels(2) == ["01", "10", "11"]
    assert family.stable_from() is None


def test_complements_of_whole_and_empty():
    tower = cantor_tower(3)
    assert complement_closed(ClosedSubtower.whole(tower)) == OpenCylinderFamily.empty(tower)
    assert complement_closed(ClosedSubtower.empty(tower)) == OpenCylinderFamily.full(tower)
    assert complement_open(OpenCylinderFamily.empty(tower)) == ClosedSubtower.whole(tower)


def test_complement_of_cylinders_is_a_branch():
    tower = cantor_tower(3)
    closed = complement_open(OpenCylinderFamily.cylinders(tower, 1, [1]))
    assert closed == ClosedSubtower.from_deepest(tower, [0, 1, 2, 3])
    assert closed.labels(1) == ["0"]


def test_complement_open_undetermined_at_depth():
    tower = cantor_tower(2)
    # the complement keeps only 00, so the point 1 has nothing above it
    family = OpenCylinderFamily(tower, (set(), set(), {1, 2, 3}))
    with pytest.raises(InvalidAtDepth):
        complement_open(family)


def test_cylinder_family_validation():
    tower = cantor_tower(2)
    with pytest.raises(InvalidSubtower):
        OpenCylinderFamily(tower, (set(), {1}, {3}))


def test_clopen_idempotents():
    tower = cantor_tower(3)
    n, e = clopen_to_idempotent(OpenCylinderFamily.cylinders(tower, 1, [1]), 2)
    assert n == 1 and e.tolist() == [0, 1]
    n, e = clopen_to_idempotent(OpenCylinderFamily.full(tower), 3)
    assert n == 0 and e.tolist() == [1]


def test_growing_family_is_not_clopen():
    tower = cantor_tower(2)
    growing = OpenCylinderFamily(tower, (set(), {1}, {0, 2, 3}))
    with pytest.raises(NotClopenAtThisDepth):
        clopen_to_idempotent(growing, 2)


def test_restriction_to_closed_subtowers():
    tower = cantor_tower(2)
    whole = closed_to_quotient_algebra(ClosedSubtower.whole(tower), 2, 2)
    assert whole.is_bijective()
    branch = ClosedSubtower.from_deepest(cantor_tower(1), [0])
    restriction = closed_to_quotient_algebra(branch, 1, 2)
    assert restriction.matrix.tolist() == [[1, 0]]
    kernel_ideal = ideal_span(restriction.source, [[0, 1]])
    assert la.same_span(restriction.kernel(), kernel_ideal, 2, 2)


def test_tower_maps():
    tower = cantor_tower(2)
    identity = TowerMap(tower, tower, tuple(tuple(range(tower.size(n))) for n in range(3)))
    assert identity.is_levelwise_injective() and identity.is_levelwise_surjective()
    assert all(h.is_bijective() for h in identity.dualize(2))
    point = constant_tower(["*"], 2)
    collapse = TowerMap(tower, point, tuple((0,) * tower.size(n) for n in range(3)))
    assert all(h.is_injective() for h in collapse.dualize(3))
    with pytest.raises(NaturalityFailure):
        TowerMap(tower, tower, ((0,), (1, 0), (0, 1, 2, 3)))


def test_cantor_level_algebras_are_boolean():
    for d in range(3):
        algebra = tower_function_algebra(cantor_tower(d), d, 2).algebra
        assert len(enumerate_idempotents(algebra)) == 2 ** (2 ** d) == algebra.size


@st.composite
def towers_with_subtowers(draw):
    k = draw(st.sampled_from([2, 3]))
    depth = draw(st.integers(1, 4 if k == 2 else 3))
    tower = full_shift_tower(k, depth)
    seed = draw(st.integers(0, 2 ** 16))
    return tower, random_closed_subtower(tower, np.random.default_rng(seed))


@given(towers_with_subtowers())
def test_double_complement(case):
    tower, closed = case
    assert complement_open(complement_closed(closed)) == closed


@given(towers_with_subtowers(), st.data())
def test_clopen_pullback_reproduces_the_family(case, data):
    tower, _ = case
    n = data.draw(st.integers(0, tower.depth - 1))
    base = data.draw(st.sets(st.integers(0, tower.size(n) - 1)))
    family = OpenCylinderFamily.cylinders(tower, n, base)
    level, e = clopen_to_idempotent(family, 2)
    assert level <= n
    for m in range(level, tower.depth + 1):
        assert np.array_equal(pullback_function(tower, e.vector, level, m, 2), family.indicator(m, 2))


@given(towers_with_subtowers())
def test_restrictions_are_natural(case):
    tower, closed = case
    for n in range(tower.depth + 1):
        assert closed_to_quotient_algebra(closed, n, 2).is_surjective()
