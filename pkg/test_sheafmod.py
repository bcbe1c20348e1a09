"""
Tests for modules over GF(p)^S, their sheaves and stalk-wise tensor products
"""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import fp_linalg as la
from duality import FiniteSetObj
from errors import AlgebraMismatch, InvalidModule
from fpalgebra import function_algebra
from generators import all_subsets, corpus_algebra, random_module, random_submodule_inclusion
from sheafmod import (
    CSModule,
    ModuleMap,
    SheafOnFiniteSet,
    check_monoidal_equivalence,
    free_module,
    module_from_stalk_dims,
    module_to_sheaf,
    restrict_to_clopen,
    sheaf_to_module,
    tensor_modules,
    tensor_preserves_injectivity,
    zero_module,
)

AB = FiniteSetObj(("a", "b"))


def diagonal_module():
    return CSModule(function_algebra(2, AB.elements), [np.diag([1, 1, 0]), np.diag([0, 0, 1])])


def test_module_to_sheaf_on_diagonal_projectors():
    sheaf = module_to_sheaf(diagonal_module())
    assert sheaf.stalk_dims() == [2, 1]
    assert sheaf_to_module(sheaf) == diagonal_module()


def test_free_and_zero_modules():
    assert module_to_sheaf(free_module(3, AB)).stalk_dims() == [1, 1]
    assert module_to_sheaf(zero_module(3, AB)).stalk_dims() == [0, 0]
    assert free_module(2, AB, rank=2).module_dim == 4


def test_sheaf_to_module_examples():
    single = sheaf_to_module(SheafOnFiniteSet.from_stalk_dims(FiniteSetObj(("s",)), 5, [3]))
    assert np.array_equal(single.projectors[0], np.eye(3, dtype=np.int64))
    lopsided = module_from_stalk_dims(2, AB, [0, 2])
    assert not lopsided.projectors[0].any()
    assert lopsided.stalk_dims() == [0, 2]


def test_module_action_is_linear():
    m = diagonal_module()
    assert m.action([1, 1]).tolist() == np.eye(3, dtype=np.int64).tolist()
    assert m.action([0, 1]).tolist() == np.diag([0, 0, 1]).tolist()


def test_module_validation():
    algebra = function_algebra(3, AB.elements)
    with pytest.raises(InvalidModule):
        CSModule(algebra, [np.diag([1, 2]), np.diag([0, 1])])  # not idempotent
    with pytest.raises(InvalidModule):
        CSModule(algebra, [np.diag([1, 1]), np.diag([0, 1])])  # overlap
    with pytest.raises(InvalidModule):
        CSModule(algebra, [np.diag([1, 0]), np.diag([0, 0])])  # misses a direction
    with pytest.raises(InvalidModule):
        CSModule(algebra, [np.eye(2)])
    with pytest.raises(InvalidModule):
        CSModule(corpus_algebra("F4"), [np.eye(1), np.zeros((1, 1))])


def test_sheaf_validation():
    with pytest.raises(InvalidModule):
        SheafOnFiniteSet(AB, 2, 2, [[[1], [0]], [[1], [0]]])
    with pytest.raises(InvalidModule):
        SheafOnFiniteSet(AB, 2, 3, [[[1], [0], [0]], [[0], [1], [0]]])
    sheaf = SheafOnFiniteSet.from_stalk_dims(AB, 2, [2, 1])
    with pytest.raises(InvalidModule):
        sheaf.sections(["c"])


def test_restriction_to_clopens():
    m = diagonal_module()
    assert restrict_to_clopen(m, ["a", "b"]) == m
    empty = restrict_to_clopen(m, [])
    assert empty.module_dim == 0 and empty.algebra.dim == 0
    only_a = restrict_to_clopen(m, ["a"])
    assert only_a.module_dim == 2 and only_a.points == ("a",)


def test_tensor_of_stalks():
    m = module_from_stalk_dims(2, AB, [2, 1])
    n = module_from_stalk_dims(2, AB, [1, 2])
    t = tensor_modules(m, n)
    assert t.stalk_dims() == [2, 2] and t.module_dim == 4
    assert check_monoidal_equivalence(m, n).ok


def test_tensor_units_and_zeros():
    m = module_from_stalk_dims(3, AB, [2, 1])
    unit = tensor_modules(m, free_module(3, AB))
    assert unit.stalk_dims() == m.stalk_dims()
    assert tensor_modules(m, zero_module(3, AB)).module_dim == 0
    free = tensor_modules(free_module(2, AB, rank=2), free_module(2, AB, rank=3))
    assert free.stalk_dims() == [6, 6]


def test_tensor_needs_a_shared_base():
    with pytest.raises(AlgebraMismatch):
        tensor_modules(free_module(2, AB), free_module(2, FiniteSetObj(("a", "b", "c"))))


def test_monoidal_check_on_empty_clopen():
    m = module_from_stalk_dims(2, AB, [1, 2])
    verdict = check_monoidal_equivalence(m, m, clopens=[[]])
    assert verdict.ok and verdict.checks == {"stalks": True, "restriction": True}


def test_module_maps_must_commute_with_the_action():
    m = module_from_stalk_dims(2, AB, [1, 1])
    with pytest.raises(InvalidModule):
        ModuleMap(m, m, [[0, 1], [1, 0]])
    identity_map = ModuleMap(m, m, np.eye(2, dtype=np.int64))
    assert identity_map.is_injective() and identity_map.is_surjective()
    with pytest.raises(InvalidModule):
        tensor_preserves_injectivity(m, ModuleMap(m, m, np.zeros((2, 2), dtype=np.int64)))


@st.composite
def modules(draw, max_points=4, max_dim=6):
    p = draw(st.sampled_from([2, 3]))
    points = FiniteSetObj.of_size(draw(st.integers(1, max_points)))
    rng = np.random.default_rng(draw(st.integers(0, 2 ** 16)))
    return random_module(p, points, max_dim, rng), rng


@given(modules())
def test_module_and_sheaf_round_trips(case):
    m, _ = case
    sheaf = module_to_sheaf(m)
    assert sheaf_to_module(sheaf) == m
    again = module_to_sheaf(sheaf_to_module(sheaf))
    for left, right in zip(sheaf.stalks, again.stalks):
        assert la.same_span(left.T, right.T, m.p, m.module_dim)


@given(modules())
def test_sections_are_additive(case):
    m, rng = case
    sheaf = module_to_sheaf(m)
    for u in all_subsets(m.points):
        mask = rng.integers(0, 2, size=len(u))
        left = [s for s, keep in zip(u, mask) if keep]
        right = [s for s, keep in zip(u, mask) if not keep]
        assert sheaf.section_dim(u) == sheaf.section_dim(left) + sheaf.section_dim(right)


@given(modules(max_dim=4))
def test_every_module_is_flat(case):
    m, rng = case
    other = random_module(m.p, FiniteSetObj(m.points), 4, rng)
    inclusion = random_submodule_inclusion(other, rng)
    assert inclusion.is_injective()
    assert tensor_preserves_injectivity(m, inclusion)


@given(modules(max_dim=4))
def test_monoidal_equivalence_on_random_pairs(case):
    m, rng = case
    n = random_module(m.p, FiniteSetObj(m.points), 4, rng)
    verdict = check_monoidal_equivalence(m, n, rng=rng)
    assert verdict.ok, verdict.to_dict()
