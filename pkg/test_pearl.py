"""
Tests for the pearl, the Stone quotient and their universal properties
"""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from errors import NotInjectiveInput, NotPBoolean
import fp_poly
from fpalgebra import AlgebraHom, enumerate_homs, function_algebra, power, univariate_quotient, zero_ring
from generators import CORPUS, corpus_algebra, p_boolean_algebras
from pearl import (
    PBooleanAlgebra,
    check_pearl_comparison,
    check_pearl_universal,
    check_q_universal,
    frobenius_fixed_point_count,
    is_p_boolean,
    pearl,
    pearl_product_comparison,
    stone_quotient,
)
from spectrum import primitive_by_enumeration

NAMES = sorted(CORPUS)


def test_pearl_of_extension_field_is_the_base_field():
    result = pearl(corpus_algebra("F4"))
    assert result.pearl_algebra.dim == 1
    assert result.basis.tolist() == [[1, 0]]


def test_pearl_of_function_algebra_is_everything():
    a = function_algebra(2, "abc")
    result = pearl(a)
    assert result.pearl_algebra.dim == 3
    assert np.array_equal(result.inclusion.matrix, np.eye(3, dtype=np.int64))


def test_pearl_dimensions():
    assert pearl(corpus_algebra("dual2")).pearl_algebra.dim == 1
    assert pearl(corpus_algebra("F4(x)F4")).pearl_algebra.dim == 2
    assert pearl(corpus_algebra("dual2xdual2")).pearl_algebra.dim == 2


def test_pearl_membership():
    result = pearl(corpus_algebra("F4(x)F4"))
    a = result.ambient
    assert result.contains(a.one)
    assert not result.contains(a.basis_vector(1))
    assert result.coordinates(a.one).shape == (2,)
    with pytest.raises(ValueError):
        result.coordinates(a.basis_vector(1))


def test_is_p_boolean():
    assert is_p_boolean(corpus_algebra("x2-1"))
    verdict = is_p_boolean(corpus_algebra("dual2"))
    assert not verdict and verdict.witness == 1
    assert is_p_boolean(zero_ring(3))


def test_certified_algebra_rejects_nilpotents():
    with pytest.raises(NotPBoolean) as info:
        PBooleanAlgebra(corpus_algebra("dual2"))
    assert info.value.details == {"witness": 1}


def test_stone_quotient_examples():
    q, proj = stone_quotient(corpus_algebra("dual2"))
    assert q.dim == 1 and proj.is_surjective()
    b = function_algebra(3, "ab")
    q, proj = stone_quotient(b)
    assert q.algebra == b
    assert np.array_equal(proj.matrix, np.eye(2, dtype=np.int64))
    assert stone_quotient(corpus_algebra("F4"))[0].dim == 0


def test_pearl_universality_examples():
    two = function_algebra(2, "ab")
    verdict = check_pearl_universal(two, corpus_algebra("dual2"))
    assert verdict.ok and (verdict.left_count, verdict.right_count) == (2, 2)
    verdict = check_pearl_universal(two, corpus_algebra("F4(x)F4"))
    assert verdict.ok and (verdict.left_count, verdict.right_count) == (4, 4)
    for name in ("F4", "trunc3", "F9"):
        verdict = check_pearl_universal(function_algebra(corpus_algebra(name).p, "*"), corpus_algebra(name))
        assert verdict.ok and verdict.left_count == verdict.right_count == 1


def test_q_universality_examples():
    point = function_algebra(2, "*")
    verdict = check_q_universal(corpus_algebra("F4"), point)
    assert verdict.ok and (verdict.left_count, verdict.right_count) == (0, 0)
    verdict = check_q_universal(corpus_algebra("dual2"), point)
    assert verdict.ok and (verdict.left_count, verdict.right_count) == (1, 1)
    assert check_q_universal(function_algebra(2, "ab"), function_algebra(2, "abc")).ok


def test_comparison_for_a_field_extension_is_not_surjective():
    base = function_algebra(2, "*")
    f4 = corpus_algebra("F4")
    verdict = check_pearl_comparison(base, AlgebraHom(base, f4, [[1], [0]]))
    assert (verdict.source_dim, verdict.target_dim) == (1, 2)
    assert verdict.injective and not verdict.surjective


def test_comparison_isomorphisms():
    base = function_algebra(2, "*")
    two = function_algebra(2, "ab")
    verdict = check_pearl_comparison(base, AlgebraHom(base, two, [[1], [1]]))
    assert (verdict.source_dim, verdict.target_dim) == (4, 4)
    assert verdict.injective and verdict.surjective
    verdict = check_pearl_comparison(two, AlgebraHom.identity(two))
    assert verdict.injective and verdict.surjective
    assert verdict.to_dict()["source_dim"] == 2


def test_comparison_rejects_non_injective_maps():
    two = function_algebra(2, "ab")
    projection = AlgebraHom(two, function_algebra(2, "*"), [[1, 0]])
    with pytest.raises(NotInjectiveInput):
        check_pearl_comparison(two, projection)


def test_fixed_point_count():
    assert frobenius_fixed_point_count(corpus_algebra("F4")) == 0
    assert frobenius_fixed_point_count(corpus_algebra("x3+x")) == 2
    assert frobenius_fixed_point_count(corpus_algebra("F3^2")) == 2


@given(st.sampled_from(NAMES))
def test_fixed_points_match_the_stone_quotient(name):
    a = corpus_algebra(name)
    q, _ = stone_quotient(a)
    assert frobenius_fixed_point_count(a) == q.dim


@given(st.sampled_from([2, 3, 5]), st.data())
def test_fixed_points_of_a_quotient_are_the_roots(p, data):
    low = data.draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=4))
    f = tuple(low) + (1,)
    a = univariate_quotient(p, f)
    roots = [r for r in range(p) if fp_poly.evaluate(f, r, p) == 0]
    assert frobenius_fixed_point_count(a) == len(roots)
    assert stone_quotient(a)[0].dim == len(roots)


@given(st.sampled_from(NAMES))
def test_pearl_dimension_counts_components(name):
    a = corpus_algebra(name)
    assert pearl(a).pearl_algebra.dim == len(primitive_by_enumeration(a))


@given(st.sampled_from(NAMES), st.sampled_from(NAMES))
def test_pearls_preserve_products(left, right):
    a, b = corpus_algebra(left), corpus_algebra(right)
    if a.p != b.p:
        return
    assert pearl_product_comparison(a, b).is_bijective()


@given(st.sampled_from(NAMES))
def test_stone_quotient_is_idempotent(name):
    q, _ = stone_quotient(corpus_algebra(name))
    again, proj = stone_quotient(q.algebra)
    assert again.algebra == q.algebra
    assert proj.is_bijective()


@given(st.sampled_from(NAMES), st.data())
def test_frobenius_defect_lies_in_the_quotient_ideal(name, data):
    a = corpus_algebra(name)
    x = np.array(data.draw(st.lists(st.integers(0, a.p - 1), min_size=a.dim, max_size=a.dim)), dtype=np.int64)
    _, proj = stone_quotient(a)
    assert not proj.apply((power(a, x, a.p) - x) % a.p).any()


@given(st.sampled_from(NAMES))
def test_homs_from_p_boolean_algebras_land_in_the_pearl(name):
    a = corpus_algebra(name)
    result = pearl(a)
    for b in p_boolean_algebras(a.p, max_dim=2):
        for h in enumerate_homs(b, a):
            assert all(result.contains(col) for col in h.matrix.T)
        assert check_pearl_universal(b, a).ok
        assert check_q_universal(a, b).ok
