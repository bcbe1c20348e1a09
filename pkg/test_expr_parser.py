"""
Tests for the algebra expression language
"""
import pytest
from hypothesis import given
from hypothesis import strategies as st

from config import override_config
from errors import DimCapExceeded, ExprSyntaxError, MixedCharacteristic, NotMonic, NotPrime
from expr_parser import (
    FunctionAlg,
    Product,
    Tensor,
    UnivariateQuotient,
    clear_cache,
    eval_algebra_expr,
    expr_hash,
    format_expr,
    parse_algebra_expr,
    parse_polynomial,
)
from pearl import pearl


def test_parse_leaves():
    assert parse_algebra_expr("GF(2)[x]/(x^2+x+1)") == UnivariateQuotient(2, "x", (1, 1, 1))
    assert parse_algebra_expr("Fn(3, 4)") == FunctionAlg(3, 4)
    assert parse_algebra_expr(" GF(3)[t]/(t^2 + 2) ") == UnivariateQuotient(3, "t", (2, 0, 1))


def test_tensor_binds_tighter_than_product():
    e = parse_algebra_expr("Fn(2,1) * Fn(2,2) (x) Fn(2,3)")
    assert e == Product(FunctionAlg(2, 1), Tensor(FunctionAlg(2, 2), FunctionAlg(2, 3)))
    grouped = parse_algebra_expr("(Fn(2,1) * Fn(2,2)) (x) Fn(2,3)")
    assert grouped == Tensor(Product(FunctionAlg(2, 1), FunctionAlg(2, 2)), FunctionAlg(2, 3))


def test_operators_are_left_associative():
    e = parse_algebra_expr("Fn(2,1) * Fn(2,2) * Fn(2,3)")
    assert e == Product(Product(FunctionAlg(2, 1), FunctionAlg(2, 2)), FunctionAlg(2, 3))


def test_coefficients_reduce_mod_p():
    assert parse_polynomial("x^2+4x+5", 3) == (2, 1, 1)
    assert parse_polynomial("3x^2+x", 3) == (0, 1)
    assert parse_polynomial("x + x", 2) == ()


def test_syntax_error_reports_offset_and_expectation():
    with pytest.raises(ExprSyntaxError) as err:
        parse_algebra_expr("Fn(2,)")
    assert err.value.offset == 5
    assert err.value.expected == ["integer"]
    assert err.value.exit_code == 1


@pytest.mark.parametrize("text", ["", "GF(2)[x]/(y+1)", "Fn(2,2) *", "Fn(2,2) Fn(2,2)", "Fn(2,2) (X) Fn(2,2)"])
def test_malformed_expressions(text):
    with pytest.raises(ExprSyntaxError):
        parse_algebra_expr(text)


def test_offsets_count_utf8_bytes():
    with pytest.raises(ExprSyntaxError) as err:
        parse_algebra_expr("Fn(2,2)\u00a0*\u00a0Fn(2,)")
    assert err.value.offset == 17
    with pytest.raises(ExprSyntaxError) as err:
        parse_algebra_expr("Fn(2,2) * é")
    assert err.value.details["found"] == "é"


def test_mixed_characteristic():
    with pytest.raises(MixedCharacteristic) as err:
        parse_algebra_expr("Fn(3,2) * GF(2)[x]/(x)")
    assert err.value.details["primes"] == [3, 2]


def test_evaluation_dimensions():
    assert eval_algebra_expr(parse_algebra_expr("GF(2)[x]/(x^3+x)")).dim == 3
    assert eval_algebra_expr(parse_algebra_expr("Fn(2,2) * GF(2)[x]/(x^2)")).dim == 4
    assert eval_algebra_expr(parse_algebra_expr("GF(2)[x]/(x^2+x+1) (x) GF(2)[x]/(x^2+x+1)")).dim == 4
    assert eval_algebra_expr(parse_algebra_expr("Fn(5,0)")).dim == 0


def test_evaluation_errors():
    with pytest.raises(NotMonic):
        eval_algebra_expr(parse_algebra_expr("GF(3)[x]/(2x^2+1)"))
    with override_config(dim_cap=3):
        with pytest.raises(DimCapExceeded):
            eval_algebra_expr(parse_algebra_expr("Fn(2,2) (x) Fn(2,2)"))


@pytest.mark.parametrize("p", [0, 1, 4])
def test_moduli_must_be_prime(p):
    with pytest.raises(NotPrime):
        parse_algebra_expr(f"GF({p})[x]/(x)")
    with pytest.raises(NotPrime):
        parse_algebra_expr(f"Fn({p},2)")
    with pytest.raises(NotPrime):
        parse_polynomial("x^2+x", p)


def test_sizes_are_capped_before_allocation():
    with override_config(dim_cap=8):
        with pytest.raises(DimCapExceeded):
            parse_polynomial("x^9+1", 2)
        assert parse_polynomial("x^8+1", 2) == (1, 0, 0, 0, 0, 0, 0, 0, 1)
        with pytest.raises(DimCapExceeded):
            parse_algebra_expr("GF(2)[x]/(x^100000000)")
        with pytest.raises(DimCapExceeded) as err:
            eval_algebra_expr(parse_algebra_expr("Fn(2,100000000)"))
        assert err.value.details == {"dim": 100000000, "cap": 8}


def test_evaluation_is_cached_per_dim_cap():
    e = parse_algebra_expr("GF(3)[x]/(x^2+1)")
    first = eval_algebra_expr(e)
    assert eval_algebra_expr(parse_algebra_expr("GF(3)[x]/(x^2 + 1)")) is first
    with override_config(dim_cap=8):
        assert eval_algebra_expr(e) is not first
    clear_cache()
    assert eval_algebra_expr(e) is not first
    assert eval_algebra_expr(e) == first


def test_hash_ignores_whitespace():
    a = parse_algebra_expr("Fn(2,2)*Fn(2,3)")
    b = parse_algebra_expr("Fn(2, 2) *  Fn(2,3)")
    assert expr_hash(a) == expr_hash(b)
    assert expr_hash(a) != expr_hash(parse_algebra_expr("Fn(2,3)*Fn(2,2)"))


def _leaves(p):
    monic = st.lists(st.integers(0, p - 1), min_size=0, max_size=3).map(lambda low: tuple(low) + (1,))
    quotient = st.builds(UnivariateQuotient, st.just(p), st.sampled_from(["x", "t", "y"]), monic)
    return st.one_of(quotient, st.builds(FunctionAlg, st.just(p), st.integers(0, 4)))


def _trees(p):
    return st.recursive(
        _leaves(p),
        lambda sub: st.one_of(st.builds(Product, sub, sub), st.builds(Tensor, sub, sub)),
        max_leaves=5,
    )


@given(st.sampled_from([2, 3, 5]).flatmap(_trees))
def test_printing_then_parsing_gives_the_same_tree(e):
    assert parse_algebra_expr(format_expr(e)) == e


def test_product_of_dual_numbers_has_a_two_dimensional_pearl():
    a = eval_algebra_expr(parse_algebra_expr("GF(2)[x]/(x^2) * GF(2)[y]/(y^2)"))
    assert a.dim == 4
    assert pearl(a).pearl_algebra.dim == 2
