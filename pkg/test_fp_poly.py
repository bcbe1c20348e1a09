"""
Tests for polynomial arithmetic over GF(p) and the trial-division oracle
"""
import pytest
from hypothesis import given
from hypothesis import strategies as st

import fp_poly
from errors import NotMonic, NotPrime


@st.composite
def polys(draw, max_degree=6, monic=False):
    p = draw(st.sampled_from([2, 3, 5]))
    d = draw(st.integers(0 if not monic else 1, max_degree))
    low = draw(st.lists(st.integers(0, p - 1), min_size=d, max_size=d))
    lead = 1 if monic else draw(st.integers(1, p - 1))
    return p, tuple(low) + (lead,)


def test_primality():
    assert [n for n in range(20) if fp_poly.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(NotPrime):
        fp_poly.require_prime(9)


def test_trim_and_degree():
    assert fp_poly.trim([1, 0, 3, 0], 3) == (1,)
    assert fp_poly.degree(()) == -1
    assert fp_poly.degree((1, 0, 1)) == 2


@given(polys(), polys())
def test_divmod_reconstructs(f, g):
    (p, a), (q, b) = f, g
    b = fp_poly.trim(b, p)
    if not b:
        return
    quo, rem = fp_poly.divmod_poly(a, b, p)
    assert fp_poly.degree(rem) < fp_poly.degree(b)
    assert fp_poly.add(fp_poly.mul(quo, b, p), rem, p) == fp_poly.trim(a, p)


def test_gcd_is_monic():
    # (x+1)^2 and x^2+1 = (x+1)^2 over GF(2)
    assert fp_poly.gcd((1, 0, 1), (1, 1), 2) == (1, 1)
    assert fp_poly.gcd((2, 2), (4, 4), 5) == (1, 1)


def test_squarefree():
    assert fp_poly.is_squarefree((0, 1, 1), 2)
    assert not fp_poly.is_squarefree((0, 1, 0, 1), 2)  # x^3+x = x(x+1)^2
    assert not fp_poly.is_squarefree((1, 0, 1), 2)  # derivative vanishes


def test_format_poly():
    assert fp_poly.format_poly((1, 1, 1)) == "x^2+x+1"
    assert fp_poly.format_poly((2, 0, 1), "y") == "y^2+2"
    assert fp_poly.format_poly(()) == "0"


def test_irreducibles_counts():
    # necklace counts over GF(2): 2, 1, 2, 3
    assert [len(fp_poly.irreducibles(2, d)) for d in range(1, 5)] == [2, 1, 2, 3]
    assert fp_poly.irreducibles(2, 2) == ((1, 1, 1),)


def test_trial_division_factorization():
    assert fp_poly.factor_by_trial_division((0, 1, 0, 1), 2) == {(0, 1): 1, (1, 1): 2}
    assert fp_poly.count_distinct_irreducible_factors((1, 1, 0, 1, 1), 2) == 2
    with pytest.raises(NotMonic):
        fp_poly.factor_by_trial_division((1, 2), 3)


@given(polys(monic=True))
def test_factorization_multiplies_back(case):
    p, f = case
    factors = fp_poly.factor_by_trial_division(f, p)
    rebuilt = fp_poly.product([g for g, k in factors.items() for _ in range(k)], p)
    assert rebuilt == f
    assert all(fp_poly.is_irreducible(g, p) for g in factors)


def test_from_roots_and_evaluate():
    f = fp_poly.from_roots([0, 1, 2], 3)
    assert f == (0, 2, 0, 1)
    assert [fp_poly.evaluate(f, x, 3) for x in range(3)] == [0, 0, 0]


def test_arithmetic_returns_plain_int_tuples():
    p = 5
    results = [
        fp_poly.mul((1, 2), (3, 4), p),
        fp_poly.sub((1,), (1, 1), p),
        fp_poly.scale((1, 2, 3), 2, p),
        fp_poly.derivative((1, 1, 1, 1), p),
        fp_poly.make_monic((2, 4, 3), p),
    ]
    assert results == [(3, 0, 3), (0, 4), (2, 4, 1), (1, 2, 3), (4, 3, 1)]
    for poly in results:
        assert all(type(c) is int for c in poly)
    assert fp_poly.evaluate((1, 1, 1), 2, p) == 2
    assert type(fp_poly.evaluate((1, 1, 1), 2, p)) is int


def test_division_by_zero_polynomial():
    with pytest.raises(ZeroDivisionError):
        fp_poly.divmod_poly((1, 1), (), 3)
    with pytest.raises(ZeroDivisionError):
        fp_poly.mod((1, 1), (), 3)
