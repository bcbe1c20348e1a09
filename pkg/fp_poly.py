"""
Polynomial arithmetic over GF(p).

A polynomial a_0 + a_1 x + ... + a_n x^n is the tuple (a_0, a_1, ..., a_n)
of integers in [0, p) with a_n nonzero; the zero polynomial is ().
Arithmetic goes through sympy's dense GF(p) routines, which keep the
coefficients highest degree first; the helpers below convert at the edge.
Also holds the trial-division oracle that counts distinct irreducible
factors independently of any algebra machinery.
"""
import functools
import itertools
from typing import Dict, Iterable, List, Sequence, Tuple

import sympy
from sympy.polys import galoistools as gf
from sympy.polys.domains import ZZ

from errors import NotMonic, NotPrime

Poly = Tuple[int, ...]


def _to_gf(f: Iterable[int]) -> list:
    return [ZZ(int(c)) for c in reversed(tuple(f))]


def _from_gf(f: list) -> Poly:
    return tuple(int(c) for c in reversed(f))


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


def require_prime(p: int):
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime", {"p": p})


def trim(coeffs: Iterable[int], p: int) -> Poly:
    return _from_gf(gf.gf_from_int_poly(_to_gf(coeffs), p))


def degree(f: Poly) -> int:
    """Degree of f, with -1 for the zero polynomial."""
    return len(f) - 1


def is_monic(f: Poly) -> bool:
    return bool(f) and f[-1] == 1


def monomial(d: int, c: int, p: int) -> Poly:
    return trim([0] * d + [c], p)


def add(f: Poly, g: Poly, p: int) -> Poly:
    return _from_gf(gf.gf_add(_to_gf(f), _to_gf(g), p, ZZ))


def sub(f: Poly, g: Poly, p: int) -> Poly:
    return _from_gf(gf.gf_sub(_to_gf(f), _to_gf(g), p, ZZ))


def scale(f: Poly, c: int, p: int) -> Poly:
    return _from_gf(gf.gf_mul_ground(_to_gf(f), ZZ(c % p), p, ZZ))


def mul(f: Poly, g: Poly, p: int) -> Poly:
    return _from_gf(gf.gf_mul(_to_gf(f), _to_gf(g), p, ZZ))


def divmod_poly(f: Poly, g: Poly, p: int) -> Tuple[Poly, Poly]:
    """Quotient and remainder of f by a nonzero g."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q, r = gf.gf_div(_to_gf(f), _to_gf(g), p, ZZ)
    return _from_gf(q), _from_gf(r)


def mod(f: Poly, g: Poly, p: int) -> Poly:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    return _from_gf(gf.gf_rem(_to_gf(f), _to_gf(g), p, ZZ))


def make_monic(f: Poly, p: int) -> Poly:
    if not f:
        return f
    return _from_gf(gf.gf_monic(_to_gf(f), p, ZZ)[1])


def gcd(f: Poly, g: Poly, p: int) -> Poly:
    """Monic gcd; gcd(0, 0) is 0."""
    return _from_gf(gf.gf_gcd(_to_gf(f), _to_gf(g), p, ZZ))


def derivative(f: Poly, p: int) -> Poly:
    return _from_gf(gf.gf_diff(_to_gf(f), p, ZZ))


def is_squarefree(f: Poly, p: int) -> bool:
    """gcd(f, f') == 1. A vanishing derivative counts as not squarefree."""
    return bool(gf.gf_sqf_p(_to_gf(f), p, ZZ))


def evaluate(f: Poly, x: int, p: int) -> int:
    return int(gf.gf_eval(_to_gf(f), ZZ(x % p), p, ZZ))


def from_roots(roots: Sequence[int], p: int) -> Poly:
    f: Poly = (1,)
    for r in roots:
        f = mul(f, trim([-r, 1], p), p)
    return f


def require_monic(f: Poly):
    if not is_monic(f):
        raise NotMonic(f"polynomial {format_poly(f)} is not monic", {"coeffs": list(f)})


def format_poly(f: Poly, var: str = "x") -> str:
    """Render as e.g. x^2+x+1 (descending degree, unit coefficients omitted)."""
    if not f:
        return "0"
    terms = []
    for d in range(len(f) - 1, -1, -1):
        c = f[d]
        if c == 0:
            continue
        if d == 0:
            terms.append(str(c))
            continue
        power = var if d == 1 else f"{var}^{d}"
        terms.append(power if c == 1 else f"{c}{power}")
    return "+".join(terms)


def monic_polynomials(p: int, d: int) -> Iterable[Poly]:
    """All monic polynomials of degree d, in lexicographic order of coefficients."""
    for low in itertools.product(range(p), repeat=d):
        yield tuple(low) + (1,)


@functools.lru_cache(maxsize=None)
def irreducibles(p: int, d: int) -> Tuple[Poly, ...]:
    """Monic irreducible polynomials of degree exactly d, found by sieving."""
    require_prime(p)
    if d < 1:
        return ()
    smaller = [g for k in range(1, d // 2 + 1) for g in irreducibles(p, k)]
    found = []
    for f in monic_polynomials(p, d):
        if all(mod(f, g, p) for g in smaller):
            found.append(f)
    return tuple(found)


def factor_by_trial_division(f: Poly, p: int) -> Dict[Poly, int]:
    """Complete factorization of a monic f into monic irreducibles with multiplicities.

    Trial division by every monic irreducible of degree up to deg(f)/2; the
    cofactor left at the end is irreducible.
    """
    require_monic(f)
    factors: Dict[Poly, int] = {}
    rest = f
    d = 1
    while 2 * d <= degree(rest):
        for g in irreducibles(p, d):
            while True:
                q, r = divmod_poly(rest, g, p)
                if r:
                    break
                factors[g] = factors.get(g, 0) + 1
                rest = q
        d += 1
    if degree(rest) > 0:
        factors[rest] = factors.get(rest, 0) + 1
    return factors


def count_distinct_irreducible_factors(f: Poly, p: int) -> int:
    return len(factor_by_trial_division(f, p))


def is_irreducible(f: Poly, p: int) -> bool:
    if degree(f) < 1:
        return False
    return factor_by_trial_division(make_monic(f, p), p) == {make_monic(f, p): 1}


def sort_key(f: Poly) -> Tuple[int, Tuple[int, ...]]:
    return (degree(f), tuple(reversed(f)))


def product(polys: List[Poly], p: int) -> Poly:
    out: Poly = (1,)
    for g in polys:
        out = mul(out, g, p)
    return out
