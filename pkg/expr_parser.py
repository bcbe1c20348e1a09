"""
Algebra Expression Language
Recursive-descent parser, printer and evaluator for algebra expressions:

    expr        := tensor_expr ('*' tensor_expr)*
    tensor_expr := term ('(x)' term)*
    term        := 'GF(' int ')' '[' ident ']' '/' '(' poly ')'
                 | 'Fn(' int ',' int ')'
                 | '(' expr ')'
    poly        := monomial ('+' monomial)*
    monomial    := coeff? ident ('^' int)? | coeff

'*' is the product and '(x)' the tensor product over GF(p); both are
left-associative and '(x)' binds tighter. Whitespace may separate tokens.
"""
import hashlib
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Set, Tuple, Union

import fp_poly
from config import get_config
from errors import ExprSyntaxError, MixedCharacteristic
from fpalgebra import (
    FiniteAlgebra,
    PrimeField,
    check_dim,
    function_algebra,
    product,
    tensor,
    univariate_quotient,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UnivariateQuotient:
    p: int
    var: str
    poly: fp_poly.Poly


@dataclass(frozen=True)
class FunctionAlg:
    p: int
    size: int


@dataclass(frozen=True)
class Product:
    lhs: "AlgebraExpr"
    rhs: "AlgebraExpr"


@dataclass(frozen=True)
class Tensor:
    lhs: "AlgebraExpr"
    rhs: "AlgebraExpr"


AlgebraExpr = Union[UnivariateQuotient, FunctionAlg, Product, Tensor]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.prime: Optional[int] = None
        self.expected: Set[str] = set()

    # scanning

    def offset(self, pos: Optional[int] = None) -> int:
        """Byte offset of a character position in the UTF-8 encoding."""
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, literal: str) -> bool:
        self.skip_ws()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            self.expected = set()
            return True
        self.expected.add(repr(literal))
        return False

    def fail(self, *expected: str):
        self.skip_ws()
        found = self.text[self.pos:self.pos + 1]
        raise ExprSyntaxError(self.offset(), self.expected | set(expected), found)

    def expect(self, literal: str):
        if not self.accept(literal):
            self.fail()

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("integer")
        self.expected = set()
        return int(self.text[start:self.pos])

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            self.fail("identifier")
        self.expected = set()
        return self.text[start:self.pos]

    # grammar

    def parse(self) -> AlgebraExpr:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("end of input")
        return e

    def expr(self) -> AlgebraExpr:
        e = self.tensor_expr()
        while self.accept("*"):
            e = Product(e, self.tensor_expr())
        return e

    def tensor_expr(self) -> AlgebraExpr:
        e = self.term()
        while self.accept("(x)"):
            e = Tensor(e, self.term())
        return e

    def term(self) -> AlgebraExpr:
        start = self.pos
        if self.accept("GF("):
            p = self.integer()
            PrimeField(p)
            self.expect(")")
            self.expect("[")
            var = self.ident()
            self.expect("]")
            self.expect("/")
            self.expect("(")
            poly = self.poly(p, var)
            self.expect(")")
            self.check_prime(p, start)
            return UnivariateQuotient(p, var, poly)
        if self.accept("Fn("):
            p = self.integer()
            PrimeField(p)
            self.expect(",")
            n = self.integer()
            self.expect(")")
            self.check_prime(p, start)
            return FunctionAlg(p, n)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.fail()

    def poly(self, p: int, var: str) -> fp_poly.Poly:
        coeffs: Dict[int, int] = {}
        while True:
            d, c = self.monomial(var)
            coeffs[d] = coeffs.get(d, 0) + c
            if not self.accept("+"):
                break
        top = max(coeffs)
        return fp_poly.trim([coeffs.get(d, 0) for d in range(top + 1)], p)

    def monomial(self, var: str) -> Tuple[int, int]:
        self.skip_ws()
        coeff = None
        if self.pos < len(self.text) and self.text[self.pos].isdigit():
            coeff = self.integer()
        self.skip_ws()
        if self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            at = self.pos
            name = self.ident()
            if name != var:
                self.pos = at
                self.expected = set()
                self.fail(repr(var))
            degree = self.integer() if self.accept("^") else 1
            # the dense coefficient list of x^d has d + 1 entries
            check_dim(degree)
            return degree, 1 if coeff is None else coeff
        if coeff is None:
            self.fail("integer", repr(var))
        return 0, coeff

    def check_prime(self, p: int, start: int):
        if self.prime is None:
            self.prime = p
        elif p != self.prime:
            raise MixedCharacteristic(
                f"leaf at byte {self.offset(start)} is over GF({p}) but the expression is over GF({self.prime})",
                {"offset": self.offset(start), "primes": [self.prime, p]},
            )


def parse_algebra_expr(text: str) -> AlgebraExpr:
    return _Parser(text).parse()


def parse_polynomial(text: str, p: int, var: str = "x") -> fp_poly.Poly:
    """Parse a bare polynomial in ``var`` with coefficients reduced mod p."""
    PrimeField(p)
    parser = _Parser(text)
    poly = parser.poly(p, var)
    parser.skip_ws()
    if parser.pos != len(text):
        parser.fail("end of input")
    return poly


def format_expr(e: AlgebraExpr) -> str:
    """Print an expression so that parsing it back gives the same tree."""
    if isinstance(e, UnivariateQuotient):
        return f"GF({e.p})[{e.var}]/({fp_poly.format_poly(e.poly, e.var)})"
    if isinstance(e, FunctionAlg):
        return f"Fn({e.p},{e.size})"
    if isinstance(e, Product):
        rhs = format_expr(e.rhs)
        if isinstance(e.rhs, Product):
            rhs = f"({rhs})"
        return f"{format_expr(e.lhs)} * {rhs}"
    lhs, rhs = format_expr(e.lhs), format_expr(e.rhs)
    if isinstance(e.lhs, Product):
        lhs = f"({lhs})"
    if isinstance(e.rhs, (Product, Tensor)):
        rhs = f"({rhs})"
    return f"{lhs} (x) {rhs}"


def expr_hash(e: AlgebraExpr) -> str:
    return hashlib.sha256(format_expr(e).encode("utf-8")).hexdigest()


_EVAL_CACHE: Dict[Tuple[str, int], FiniteAlgebra] = {}


def eval_algebra_expr(e: AlgebraExpr) -> FiniteAlgebra:
    """Build the algebra through the fpalgebra constructors, caching by content hash."""
    key = (expr_hash(e), get_config().dim_cap)
    cached = _EVAL_CACHE.get(key)
    if cached is not None:
        return cached
    if isinstance(e, UnivariateQuotient):
        result = univariate_quotient(e.p, e.poly, e.var)
    elif isinstance(e, FunctionAlg):
        check_dim(e.size)
        result = function_algebra(e.p, [f"s{i}" for i in range(e.size)])
    elif isinstance(e, Product):
        result = product(eval_algebra_expr(e.lhs), eval_algebra_expr(e.rhs))[0]
    else:
        result = tensor(eval_algebra_expr(e.lhs), eval_algebra_expr(e.rhs))[0]
    _EVAL_CACHE[key] = result
    logger.debug("evaluated %s to dimension %d", format_expr(e), result.dim)
    return result


def clear_cache():
    _EVAL_CACHE.clear()

