"""Arithmetic in Q(lambda) for a real algebraic number lambda.

Elements are polynomials in lambda reduced modulo the base modulus.  The
modulus only needs to be squarefree, not irreducible: a zero divisor found
during inversion splits the modulus by a gcd and the factor vanishing at
lambda is kept.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .poly import Poly, format_rational, poly_gcd, poly_xgcd
from .roots import MAX_BISECTIONS, AlgebraicNumber

Scalar = Union[int, Fraction]


def _merge_bases(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    if a is b or (a.modulus == b.modulus and a.lo == b.lo and a.hi == b.hi):
        return a
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        raise ValueError("elements live over different algebraic numbers")
    m = a.modulus if a.modulus == b.modulus else poly_gcd(a.modulus, b.modulus)
    if m.degree < 1:
        raise ValueError("elements live over different algebraic numbers")
    # m divides both moduli, so neither endpoint is a root of m
    return AlgebraicNumber(m, lo, hi)


class NFElement:
    """Immutable element of Q(lambda)."""

    __slots__ = ("base", "repr")

    def __init__(self, base: AlgebraicNumber, rep: Poly | Scalar):
        if not isinstance(rep, Poly):
            rep = Poly.const(rep)
        if rep.degree >= base.modulus.degree:
            rep = rep % base.modulus
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "repr", rep)

    def __setattr__(self, name, value):
        raise AttributeError("NFElement is immutable")

    @classmethod
    def generator(cls, base: AlgebraicNumber) -> "NFElement":
        return cls(base, Poly.x())

    def _lift(self, other) -> tuple["NFElement", "NFElement"]:
        if isinstance(other, NFElement):
            base = _merge_bases(self.base, other.base)
            a = self if self.base is base else NFElement(base, self.repr)
            b = other if other.base is base else NFElement(base, other.repr)
            return a, b
        if isinstance(other, (int, Fraction)):
            return self, NFElement(self.base, Poly.const(other))
        return NotImplemented

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return NFElement(a.base, a.repr + b.repr)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return NFElement(a.base, a.repr - b.repr)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return NFElement(self.base, -self.repr)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement(self.base, self.repr * Fraction(other))
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return NFElement(a.base, a.repr * b.repr)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return (self.inverse()) ** (-n)
        result = NFElement(self.base, Poly.const(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "NFElement":
        base = self.base
        g = poly_gcd(self.repr, base.modulus)
        if base.vanishes(g):
            raise ZeroDivisionError("element vanishes at the base algebraic number")
        if g.degree > 0:
            base = base.with_modulus(base.modulus.exact_div(g))
        h, s, _ = poly_xgcd(self.repr % base.modulus, base.modulus)
        if h.degree != 0:
            raise ArithmeticError("inverse computation failed after modulus refinement")
        return NFElement(base, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return NFElement(self.base, self.repr * (1 / Fraction(other)))
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        inv = b.inverse()
        return a * inv

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        if not self.repr:
            return True
        if self.repr.degree == 0:
            return False
        return self.base.vanishes(poly_gcd(self.repr, self.base.modulus))

    def __eq__(self, other) -> bool:
        if isinstance(other, (NFElement, int, Fraction)):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def sign(self) -> int:
        """Exact sign of the element's value at lambda."""
        if self.is_zero():
            return 0
        if self.repr.degree == 0:
            return 1 if self.repr.coeffs[0] > 0 else -1
        a = self.base
        for _ in range(MAX_BISECTIONS):
            lo, hi = self.repr.eval_interval(a.lo, a.hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            a = a.bisect()
        raise ArithmeticError("sign refinement did not terminate")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def rational_value(self) -> Fraction | None:
        """The value as a Fraction when it is rational in this representation."""
        if self.repr.degree <= 0:
            return self.repr.coeffs[0] if self.repr else Fraction(0)
        if self.base.is_exact:
            return self.repr(self.base.lo)
        return None

    # -- rendering -------------------------------------------------------------
    def enclosure(self, width: Fraction) -> tuple[Fraction, Fraction]:
        a = self.base
        lo, hi = self.repr.eval_interval(a.lo, a.hi)
        n = 0
        while hi - lo > width and not a.is_exact:
            a = a.bisect()
            lo, hi = self.repr.eval_interval(a.lo, a.hi)
            n += 1
            if n > 4 * MAX_BISECTIONS:
                break
        return lo, hi

    def __float__(self) -> float:
        r = self.rational_value()
        if r is not None:
            return float(r)
        lo, hi = self.enclosure(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def decimal_str(self, digits: int = 30) -> str:
        from .roots import _fraction_to_decimal

        r = self.rational_value()
        if r is not None:
            return _fraction_to_decimal(r, digits)
        lo, hi = self.enclosure(Fraction(1, 10 ** (digits + 5)))
        return _fraction_to_decimal((lo + hi) / 2, digits)

    def __repr__(self) -> str:
        return f"NFElement({self.repr.pretty('L')})"

    def to_json(self, digits: int = 30) -> dict:
        return {
            "repr": self.repr.to_json(),
            "modulus": self.base.modulus.to_json(),
            "decimal": self.decimal_str(digits),
        }


def nf_arith(a: NFElement, b: NFElement, op: str) -> NFElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def nf_sign(e: NFElement) -> int:
    return e.sign()


def exact_str(x) -> str:
    """Render a Fraction or NFElement as an exact string."""
    if isinstance(x, NFElement):
        r = x.rational_value()
        if r is not None:
            return format_rational(r)
        return x.repr.pretty("L")
    return format_rational(x)
