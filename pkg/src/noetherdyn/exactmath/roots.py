"""Real-root isolation by Sturm sequences and certified real algebraic numbers."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt

from .poly import Poly, format_rational, poly_gcd, squarefree_decomposition, squarefree_part

MAX_BISECTIONS = 1000
DEFAULT_WIDTH = Fraction(1, 2**64)


class InvalidInputError(ValueError):
    pass


class NotFoundError(LookupError):
    pass


# -- Sturm machinery -------------------------------------------------------

def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = seq[-2] % seq[-1]
        if not r:
            break
        # positive rescaling keeps signs and tames coefficient growth
        seq.append(-(r * (1 / abs(r.lead))))
    return seq


def _variations(signs) -> int:
    prev, count = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _var_at(seq: list[Poly], x: Fraction) -> int:
    return _variations(q.sign_at(x) for q in seq)


def _var_at_inf(seq: list[Poly], positive: bool) -> int:
    signs = []
    for q in seq:
        s = 1 if q.lead > 0 else -1
        if not positive and q.degree % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def sturm_count(p: Poly, lo: Fraction | None = None, hi: Fraction | None = None, seq=None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``; ``None`` means infinite."""
    if not p:
        raise InvalidInputError("zero polynomial")
    if seq is None:
        seq = sturm_sequence(squarefree_part(p))
    va = _var_at_inf(seq, False) if lo is None else _var_at(seq, Fraction(lo))
    vb = _var_at_inf(seq, True) if hi is None else _var_at(seq, Fraction(hi))
    return va - vb


def cauchy_bound(p: Poly) -> Fraction:
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


# -- rational roots -----------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for k in range(1, isqrt(n) + 1):
        if n % k == 0:
            small.append(k)
            if k != n // k:
                large.append(n // k)
    return small + large[::-1]


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots of ``p`` (rational-root theorem), ascending."""
    if not p:
        raise InvalidInputError("zero polynomial")
    ints = p.primitive_integer()
    roots = set()
    k = 0
    while k < len(ints) and ints[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
    ints = ints[k:]
    if len(ints) > 1:
        q = Poly(ints)
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if cand not in roots and q(cand) == 0:
                        roots.add(cand)
    return sorted(roots)


# -- isolation ------------------------------------------------------------------

def _isolate_no_rational(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Isolating open intervals for a squarefree ``p`` with no rational roots."""
    if p.degree < 1:
        return []
    seq = sturm_sequence(p)
    b = cauchy_bound(p)
    out = []
    stack = [(-b, b, sturm_count(p, -b, b, seq))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if p(mid) == 0:  # cannot happen without rational roots
            raise ArithmeticError("unexpected rational root during isolation")
        stack.append((lo, mid, sturm_count(p, lo, mid, seq)))
        stack.append((mid, hi, sturm_count(p, mid, hi, seq)))
    return sorted(out)


def _shrink_away(p: Poly, lo: Fraction, hi: Fraction, avoid: list[Fraction]):
    """Bisect (lo, hi) around the unique root of ``p`` until no point of ``avoid`` lies in [lo, hi]."""
    slo = p.sign_at(lo)
    while any(lo <= r <= hi for r in avoid):
        mid = (lo + hi) / 2
        sm = p.sign_at(mid)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def isolate_real_roots(p: Poly) -> list[tuple[tuple[Fraction, Fraction], int]]:
    """Disjoint isolating intervals of the distinct real roots of ``p`` with multiplicities.

    Rational roots come back as degenerate intervals ``(r, r)``; every other
    interval is closed, has non-root endpoints and contains exactly one root
    of the squarefree part of ``p``.
    """
    if not p:
        raise InvalidInputError("cannot isolate roots of the zero polynomial")
    if p.degree < 1:
        return []
    factors = squarefree_decomposition(p)
    sqf = squarefree_part(p)
    rats = rational_roots(sqf)
    rest = sqf
    for r in rats:
        rest = rest.exact_div(Poly((-r, 1)))
    intervals = [(r, r) for r in rats]
    raw = _isolate_no_rational(rest)
    for k, (lo, hi) in enumerate(raw):
        # neighbours from bisection may share an endpoint; pull away from them too
        others = [e for j, iv in enumerate(raw) if j != k for e in iv]
        intervals.append(_shrink_away(rest, lo, hi, rats + others))
    intervals.sort()
    result = []
    for lo, hi in intervals:
        mult = None
        for i, f in enumerate(factors):
            if lo == hi:
                hit = f(lo) == 0
            else:
                hit = f.sign_at(lo) * f.sign_at(hi) < 0
            if hit:
                mult = i + 1
                break
        if mult is None:
            raise ArithmeticError("root not attributed to any squarefree factor")
        result.append(((lo, hi), mult))
    return result


# -- algebraic numbers ----------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicNumber:
    """A real root of a squarefree rational polynomial, pinned by an isolating interval.

    ``modulus`` has exactly one real root in ``[lo, hi]``.  When ``lo < hi`` the
    endpoints are not roots of ``modulus``.
    """

    modulus: Poly
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInputError("empty isolating interval")
        if self.modulus.degree < 1:
            raise InvalidInputError("modulus must be non-constant")

    @classmethod
    def rational(cls, r) -> "AlgebraicNumber":
        r = Fraction(r)
        return cls(Poly((-r, 1)), r, r)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def check(self) -> None:
        """Verify the isolation certificate (squarefree modulus, one root in [lo, hi])."""
        m = self.modulus
        if poly_gcd(m, m.derivative()).degree > 0:
            raise InvalidInputError("modulus is not squarefree")
        if self.is_exact:
            if m(self.lo) != 0:
                raise InvalidInputError("degenerate interval is not a root")
            return
        if m(self.lo) == 0 or m(self.hi) == 0:
            raise InvalidInputError("interval endpoint is a root")
        if sturm_count(m, self.lo, self.hi) != 1:
            raise InvalidInputError("interval does not isolate exactly one root")

    def vanishes(self, q: Poly) -> bool:
        """Whether a divisor ``q`` of the modulus vanishes at this number."""
        if not q:
            return True
        if q.degree == 0:
            return False
        if self.is_exact:
            return q(self.lo) == 0
        return q.sign_at(self.lo) * q.sign_at(self.hi) < 0

    def is_root_of(self, p: Poly) -> bool:
        return self.vanishes(poly_gcd(p, self.modulus)) if p else True

    def with_modulus(self, m: Poly) -> "AlgebraicNumber":
        """Same number, modulus replaced by a divisor ``m`` that vanishes here."""
        return AlgebraicNumber(m.monic(), self.lo, self.hi)

    def bisect(self) -> "AlgebraicNumber":
        if self.is_exact:
            return self
        mid = (self.lo + self.hi) / 2
        sm = self.modulus.sign_at(mid)
        if sm == 0:
            return AlgebraicNumber(self.modulus, mid, mid)
        if sm == self.modulus.sign_at(self.lo):
            return AlgebraicNumber(self.modulus, mid, self.hi)
        return AlgebraicNumber(self.modulus, self.lo, mid)

    def refined(self, width: Fraction = DEFAULT_WIDTH) -> "AlgebraicNumber":
        a = self
        while a.hi - a.lo > width:
            a = a.bisect()
        return a

    def compare(self, r) -> int:
        """Exact sign of ``self - r`` for rational ``r``."""
        r = Fraction(r)
        a = self
        if a.is_exact:
            return (a.lo > r) - (a.lo < r)
        if a.modulus(r) == 0 and a.lo <= r <= a.hi:
            raise ArithmeticError("rational root inside a non-degenerate isolating interval")
        for _ in range(MAX_BISECTIONS):
            if r < a.lo:
                return 1
            if r > a.hi:
                return -1
            a = a.bisect()
            if a.is_exact:
                return (a.lo > r) - (a.lo < r)
        raise ArithmeticError("comparison did not terminate")

    def to_fraction(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("number is irrational")
        return self.lo

    def decimal_str(self, digits: int = 30) -> str:
        if self.is_exact:
            return _fraction_to_decimal(self.lo, digits)
        a = self.refined(Fraction(1, 10 ** (digits + 5)))
        return _fraction_to_decimal((a.lo + a.hi) / 2, digits)

    def __float__(self) -> float:
        if self.is_exact:
            return float(self.lo)
        a = self.refined(Fraction(1, 2**60))
        return float((a.lo + a.hi) / 2)

    def to_json(self, digits: int = 30) -> dict:
        return {
            "modulus": self.modulus.to_json(),
            "interval": [format_rational(self.lo), format_rational(self.hi)],
            "decimal": self.decimal_str(digits),
        }


def _fraction_to_decimal(x: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 10
        val = Decimal(x.numerator) / Decimal(x.denominator)
        ctx.prec = digits
        return str(+val)


def largest_real_root(p: Poly) -> AlgebraicNumber:
    """Greatest real root of ``p`` with the squarefree part of ``p`` as modulus."""
    roots = isolate_real_roots(p)
    if not roots:
        raise NotFoundError(f"{p.pretty()} has no real roots")
    (lo, hi), _ = roots[-1]
    return AlgebraicNumber(squarefree_part(p), lo, hi)


def real_roots(p: Poly) -> list[AlgebraicNumber]:
    sqf = squarefree_part(p)
    return [AlgebraicNumber(sqf, lo, hi) for (lo, hi), _ in isolate_real_roots(p)]


def root_multiplicity(p: Poly, alpha: AlgebraicNumber) -> int:
    """Multiplicity of ``alpha`` as a root of ``p`` (0 when it is not a root)."""
    if not p:
        raise InvalidInputError("zero polynomial has no root multiplicities")
    m = 0
    q = p
    while q.degree > 0:
        h = poly_gcd(q, alpha.modulus)
        if not alpha.vanishes(h):
            break
        q = q.exact_div(h)
        m += 1
    return m
