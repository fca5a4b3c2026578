from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from noetherdyn.exactmath import (
    AlgebraicNumber,
    DimensionError,
    InvalidInputError,
    NFElement,
    NotFoundError,
    Poly,
    RationalMatrix,
    char_poly,
    det_bareiss,
    format_rational,
    isolate_real_roots,
    largest_real_root,
    nf_arith,
    nf_sign,
    nullspace,
    parse_rational,
    poly_gcd,
    poly_xgcd,
    rank,
    rational_roots,
    real_roots,
    root_multiplicity,
    squarefree_decomposition,
    squarefree_part,
    sturm_count,
)

X = sympy.Symbol("x")

small_q = st.fractions(min_value=-6, max_value=6, max_denominator=5)
small_int = st.integers(-5, 5)


def to_sympy(p: Poly):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [0], X, domain="QQ")


def from_sympy(sp) -> Poly:
    return Poly(Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(sp, X).all_coeffs()))


def sympy_charpoly(M: RationalMatrix) -> Poly:
    S = sympy.Matrix(M.rows, M.cols, lambda i, j: sympy.Rational(M[i, j].numerator, M[i, j].denominator))
    return from_sympy(S.charpoly(X).as_expr())


def interpolated_charpoly(M: RationalMatrix) -> Poly:
    """det(xI - M) at x = 0..n via integer Bareiss, then Lagrange interpolation."""
    n = M.rows
    den = 1
    for i in range(n):
        for j in range(n):
            den = den * M[i, j].denominator // __import__("math").gcd(den, M[i, j].denominator)
    pts = []
    for x in range(n + 1):
        rows = [[int((Fraction(x if i == j else 0) - M[i, j]) * den) for j in range(n)] for i in range(n)]
        pts.append((x, Fraction(det_bareiss(rows), den ** n)))
    out = Poly()
    for xi, yi in pts:
        term = Poly.const(yi)
        for xj, _ in pts:
            if xj != xi:
                term = term * Poly((Fraction(-xj, xi - xj), Fraction(1, xi - xj)))
        out = out + term
    return out


polys = st.lists(small_q, min_size=1, max_size=7).map(Poly)
int_polys = st.lists(small_int, min_size=2, max_size=7).map(Poly).filter(lambda p: p.degree >= 1)
matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)
).map(RationalMatrix.from_rows)


# -- rationals and polynomials -------------------------------------------------------

def test_rational_roundtrip():
    for s in ["3/4", "-7/15", "2", "0"]:
        assert format_rational(parse_rational(s)) == s
    assert format_rational(Fraction(4, 2)) == "2"
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("0.5")


@given(polys, polys)
def test_poly_arithmetic_matches_sympy(p, q):
    assert to_sympy(p + q) == to_sympy(p) + to_sympy(q)
    assert to_sympy(p * q) == to_sympy(p) * to_sympy(q)
    if q:
        quo, rem = divmod(p, q)
        assert quo * q + rem == p
        assert rem.degree < q.degree


@given(polys, polys)
def test_gcd_matches_sympy(p, q):
    assume(p or q)
    g = poly_gcd(p, q)
    assert to_sympy(g) == sympy.gcd(to_sympy(p), to_sympy(q)).monic()
    h, s, t = poly_xgcd(p, q)
    assert s * p + t * q == h


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5), st.lists(st.integers(1, 3), min_size=1, max_size=5))
def test_squarefree_decomposition(roots, mults):
    p = Poly.const(1)
    for r, m in zip(roots, mults):
        p = p * Poly.from_roots([r] * m)
    factors = squarefree_decomposition(p)
    rebuilt = Poly.const(p.lead)
    for i, f in enumerate(factors):
        rebuilt = rebuilt * f ** (i + 1)
    assert rebuilt == p
    used = roots[: len(mults)]
    assert squarefree_part(p) == Poly.from_roots(sorted(set(used)))


def test_poly_json_roundtrip():
    p = Poly([Fraction(-1, 3), 0, 2])
    assert Poly.from_json(p.to_json()) == p
    assert p.to_json() == ["-1/3", "0", "2"]


# -- charpoly ---------------------------------------------------------------------------

def test_charpoly_p3_cubic_fixture():
    M = RationalMatrix.from_rows([[3, 1, 1, 1], [-2, 0, -1, -1], [-1, -1, -1, 0], [-1, -1, 0, -1]])
    assert char_poly(M) == Poly([2, 1, -3, -1, 1])


def test_charpoly_identity():
    assert char_poly(RationalMatrix.identity(2)) == Poly([1, -2, 1])


def test_charpoly_non_square():
    with pytest.raises(DimensionError):
        char_poly(RationalMatrix.from_rows([[1, 2, 3], [4, 5, 6]]))


@given(matrices)
def test_charpoly_matches_oracles(M):
    chi = char_poly(M)
    assert chi.degree == M.rows and chi.lead == 1
    assert chi == sympy_charpoly(M)
    assert chi == interpolated_charpoly(M)


@given(matrices, matrices, st.data())
def test_charpoly_block_triangular(A, B, data):
    n, m = A.rows, B.rows
    C = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=m, max_size=m), min_size=n, max_size=n))
    rows = [A.row(i) + C[i] for i in range(n)] + [[0] * n + B.row(i) for i in range(m)]
    assert char_poly(RationalMatrix.from_rows(rows)) == char_poly(A) * char_poly(B)


@given(matrices)
def test_cayley_hamilton(M):
    chi = char_poly(M)
    acc = RationalMatrix(M.rows, M.cols, [0] * (M.rows * M.cols))
    for k, c in enumerate(chi.coeffs):
        acc = acc + M.power(k).scale(c)
    assert all(v == 0 for v in acc.entries)


@given(matrices, st.integers(0, 4), st.integers(0, 4))
def test_matrix_power_additive(M, a, b):
    assert M.power(a + b) == M.power(a) @ M.power(b)


@given(matrices)
def test_rank_and_nullspace(M):
    rows = M.to_rows()
    ns = nullspace(rows)
    assert rank(rows) + len(ns) == M.cols
    for v in ns:
        assert all(x == 0 for x in M.apply(v))
    S = sympy.Matrix(rows)
    assert rank(rows) == S.rank()


# -- root isolation ------------------------------------------------------------------

def test_isolate_x2_minus_2():
    roots = isolate_real_roots(Poly([-2, 0, 1]))
    assert len(roots) == 2
    (lo1, hi1), m1 = roots[0]
    (lo2, hi2), m2 = roots[1]
    assert m1 == m2 == 1
    assert hi1 < lo2
    assert lo1 < -Fraction(7071, 5000) < hi1 and lo2 < Fraction(14142, 10000) < hi2 + Fraction(1, 10**4)


def test_isolate_fixture_charpoly():
    roots = isolate_real_roots(Poly([2, 1, -3, -1, 1]))
    assert [(iv, m) for iv, m in roots] == [((-1, -1), 2), ((1, 1), 1), ((2, 2), 1)]


def test_isolate_d4_largest_root_in_7_2_18_5():
    chi = Poly([-2, -1, 6, 0, -4, 1])
    assert chi == Poly([-2, -3, 1]) * Poly([1, -1]) ** 2 * Poly([1, 1])
    lam = largest_real_root(chi)
    assert sturm_count(lam.modulus, Fraction(7, 2), Fraction(18, 5)) == 1
    r = lam.refined(Fraction(1, 100))
    assert Fraction(7, 2) < r.lo and r.hi < Fraction(18, 5)
    assert root_multiplicity(chi, lam) == 1


def test_largest_root_d3_is_1_plus_sqrt2():
    chi = Poly([-1, -1, 4, 0, -3, 1])
    assert chi == Poly([-1, -2, 1]) * Poly([1, -1]) ** 2 * Poly([1, 1])
    lam = largest_real_root(chi)
    assert lam.is_root_of(Poly([-1, -2, 1]))
    assert abs(float(lam) - (1 + 2 ** 0.5)) < 1e-15


def test_largest_root_linear_and_errors():
    assert largest_real_root(Poly([-5, 1])).to_fraction() == 5
    with pytest.raises(NotFoundError):
        largest_real_root(Poly([1, 0, 1]))
    with pytest.raises(InvalidInputError):
        isolate_real_roots(Poly())


def test_root_multiplicity_examples():
    assert root_multiplicity(Poly([2, 1, -3, -1, 1]), AlgebraicNumber.rational(2)) == 1
    assert root_multiplicity(Poly([1, -2, 1]), AlgebraicNumber.rational(1)) == 2
    assert root_multiplicity(Poly([1, -2, 1]), AlgebraicNumber.rational(3)) == 0


@given(int_polys)
def test_isolation_properties(p):
    roots = isolate_real_roots(p)
    sqf = squarefree_part(p)
    assert len(roots) == sturm_count(sqf, None, None)
    assert len(roots) == len(set(sympy.real_roots(to_sympy(p))))
    ivs = [iv for iv, _ in roots]
    for (lo1, hi1), (lo2, hi2) in zip(ivs, ivs[1:]):
        assert hi1 < lo2
    for (lo, hi), mult in roots:
        a = AlgebraicNumber(sqf, lo, hi)
        a.check()
        a.bisect().check()
        assert root_multiplicity(p, a) == mult


@given(int_polys)
def test_rational_roots_are_roots(p):
    for r in rational_roots(p):
        assert p(r) == 0


def test_refined_root_high_precision():
    chi = Poly([-2, -1, 6, 0, -4, 1])
    lam = largest_real_root(chi).refined(Fraction(1, 10 ** 50))
    with mpmath.workdps(80):
        mid = mpmath.mpf((lam.lo + lam.hi).numerator) / (lam.lo + lam.hi).denominator / 2
        val = mpmath.polyval([mpmath.mpf(int(c)) for c in reversed(chi.coeffs)], mid)
        assert abs(val) < mpmath.mpf(10) ** -40


# -- number field -------------------------------------------------------------------

@pytest.fixture(scope="module")
def lam17():
    return largest_real_root(Poly([-2, -1, 6, 0, -4, 1]))


def test_nf_division_reduces_modulus(lam17):
    L = NFElement.generator(lam17)
    q = (L - 1) / (L ** 2 - 1)
    assert q == 1 / (L + 1)
    assert q.base.modulus.degree <= 2
    assert abs(float(q) - 0.21922359359558485) < 1e-15
    assert nf_arith(L, NFElement(lam17, 1), "mul") == L
    assert nf_arith(L, 4 - L, "add") == 4


def test_nf_signs(lam17):
    L = NFElement.generator(lam17)
    assert nf_sign(L - 3) == 1
    assert nf_sign(NFElement(lam17, 0)) == 0
    c2 = (L - 1) / (L ** 2 - 1) * L
    assert nf_sign(1 - 2 * c2) == -1
    sqrt17 = 2 * L - 3
    assert sqrt17 * sqrt17 == 17
    assert 1 - 2 * c2 == (3 - sqrt17) / 2


def test_nf_zero_division(lam17):
    L = NFElement.generator(lam17)
    with pytest.raises(ZeroDivisionError):
        _ = 1 / (L * L - 3 * L - 2)


def nf_elements(base):
    return st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=1, max_size=4).map(
        lambda cs: NFElement(base, Poly(cs))
    )


LAM17 = largest_real_root(Poly([-2, -1, 6, 0, -4, 1]))


@given(nf_elements(LAM17), nf_elements(LAM17), nf_elements(LAM17))
def test_nf_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == 1


def _numeric(e: NFElement, dps: int = 60):
    with mpmath.workdps(dps):
        r = e.base.refined(Fraction(1, 10 ** (dps + 5)))
        x = mpmath.mpf(r.lo.numerator) / r.lo.denominator
        return mpmath.polyval([mpmath.mpf(c.numerator) / c.denominator for c in reversed(e.repr.coeffs)] or [0], x)


@given(nf_elements(LAM17))
def test_nf_sign_matches_numeric(e):
    v = _numeric(e)
    expected = 0 if abs(v) < mpmath.mpf(10) ** -40 else (1 if v > 0 else -1)
    assert nf_sign(e) == expected


def test_nf_elements_over_rational_base():
    two = AlgebraicNumber.rational(2)
    L = NFElement.generator(two)
    assert L.rational_value() == 2
    assert (L * L - 4).is_zero()
