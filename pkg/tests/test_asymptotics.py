from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from noetherdyn.asymptotics import (
    UnsupportedCesaro,
    cesaro,
    errors_monotone,
    fit_exponent,
    growth_check,
    jordan_index,
)
from noetherdyn.cohmodel import fixture_p3_cubic
from noetherdyn.exactmath import AlgebraicNumber, Poly, RationalMatrix, largest_real_root


def numpy_top_direction(M: RationalMatrix) -> np.ndarray:
    """Oracle: floating eigendecomposition, eigenvector of the largest real eigenvalue."""
    A = np.array([[float(v) for v in row] for row in M.to_rows()])
    w, V = np.linalg.eig(A)
    k = int(np.argmax(np.where(np.abs(w.imag) < 1e-9, w.real, -np.inf)))
    v = np.real(V[:, k])
    return v / np.linalg.norm(v)


def companion(p: Poly) -> RationalMatrix:
    n = p.degree
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = Fraction(1)
    for i in range(n):
        rows[i][n - 1] = -p.coeffs[i]
    return RationalMatrix.from_rows(rows)


# -- Jordan index ----------------------------------------------------------------------

def test_jordan_index_fixtures():
    _, M, ck = fixture_p3_cubic()
    assert jordan_index(M, ck["lambda"]) == 1
    two = AlgebraicNumber.rational(2)
    assert jordan_index(RationalMatrix.diagonal([2, 2]), two) == 1
    assert jordan_index(companion(Poly([-2, 1]) ** 2), two) == 2
    with pytest.raises(ValueError):
        jordan_index(RationalMatrix.diagonal([3, 3]), two)


@given(st.integers(1, 4), st.integers(2, 5))
def test_jordan_index_of_companion_power(k, r):
    M = companion(Poly([-r, 1]) ** k)
    assert jordan_index(M, AlgebraicNumber.rational(r)) == k
    A = sympy.Matrix([[int(v) for v in row] for row in M.to_rows()])
    _, J = A.jordan_form()
    assert max(sum(1 for i in range(J.rows - 1) if J[i, i + 1] == 1) + 1, 1) == k


def test_jordan_index_irrational(d4):
    assert jordan_index(d4.M, d4.sp.lam) == 1


# -- Cesaro averages -------------------------------------------------------------------

def test_cesaro_p3_fixture():
    _, M, ck = fixture_p3_cubic()
    target = numpy_top_direction(M)
    run = cesaro(M, lam=ck["lambda"], target=target)
    assert run.N_values == [10, 20, 50, 100, 200, 500, 1000]
    assert run.errors[-1] < 1e-3
    assert -1.3 <= run.fitted_decay_exponent <= -0.7
    assert errors_monotone(run)


def test_cesaro_d4_matches_certified_and_numpy(d4):
    exact = np.array([float(x) for x in d4.inv.cls.coeffs])
    exact /= np.linalg.norm(exact)
    oracle = numpy_top_direction(d4.M)
    assert min(np.linalg.norm(exact - oracle), np.linalg.norm(exact + oracle)) < 1e-12
    run = cesaro(d4.M, lam=d4.sp.lam, target=exact)
    assert run.errors[-1] < 1e-3
    assert -1.3 <= run.fitted_decay_exponent <= -0.7


def test_cesaro_diagonal_is_identity():
    M = RationalMatrix.diagonal([2, 2])
    beta = [Fraction(3), Fraction(-1)]
    run = cesaro(M, beta=beta, lam=2, N_max=50, target=beta)
    assert max(run.errors) < 1e-15


def test_cesaro_rejects_small_lambda():
    with pytest.raises(UnsupportedCesaro):
        cesaro(RationalMatrix.diagonal([1, 1]), lam=1)


def test_matrix_power_additivity(d4):
    rng = random.Random(0)
    for _ in range(5):
        a, b = rng.randint(0, 12), rng.randint(0, 12)
        assert d4.M.power(a + b) == d4.M.power(a) @ d4.M.power(b)


def test_fit_exponent():
    N = [10, 100, 1000]
    assert abs(fit_exponent(N, [3.0 / n for n in N]) + 1) < 1e-12
    assert fit_exponent([10], [1.0]) is None


def test_cesaro_json_and_table():
    _, M, ck = fixture_p3_cubic()
    run = cesaro(M, lam=ck["lambda"], N_max=100, target=numpy_top_direction(M))
    js = run.to_json()
    assert js["N"] == [10, 20, 50, 100] and len(js["direction"]) == 4
    assert "fitted decay exponent" in run.table()


# -- growth ---------------------------------------------------------------------------

def test_growth_p3_fixture():
    _, M, ck = fixture_p3_cubic()
    g = growth_check(M, lam=ck["lambda"], n_max=60)
    assert g.ok and 0.1 <= g.c1 and g.c2 <= 10


def test_growth_diagonal_constant():
    g = growth_check(RationalMatrix.diagonal([2, 2]), v=[1, 0], lam=2, n_max=30)
    assert g.c1 == g.c2 == 1.0


def test_growth_d4(d4):
    assert growth_check(d4.M, lam=d4.sp.lam).ok


def test_growth_flags_wrong_m():
    M = companion(Poly([-2, 1]) ** 2)
    lam = largest_real_root(Poly([-2, 1]) ** 2)
    assert growth_check(M, v=[1, 0], lam=lam, m=2, n_max=60).ok
    # with m = 1 the ratio grows linearly in n
    g = growth_check(M, v=[1, 0], lam=lam, m=1, n_max=60)
    assert g.c2 / g.c1 > 10
