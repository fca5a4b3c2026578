"""Acceptance gate: one or more tests per criterion, summarized at the end of the run."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np
import pytest
import sympy

from noetherdyn.asymptotics import cesaro, errors_monotone, jordan_index
from noetherdyn.cohmodel import build_pullback, fixture_p3_cubic
from noetherdyn.exactmath import NFElement, Poly, char_poly, largest_real_root, nf_arith, nf_sign
from noetherdyn.fixtures import run_p3cubic, y_model_data
from noetherdyn.grid import enumerate_grid
from noetherdyn.noether import (
    NoetherianMap,
    ProjPoint,
    apply_J,
    classify,
    orbit_point,
    singular_length,
)
from noetherdyn.positivity import (
    check_Enn_in_indeterminacy,
    kdm1_witness,
    nef_decide,
    nonnef_locus,
    star_gate,
)
from noetherdyn.potentials import PROXY_LABEL, build_potential, l1_trend, squaring_map
from noetherdyn.spectral import closed_form_charpoly

from conftest import D3_TWO_ORBITS, D4_EXAMPLE, Pipeline, run_pipeline

crit = pytest.mark.criterion
X = sympy.Symbol("x")
SQRT17 = sympy.sqrt(17)

# the all-1/2 configurations (plus zeros) have lambda = 1: the class identities are undefined there
LAMBDA_ONE = {"d=3 N=[2, 2, 2, 2]", "d=4 N=[1, 2, 2, 2, 2]", "d=5 N=[1, 1, 2, 2, 2, 2]", "d=6 N=[1, 1, 1, 2, 2, 2, 2]"}


def sym(e: NFElement, lam) -> sympy.Expr:
    return sum(sympy.Rational(c.numerator, c.denominator) * lam**k for k, c in enumerate(e.repr.coeffs))


def sym_poly(p: Poly) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], X, domain="QQ")


# -- the grid, computed once -----------------------------------------------------------

@dataclass
class GridEntry:
    key: str
    p: Pipeline
    closed: Optional[Poly]


@dataclass
class Grid:
    entries: list
    skipped: list
    seconds: float


@pytest.fixture(scope="module")
def grid() -> Grid:
    t0 = time.perf_counter()
    entries, skipped = [], []
    for cfg in enumerate_grid(d_max=6, n_max=4):
        if cfg.a is None:
            skipped.append(cfg)
            continue
        p = run_pipeline(",".join(str(x) for x in cfg.a))
        closed = closed_form_charpoly(p.f.d, p.cls.l, p.cls.N) if p.cls.S else None
        entries.append(GridEntry(cfg.key, p, closed))
    return Grid(entries, skipped, time.perf_counter() - t0)


# -- 1 ----------------------------------------------------------------------------------

@crit(1, "P^3 cubic fixture: charpoly, simple lambda = 2, class identity, < 1 s")
def test_c1_p3_fixture():
    t0 = time.perf_counter()
    rep = run_p3cubic()
    elapsed = time.perf_counter() - t0
    assert rep["checks"]["charpoly_is_x4-x3-3x2+x+2"]
    assert rep["checks"]["lambda_is_2"] and rep["checks"]["lambda_simple"]
    assert rep["checks"]["pullback_H-E0-E23_is_H-E0+E23"]
    assert elapsed < 1.0
    # oracle: sympy on the same matrix
    _, M, _ = fixture_p3_cubic()
    sm = sympy.Matrix(M.to_rows())
    assert sympy.factor(sm.charpoly(X).as_expr()) == sympy.factor(X**4 - X**3 - 3 * X**2 + X + 2)
    assert sympy.roots(sm.charpoly(X).as_expr(), X)[2] == 1
    assert list(sm * sympy.Matrix([1, -1, -1, 0])) == [1, -1, 1, 0]


# -- 2 ----------------------------------------------------------------------------------

@crit(2, "closed-form charpoly equals char_poly(pullback) on the d <= 6, N <= 4 grid, < 5 min")
def test_c2_closed_form_grid(grid):
    with_S = [e for e in grid.entries if e.closed is not None]
    assert len(with_S) >= 50
    bad = [e.key for e in with_S if e.closed != e.p.sp.charpoly]
    assert not bad, bad
    # the char_poly side is an independent Berkowitz computation; spot-check a third oracle
    for e in with_S[:: max(1, len(with_S) // 25)]:
        assert sym_poly(e.closed) == sympy.Poly(sympy.Matrix(e.p.M.to_rows()).charpoly(X).as_expr(), X, domain="QQ")
    assert all(e.p.f.d - e.p.cls.l >= 3 for e in grid.entries)
    assert grid.seconds < 300


# -- 3 ----------------------------------------------------------------------------------

@crit(3, "class identities hold exactly over the grid")
def test_c3_identities_grid(grid):
    checked = 0
    degenerate = set()
    for e in grid.entries:
        if not e.p.cls.S:
            continue
        if e.p.sp.degenerate:
            degenerate.add(e.key)
            continue
        assert e.p.sp.simple, e.key
        ids = e.p.inv.identities
        assert ids["c_next_is_lambda_c"] and ids["c_first_closed_form"], e.key
        assert ids["sum_c_first_is_d_minus_lambda"] and ids["orbit_sum_is_one"], e.key
        assert ids["c_first_positive"] and ids["eigen_equation"], e.key
        checked += 1
    assert checked >= 50
    # lambda = 1 only on the all-1/2 family, where c_{i,1} = (lambda-1)/(lambda^N-1) is undefined
    assert degenerate == LAMBDA_ONE


# -- 4 ----------------------------------------------------------------------------------

@crit(4, "worked d = 4 example")
def test_c4_d4_example(d4):
    lam_sym = (3 + SQRT17) / 2
    assert sym_poly(d4.sp.charpoly) == sympy.Poly(X**5 - 4 * X**4 + 6 * X**2 - X - 2, X, domain="QQ")
    # lambda: the isolated root is (3 + sqrt 17)/2
    assert sympy.simplify(sym(NFElement(d4.sp.lam, d4.sp.lam.modulus), lam_sym)) == 0
    assert d4.sp.lam.compare(Fraction(7, 2)) > 0 and d4.sp.lam.compare(Fraction(18, 5)) < 0
    assert d4.sp.simple and d4.sp.unique_exact
    assert d4.sp.unique_numeric and d4.sp.max_other_modulus <= 1 + 1e-9
    for i in (0, 1):
        assert sympy.simplify(sym(d4.inv.c_value(i, 1), lam_sym) - (5 - SQRT17) / 4) == 0
        assert sympy.simplify(sym(d4.inv.c_value(i, 2), lam_sym) - (SQRT17 - 1) / 4) == 0
    verdict = nef_decide(d4.f, d4.cls, d4.inv)
    assert not verdict.nef
    val = verdict.certificate.value
    assert sympy.simplify(sym(val, lam_sym) - (3 - SQRT17) / 2) == 0
    assert nf_sign(val) == -1
    locus = nonnef_locus(d4.f, d4.cls, d4.inv)
    assert [sorted(c.zeros) for c in locus.components] == [[2, 3, 4]]
    assert star_gate(d4.f, d4.cls, d4.sp, d4.inv).holds


# -- 5 ----------------------------------------------------------------------------------

@crit(5, "nef iff |S| <= 1 across the grid, with exact negative-curve certificates")
def test_c5_nef_grid(grid):
    n_cert = 0
    for e in grid.entries:
        p = e.p
        if p.inv is None:
            continue
        v = nef_decide(p.f, p.cls, p.inv)
        assert v.nef == (len(p.cls.S) <= 1), e.key
        if not v.nef:
            assert v.certificate is not None and v.certificate.value.sign() == -1, e.key
            assert v.supporting_inequality, e.key
            L = NFElement.generator(p.sp.lam)
            for i in p.cls.S:
                n = p.cls.length(i)
                assert p.inv.c_value(i, n) > 1 - 1 / L, e.key
            n_cert += 1
    assert n_cert >= 50


# -- 6 ----------------------------------------------------------------------------------

@crit(6, "non-nef locus: k <= d-2 grid cases and constructed k = d-1 witnesses")
def test_c6_locus_grid(grid):
    n = 0
    for e in grid.entries:
        p = e.p
        if p.inv is None or not p.cls.equal_lengths or p.cls.l or not 1 <= p.cls.k <= p.f.d - 2:
            continue
        loc = nonnef_locus(p.f, p.cls, p.inv)
        rest = {i for i in range(p.f.d + 1) if i not in p.cls.S}
        assert [c.zeros for c in loc.components] == [frozenset(rest)], e.key
        assert all(c.certificate.value.sign() == -1 for c in loc.components)
        assert all(1 <= dim <= p.f.d - 2 for dim in loc.dims())
        assert check_Enn_in_indeterminacy(loc)["ok"]
        n += 1
    assert n >= 10


@crit(6, "non-nef locus: k <= d-2 grid cases and constructed k = d-1 witnesses")
@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_c6_kdm1_witness(d):
    f = kdm1_witness(d)
    assert f is not None
    p = run_pipeline(",".join(str(x) for x in f.a))
    assert p.cls.k == d - 1 and p.cls.equal_lengths
    loc = nonnef_locus(p.f, p.cls, p.inv)
    assert loc.case_tag == "k_eq_d_minus_1"
    assert loc.c_N == Fraction(d - 1, d)
    assert sorted(sorted(c.zeros) for c in loc.components) == [[i, d] for i in range(d)]
    assert all(c.certificate.value.sign() == -1 for c in loc.components)
    assert check_Enn_in_indeterminacy(loc, samples=100)["ok"]


# -- 7 ----------------------------------------------------------------------------------

@crit(7, "Y-model: p = x chi, lambda = 1 + sqrt 2, eigenvector, 1 - 2 sigma = 1/lambda")
def test_c7_y_model():
    f = NoetherianMap.parse(D3_TWO_ORBITS)
    data = y_model_data(f)
    assert all(data["checks"].values()), data["checks"]
    # oracle: sympy characteristic polynomial and root
    sm = sympy.Matrix([[int(v) for v in row] for row in data["matrix"].to_rows()])
    p = sympy.Poly(sm.charpoly(X).as_expr(), X, domain="QQ")
    assert p == sympy.Poly(X, X, domain="QQ") * sym_poly(data["chi"])
    lam_sym = 1 + sympy.sqrt(2)
    assert sympy.simplify(p.as_expr().subs(X, lam_sym)) == 0
    assert abs(float(data["lambda"]) - float(lam_sym)) < 1e-15
    v = sympy.Matrix([sym(e, lam_sym) for e in data["eigenvector"]])
    assert sympy.simplify(sm * v - lam_sym * v) == sympy.zeros(sm.rows, 1)
    assert sympy.simplify(v[-1] + 1 / lam_sym) == 0
    assert sympy.simplify(1 - 2 * sym(data["sigma"], lam_sym) - 1 / lam_sym) == 0


# -- 8 ----------------------------------------------------------------------------------

def _plain_f(a, x):
    y = [1 / c for c in x]
    s = sum(ai * yi for ai, yi in zip(a, y))
    z = [s - yi for yi in y]
    piv = next(c for c in z if c != 0)
    return [c / piv for c in z]


def _proj_eq(u, v) -> bool:
    iu = next(i for i, c in enumerate(u) if c != 0)
    iv = next(i for i, c in enumerate(v) if c != 0)
    return iu == iv and all(a * v[iv] == b * u[iu] for a, b in zip(u, v))


@crit(8, "orbit closed form equals exact iteration for j <= 50; classification matches (N-1)/N")
def test_c8_orbits_grid(grid):
    for e in grid.entries:
        f = e.p.f
        for i in range(f.d + 1):
            n_sing = next((n for n in range(1, 51) if f.a[i] == Fraction(n - 1, n)), None)
            assert (i in e.p.cls.S) == (n_sing is not None), e.key
            x = [f.a[i] - (1 if r == i else 0) for r in range(f.d + 1)]
            for j in range(1, (n_sing or 50) + 1):
                assert _proj_eq(list(orbit_point(f, i, j).coords), x), (e.key, i, j)
                if sum(1 for c in x if c == 0) >= 2:
                    break
                x = _plain_f(f.a, x)
            if n_sing is not None:
                assert orbit_point(f, i, n_sing) == ProjPoint.unit(i, f.d)
                assert e.p.cls.length(i) == n_sing


# -- 9 ----------------------------------------------------------------------------------

def _numpy_direction(M):
    A = np.array([[float(v) for v in row] for row in M.to_rows()])
    w, V = np.linalg.eig(A)
    k = int(np.argmax(np.where(np.abs(w.imag) < 1e-9, w.real, -np.inf)))
    v = np.real(V[:, k])
    return v / np.linalg.norm(v)


@crit(9, "Cesaro averages converge to the eigendirection: error < 1e-3 at N = 1000, exponent in [-1.3, -0.7]")
def test_c9_cesaro(d4):
    t0 = time.perf_counter()
    _, M, ck = fixture_p3_cubic()
    runs = [
        cesaro(M, lam=ck["lambda"], m=jordan_index(M, ck["lambda"]), target=_numpy_direction(M)),
        cesaro(d4.M, lam=d4.sp.lam, m=jordan_index(d4.M, d4.sp.lam), target=_numpy_direction(d4.M)),
    ]
    elapsed = time.perf_counter() - t0
    for run in runs:
        assert run.N_values[-1] == 1000
        assert run.errors[-1] < 1e-3
        assert -1.3 <= run.fitted_decay_exponent <= -0.7
        assert errors_monotone(run)
    assert elapsed < 30


# -- 10 ---------------------------------------------------------------------------------

@crit(10, "squaring-map example: pointwise identity on 1e6 samples, volume non-convergence, < 1 min")
def test_c10_squaring_map():
    t0 = time.perf_counter()
    rep = squaring_map(n_max=20, samples=1_000_000, seed=0)
    elapsed = time.perf_counter() - t0
    assert rep.samples == 1_000_000
    assert rep.max_identity_error <= 1e-12
    assert rep.containment_ok
    ok = rep.nonconvergence_ok(5, 20)
    assert ok["stable"], ok
    assert ok["bounded_below"], ok
    assert elapsed < 60


# -- 11 ---------------------------------------------------------------------------------

@crit(11, "condition (star) trend on the d = 4 example: monotone decrease over n in [2, 12]")
def test_c11_star_trend(d4):
    assert star_gate(d4.f, d4.cls, d4.sp, d4.inv).holds
    t0 = time.perf_counter()
    u = build_potential(d4.f, d4.cls, d4.inv)
    rep = l1_trend(d4.f, u, float(d4.sp.lam), n_max=12, samples=100_000, seed=0)
    elapsed = time.perf_counter() - t0
    assert rep.reliable
    assert rep.monotone_decreasing(2, 12), rep.table()
    assert rep.to_json()["label"] == PROXY_LABEL and "not proof" in PROXY_LABEL
    assert elapsed < 120


# -- 12 ---------------------------------------------------------------------------------

def _random_map(rng: random.Random) -> NoetherianMap:
    d = rng.randint(3, 6)
    head = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(d)]
    return NoetherianMap(d, tuple(head) + (2 - sum(head),))


def _random_point(rng: random.Random, d: int) -> ProjPoint:
    return ProjPoint(tuple(Fraction(rng.choice([-1, 1]) * rng.randint(1, 30), rng.randint(1, 30)) for _ in range(d + 1)))


@crit(12, "property suites: J o J, L^2, det L, f o f^-1, field axioms, nf_sign")
def test_c12_map_properties():
    rng = random.Random(12)
    for _ in range(100):
        f = _random_map(rng)
        x = _random_point(rng, f.d)
        assert apply_J(apply_J(x)) == x
        L = sympy.Matrix(f.d + 1, f.d + 1, lambda r, c: f.a[c] - (1 if r == c else 0))
        assert L * L == sympy.eye(f.d + 1)
        assert L.det() == (-1) ** f.d
        y = f(x)
        if y.zero_set():  # f^-1 is defined off the coordinate hyperplanes
            continue
        assert f.inverse_apply(y) == x


FIELDS = [
    Poly([-2, -1, 6, 0, -4, 1]),  # d = 4 example, lambda = (3 + sqrt 17)/2
    Poly([-1, -2, 1]),  # 1 + sqrt 2
    Poly([-2, 0, 0, 1]),  # cube root of 2
    Poly([-1, -1, 0, 1]),  # plastic number
]


def _bases():
    return [largest_real_root(p) for p in FIELDS]


def _elem(rng: random.Random, base) -> NFElement:
    deg = base.modulus.degree
    return NFElement(base, Poly([Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(rng.randint(1, deg))]))


@crit(12, "property suites: J o J, L^2, det L, f o f^-1, field axioms, nf_sign")
def test_c12_field_axioms():
    rng = random.Random(1212)
    bases = _bases()
    for t in range(1000):
        base = bases[t % len(bases)]
        a, b, c = (_elem(rng, base) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a - a == 0 and a * 1 == a
        if not b.is_zero():
            assert nf_arith(nf_arith(a, b, "div"), b, "mul") == a


def _mp_root(p: Poly, approx: float, dps: int) -> mpmath.mpf:
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
    return mpmath.findroot(lambda t: mpmath.polyval(coeffs, t), mpmath.mpf(approx))


@crit(12, "property suites: J o J, L^2, det L, f o f^-1, field axioms, nf_sign")
def test_c12_nf_sign_vs_mpmath():
    rng = random.Random(4242)
    bases = _bases()
    dps = 80
    with mpmath.workdps(dps):
        roots = [_mp_root(b.modulus, float(b), dps) for b in bases]
        for t in range(1000):
            k = t % len(bases)
            base, root = bases[k], roots[k]
            e = _elem(rng, base)
            if t % 10 == 0:
                # near-zero elements: subtract a close rational approximation of e
                approx = Fraction(mpmath.nstr(mpmath.polyval(
                    [mpmath.mpf(c.numerator) / c.denominator for c in reversed(e.repr.coeffs)], root), 25))
                e = e - approx
            if t % 50 == 0:
                e = e - e  # exact zero
            v = mpmath.polyval([mpmath.mpf(c.numerator) / c.denominator for c in reversed(e.repr.coeffs)] or [0], root)
            expected = 0 if abs(v) < mpmath.mpf(10) ** -60 else (1 if v > 0 else -1)
            assert nf_sign(e) == expected, (t, e, v)
