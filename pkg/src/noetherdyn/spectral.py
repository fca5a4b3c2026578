"""Dynamical degree, closed-form characteristic polynomial and the invariant class."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .cohmodel import BlowupModel, DivisorClass, p_label
from .exactmath import (
    AlgebraicNumber,
    NFElement,
    Poly,
    RationalMatrix,
    char_poly,
    exact_str,
    isolate_real_roots,
    nullspace,
    root_multiplicity,
    squarefree_part,
    sturm_count,
)
from .noether import Classification, ConsistencyError

COMPLEX_TOL = 1e-9


class UnsupportedError(ValueError):
    pass


def closed_form_charpoly(d: int, l: int, N: Sequence[int]) -> Poly:
    """(x-1)^l [ (x-(d-l)) prod_{j>=l}(x^{N_j}-1) + (x-1) sum_{j>=l} prod_{i>=l, i!=j}(x^{N_i}-1) ]."""
    N = list(N)
    if not N:
        raise UnsupportedError("closed form needs at least one singular orbit; use char_poly on the 1x1 model")
    if N != sorted(N) or any(n != 1 for n in N[:l]) or any(n == 1 for n in N[l:]):
        raise ValueError("N must be ascending with exactly the first l entries equal to 1")
    x = Poly.x()
    facs = [Poly.monomial(n) - 1 for n in N[l:]]
    prod_all = Poly.const(1)
    for q in facs:
        prod_all = prod_all * q
    partial = Poly()
    for j in range(len(facs)):
        term = Poly.const(1)
        for i, q in enumerate(facs):
            if i != j:
                term = term * q
        partial = partial + term
    bracket = (x - (d - l)) * prod_all + (x - 1) * partial
    return (x - 1) ** l * bracket


@dataclass
class SpectralData:
    lam: AlgebraicNumber
    charpoly: Poly
    multiplicity: int
    unique_exact: Optional[bool]  # no other real root outside [-1, 1]
    unique_numeric: Optional[bool]  # all other complex roots have modulus <= 1 + tol
    max_other_modulus: Optional[float]
    closed_form_match: Optional[bool] = None
    bounds_ok: Optional[bool] = None
    degenerate: bool = False
    warnings: list = field(default_factory=list)
    methods: dict = field(default_factory=lambda: {"real_line": "exact", "complex": "numeric"})

    @property
    def simple(self) -> bool:
        return self.multiplicity == 1

    @property
    def unique_modulus_gt1(self) -> Optional[bool]:
        if self.unique_exact is None:
            return None
        return bool(self.unique_exact and self.unique_numeric)

    def to_json(self, digits: int = 30) -> dict:
        out = {
            "lambda": self.lam.to_json(digits),
            "charpoly": self.charpoly.to_json(),
            "charpoly_pretty": self.charpoly.pretty(),
            "multiplicity": self.multiplicity,
            "simple": self.simple,
            "unique_modulus_gt1": self.unique_modulus_gt1,
            "unique_real_exact": self.unique_exact,
            "unique_complex_numeric": self.unique_numeric,
            "max_other_modulus": self.max_other_modulus,
            "methods": dict(self.methods),
            "closed_form_match": self.closed_form_match,
            "bounds_ok": self.bounds_ok,
            "degenerate": self.degenerate,
            "warnings": list(self.warnings),
        }
        return out


def _other_moduli(sqf: Poly, lam_float: float) -> list[float]:
    """Moduli of all complex roots of ``sqf`` except the one at lambda (floating point)."""
    coeffs = [float(c) for c in reversed(sqf.coeffs)]
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
    if len(roots) == 0:
        return []
    k = int(np.argmin(np.abs(roots - lam_float)))
    return [float(abs(r)) for n, r in enumerate(roots) if n != k]


def _other_moduli_mp(sqf: Poly, lam_float: float, dps: int = 60) -> list[float]:
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(sqf.coeffs)]
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        k = min(range(len(roots)), key=lambda n: abs(roots[n] - lam_float))
        return [float(abs(r)) for n, r in enumerate(roots) if n != k]


def dynamical_degree(
    M: RationalMatrix,
    d: Optional[int] = None,
    l: Optional[int] = None,
    closed_form: Optional[Poly] = None,
    tol: float = COMPLEX_TOL,
) -> SpectralData:
    """lambda_1 = largest real root of det(xI - M) with simplicity/uniqueness certificates."""
    chi = char_poly(M)
    roots = isolate_real_roots(chi)
    sqf = squarefree_part(chi)
    (lo, hi), mult = roots[-1]
    lam = AlgebraicNumber(sqf, lo, hi)
    data = SpectralData(lam, chi, mult, None, None, None)
    if closed_form is not None:
        data.closed_form_match = closed_form == chi
    if lam.compare(1) <= 0:
        data.degenerate = True
        data.warnings.append("lambda <= 1: dynamically degenerate, positivity analysis skipped")
        return data
    # real line, exact: lambda must be the only root of sqf above 1 and none may lie below -1
    above = sturm_count(sqf, Fraction(1), None)
    below = sturm_count(sqf, None, Fraction(-1)) - (1 if sqf(Fraction(-1)) == 0 else 0)
    data.unique_exact = above == 1 and below == 0
    lam_f = float(lam)
    others = _other_moduli(sqf, lam_f)
    worst = max(others, default=0.0)
    if worst > 1 + tol:
        others = _other_moduli_mp(sqf, lam_f)
        worst = max(others, default=0.0)
        data.methods["complex"] = "numeric-mp"
    data.max_other_modulus = worst
    data.unique_numeric = worst <= 1 + tol
    if d is not None and l is not None:
        data.bounds_ok = lam.compare(d - l - 1) >= 0 and lam.compare(d) <= 0
        if d - l < 3:
            data.warnings.append(
                f"d - l = {d - l} < 3: uniqueness and simplicity of lambda are not guaranteed by the theory"
            )
    return data


def power_iteration(M: RationalMatrix, iters: int = 200, seed: int = 0) -> float:
    """Floating dominant-eigenvalue estimate from normalized power iteration (Rayleigh quotient)."""
    A = np.array([[float(M[i, j]) for j in range(M.cols)] for i in range(M.rows)])
    v = np.random.default_rng(seed).random(M.rows) + 1.0
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = A @ v
        est = float(np.dot(v, w))
        v = w / np.linalg.norm(w)
    return est


# -- invariant class ---------------------------------------------------------------

def nf_matrix_minus_lambda(M: RationalMatrix, lam: AlgebraicNumber) -> list[list[NFElement]]:
    L = NFElement.generator(lam)
    rows = []
    for i in range(M.rows):
        row = []
        for j in range(M.cols):
            e = NFElement(lam, Poly.const(M[i, j]))
            if i == j:
                e = e - L
            row.append(e)
        rows.append(row)
    return rows


def eigenvector(M: RationalMatrix, lam: AlgebraicNumber, normalize_index: int = 0) -> list[NFElement]:
    """Exact kernel vector of M - lam I over Q(lam), scaled so that entry ``normalize_index`` is 1."""
    rows = nf_matrix_minus_lambda(M, lam)
    one, zero = NFElement(lam, 1), NFElement(lam, 0)
    basis = nullspace(rows, one, zero)
    if len(basis) != 1:
        raise ConsistencyError(f"eigenspace of lambda has dimension {len(basis)}, expected 1")
    v = basis[0]
    pivot = v[normalize_index]
    if pivot == 0:
        raise ConsistencyError("eigenvector has zero H-coordinate; cannot normalize")
    return [x / pivot for x in v]


@dataclass
class InvariantClass:
    cls: DivisorClass
    c: dict  # (i, j) -> NFElement
    lam: AlgebraicNumber
    identities: dict = field(default_factory=dict)

    def c_value(self, i: int, j: int) -> NFElement:
        return self.c[(i, j)]

    def to_json(self, digits: int = 30) -> dict:
        return {
            "basis": list(self.cls.model.basis),
            "coefficients_exact": [exact_str(x) for x in self.cls.coeffs],
            "c": {
                p_label(i, j): {"exact": exact_str(v), "decimal": v.decimal_str(digits)}
                for (i, j), v in sorted(self.c.items())
            },
            "number_field_modulus": self.lam.modulus.to_json(),
            "identities": dict(self.identities),
        }


def closed_form_c(lam: AlgebraicNumber, cls: Classification) -> dict:
    L = NFElement.generator(lam)
    c = {}
    for i, n in zip(cls.S, cls.N):
        c[(i, 1)] = (L - 1) / (L ** n - 1)
        for j in range(1, n):
            c[(i, j + 1)] = L * c[(i, j)]
    return c


def class_identities(d: int, lam: AlgebraicNumber, cls: Classification, c: dict) -> dict:
    L = NFElement.generator(lam)
    one = NFElement(lam, 1)
    id1 = all(c[(i, j + 1)] == L * c[(i, j)] for i, n in zip(cls.S, cls.N) for j in range(1, n))
    total = NFElement(lam, 0)
    for i in cls.S:
        total = total + c[(i, 1)]
    id2 = total == d - L
    id3 = all(c[(i, 1)] == (L - 1) / (L ** n - 1) for i, n in zip(cls.S, cls.N))
    pos = all(c[(i, 1)].sign() > 0 for i in cls.S)
    id4 = True
    for i, n in zip(cls.S, cls.N):
        s = NFElement(lam, 0)
        for j in range(1, n + 1):
            s = s + c[(i, j)]
        id4 = id4 and s == one
    return {
        "c_next_is_lambda_c": id1,
        "sum_c_first_is_d_minus_lambda": id2,
        "c_first_closed_form": id3,
        "c_first_positive": pos,
        "orbit_sum_is_one": id4,
    }


def invariant_class(
    model: BlowupModel, M: RationalMatrix, lam: AlgebraicNumber, cls: Classification, d: int
) -> InvariantClass:
    """alpha_f = H - c.E computed by closed form and by an exact null-space solve, compared exactly."""
    if root_multiplicity(char_poly(M), lam) != 1:
        raise ConsistencyError("lambda is not a simple eigenvalue; the invariant class is not unique")
    c_closed = closed_form_c(lam, cls)
    v = eigenvector(M, lam)
    for (i, j), cij in c_closed.items():
        if not (-v[model.slot(i, j)] == cij):
            raise ConsistencyError(f"closed-form c[{i},{j}] disagrees with the null-space solve")
    coeffs = tuple(v)
    inv = InvariantClass(DivisorClass(model, coeffs), c_closed, lam)
    Mv = M.apply(list(coeffs))
    L = NFElement.generator(lam)
    inv.identities = class_identities(d, lam, cls, c_closed)
    inv.identities["eigen_equation"] = all(a == L * b for a, b in zip(Mv, coeffs))
    inv.identities["charpoly_vanishes_at_lambda"] = NFElement(lam, char_poly(M)).is_zero()
    return inv
