"""Cesaro averages of the pullback, Jordan index of the dominant eigenvalue, growth diagnostics."""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .exactmath import AlgebraicNumber, NFElement, RationalMatrix, rank
from .spectral import nf_matrix_minus_lambda

DEFAULT_SCHEDULE = (10, 20, 50, 100, 200, 500, 1000)
DECIMAL_DIGITS = 40


class UnsupportedCesaro(ValueError):
    pass


def _nf_matmul(A: list, B: list, zero: NFElement) -> list:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = zero
            for t in range(k):
                if not A[i][t].is_zero() and not B[t][j].is_zero():
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def jordan_index(M: RationalMatrix, lam: AlgebraicNumber) -> int:
    """Size of the largest Jordan block for lam: first k where rank (M - lam)^k stabilizes."""
    A = nf_matrix_minus_lambda(M, lam)
    zero = NFElement(lam, 0)
    prev = rank(A)
    if prev == M.rows:
        raise ValueError("lambda is not an eigenvalue of the matrix")
    power = A
    k = 1
    while True:
        power = _nf_matmul(power, A, zero)
        r = rank(power)
        if r == prev:
            return k
        prev, k = r, k + 1


def _lambda_decimal(lam: Union[AlgebraicNumber, float, Fraction, int]) -> Decimal:
    if isinstance(lam, AlgebraicNumber):
        return Decimal(lam.decimal_str(DECIMAL_DIGITS))
    if isinstance(lam, Fraction):
        return Decimal(lam.numerator) / Decimal(lam.denominator)
    return Decimal(repr(lam)) if isinstance(lam, float) else Decimal(lam)


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


@dataclass
class CesaroRun:
    N_values: list
    directions: list
    errors: list
    fitted_decay_exponent: Optional[float]
    target: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "N": list(self.N_values),
            "error": [float(e) for e in self.errors],
            "direction": [[float(x) for x in d] for d in self.directions],
            "target_direction": [float(x) for x in self.target],
            "fitted_decay_exponent": self.fitted_decay_exponent,
        }

    def table(self) -> str:
        lines = [f"{'N':>6}  {'error':>12}"]
        lines += [f"{n:>6}  {e:12.4e}" for n, e in zip(self.N_values, self.errors)]
        if self.fitted_decay_exponent is not None:
            lines.append(f"fitted decay exponent: {self.fitted_decay_exponent:.4f}")
        return "\n".join(lines)


def fit_exponent(N: Sequence[int], err: Sequence[float]) -> Optional[float]:
    pts = [(np.log(n), np.log(e)) for n, e in zip(N, err) if e > 0]
    if len(pts) < 2:
        return None
    x, y = np.array(pts).T
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def cesaro(
    M: RationalMatrix,
    beta: Optional[Sequence] = None,
    N_max: int = 1000,
    lam: Union[AlgebraicNumber, float, Fraction, int] = None,
    m: int = 1,
    target: Optional[Sequence] = None,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
) -> CesaroRun:
    """Normalized Lambda_N beta for N on a logarithmic schedule up to N_max.

    M^n beta is exact; division by n^(m-1) lam^n and the running sum are done
    in 40-digit decimals (lam^n overflows a double well before n = 1000) and
    converted to floats once per reported N.
    """
    lam_d = _lambda_decimal(lam)
    if lam_d <= 1:
        raise UnsupportedCesaro("Cesaro averages need lambda > 1")
    n_dim = M.rows
    beta = [Fraction(1 if k == 0 else 0) for k in range(n_dim)] if beta is None else [Fraction(b) for b in beta]
    Ns = sorted({n for n in schedule if n <= N_max} | {N_max})
    tgt = _unit(np.array([float(x) for x in target])) if target is not None else None
    dirs, errs = [], []
    with decimal.localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        acc = [Decimal(0)] * n_dim
        v = beta
        lam_pow = Decimal(1)
        for n in range(1, N_max + 1):
            v = M.apply(v)
            lam_pow *= lam_d
            scale = lam_pow * (Decimal(n) ** (m - 1))
            for k in range(n_dim):
                x = v[k]
                acc[k] += (Decimal(x.numerator) / Decimal(x.denominator)) / scale
            if n in Ns:
                vec = _unit(np.array([float(a / n) for a in acc]))
                if tgt is not None:
                    if np.dot(vec, tgt) < 0:
                        vec = -vec
                    errs.append(float(np.linalg.norm(vec - tgt)))
                dirs.append(vec.tolist())
    slope = fit_exponent(Ns, errs) if errs else None
    return CesaroRun(Ns, dirs, errs, slope, tgt.tolist() if tgt is not None else [])


def errors_monotone(run: CesaroRun, start: int = 20, slack: float = 2.0) -> bool:
    """Nonincreasing errors from N >= start, allowing each step to grow by at most ``slack``."""
    errs = [e for n, e in zip(run.N_values, run.errors) if n >= start]
    return all(b <= slack * a for a, b in zip(errs, errs[1:]))


@dataclass
class GrowthReport:
    ratios: list
    c1: float
    c2: float
    ok: bool
    m: int

    def to_json(self) -> dict:
        return {"m": self.m, "c1": self.c1, "c2": self.c2, "ok": self.ok, "ratios": list(self.ratios)}


def growth_check(
    M: RationalMatrix,
    v: Optional[Sequence] = None,
    lam: Union[AlgebraicNumber, float, Fraction, int] = None,
    m: int = 1,
    n_max: int = 60,
    slack: float = 1e3,
) -> GrowthReport:
    """Ratios ||M^n v|| / (n^(m-1) lam^n), n = 1..n_max, and their bounding constants."""
    lam_d = _lambda_decimal(lam)
    v = [Fraction(1 if k == 0 else 0) for k in range(M.rows)] if v is None else [Fraction(x) for x in v]
    ratios = []
    with decimal.localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        lam_pow = Decimal(1)
        for n in range(1, n_max + 1):
            v = M.apply(v)
            lam_pow *= lam_d
            sq = sum((Decimal(x.numerator) / Decimal(x.denominator)) ** 2 for x in v)
            ratios.append(float(sq.sqrt() / (lam_pow * Decimal(n) ** (m - 1))))
    c1, c2 = min(ratios), max(ratios)
    ok = c1 > 0 and c2 / c1 <= slack
    return GrowthReport(ratios, c1, c2, ok, m)
