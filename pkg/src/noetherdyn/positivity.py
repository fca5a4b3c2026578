"""Nefness of the invariant class, its non-nef locus, and the condition-(star) gate."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cohmodel import CurveDatum, UnsupportedConfiguration, intersect
from .exactmath import NFElement, exact_str
from .noether import (
    Classification,
    ConsistencyError,
    NoetherianMap,
    ProjPoint,
    indeterminacy_member,
    regularity_report,
    singular_length,
)
from .spectral import InvariantClass, SpectralData


class ContradictionError(ArithmeticError):
    """An exact check contradicted a proven statement at this input."""


@dataclass
class NegativeCurve:
    curve: CurveDatum
    value: NFElement

    def to_json(self, digits: int = 30) -> dict:
        return {
            "curve": self.curve.to_json(),
            "value_exact": exact_str(self.value),
            "value_decimal": self.value.decimal_str(digits),
            "sign": self.value.sign(),
        }


@dataclass
class NefVerdict:
    nef: bool
    certificate: Optional[NegativeCurve] = None
    reason: str = ""
    supporting_inequality: Optional[bool] = None

    def to_json(self, digits: int = 30) -> dict:
        return {
            "nef": self.nef,
            "reason": self.reason,
            "certificate": self.certificate.to_json(digits) if self.certificate else None,
            "c_last_exceeds_one_minus_inv_lambda": self.supporting_inequality,
        }


def _line_through(i1: int, i2: int, n1: int, n2: int, d: int) -> CurveDatum:
    return CurveDatum(
        1,
        {(i1, n1): 1, (i2, n2): 1},
        label=f"line through e_{i1}, e_{i2}",
        zero_coords=frozenset(range(d + 1)) - {i1, i2},
    )


def nef_decide(f: NoetherianMap, cls: Classification, inv: InvariantClass) -> NefVerdict:
    """Nef iff |S| <= 1; otherwise certify with the strict transform of a line through e_i1, e_i2."""
    if len(cls.S) == 0:
        return NefVerdict(True, reason="S is empty: alpha_f = H, the Fubini-Study class")
    if len(cls.S) == 1:
        return NefVerdict(True, reason="|S| = 1: alpha_f is a positive combination of strict transforms of hyperplanes")
    L = NFElement.generator(inv.lam)
    bound = 1 - 1 / L
    supporting = all(inv.c[(i, n)] > bound for i, n in zip(cls.S, cls.N))
    if not supporting:
        raise ContradictionError("c_{i,N_i} > 1 - 1/lambda failed for some singular orbit")
    i1, i2 = cls.S[-2], cls.S[-1]
    n1, n2 = cls.length(i1), cls.length(i2)
    curve = _line_through(i1, i2, n1, n2, f.d)
    value = intersect(inv.cls, curve)
    expected = 1 - inv.c[(i1, n1)] - inv.c[(i2, n2)]
    if not (value == expected):
        raise ConsistencyError("line pairing disagrees with 1 - c_{i1,N} - c_{i2,N}")
    if value.sign() != -1:
        raise ContradictionError(f"alpha_f . line = {value.decimal_str(20)} is not negative although |S| >= 2")
    return NefVerdict(False, NegativeCurve(curve, value), reason="|S| >= 2: alpha_f-negative line", supporting_inequality=True)


@dataclass
class LocusComponent:
    zeros: frozenset  # Sigma_I = {x_i = 0 for i in I}
    certificate: NegativeCurve

    def equations(self) -> str:
        return " = ".join(f"x_{i}" for i in sorted(self.zeros)) + " = 0"

    def to_json(self, digits: int = 30) -> dict:
        return {
            "I": sorted(self.zeros),
            "equations": self.equations(),
            "certificate": self.certificate.to_json(digits),
        }


@dataclass
class NonNefLocus:
    d: int
    components: list
    case_tag: str
    c_N: Optional[NFElement] = None
    checks: dict = field(default_factory=dict)

    def dims(self) -> list[int]:
        return [self.d - len(c.zeros) for c in self.components]

    def to_json(self, digits: int = 30) -> dict:
        out = {
            "case": self.case_tag,
            "components": [c.to_json(digits) for c in self.components],
            "dimensions": self.dims(),
            "checks": dict(self.checks),
        }
        if self.c_N is not None:
            out["c_N"] = {"exact": exact_str(self.c_N), "decimal": self.c_N.decimal_str(digits)}
        return out


def _certify_subspace(
    inv: InvariantClass, points: list[int], N: int, d: int, zeros: frozenset
) -> NegativeCurve:
    """alpha_f-negative curve inside span{e_i : i in points}, through every e_i once."""
    kk = len(points) - 1
    if kk == 1:
        curve = _line_through(points[0], points[1], N, N, d)
    else:
        curve = CurveDatum(
            kk,
            {(i, N): 1 for i in points},
            label=f"degree-{kk} rational normal curve through a general point and e_i, i in {sorted(points)}",
            zero_coords=zeros,
        )
    value = intersect(inv.cls, curve)
    c_N = inv.c[(points[0], N)]
    if not (value == kk - (kk + 1) * c_N):
        raise ConsistencyError("curve pairing disagrees with k - (k+1) c_N")
    if value.sign() != -1:
        raise ContradictionError(f"certificate curve has alpha_f . C = {value.decimal_str(20)} >= 0")
    return NegativeCurve(curve, value)


def nonnef_locus(f: NoetherianMap, cls: Classification, inv: InvariantClass) -> NonNefLocus:
    """Non-nef locus of alpha_f for equal-length singular orbits with 2 <= |S| <= d."""
    d, k = f.d, cls.k
    if not 1 <= k <= d - 1:
        raise UnsupportedConfiguration(f"non-nef locus formula needs 2 <= |S| <= d, got |S| = {k + 1}")
    if not cls.equal_lengths or cls.N[0] < 2:
        raise UnsupportedConfiguration(
            f"non-nef locus formula needs all singular orbits of one common length N >= 2, got N = {list(cls.N)}"
        )
    N = cls.N[0]
    S = sorted(cls.S)
    rest = [i for i in range(d + 1) if i not in cls.S]
    comps = []
    c_N = inv.c[(S[0], N)]
    checks = {}
    if k <= d - 2:
        zeros = frozenset(rest)
        comps.append(LocusComponent(zeros, _certify_subspace(inv, S, N, d, zeros)))
        tag = "k_le_d_minus_2"
    else:
        (r,) = rest
        for i in S:
            zeros = frozenset({i, r})
            pts = [j for j in S if j != i]
            comps.append(LocusComponent(zeros, _certify_subspace(inv, pts, N, d, zeros)))
        tag = "k_eq_d_minus_1"
        checks["c_N_equals_(d-1)/d"] = c_N == Fraction(d - 1, d)
        if not checks["c_N_equals_(d-1)/d"]:
            raise ContradictionError("c_N != (d-1)/d in the k = d-1 case")
    locus = NonNefLocus(d, comps, tag, c_N, checks)
    dims = locus.dims()
    checks["dimension_bounds"] = all(1 <= x <= d - 2 for x in dims)
    checks["curves_inside_components"] = all(c.zeros <= c.certificate.curve.zero_coords for c in comps)
    if not checks["dimension_bounds"] or not checks["curves_inside_components"]:
        raise ConsistencyError(f"locus structure check failed: {checks}")
    return locus


def _sample_in(zeros: frozenset, d: int, rng: random.Random) -> ProjPoint:
    coords = []
    for i in range(d + 1):
        if i in zeros:
            coords.append(Fraction(0))
        else:
            coords.append(Fraction(rng.randint(1, 97), rng.randint(1, 97)) * rng.choice((1, -1)))
    return ProjPoint(tuple(coords))


def check_Enn_in_indeterminacy(locus: NonNefLocus, samples: int = 100, seed: int = 0) -> dict:
    """Each Sigma_I with |I| >= 2 lies in I_f; confirmed on sampled rational points."""
    rng = random.Random(seed)
    out = {"components": [], "ok": True}
    for comp in locus.components:
        size_ok = len(comp.zeros) >= 2
        hits = sum(indeterminacy_member(_sample_in(comp.zeros, locus.d, rng)) for _ in range(samples))
        ok = size_ok and hits == samples
        out["components"].append({"I": sorted(comp.zeros), "codim_ok": size_ok, "sampled": samples, "indeterminate": hits})
        out["ok"] = out["ok"] and ok
    if not out["ok"]:
        raise ContradictionError(f"non-nef locus component outside the indeterminacy locus: {out}")
    return out


@dataclass
class StarGate:
    holds: bool
    reason: str
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "status": "Holds" if self.holds else "NotApplicable",
            "reason": self.reason,
            "checks": dict(self.checks),
            "conclusion": (
                "condition (star): lambda^-n v_min o f^n -> 0 in L^1, certified by the algebraic criterion"
                if self.holds
                else None
            ),
        }


def star_gate(
    f: NoetherianMap, cls: Classification, spectral: SpectralData, inv: Optional[InvariantClass]
) -> StarGate:
    if not cls.S:
        return StarGate(True, "S is empty: alpha_f is nef (Kahler), so the potential is bounded")
    if spectral.degenerate or not spectral.simple:
        return StarGate(False, "lambda must be a simple eigenvalue > 1")
    zero_params = [i for i in cls.S if f.a[i] == 0]
    checks = {"a_i_nonzero_on_S": not zero_params}
    lam_ok = spectral.lam.compare(f.d - 1) >= 0
    checks["lambda_ge_d_minus_1"] = lam_ok
    if inv is not None:
        total = NFElement(inv.lam, 0)
        for i in cls.S:
            total = total + inv.c[(i, 1)]
        checks["sum_c_first_le_1"] = total <= 1
    if zero_params:
        return StarGate(False, f"a_i = 0 for i in {zero_params}", checks)
    if not lam_ok:
        return StarGate(False, "lambda < d - 1: the bound deg C (1 - (d - lambda)) >= 0 fails", checks)
    if len(cls.S) == 1:
        return StarGate(True, "|S| = 1: alpha_f is nef", checks)
    return StarGate(True, "a_i != 0 on S and lambda >= d - 1", checks)


def kdm1_witness(d: int, n_max: int = 24) -> Optional[NoetherianMap]:
    """Smallest-N map with |S| = d, all lengths equal and the last parameter non-singular.

    The singular parameters are (N-1)/N; the remaining one is forced by the
    sum to 2 - d(N-1)/N and must not be of the form (M-1)/M itself.
    """
    for N in range(2, n_max + 1):
        rest = 2 - d * Fraction(N - 1, N)
        if singular_length(rest) is not None:
            continue
        f = NoetherianMap(d, tuple([Fraction(N - 1, N)] * d + [rest]))
        if regularity_report(f, horizon=50).ok:
            return f
    return None
