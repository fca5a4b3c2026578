"""Monte Carlo probes of condition (star) with divisor potentials, and the squaring-map example.

Nothing here proves (star); the potentials are explicit proxies built from a
hyperplane representation of the invariant class and the reports say so.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exactmath import nullspace
from .noether import Classification, NoetherianMap, orbit_point
from .spectral import InvariantClass

UNDERFLOW = 1e-12
BLOCK = 10_000
PROXY_LABEL = "divisor-representation proxy potential (not v_min); trend is corroboration, not proof"


class PotentialError(ValueError):
    pass


class PipelineError(RuntimeError):
    pass


@dataclass
class DivisorPotential:
    terms: list  # (weight, unit-norm coefficient vector)
    d: int
    label: str = PROXY_LABEL

    def __post_init__(self):
        for w, form in self.terms:
            if w <= 0:
                raise PotentialError("weights must be positive")
            if not np.any(np.asarray(form) != 0):
                raise PotentialError("linear forms must be nonzero")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """u(x) = sum w log(|l(x)| / |x|) for rows x of a complex array; u <= 0."""
        x = np.atleast_2d(x)
        norms = np.linalg.norm(x, axis=1)
        out = np.zeros(x.shape[0])
        for w, form in self.terms:
            out += w * np.log(np.abs(x @ np.asarray(form)) / norms)
        return out

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "weights": [w for w, _ in self.terms],
            "forms": [[float(c) for c in form] for _, form in self.terms],
        }


def _hyperplane(points: list, avoid: list, d: int) -> list:
    """Least-index null-space vector through ``points`` that misses every point of ``avoid``."""
    rows = [list(p.coords) for p in points]
    basis = nullspace(rows) if rows else [[Fraction(int(k == j)) for k in range(d + 1)] for j in range(d + 1)]
    if not basis:
        raise PotentialError("hyperplane system is singular: the points span P^d")

    def ok(v):
        return all(sum(a * b for a, b in zip(v, p.coords)) != 0 for p in avoid)

    for v in basis:
        if ok(v):
            return v
    # small deterministic integer combinations of the basis
    for t in range(1, 50):
        for lead in range(len(basis)):
            v = [sum((t ** k if k != lead else 1) * b[c] for k, b in enumerate(basis)) for c in range(d + 1)]
            if any(v) and ok(v):
                return v
    raise PotentialError("no hyperplane through the level set avoids the other centers")


def build_potential(f: NoetherianMap, cls: Classification, inv: InvariantClass) -> DivisorPotential:
    """alpha_f = sum_l c_l {H_l}, H_l the hyperplane through p_{i,l}, i in S."""
    if not cls.S:
        raise PotentialError("S is empty: alpha_f = H and no exceptional representation is needed")
    if not cls.equal_lengths:
        raise PotentialError("the hyperplane representation needs equal singular orbit lengths")
    N = cls.N[0]
    centers = {l: [orbit_point(f, i, l) for i in cls.S] for l in range(1, N + 1)}
    terms = []
    for l in range(1, N + 1):
        others = [p for ll, pts in centers.items() if ll != l for p in pts]
        v = np.array([float(c) for c in _hyperplane(centers[l], others, f.d)])
        w = float(inv.c[(cls.S[0], l)])
        terms.append((w, v / np.linalg.norm(v)))
    return DivisorPotential(terms, f.d)


# -- sampling ---------------------------------------------------------------------

def fs_sample(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """Fubini-Study-uniform points: normalized complex Gaussian vectors."""
    z = rng.standard_normal((n, d + 1)) + 1j * rng.standard_normal((n, d + 1))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def map_step(f: NoetherianMap, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One step of f = L o J on unit representatives; also returns the rows near I_f."""
    bad = np.any(np.abs(x) < UNDERFLOW * np.linalg.norm(x, axis=1, keepdims=True), axis=1)
    safe = np.where(bad[:, None], 1.0, x)
    y = 1.0 / safe
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    L = np.array([[float(v) for v in f.L().row(r)] for r in range(f.d + 1)])
    z = y @ L.T
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z, bad


@dataclass
class SamplingReport:
    n_values: list
    estimates: list
    std_errors: list
    sample_count: int
    seed: int
    dropped: int
    label: str = PROXY_LABEL
    notes: list = field(default_factory=list)

    @property
    def reliable(self) -> bool:
        return self.dropped / max(self.sample_count, 1) < 0.01

    def monotone_decreasing(self, lo: int = 2, hi: Optional[int] = None) -> bool:
        vals = [e for n, e in zip(self.n_values, self.estimates) if n >= lo and (hi is None or n <= hi)]
        return all(b < a for a, b in zip(vals, vals[1:]))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "n": list(self.n_values),
            "estimate": list(self.estimates),
            "std_error": list(self.std_errors),
            "samples": self.sample_count,
            "seed": self.seed,
            "dropped": self.dropped,
            "reliable": self.reliable,
            "notes": list(self.notes),
        }

    def table(self) -> str:
        lines = [f"{'n':>4}  {'mean |u o f^n| / lambda^n':>26}  {'std err':>10}"]
        lines += [f"{n:>4}  {e:26.6e}  {s:10.2e}" for n, e, s in zip(self.n_values, self.estimates, self.std_errors)]
        lines.append(f"samples={self.sample_count} dropped={self.dropped} seed={self.seed}  [{self.label}]")
        return "\n".join(lines)


def _block_sums(args) -> tuple:
    f, u, lam, n_max, size, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    x = fs_sample(rng, size, f.d)
    keep = np.ones(size, dtype=bool)
    vals = np.zeros((n_max + 1, size))
    with np.errstate(divide="ignore", invalid="ignore"):
        for n in range(n_max + 1):
            if n > 0:
                x, bad = map_step(f, x)
                keep &= ~bad
            vals[n] = np.abs(u(x)) / lam ** n if u.terms else 0.0
    keep &= np.all(np.isfinite(vals), axis=0)
    kept = vals[:, keep]
    return kept.sum(axis=1), (kept ** 2).sum(axis=1), int(keep.sum()), int(size - keep.sum())


def _blocks(samples: int, seed: int):
    sizes = [BLOCK] * (samples // BLOCK) + ([samples % BLOCK] if samples % BLOCK else [])
    return zip(sizes, np.random.SeedSequence(seed).spawn(len(sizes)))


def l1_trend(
    f: NoetherianMap,
    u: DivisorPotential,
    lam: float,
    n_max: int = 12,
    samples: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> SamplingReport:
    """Sample means of |lam^-n u(f^n x)| for n = 0..n_max over FS-uniform x."""
    if lam <= 1:
        raise PotentialError("lambda must exceed 1")
    jobs = [(f, u, float(lam), n_max, size, ss) for size, ss in _blocks(samples, seed)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_block_sums, jobs))
    else:
        parts = [_block_sums(j) for j in jobs]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    kept = sum(p[2] for p in parts)
    dropped = sum(p[3] for p in parts)
    mean = s1 / max(kept, 1)
    var = np.maximum(s2 / max(kept, 1) - mean ** 2, 0.0)
    se = np.sqrt(var / max(kept - 1, 1))
    rep = SamplingReport(list(range(n_max + 1)), mean.tolist(), se.tolist(), samples, seed, dropped)
    if not rep.reliable:
        rep.notes.append("more than 1% of orbits dropped near the indeterminacy locus: report unreliable")
    return rep


def telescoping_selftest(
    f: NoetherianMap, u: DivisorPotential, lam: float, n: int = 10, samples: int = 1000, seed: int = 0
) -> float:
    """Max |u(x) - sum_{i<n} lam^-i gamma(f^i x) - lam^-n u(f^n x)| with gamma = u - u o f / lam."""
    rng = np.random.default_rng(seed)
    x = fs_sample(rng, samples, f.d)
    orbit = [x]
    keep = np.ones(samples, dtype=bool)
    for _ in range(n):
        x, bad = map_step(f, x)
        keep &= ~bad
        orbit.append(x)
    if not u.terms:
        return 0.0
    uvals = [u(p[keep]) for p in orbit]
    total = np.zeros(int(keep.sum()))
    for i in range(n):
        gamma = uvals[i] - uvals[i + 1] / lam
        total += gamma / lam ** i
    resid = uvals[0] - total - uvals[n] / lam ** n
    worst = float(np.max(np.abs(resid))) if resid.size else 0.0
    if worst > 1e-9:
        raise PipelineError(f"telescoping residual {worst:.3e} exceeds 1e-9")
    return worst


# -- squaring map on the blow-up of P^2 at [1:0:0] ------------------------------------

@dataclass
class SquaringMapReport:
    n_values: list
    volumes: list
    std_errors: list
    chart_volume: float
    chart_std_error: float
    max_identity_error: float
    containment_ok: bool
    direct_check_max_error: float
    samples: int
    seed: int

    def nonconvergence_ok(self, n_a: int = 5, n_b: int = 20) -> dict:
        ia, ib = self.n_values.index(n_a), self.n_values.index(n_b)
        diff = abs(self.volumes[ia] - self.volumes[ib])
        comb = math.hypot(self.std_errors[ia], self.std_errors[ib])
        floor = all(v >= self.chart_volume - 3 * math.hypot(s, self.chart_std_error)
                    for v, s in zip(self.volumes, self.std_errors))
        return {"stable": diff < 3 * comb, "bounded_below": floor, "difference": diff, "combined_se": comb}

    def to_json(self) -> dict:
        return {
            "n": list(self.n_values),
            "volume_value_below_minus_1": list(self.volumes),
            "std_error": list(self.std_errors),
            "chart_volume_s_below_inv_e": self.chart_volume,
            "chart_std_error": self.chart_std_error,
            "exact_chart_volume": math.exp(-2),
            "max_identity_error": self.max_identity_error,
            "direct_squaring_max_error": self.direct_check_max_error,
            "containment_ok": self.containment_ok,
            "samples": self.samples,
            "seed": self.seed,
        }


def _polydisc(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    r = np.sqrt(rng.random((n, 2)))
    th = 2 * np.pi * rng.random((n, 2))
    z = r * np.exp(1j * th)
    return z[:, 0], z[:, 1]


def squaring_map(n_max: int = 20, samples: int = 1_000_000, seed: int = 0) -> SquaringMapReport:
    """f_X(s, eta) = (s^2, eta^2) in the chart [1:s:s eta]; v_min = log|s|.

    log|s_n| = 2^n log|s| is tracked in log-polar form (multiplying by 2^n is
    exact in binary floating point) and cross-checked against direct complex
    squaring while |s_n| stays representable.  Each n gets its own samples so
    the volumes at different n are independent estimates.
    """
    seeds = np.random.SeedSequence(seed).spawn(n_max + 2)
    rng = np.random.default_rng(seeds[0])
    s, _ = _polydisc(rng, samples)
    log_s = np.log(np.abs(s))
    worst = 0.0
    direct_worst = 0.0
    sn = s.copy()
    log_sn = log_s.copy()
    contained = True
    inner = log_s < -1
    for n in range(1, n_max + 1):
        log_sn = 2.0 * log_sn
        value = log_sn / 2.0 ** n
        worst = max(worst, float(np.max(np.abs(value - log_s))))
        contained = contained and bool(np.all(value[inner] < -1))
        sn = sn * sn
        ok = np.abs(sn) > 1e-250
        if np.any(ok):
            direct = np.log(np.abs(sn[ok])) / 2.0 ** n
            direct_worst = max(direct_worst, float(np.max(np.abs(direct - log_s[ok]))))
    if worst > 1e-12:
        raise PipelineError(f"pointwise identity violated by {worst:.3e}")
    chart = float(np.mean(inner))
    chart_se = math.sqrt(chart * (1 - chart) / samples)
    ns, vols, ses = [], [], []
    for n in range(1, n_max + 1):
        s_n, _ = _polydisc(np.random.default_rng(seeds[n + 1]), samples)
        value = (2.0 ** n * np.log(np.abs(s_n))) / 2.0 ** n
        p = float(np.mean(value < -1))
        ns.append(n)
        vols.append(p)
        ses.append(math.sqrt(p * (1 - p) / samples))
    return SquaringMapReport(ns, vols, ses, chart, chart_se, worst, contained, direct_worst, samples, seed)


def squaring_map_point(s: complex, n: int) -> float:
    """(1/2^n) v_min(f_X^n(s, eta)) for a single point, via log-polar iteration."""
    return (2.0 ** n * math.log(abs(s))) / 2.0 ** n
