"""Enumeration of realizable parameter configurations and the batch oracle checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .cohmodel import build_pullback
from .noether import NoetherianMap, classify, orbit, regularity_report, singular_length
from .spectral import closed_form_charpoly, dynamical_degree, invariant_class

# generic fill values; none is of the form (N-1)/N
FILL = [Fraction(1, 7), Fraction(2, 11), Fraction(3, 13), Fraction(-1, 5), Fraction(5, 17), Fraction(-2, 9),
        Fraction(4, 19), Fraction(1, 23)]


@dataclass
class GridConfig:
    d: int
    lengths: tuple  # requested singular lengths, ascending
    a: Optional[tuple] = None
    skipped: Optional[str] = None

    @property
    def key(self) -> str:
        return f"d={self.d} N={list(self.lengths)}"


def _fill(d: int, lengths: tuple) -> Optional[tuple]:
    sing = [Fraction(n - 1, n) for n in lengths]
    free = d + 1 - len(sing)
    rest = 2 - sum(sing)
    if free == 0:
        return tuple(sing) if rest == 0 else None
    for shift in range(len(FILL)):
        vals = [FILL[(shift + t) % len(FILL)] for t in range(free - 1)]
        vals.append(rest - sum(vals))
        if any(singular_length(v) is not None for v in vals):
            continue
        f = NoetherianMap(d, tuple(sing + vals))
        if regularity_report(f, horizon=50).ok:
            return f.a
    return None


def enumerate_grid(d_max: int = 6, n_max: int = 4, d_min: int = 3) -> Iterator[GridConfig]:
    """Every multiset of singular lengths in 1..n_max for 3 <= d <= d_max, filled deterministically."""
    for d in range(d_min, d_max + 1):
        for size in range(0, d + 2):
            for lengths in itertools.combinations_with_replacement(range(1, n_max + 1), size):
                cfg = GridConfig(d, lengths)
                l = lengths.count(1)
                if d - l < 3:
                    cfg.skipped = f"d - l = {d - l} < 3"
                    yield cfg
                    continue
                a = _fill(d, lengths)
                if a is None:
                    cfg.skipped = "no regular filling with these singular lengths"
                else:
                    cfg.a = a
                yield cfg


@dataclass
class GridResult:
    config: GridConfig
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def verify_config(cfg: GridConfig, orbit_depth: int = 50) -> GridResult:
    f = NoetherianMap(cfg.d, cfg.a)
    cls = classify(f)
    res = GridResult(cfg)
    res.checks["classification_matches"] = tuple(sorted(cls.N)) == cfg.lengths
    res.checks["orbit_closed_form"] = all(orbit(f, i, orbit_depth) is not None for i in range(f.d + 1))
    model, M = build_pullback(f, cls)
    closed = closed_form_charpoly(f.d, cls.l, cls.N) if cls.S else None
    sp = dynamical_degree(M, f.d, cls.l, closed)
    if closed is not None:
        res.checks["closed_form_charpoly"] = bool(sp.closed_form_match)
    res.checks["lambda_gt_1_simple"] = not sp.degenerate and sp.simple
    if cls.S and res.checks["lambda_gt_1_simple"]:
        inv = invariant_class(model, M, sp.lam, cls, f.d)
        res.checks.update(inv.identities)
    return res
