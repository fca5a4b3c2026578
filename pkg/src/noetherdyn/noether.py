"""Noetherian maps f = L o J on P^d: exact evaluation, indeterminacy and orbits."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactmath import RationalMatrix, format_rational, parse_rational

DEFAULT_HORIZON = 100


class ConfigurationError(ValueError):
    """Invalid map parameters (wrong sum, d < 3, malformed input)."""


class ConsistencyError(ArithmeticError):
    """An exact cross-check failed; indicates a bug or a contradicted hypothesis."""


class _Indeterminate:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INDETERMINATE"

    def __bool__(self):
        return False


INDETERMINATE = _Indeterminate()


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^d with canonical homogeneous coordinates (first nonzero entry is 1)."""

    coords: tuple

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coords)
        pivot = next((c for c in cs if c != 0), None)
        if pivot is None:
            raise ValueError("all homogeneous coordinates vanish")
        if pivot != 1:
            cs = tuple(c / pivot for c in cs)
        object.__setattr__(self, "coords", cs)

    @classmethod
    def of(cls, *coords) -> "ProjPoint":
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction)):
            coords = tuple(coords[0])
        return cls(tuple(coords))

    @classmethod
    def unit(cls, i: int, d: int) -> "ProjPoint":
        return cls(tuple(1 if j == i else 0 for j in range(d + 1)))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def zero_set(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self.coords) if c == 0)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coords]

    def __str__(self) -> str:
        return "[" + ":".join(format_rational(c) for c in self.coords) + "]"


def indeterminacy_member(x: ProjPoint) -> bool:
    """x lies in I_f, the union of coordinate subspaces with at least two zeros."""
    return len(x.zero_set()) >= 2


def apply_J(x: ProjPoint):
    """Coordinatewise reciprocal, written with the products of the other coordinates."""
    cs = x.coords
    if indeterminacy_member(x):
        return INDETERMINATE
    out = []
    for j in range(len(cs)):
        prod = Fraction(1)
        for i, c in enumerate(cs):
            if i != j:
                prod *= c
        out.append(prod)
    return ProjPoint(tuple(out))


def singular_length(a: Fraction) -> Optional[int]:
    """N with a = (N-1)/N, i.e. 1 - a = 1/N for a positive integer N; else None."""
    t = 1 - Fraction(a)
    if t > 0 and t.numerator == 1:
        return t.denominator
    return None


@dataclass(frozen=True)
class NoetherianMap:
    d: int
    a: tuple

    def __post_init__(self):
        a = tuple(Fraction(x) for x in self.a)
        object.__setattr__(self, "a", a)
        if self.d < 3:
            raise ConfigurationError(f"dimension d={self.d} is below the supported range d >= 3")
        if len(a) != self.d + 1:
            raise ConfigurationError(f"expected d+1={self.d + 1} parameters, got {len(a)}")
        if sum(a) != 2:
            raise ConfigurationError(f"parameters must sum to 2, got {format_rational(sum(a))}")

    @classmethod
    def from_params(cls, a: Sequence) -> "NoetherianMap":
        vals = [parse_rational(x) if isinstance(x, str) else Fraction(x) for x in a]
        return cls(len(vals) - 1, tuple(vals))

    @classmethod
    def parse(cls, text: str) -> "NoetherianMap":
        try:
            vals = [parse_rational(t) for t in text.split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(f"malformed rational list {text!r}: {exc}") from exc
        return cls(len(vals) - 1, tuple(vals))

    def L(self) -> RationalMatrix:
        n = self.d + 1
        return RationalMatrix(n, n, [self.a[c] - (1 if r == c else 0) for r in range(n) for c in range(n)])

    def apply_L(self, y: Sequence[Fraction]) -> tuple:
        s = sum((ai * yi for ai, yi in zip(self.a, y)), Fraction(0))
        return tuple(s - yi for yi in y)

    def __call__(self, x: ProjPoint):
        return evaluate(self, x)

    def inverse_apply(self, x: ProjPoint):
        """f^{-1} = J o L."""
        return apply_J(ProjPoint(self.apply_L(x.coords)))

    def p(self, i: int) -> ProjPoint:
        """Image of the collapsed hypersurface Sigma_i: the i-th column of L."""
        return ProjPoint(tuple(self.a[i] - (1 if r == i else 0) for r in range(self.d + 1)))

    def to_json(self) -> dict:
        return {"d": self.d, "a": [format_rational(x) for x in self.a]}


def evaluate(f: NoetherianMap, x: ProjPoint):
    """f(x) = L(J(x)) in canonical form, or INDETERMINATE on I_f."""
    jx = apply_J(x)
    if jx is INDETERMINATE:
        return INDETERMINATE
    return ProjPoint(f.apply_L(jx.coords))


def orbit_point(f: NoetherianMap, i: int, j: int) -> ProjPoint:
    """Closed form p_{i,j}: all ones except j(a_i - 1)/(j a_i - (j - 1)) in slot i."""
    a = f.a[i]
    den = j * a - (j - 1)
    if den == 0:
        return ProjPoint.unit(i, f.d)
    v = j * (a - 1) / den
    return ProjPoint(tuple(v if r == i else 1 for r in range(f.d + 1)))


@dataclass(frozen=True)
class OrbitRecord:
    index: int
    singular: bool
    length: int  # N_i when singular, otherwise the verified horizon
    points: tuple

    @property
    def status(self) -> str:
        return f"Singular({self.length})" if self.singular else f"NonsingularUpTo({self.length})"

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "status": "singular" if self.singular else "nonsingular_up_to",
            "length" if self.singular else "horizon": self.length,
            "points": [p.to_json() for p in self.points],
        }


def orbit(f: NoetherianMap, i: int, horizon: int = DEFAULT_HORIZON) -> OrbitRecord:
    """Iterate p_i exactly, cross-checking every point against the closed form."""
    if not 0 <= i <= f.d:
        raise ValueError(f"index {i} out of range 0..{f.d}")
    if horizon < 1:
        raise ValueError("horizon must be positive")
    n_sing = singular_length(f.a[i])
    limit = n_sing if n_sing is not None else horizon
    pts = []
    pt = f.p(i)
    for j in range(1, limit + 1):
        expected = orbit_point(f, i, j)
        if pt != expected:
            raise ConsistencyError(f"orbit {i}: iterate {j} is {pt}, closed form gives {expected}")
        pts.append(pt)
        if indeterminacy_member(pt):
            if n_sing != j or pt != ProjPoint.unit(i, f.d):
                raise ConsistencyError(f"orbit {i} entered I_f at step {j} at {pt}")
            return OrbitRecord(i, True, j, tuple(pts))
        if j < limit:
            pt = evaluate(f, pt)
    if n_sing is not None:
        raise ConsistencyError(f"orbit {i} should be singular of length {n_sing} but avoided I_f")
    return OrbitRecord(i, False, horizon, tuple(pts))


@dataclass(frozen=True)
class Classification:
    """Singular orbit data; ``S`` is listed in normalized order (N ascending, then index)."""

    S: tuple
    N: tuple
    l: int

    @property
    def k(self) -> int:
        return len(self.S) - 1

    def length(self, i: int) -> int:
        return self.N[self.S.index(i)]

    @property
    def equal_lengths(self) -> bool:
        return len(set(self.N)) <= 1

    def to_json(self) -> dict:
        return {"S": list(self.S), "N": list(self.N), "l": self.l, "k": self.k}


def classify(f: NoetherianMap) -> Classification:
    pairs = []
    for i, ai in enumerate(f.a):
        n = singular_length(ai)
        if n is not None:
            pairs.append((n, i))
    pairs.sort()
    l = sum(1 for n, i in pairs if f.a[i] == 0)
    return Classification(tuple(i for _, i in pairs), tuple(n for n, _ in pairs), l)


@dataclass
class RegularityReport:
    horizon: int
    orbits: list
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def raise_for_failure(self) -> None:
        if self.failures:
            raise ConsistencyError("; ".join(self.failures))

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "ok": self.ok,
            "checks": dict(self.checks),
            "failures": list(self.failures),
            "notes": list(self.notes),
            "orbits": [
                {"index": o.index, "status": o.status, "singular_proved_exactly": o.singular}
                for o in self.orbits
            ],
        }


def regularity_report(f: NoetherianMap, horizon: int = DEFAULT_HORIZON) -> RegularityReport:
    """Desk-scale checks of the orbit facts the blow-up model relies on.

    (a) singular orbits end exactly at e_i; (b) nonsingular orbits avoid I_f up
    to the horizon; (c) orbits are pairwise disjoint and singular orbits have
    distinct points.  Nonsingular orbits are only verified up to ``horizon``.
    """
    orbits = [orbit(f, i, horizon) for i in range(f.d + 1)]
    rep = RegularityReport(horizon, orbits)
    a_ok = all(o.points[-1] == ProjPoint.unit(o.index, f.d) for o in orbits if o.singular)
    b_ok = all(not indeterminacy_member(p) for o in orbits if not o.singular for p in o.points)
    if not a_ok:
        rep.failures.append("a singular orbit does not terminate at its coordinate point")
    if not b_ok:
        rep.failures.append("a nonsingular orbit meets the indeterminacy locus")
    seen: dict = {}
    c_ok = True
    for o in orbits:
        local = set()
        for j, p in enumerate(o.points, start=1):
            if p in local and o.singular:
                c_ok = False
                rep.failures.append(f"orbit {o.index} repeats the point {p} (a blow-up center)")
            local.add(p)
            if p in seen and seen[p][0] != o.index:
                c_ok = False
                rep.failures.append(f"orbits {seen[p][0]} and {o.index} collide at {p}")
            seen.setdefault(p, (o.index, j))
        if not o.singular and len(local) < len(o.points):
            rep.notes.append(f"orbit {o.index} is periodic (a_{o.index} = 1 gives a fixed point)")
    rep.checks = {
        "singular_orbits_end_at_e_i": a_ok,
        "nonsingular_avoid_indeterminacy": b_ok,
        "orbits_disjoint_and_distinct": c_ok,
    }
    if not any(o.singular for o in orbits):
        rep.notes.append("S is empty: check (a) is vacuous")
    return rep
