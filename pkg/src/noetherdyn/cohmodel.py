"""Blow-up cohomology models: bases, pullback matrices, classes and curve pairings.

Matrix convention: column ``j`` holds the coordinates of the pullback of basis
element ``j``, so applying the matrix to a coordinate vector pulls the class back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactmath import RationalMatrix, char_poly, largest_real_root, root_multiplicity, Poly
from .noether import (
    Classification,
    NoetherianMap,
    ProjPoint,
    classify,
    orbit_point,
)


class ModelError(ValueError):
    """The blow-up model cannot be built (colliding centers, mismatched data)."""


class UnsupportedConfiguration(ValueError):
    """A configuration outside the branches the theory covers."""


def p_label(i: int, j: int) -> str:
    return f"P[{i},{j}]"


@dataclass(frozen=True)
class BlowupModel:
    d: int
    basis: tuple
    centers: tuple = ()  # (label, ProjPoint) per exceptional divisor

    def __post_init__(self):
        if len(set(self.basis)) != len(self.basis):
            raise ModelError("duplicate basis labels")
        seen = {}
        for label, pt in self.centers:
            if pt in seen:
                raise ModelError(f"blow-up centers {seen[pt]} and {label} coincide at {pt}")
            seen[pt] = label

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        return self.basis.index(label)

    def slot(self, i: int, j: int) -> int:
        return self.basis.index(p_label(i, j))

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "basis": list(self.basis),
            "centers": [{"label": label, "point": p.to_json()} for label, p in self.centers],
        }


@dataclass(frozen=True)
class DivisorClass:
    model: BlowupModel
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.model.dim:
            raise ModelError("coefficient vector length does not match the model dimension")

    @classmethod
    def hyperplane(cls, model: BlowupModel) -> "DivisorClass":
        return cls(model, tuple(Fraction(1 if k == 0 else 0) for k in range(model.dim)))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if other.model != self.model:
            raise ModelError("classes over different models")
        return DivisorClass(self.model, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "DivisorClass":
        return DivisorClass(self.model, tuple(x * c for x in self.coeffs))

    def coefficient(self, label: str):
        return self.coeffs[self.model.index(label)]


@dataclass(frozen=True)
class CurveDatum:
    """A curve through blow-up centers, or a fixture curve with a tabulated pairing.

    ``mults`` maps (i, j) to the multiplicity at the center of P[i,j].  When
    ``table`` is given it lists the intersection number with every basis label
    and overrides degree/mults.  ``zero_coords`` records coordinates vanishing
    on the curve's span, for containment checks against coordinate subspaces.
    """

    degree: int
    mults: dict = field(default_factory=dict)
    label: str = ""
    table: Optional[dict] = None
    zero_coords: frozenset = frozenset()

    def pairing(self, model: BlowupModel) -> list:
        if self.table is not None:
            missing = set(model.basis) - set(self.table)
            if missing:
                raise ModelError(f"fixture table lacks {sorted(missing)}")
            return [Fraction(self.table[b]) for b in model.basis]
        out = [Fraction(0)] * model.dim
        out[0] = Fraction(self.degree)
        for (i, j), m in self.mults.items():
            label = p_label(i, j)
            if label not in model.basis:
                raise ModelError(f"curve passes through {label}, which is not a center of the model")
            out[model.index(label)] = Fraction(m)
        return out

    def to_json(self) -> dict:
        out = {"label": self.label, "degree": self.degree}
        if self.mults:
            out["mults"] = {p_label(i, j): m for (i, j), m in sorted(self.mults.items())}
        if self.table is not None:
            out["table"] = {k: int(v) if Fraction(v).denominator == 1 else str(v) for k, v in self.table.items()}
        if self.zero_coords:
            out["zero_coords"] = sorted(self.zero_coords)
        return out


def intersect(beta: DivisorClass, curve: CurveDatum, model: Optional[BlowupModel] = None):
    """Intersection number of a class with the strict transform of a curve.

    For beta = b0 H - sum b_ij P_ij (coordinates (b0, -b_ij)) and a curve of
    degree e with multiplicities m_ij this is b0 e - sum b_ij m_ij.
    """
    if model is not None and model != beta.model:
        raise ModelError("class and curve belong to different models")
    acc = 0
    for coeff, pair in zip(beta.coeffs, curve.pairing(beta.model)):
        if pair:
            acc = acc + coeff * pair
    return acc


# -- Noetherian maps -------------------------------------------------------------

def model_for(f: NoetherianMap, cls: Optional[Classification] = None, with_F: bool = False) -> BlowupModel:
    cls = cls or classify(f)
    labels = ["H"]
    centers = []
    for i in sorted(cls.S):
        for j in range(1, cls.length(i) + 1):
            labels.append(p_label(i, j))
            centers.append((p_label(i, j), orbit_point(f, i, j)))
    if with_F:
        labels.append("F")
    return BlowupModel(f.d, tuple(labels), tuple(centers))


def build_pullback(f: NoetherianMap, cls: Optional[Classification] = None) -> tuple[BlowupModel, RationalMatrix]:
    """Pullback on H^{1,1} of the blow-up of all singular orbit points.

    f*H = d H - (d-1) sum_{i in S} P[i,N_i];  f*P[i,j+1] = P[i,j];
    f*P[i,1] = H - sum_{j in S, j != i} P[j,N_j].
    """
    cls = cls or classify(f)
    model = model_for(f, cls)
    n = model.dim
    cols = [[Fraction(0)] * n for _ in range(n)]
    d = f.d
    cols[0][0] = Fraction(d)
    for i in cls.S:
        cols[0][model.slot(i, cls.length(i))] = Fraction(-(d - 1))
    for i in cls.S:
        Ni = cls.length(i)
        for j in range(1, Ni):
            cols[model.slot(i, j + 1)][model.slot(i, j)] = Fraction(1)
        col = cols[model.slot(i, 1)]
        col[0] = Fraction(1)
        for other in cls.S:
            if other != i:
                col[model.slot(other, cls.length(other))] = Fraction(-1)
    return model, RationalMatrix.from_columns(cols)


def build_Y_model(f: NoetherianMap, cls: Optional[Classification] = None) -> tuple[BlowupModel, RationalMatrix]:
    """X further blown up along the line spanned by the two coordinate points e_i, i in S.

    Supported only for d = 3, |S| = 2 and N_0 = N_1 = N >= 2.
    """
    cls = cls or classify(f)
    if f.d != 3 or len(cls.S) != 2 or not cls.equal_lengths or cls.N[0] < 2:
        raise UnsupportedConfiguration(
            "the Y-model is available only for d = 3 with two singular orbits of equal length N >= 2; "
            f"got d={f.d}, |S|={len(cls.S)}, N={list(cls.N)}"
        )
    model = model_for(f, cls, with_F=True)
    n = model.dim
    N = cls.N[0]
    cols = [[Fraction(0)] * n for _ in range(n)]
    fi = model.index("F")
    cols[0][0] = Fraction(3)
    for i in cls.S:
        cols[0][model.slot(i, N)] = Fraction(-2)
    cols[0][fi] = Fraction(-1)
    for i in cls.S:
        for j in range(1, N):
            cols[model.slot(i, j + 1)][model.slot(i, j)] = Fraction(1)
        # the strict transform of Sigma_i meets the blown-up line in one point only
        col = cols[model.slot(i, 1)]
        col[0] = Fraction(1)
        other = next(o for o in cls.S if o != i)
        col[model.slot(other, N)] = Fraction(-1)
    # f_Y^* F = 0: column stays zero
    return model, RationalMatrix.from_columns(cols)


def rederive_columns(f: NoetherianMap, model: BlowupModel, cls: Classification) -> dict:
    """Symbolic pullback of each basis label as {label: {label: coeff}} (for round-trip tests)."""
    out = {}
    d = f.d
    out["H"] = {"H": d, **{p_label(i, cls.length(i)): -(d - 1) for i in cls.S}}
    for i in cls.S:
        Ni = cls.length(i)
        for j in range(1, Ni):
            out[p_label(i, j + 1)] = {p_label(i, j): 1}
        out[p_label(i, 1)] = {"H": 1, **{p_label(o, cls.length(o)): -1 for o in cls.S if o != i}}
    return out


# -- fixed examples ----------------------------------------------------------------

P3_CUBIC_MATRIX = [[3, 1, 1, 1], [-2, 0, -1, -1], [-1, -1, -1, 0], [-1, -1, 0, -1]]
P3_CUBIC_CHARPOLY = Poly([2, 1, -3, -1, 1])


def fixture_p3_cubic() -> tuple[BlowupModel, RationalMatrix, dict]:
    """The P^3 map [(x0+x3)x1x2 : (x2+x3)x0x1 : (x1+x3)x0x2 : (x1+x2)x0x3] on X = Bl_{e0,e23,e13}."""
    model = BlowupModel(
        3,
        ("H", "E0", "E23", "E13"),
        (
            ("E0", ProjPoint.of(1, 0, 0, 0)),
            ("E23", ProjPoint.of(0, 0, 1, 1)),
            ("E13", ProjPoint.of(0, 1, 0, 1)),
        ),
    )
    M = RationalMatrix.from_rows(P3_CUBIC_MATRIX)
    chi = char_poly(M)
    lam = largest_real_root(chi)
    alpha = DivisorClass(model, tuple(Fraction(v) for v in (1, -1, -1, 0)))
    pulled = DivisorClass(model, tuple(M.apply(list(alpha.coeffs))))
    expected = DivisorClass(model, tuple(Fraction(v) for v in (1, -1, 1, 0)))
    # generic line sigma inside E23: only E23 pairs nontrivially
    sigma = CurveDatum(0, label="generic line in E23", table={"H": 0, "E0": 0, "E23": -1, "E13": 0})
    checks = {
        "charpoly": chi,
        "charpoly_matches": chi == P3_CUBIC_CHARPOLY,
        "lambda": lam,
        "lambda_is_2": lam.is_exact and lam.lo == 2,
        "lambda_multiplicity": root_multiplicity(chi, lam),
        "pullback_identity": pulled == expected,
        "pullback_class": pulled,
        "E23_dot_sigma": intersect(DivisorClass(model, (0, 0, 1, 0)), sigma),
        "pulled_dot_sigma": intersect(pulled, sigma),
    }
    checks["not_in_E1"] = checks["pulled_dot_sigma"] < 0
    return model, M, checks


def fixture_blowup_invariant(lam: int = 2) -> tuple[BlowupModel, RationalMatrix, dict]:
    """P^2 blown up at a totally invariant point of a degree-lam holomorphic map."""
    if lam < 2:
        raise ValueError("degree must be at least 2")
    model = BlowupModel(2, ("H", "E"))
    M = RationalMatrix.diagonal([lam, lam])
    E = DivisorClass(model, (Fraction(0), Fraction(1)))
    E_curve = CurveDatum(0, label="exceptional curve E", table={"H": 0, "E": -1})
    flags = {
        "E_is_psef": True,
        "E_dot_E": intersect(E, E_curve),
        "E_in_nef_invariant_cone": False,
    }
    flags["E_in_nef_invariant_cone"] = flags["E_dot_E"] >= 0
    return model, M, flags
