"""Runners for the fixed examples: the P^3 cubic map, the squaring-map blow-up and the Y-model."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .asymptotics import jordan_index
from .cohmodel import build_Y_model, fixture_blowup_invariant, fixture_p3_cubic
from .exactmath import NFElement, Poly, char_poly, exact_str, format_rational, largest_real_root, root_multiplicity
from .noether import NoetherianMap, classify
from .spectral import closed_form_c, closed_form_charpoly, eigenvector

Y_DEFAULT = "1/2,1/2,2/5,3/5"


def run_p3cubic(digits: int = 30) -> dict:
    model, M, ck = fixture_p3_cubic()
    checks = {
        "charpoly_is_x4-x3-3x2+x+2": ck["charpoly_matches"],
        "lambda_is_2": ck["lambda_is_2"],
        "lambda_simple": ck["lambda_multiplicity"] == 1,
        "pullback_H-E0-E23_is_H-E0+E23": ck["pullback_identity"],
        "E23_dot_sigma_is_-1": ck["E23_dot_sigma"] == -1,
        "pulled_class_negative_on_sigma": ck["not_in_E1"],
        "jordan_index_is_1": jordan_index(M, ck["lambda"]) == 1,
    }
    return {
        "fixture": "p3cubic",
        "model": model.to_json(),
        "matrix": M.to_json(),
        "charpoly": ck["charpoly"].pretty(),
        "lambda": ck["lambda"].to_json(digits),
        "pullback_of_H-E0-E23": [format_rational(x) for x in ck["pullback_class"].coeffs],
        "pulled_dot_sigma": format_rational(ck["pulled_dot_sigma"]),
        "E1_violation": ck["not_in_E1"],
        "checks": checks,
        "ok": all(checks.values()),
    }


def run_blowup_invariant(lam: int = 2) -> dict:
    model, M, flags = fixture_blowup_invariant(lam)
    chi = char_poly(M)
    root = largest_real_root(chi)
    checks = {
        "matrix_is_diag": M.to_rows() == [[lam, 0], [0, lam]],
        "jordan_index_is_1": jordan_index(M, root) == 1,
        "E_dot_E_is_-1": flags["E_dot_E"] == -1,
        "E_not_in_nef_invariant_cone": not flags["E_in_nef_invariant_cone"],
    }
    return {
        "fixture": "blowup-invariant",
        "model": model.to_json(),
        "matrix": M.to_json(),
        "lambda": format_rational(Fraction(lam)),
        "E_is_psef": flags["E_is_psef"],
        "E_dot_E": format_rational(flags["E_dot_E"]),
        "checks": checks,
        "ok": all(checks.values()),
    }


def y_model_data(f: NoetherianMap) -> dict:
    cls = classify(f)
    model, M = build_Y_model(f, cls)
    chi = closed_form_charpoly(f.d, cls.l, cls.N)
    p = char_poly(M)
    lam = largest_real_root(p)
    L = NFElement.generator(lam)
    c = closed_form_c(lam, cls)
    v = eigenvector(M, lam)
    expected = [NFElement(lam, 1)] + [-c[(i, j)] for i in sorted(cls.S) for j in range(1, cls.N[0] + 1)] + [-1 / L]
    N = cls.N[0]
    sigma = 1 - c[(cls.S[0], N)]
    k = len(cls.S) - 1
    return {
        "model": model,
        "matrix": M,
        "charpoly": p,
        "chi": chi,
        "lambda": lam,
        "eigenvector": v,
        "sigma": sigma,
        "checks": {
            "charpoly_is_x_times_chi": p == Poly.x() * chi,
            "lambda_simple": root_multiplicity(p, lam) == 1,
            "eigenvector_is_H-cE-F/lambda": len(v) == len(expected) and all(a == b for a, b in zip(v, expected)),
            "one_minus_2sigma_is_inv_lambda": 1 - 2 * sigma == 1 / L,
            "one_minus_sigma(k+1)_is_(d-k-1)/lambda": 1 - sigma * (k + 1) == Fraction(f.d - k - 1) / L,
        },
    }


def run_y_model(a: Optional[str] = None, digits: int = 30) -> dict:
    f = NoetherianMap.parse(a or Y_DEFAULT)
    data = y_model_data(f)
    lam = data["lambda"]
    checks = dict(data["checks"])
    if a is None:
        # lambda = 1 + sqrt 2 for the default instance
        checks["lambda_is_1+sqrt2"] = lam.is_root_of(Poly([-1, -2, 1])) and lam.compare(2) > 0
    return {
        "fixture": "y-model",
        "input": f.to_json(),
        "model": data["model"].to_json(),
        "matrix": data["matrix"].to_json(),
        "charpoly": data["charpoly"].pretty(),
        "chi": data["chi"].pretty(),
        "lambda": lam.to_json(digits),
        "eigenvector_exact": [exact_str(x) for x in data["eigenvector"]],
        "sigma": {"exact": exact_str(data["sigma"]), "decimal": data["sigma"].decimal_str(digits)},
        "checks": checks,
        "ok": all(checks.values()),
    }
