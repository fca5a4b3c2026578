"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 configuration outside the supported
branches, 3 internal contradiction (an exact check failed).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from .asymptotics import UnsupportedCesaro, cesaro, errors_monotone, growth_check, jordan_index
from .cohmodel import ModelError, UnsupportedConfiguration, build_pullback, fixture_p3_cubic
from .config import AnalysisConfig
from .exactmath import exact_str
from .fixtures import run_blowup_invariant, run_p3cubic, run_y_model
from .grid import enumerate_grid, verify_config
from .noether import (
    DEFAULT_HORIZON,
    ConfigurationError,
    ConsistencyError,
    NoetherianMap,
    classify,
    orbit,
    regularity_report,
)
from .positivity import ContradictionError, check_Enn_in_indeterminacy, nef_decide, nonnef_locus, star_gate
from .potentials import PipelineError, PotentialError, build_potential, l1_trend, squaring_map, telescoping_selftest
from .spectral import UnsupportedError, closed_form_charpoly, dynamical_degree, invariant_class

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_CONTRADICTION = 0, 1, 2, 3


class Unsupported(Exception):
    """Raised with a partial report when a hypothesis of the theory fails."""

    def __init__(self, reason: str, report: Optional[dict] = None):
        super().__init__(reason)
        self.report = report


class Contradiction(Exception):
    def __init__(self, reason: str, report: Optional[dict] = None):
        super().__init__(reason)
        self.report = report


# -- the analysis pipeline ------------------------------------------------------------

def analyze_map(
    f: NoetherianMap,
    horizon: int = DEFAULT_HORIZON,
    digits: int = 30,
    sampling: bool = True,
    seed: int = 0,
    samples: int = 20_000,
    n_max: int = 12,
    N_max: int = 1000,
) -> dict:
    """classify -> regularity -> pullback -> spectral -> invariant class -> nef -> locus -> star."""
    timings = {}
    rep: dict = {"input": f.to_json()}

    def stage(name):
        timings[name] = time.perf_counter()

    def done(name):
        timings[name] = round(time.perf_counter() - timings[name], 6)

    stage("classify")
    cls = classify(f)
    rep["classification"] = cls.to_json()
    done("classify")

    stage("regularity")
    reg = regularity_report(f, horizon)
    rep["regularity"] = reg.to_json()
    done("regularity")
    if not reg.ok:
        raise Contradiction("regularity checks failed: " + "; ".join(reg.failures), rep)

    stage("model")
    model, M = build_pullback(f, cls)
    rep["model"] = {"basis": list(model.basis), "matrix": M.to_json()}
    done("model")

    stage("spectral")
    closed = closed_form_charpoly(f.d, cls.l, cls.N) if cls.S else None
    sp = dynamical_degree(M, f.d, cls.l, closed)
    rep["spectral"] = sp.to_json(digits)
    done("spectral")
    if sp.closed_form_match is False:
        raise Contradiction("closed-form characteristic polynomial disagrees with the pullback matrix", rep)
    if sp.degenerate:
        raise Unsupported("lambda <= 1: the positivity analysis needs lambda > 1 (d - l >= 3 hypothesis)", rep)
    if not sp.simple:
        raise Unsupported("lambda is not a simple eigenvalue; the invariant class is not unique", rep)

    stage("invariant_class")
    inv = invariant_class(model, M, sp.lam, cls, f.d)
    rep["invariant_class"] = inv.to_json(digits)
    rep["jordan_index"] = jordan_index(M, sp.lam)
    done("invariant_class")
    if not all(inv.identities.values()):
        raise Contradiction(f"identity failure: {inv.identities}", rep)

    stage("positivity")
    verdict = nef_decide(f, cls, inv)
    rep["nef"] = verdict.to_json(digits)
    if verdict.nef:
        rep["nonnef_locus"] = {"empty": True}
    else:
        try:
            locus = nonnef_locus(f, cls, inv)
            rep["nonnef_locus"] = locus.to_json(digits)
            rep["nonnef_locus"]["indeterminacy_check"] = check_Enn_in_indeterminacy(locus, seed=seed)
        except UnsupportedConfiguration as exc:
            rep["nonnef_locus"] = {"unsupported": str(exc)}
    gate = star_gate(f, cls, sp, inv)
    rep["star_gate"] = gate.to_json()
    done("positivity")

    stage("cesaro")
    run = cesaro(M, lam=sp.lam, N_max=N_max, m=rep["jordan_index"], target=[float(x) for x in inv.cls.coeffs])
    rep["cesaro"] = run.to_json()
    rep["cesaro"]["monotone_after_20"] = errors_monotone(run)
    rep["growth"] = growth_check(M, lam=sp.lam, m=rep["jordan_index"]).to_json()
    done("cesaro")

    if sampling:
        stage("sampling")
        rep["sampling"] = star_sampling(f, cls, inv, float(sp.lam), samples, n_max, seed)
        done("sampling")
    rep["timings"] = timings
    return rep


def star_sampling(f, cls, inv, lam: float, samples: int, n_max: int, seed: int) -> dict:
    try:
        u = build_potential(f, cls, inv)
    except PotentialError as exc:
        return {"skipped": str(exc)}
    trend = l1_trend(f, u, lam, n_max, samples, seed)
    out = trend.to_json()
    out["potential"] = u.to_json()
    out["monotone_decreasing_2_to_n_max"] = trend.monotone_decreasing(2, n_max)
    out["telescoping_residual"] = telescoping_selftest(f, u, lam, min(n_max, 10), 1000, seed)
    return out


# -- rendering ------------------------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def emit(args, obj) -> None:
    print(dump_json(obj) if args.json else render_text(obj))


# -- commands -------------------------------------------------------------------------

def _parse_map(text: Optional[str]) -> NoetherianMap:
    if not text:
        raise ConfigurationError("--a is required (comma-separated rationals r0,...,rd)")
    return NoetherianMap.parse(text)


def cmd_analyze(args) -> int:
    f = _parse_map(args.a)
    cfg = AnalysisConfig(args.horizon, args.precision, not args.no_sampling, args.seed, args.samples, args.n_max,
                         args.N_max)
    rep = analyze_map(f, **cfg.as_kwargs())
    emit(args, rep)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.name == "p3cubic":
        rep = run_p3cubic(args.precision)
    elif args.name == "blowup-invariant":
        rep = run_blowup_invariant(args.lam)
    else:
        try:
            rep = run_y_model(args.a, args.precision)
        except UnsupportedConfiguration as exc:
            raise Unsupported(str(exc))
    emit(args, rep)
    return EXIT_OK if rep["ok"] else EXIT_CONTRADICTION


def cmd_grid_verify(args) -> int:
    rows, skipped, degenerate = [], [], []
    failed = None
    for cfg in enumerate_grid(args.d_max, args.n_max):
        if cfg.skipped:
            skipped.append({"config": cfg.key, "reason": cfg.skipped})
            continue
        res = verify_config(cfg)
        row = {"config": cfg.key, "a": [str(x) for x in cfg.a], "checks": res.checks}
        if not res.checks.get("lambda_gt_1_simple", True):
            degenerate.append(cfg.key)
            # lambda <= 1: the c identities are undefined, only the charpoly equality applies
            row["ok"] = all(v for k, v in res.checks.items() if k != "lambda_gt_1_simple")
        else:
            row["ok"] = res.ok
        rows.append(row)
        if not row["ok"] and failed is None:
            failed = row
    rep = {
        "d_max": args.d_max,
        "n_max": args.n_max,
        "verified": len(rows),
        "passed": sum(r["ok"] for r in rows),
        "degenerate_lambda_le_1": degenerate,
        "skipped": skipped,
        "configurations": rows,
    }
    if args.json:
        print(dump_json(rep))
    else:
        for r in rows:
            print(f"{'PASS' if r['ok'] else 'FAIL'}  {r['config']:<28} a=({', '.join(r['a'])})")
        for s in skipped:
            print(f"SKIP  {s['config']:<28} {s['reason']}")
        for k in degenerate:
            print(f"NOTE  {k}: lambda <= 1, class identities not applicable")
        print(f"{rep['passed']}/{rep['verified']} configurations pass, {len(skipped)} skipped")
    if failed is not None:
        print(f"offending configuration: {failed['config']} {failed['checks']}", file=sys.stderr)
        return EXIT_CONTRADICTION
    return EXIT_OK


def cmd_cesaro(args) -> int:
    if args.fixture == "p3cubic":
        from .spectral import eigenvector

        _, M, ck = fixture_p3_cubic()
        lam = ck["lambda"]
        target = [float(x) for x in eigenvector(M, lam)]
        label = "p3cubic"
    else:
        f = _parse_map(args.a)
        cls = classify(f)
        model, M = build_pullback(f, cls)
        sp = dynamical_degree(M, f.d, cls.l)
        if sp.degenerate or not sp.simple:
            raise Unsupported("Cesaro analysis needs a simple lambda > 1")
        lam = sp.lam
        target = [float(x) for x in invariant_class(model, M, lam, cls, f.d).cls.coeffs]
        label = args.a
    m = jordan_index(M, lam)
    run = cesaro(M, lam=lam, N_max=args.N_max, m=m, target=target)
    rep = {"input": label, "jordan_index": m, "lambda": lam.to_json(args.precision), **run.to_json()}
    rep["monotone_after_20"] = errors_monotone(run)
    if args.json:
        print(dump_json(rep))
    else:
        print(f"Cesaro averages for {label} (m = {m}, lambda ~ {lam.decimal_str(12)})")
        print(run.table())
    return EXIT_OK


def cmd_star(args) -> int:
    if args.squaring_map:
        rep_sq = squaring_map(args.n_max if args.n_max else 20, args.samples, args.seed)
        rep = {"example": "squaring map on Bl_[1:0:0] P^2", **rep_sq.to_json(), "nonconvergence": rep_sq.nonconvergence_ok()}
        emit(args, rep)
        return EXIT_OK
    f = _parse_map(args.a)
    cls = classify(f)
    model, M = build_pullback(f, cls)
    sp = dynamical_degree(M, f.d, cls.l)
    if sp.degenerate or not sp.simple:
        raise Unsupported("condition (star) analysis needs a simple lambda > 1")
    inv = invariant_class(model, M, sp.lam, cls, f.d)
    gate = star_gate(f, cls, sp, inv)
    rep = {"input": f.to_json(), "star_gate": gate.to_json()}
    rep["sampling"] = star_sampling(f, cls, inv, float(sp.lam), args.samples, args.n_max or 12, args.seed)
    if args.json:
        print(dump_json(rep))
    else:
        print(f"star gate: {rep['star_gate']['status']} ({gate.reason})")
        s = rep["sampling"]
        if "skipped" in s:
            print(f"sampling skipped: {s['skipped']}")
        else:
            for n, e, se in zip(s["n"], s["estimate"], s["std_error"]):
                print(f"{n:>4}  {e:14.6e}  +- {se:.1e}")
            print(f"[{s['label']}]")
    return EXIT_OK


def cmd_orbits(args) -> int:
    f = _parse_map(args.a)
    recs = [orbit(f, i, args.horizon) for i in range(f.d + 1)]
    reg = regularity_report(f, args.horizon)
    rep = {
        "input": f.to_json(),
        "classification": classify(f).to_json(),
        "orbits": [r.to_json() if args.full else {"index": r.index, "status": r.status} for r in recs],
        "regularity": reg.to_json(),
    }
    if args.json:
        print(dump_json(rep))
    else:
        for r in recs:
            tail = " -> ".join(str(p) for p in r.points[:4]) + (" ..." if len(r.points) > 4 else "")
            print(f"orbit {r.index}: {r.status:<22} {tail}")
        print("regularity:", "ok" if reg.ok else "; ".join(reg.failures))
        for note in reg.notes:
            print("note:", note)
    return EXIT_OK if reg.ok else EXIT_CONTRADICTION


# -- argument parsing -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    def d(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON instead of text")
    p.add_argument("--precision", type=int, default=d(30), help="decimal digits for rendered irrationals")
    p.add_argument("--seed", type=int, default=d(0), help="master seed for all sampling")
    p.add_argument("--horizon", type=int, default=d(DEFAULT_HORIZON), help="orbit verification horizon")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noetherdyn", description="Dynamics of Noetherian maps f = L o J on P^d.")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="full pipeline for one parameter vector")
    _globals(p, True)
    p.add_argument("--a", required=True, help='parameters "r0,...,rd" as p/q rationals summing to 2')
    p.add_argument("--no-sampling", action="store_true")
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--n-max", dest="n_max", type=int, default=12)
    p.add_argument("--N-max", dest="N_max", type=int, default=1000)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fixtures", help="run a fixed example with all checks")
    _globals(p, True)
    p.add_argument("name", choices=["p3cubic", "blowup-invariant", "y-model"])
    p.add_argument("--a", help="parameters for the y-model (default 1/2,1/2,2/5,3/5)")
    p.add_argument("--lam", type=int, default=2, help="degree for blowup-invariant")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("grid-verify", help="closed-form charpoly and identities over a grid")
    _globals(p, True)
    p.add_argument("--d-max", dest="d_max", type=int, default=6)
    p.add_argument("--n-max", dest="n_max", type=int, default=4)
    p.set_defaults(func=cmd_grid_verify)

    p = sub.add_parser("cesaro", help="Cesaro averages of the pullback")
    _globals(p, True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--a")
    g.add_argument("--fixture", choices=["p3cubic"])
    p.add_argument("--N-max", dest="N_max", type=int, default=1000)
    p.set_defaults(func=cmd_cesaro)

    p = sub.add_parser("star", help="condition (star): gate and Monte Carlo trend")
    _globals(p, True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--a")
    g.add_argument("--squaring-map", "--example43", dest="squaring_map", action="store_true", help="squaring map on the blow-up of P^2 at a point")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("orbits", help="orbit statuses of the collapsed points")
    _globals(p, True)
    p.add_argument("--a", required=True)
    p.add_argument("--full", action="store_true", help="include every orbit point")
    p.set_defaults(func=cmd_orbits)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: --help or a usage error
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Unsupported, UnsupportedConfiguration, UnsupportedError, UnsupportedCesaro, PotentialError) as exc:
        report = getattr(exc, "report", None)
        if report is not None:
            emit(args, {**report, "unsupported": str(exc)})
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (Contradiction, ContradictionError, ConsistencyError, ModelError, PipelineError) as exc:
        report = getattr(exc, "report", None)
        if report is not None:
            emit(args, {**report, "contradiction": str(exc)})
        print(f"contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION


if __name__ == "__main__":
    sys.exit(main())
