"""Monte Carlo L1 trend of the proxy potential along the orbit (corroboration only)."""

import argparse

from noetherdyn.cohmodel import build_pullback
from noetherdyn.config import SamplingConfig
from noetherdyn.noether import NoetherianMap, classify
from noetherdyn.positivity import star_gate
from noetherdyn.potentials import build_potential, l1_trend, telescoping_selftest
from noetherdyn.spectral import dynamical_degree, invariant_class


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="1/2,1/2,1/3,1/5,7/15")
    ap.add_argument("--samples", type=int, default=SamplingConfig.samples)
    ap.add_argument("--n-max", type=int, default=SamplingConfig.n_max)
    ap.add_argument("--seed", type=int, default=SamplingConfig.seed)
    ap.add_argument("--workers", type=int, default=SamplingConfig.workers)
    args = ap.parse_args()
    cfg = SamplingConfig(args.samples, args.n_max, args.seed, args.workers)

    f = NoetherianMap.parse(args.a)
    cls = classify(f)
    model, M = build_pullback(f, cls)
    sp = dynamical_degree(M, f.d, cls.l)
    inv = invariant_class(model, M, sp.lam, cls, f.d)
    gate = star_gate(f, cls, sp, inv)
    print(f"star gate: {'Holds' if gate.holds else 'NotApplicable'} ({gate.reason})")
    u = build_potential(f, cls, inv)
    lam = float(sp.lam)
    print(f"telescoping residual: {telescoping_selftest(f, u, lam, seed=cfg.seed):.2e}")
    rep = l1_trend(f, u, lam, cfg.n_max, cfg.samples, cfg.seed, cfg.workers)
    print(rep.table())
    print(f"monotone decreasing on [2, {cfg.n_max}]: {rep.monotone_decreasing(2, cfg.n_max)}")


if __name__ == "__main__":
    main()
