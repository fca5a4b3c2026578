"""Cesaro averages on the P^3 cubic fixture and the d = 4 example: error table and decay exponent."""

import argparse

from noetherdyn.asymptotics import cesaro, errors_monotone, jordan_index
from noetherdyn.cohmodel import build_pullback, fixture_p3_cubic
from noetherdyn.config import CesaroConfig
from noetherdyn.noether import NoetherianMap, classify
from noetherdyn.spectral import dynamical_degree, eigenvector

D4 = "1/2,1/2,1/3,1/5,7/15"


def report(label, M, lam, cfg):
    target = [float(x) for x in eigenvector(M, lam)]
    run = cesaro(M, lam=lam, N_max=cfg.N_max, m=jordan_index(M, lam), target=target, schedule=cfg.schedule)
    print(f"== {label}: lambda ~ {lam.decimal_str(15)}")
    print(run.table())
    print(f"monotone for N >= 20 (slack 2): {errors_monotone(run)}\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N-max", type=int, default=CesaroConfig.N_max)
    cfg = CesaroConfig(ap.parse_args().N_max)
    _, M, ck = fixture_p3_cubic()
    report("P^3 cubic", M, ck["lambda"], cfg)
    f = NoetherianMap.parse(D4)
    cls = classify(f)
    _, M4 = build_pullback(f, cls)
    report("d = 4 example", M4, dynamical_degree(M4, f.d, cls.l).lam, cfg)


if __name__ == "__main__":
    main()
