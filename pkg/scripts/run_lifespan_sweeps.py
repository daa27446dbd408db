#!/usr/bin/env python3
"""Lifespan sweep experiment: measure blow-up times over a geometric eps
ladder for the four desk-scale families (n = 1 and n = 2, undamped and with
the canonical polynomial-tail damping), fit the log-log slopes, and compare
against the theoretical upper-bound exponents.

Writes records CSV plus a log-log SVG per family into the output directory.
"""

import argparse
import os
from fractions import Fraction as F

import numpy as np

from blowup_lab.damping import DampingProfile
from blowup_lab.exponents import SystemParams, lifespan_law
from blowup_lab.plotting import PlotSeries, emit_plot, loglog_fit_series
from blowup_lab.simulator import GridConfig, InitialData, lifespan_sweep, write_records_csv

FAMILIES = [
    ("n1_undamped", SystemParams(1, F(2), F(2)), DampingProfile.zero(), 80.0),
    ("n1_damped", SystemParams(1, F(2), F(2)), DampingProfile.polynomial_tail(1.0, 2.0), 100.0),
    ("n2_undamped", SystemParams(2, F(3, 2), F(3, 2)), DampingProfile.zero(), 60.0),
    ("n2_damped", SystemParams(2, F(3, 2), F(3, 2)), DampingProfile.polynomial_tail(1.0, 2.0), 70.0),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/sweeps")
    parser.add_argument("--dr", type=float, default=0.02)
    parser.add_argument("--points", type=int, default=5)
    parser.add_argument("--eps-max", type=float, default=1.0)
    parser.add_argument("--ratio", type=float, default=0.5)
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    eps_list = [args.eps_max * args.ratio ** k for k in range(args.points)]
    data = InitialData(1.0, 0.0, 1.0, 0.0)
    print(f"eps ladder: {[f'{e:g}' for e in eps_list]}")
    for label, params, prof, horizon in FAMILIES:
        grid = GridConfig(dr=args.dr, horizon=horizon)
        sweep = lifespan_sweep(params, (prof, prof), data, grid, eps_list)
        law = lifespan_law(params, data.speed_flags())
        write_records_csv(sweep.records, os.path.join(args.out, f"{label}_records.csv"))
        eps = np.array([r.eps for r in sweep.records])
        ts = np.array([r.t_blow for r in sweep.records])
        fit_series, _ = loglog_fit_series(eps, ts)
        emit_plot(
            [PlotSeries(eps, ts, f"measured, slope {sweep.slope:.4g}"), fit_series],
            os.path.join(args.out, f"{label}_sweep.svg"),
            title=f"lifespan sweep {label}",
            xlabel="eps",
            ylabel="T",
            loglog=True,
        )
        print(
            f"{label:14s} slope={sweep.slope:+.4f}  theory={float(law.exponent):+.4f}  "
            f"C={sweep.c_fit:.3g}  spread={sweep.ratio_spread:.3f}  excluded={sweep.excluded}"
        )


if __name__ == "__main__":
    main()
