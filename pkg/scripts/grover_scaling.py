"""Search-path cost scaling sweep.

Builds the search path at increasing sizes, fits the schedule cost
against sqrt(N), and writes a log-log plot plus the raw table.

Usage: python scripts/grover_scaling.py [--out-dir OUT]
"""

import argparse
import math
import pathlib

from zenopath.problems import GroverProblem, grover_path
from zenopath.schedules import adaptive_rate, constant_rate, expected_cost
from zenopath.serialize import write_csv
from zenopath.svg import Series, render_plot, write_svg
from zenopath.verify import least_squares_fit

EPS = 0.1
Q = 0.5


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="out", help="artifact directory")
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    sizes = [2**k for k in range(6, 15, 2)]
    pairs = [grover_path(GroverProblem(n, 1)) for n in sizes]
    # sweeps share one hypothesis constant so preasymptotic drift stays
    # out of the fitted slope
    c_fam = max(adaptive_rate(p, g, EPS, Q).constants["C"] for p, g in pairs)

    rows = []
    t_adapt = []
    t_const = []
    for n, (path, gap) in zip(sizes, pairs):
        sched = adaptive_rate(path, gap, EPS, Q, c_override=c_fam)
        ta = expected_cost(sched, gap)[0]
        tc = expected_cost(constant_rate(path, gap, EPS), gap)[0]
        t_adapt.append(ta)
        t_const.append(tc)
        rows.append([n, ta, tc, tc / (math.sqrt(n) * math.log(n))])

    slope, _, r2 = least_squares_fit(
        [0.5 * math.log(n) for n in sizes], [math.log(t) for t in t_adapt]
    )

    print(f"adaptive schedule, eps={EPS}, q={Q}, shared C={c_fam:.4f}")
    print(f"{'N':>8} {'T_adaptive':>14} {'T_constant':>14} {'T_c/(sqrtN lnN)':>16}")
    for n, ta, tc, ratio in rows:
        print(f"{n:>8} {ta:>14.2f} {tc:>14.2f} {ratio:>16.4f}")
    print(f"log T_adaptive vs log sqrt(N): slope {slope:.4f}, r2 {r2:.6f}")

    write_csv(out / "grover_scaling.csv", ["N", "T_adaptive", "T_constant", "ratio"], rows)
    svg = render_plot(
        [
            Series(tuple(sizes), tuple(t_adapt), "adaptive", "both"),
            Series(tuple(sizes), tuple(t_const), "constant", "both"),
        ],
        title="schedule cost vs search-space size",
        xlabel="N",
        ylabel="T_schedule",
        logx=True,
        logy=True,
        annotations=((0.05, 0.92, f"adaptive slope {slope:.3f} in sqrt(N)"),),
    )
    write_svg(out / "grover_scaling.svg", svg)
    print(f"wrote {out / 'grover_scaling.csv'} and {out / 'grover_scaling.svg'}")


if __name__ == "__main__":
    main()
