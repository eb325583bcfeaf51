"""Linear-system cost scaling sweep.

Sweeps the condition number of the diagonal test system, fits schedule
cost and the imperfect-evolution call bound against kappa, and writes a
log-log plot plus the raw table.

Usage: python scripts/qlsp_scaling.py [--out-dir OUT]
"""

import argparse
import math
import pathlib

from zenopath.problems import diag_qlsp_instance
from zenopath.schedules import adaptive_rate, circuit_adaptive_params, expected_cost
from zenopath.serialize import write_csv
from zenopath.svg import Series, render_plot, write_svg
from zenopath.verify import least_squares_fit

# q = 0.75 keeps both the schedule cost and the call bound within a few
# percent of linear in kappa over this range
EPS = 0.1
Q = 0.75


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="out", help="artifact directory")
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    kappas = [2.0**k for k in range(3, 10)]
    insts = [diag_qlsp_instance(k) for k in kappas]
    c_fam = max(adaptive_rate(i.path, i.gap, EPS, Q).constants["C"] for i in insts)

    t_sched = []
    q_bounds = []
    for inst in insts:
        sched = adaptive_rate(inst.path, inst.gap, EPS, Q, c_override=c_fam)
        t_sched.append(expected_cost(sched, inst.gap)[0])
        _, _, qb = circuit_adaptive_params(
            inst.path, inst.gap, EPS, q=Q, alpha=inst.alpha, c_override=c_fam
        )
        q_bounds.append(qb)

    logk = [math.log(k) for k in kappas]
    slope_t, _, r2_t = least_squares_fit(logk, [math.log(t) for t in t_sched])
    slope_q, _, r2_q = least_squares_fit(logk, [math.log(b) for b in q_bounds])

    print(f"adaptive schedule, eps={EPS}, q={Q}, shared C={c_fam:.4f}")
    print(f"{'kappa':>8} {'T_schedule':>14} {'Q_bound':>16}")
    for k, t, qb in zip(kappas, t_sched, q_bounds):
        print(f"{k:>8.0f} {t:>14.2f} {qb:>16.4g}")
    print(f"log T vs log kappa:       slope {slope_t:.4f}, r2 {r2_t:.6f}")
    print(f"log Q_bound vs log kappa: slope {slope_q:.4f}, r2 {r2_q:.6f}")

    write_csv(out / "qlsp_scaling.csv", ["kappa", "T_schedule", "Q_bound"],
              [[k, t, qb] for k, t, qb in zip(kappas, t_sched, q_bounds)])
    svg = render_plot(
        [
            Series(tuple(kappas), tuple(t_sched), "T_schedule", "both"),
            Series(tuple(kappas), tuple(q_bounds), "Q_bound", "both"),
        ],
        title="cost vs condition number",
        xlabel="kappa",
        ylabel="cost",
        logx=True,
        logy=True,
        annotations=(
            (0.05, 0.92, f"T slope {slope_t:.3f}"),
            (0.05, 0.85, f"Q slope {slope_q:.3f}"),
        ),
    )
    write_svg(out / "qlsp_scaling.svg", svg)
    print(f"wrote {out / 'qlsp_scaling.csv'} and {out / 'qlsp_scaling.svg'}")


if __name__ == "__main__":
    main()
