"""Batch experiment driver.

Subcommands: run (one experiment from a JSON manifest), sweep (scaling
studies with least-squares fits), verify (inequality batteries), plot
(CSV to SVG), window (filter window synthesis). All artifacts are
byte-deterministic given (manifest, seed).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .engine import (
    NoiseSpec,
    TauSampler,
    ensemble_statistics,
    run_ensemble,
    run_marginal_ode,
)
from .errors import ZenopathError
from .filtering import design_window, filter_until_success, lcu_cost, window_size
from .linalg import DensityMatrix
from .mmio import load_matrix, load_vector
from .problems import (
    GroverProblem,
    ProblemInstance,
    custom_instance,
    diag_qlsp_instance,
    grover_instance,
    grover_path,
    qlsp_instance,
    random_instance,
)
from .quadrature import adaptive_simpson
from .schedules import (
    adaptive_rate,
    circuit_adaptive_params,
    circuit_constant_params,
    constant_rate,
    error_bound,
    expected_cost,
)
from .serialize import read_csv, write_csv, write_json
from .svg import Series, render_plot, write_svg
from .tracking import EigenspaceTracker
from .verify import SUITES, least_squares_fit, run_suite

MODES = ("ode", "mc", "noisy")
AXES = ("grover-N", "qlsp-kappa", "epsilon", "q")
TRACE_GRID = 32

DEFAULT_MANIFEST = {
    "problem": {"kind": "grover", "n": 16, "m": 1},
    "schedule": {"kind": "adaptive", "q": 0.5},
    "epsilon": 0.1,
    "mode": "ode",
    "trajectories": 500,
    "seed": 20260815,
    "outputs": ".",
}


def resolve_manifest(path: str | None, overrides: argparse.Namespace) -> dict:
    """Defaults, then manifest file, then CLI flags; returns a plain dict."""
    manifest = json.loads(json.dumps(DEFAULT_MANIFEST))
    if path is not None:
        with open(path) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ZenopathError(f"manifest {path} must be a JSON object")
        # a run.json embeds the manifest under this key; accept both forms
        if "manifest" in loaded and isinstance(loaded["manifest"], dict):
            loaded = loaded["manifest"]
        for key, value in loaded.items():
            manifest[key] = value
    if getattr(overrides, "seed", None) is not None:
        manifest["seed"] = int(overrides.seed)
    if getattr(overrides, "out_dir", None) is not None:
        manifest["outputs"] = overrides.out_dir
    if getattr(overrides, "trajectories", None) is not None:
        manifest["trajectories"] = int(overrides.trajectories)
    if getattr(overrides, "mode", None) is not None:
        manifest["mode"] = overrides.mode
    if getattr(overrides, "epsilon", None) is not None:
        manifest["epsilon"] = float(overrides.epsilon)
    if getattr(overrides, "q", None) is not None:
        manifest["schedule"] = {"kind": "adaptive", "q": float(overrides.q)}
    if getattr(overrides, "filter_epsilon", None) is not None:
        manifest["filter"] = {"epsilon_filter": float(overrides.filter_epsilon)}
    _validate_manifest(manifest)
    return manifest


def _validate_manifest(manifest: dict) -> None:
    if manifest["mode"] not in MODES:
        raise ZenopathError(f"mode must be one of {MODES}, got {manifest['mode']!r}")
    if manifest["mode"] in ("mc", "noisy") and int(manifest["trajectories"]) < 1:
        raise ZenopathError("trajectories must be >= 1 for trajectory modes")
    eps = float(manifest["epsilon"])
    if not (0.0 < eps < 1.0):
        raise ZenopathError(f"epsilon {eps} must lie in (0, 1)")
    sched = manifest.get("schedule", {})
    if sched.get("kind") not in ("constant", "adaptive"):
        raise ZenopathError("schedule.kind must be 'constant' or 'adaptive'")
    if "filter" in manifest and manifest["filter"] is not None:
        ef = float(manifest["filter"]["epsilon_filter"])
        if not (0.0 < ef < 1.0):
            raise ZenopathError(f"filter epsilon {ef} must lie in (0, 1)")


def build_instance(problem: dict) -> ProblemInstance:
    kind = problem.get("kind")
    if kind == "grover":
        return grover_instance(int(problem["n"]), int(problem.get("m", 1)))
    if kind == "qlsp":
        a = load_matrix(problem["matrix"])
        b = load_vector(problem["rhs"])
        return qlsp_instance(a, b, kappa=problem.get("kappa"))
    if kind == "qlsp-diag":
        return diag_qlsp_instance(float(problem["kappa"]), int(problem.get("dim", 2)))
    if kind == "custom":
        h0 = load_matrix(problem["h0"])
        h1 = load_matrix(problem["h1"])
        return custom_instance(h0, h1, omega0_at_0=problem.get("omega0"))
    if kind == "random":
        return random_instance(int(problem.get("dim", 8)), int(problem.get("seed", 20260815)))
    raise ZenopathError(f"unknown problem kind {kind!r}")


def build_schedule(inst: ProblemInstance, manifest: dict):
    """Returns (schedule, cost_model_or_None, q_bound_or_None)."""
    eps = float(manifest["epsilon"])
    cfg = manifest["schedule"]
    noisy = manifest["mode"] == "noisy"
    if cfg["kind"] == "constant":
        if noisy:
            return circuit_constant_params(inst.path, inst.gap, eps, alpha=inst.alpha)
        return constant_rate(inst.path, inst.gap, eps), None, None
    q = float(cfg.get("q", 0.5))
    if noisy:
        return circuit_adaptive_params(inst.path, inst.gap, eps, q, alpha=inst.alpha)
    return adaptive_rate(inst.path, inst.gap, eps, q), None, None


def _expected_jumps(sched, gap) -> float:
    if sched.rate_max == 0.0:
        return 0.0
    return adaptive_simpson(
        lambda s: float(sched.rate(s)), 0.0, 1.0, rel_tol=1e-9, seeds=gap.minimizer_hints
    ).value


def _target_fidelity(inst: ProblemInstance, rho: DensityMatrix, tracker) -> tuple[float, float]:
    """(tracked-subspace fidelity, target-projector fidelity)."""
    p_tracked = tracker.query(1.0).projector
    tracked = float(np.real(np.trace(p_tracked @ rho.entries)))
    target = inst.target_projector
    if target is None:
        return tracked, tracked
    return tracked, float(np.real(np.trace(target.entries @ rho.entries)))


def _ensemble_trace(records, checkpoints) -> list[tuple[float, float, float]]:
    keys = [0.0] + [round(float(c), 12) for c in checkpoints] + [1.0]
    acc: dict[float, list[float]] = {k: [0.0, 0.0, 0.0] for k in keys}
    for r in records:
        for (s, f), t in zip(r.fidelity_trace, r.cumulative_times):
            key = round(s, 12)
            if key in acc:
                a = acc[key]
                a[0] += f
                a[1] += t
                a[2] += 1.0
    rows = []
    for k in keys:
        a = acc[k]
        if a[2] > 0:
            rows.append((k, a[0] / a[2], a[1] / a[2]))
    return rows


def cmd_run(manifest: dict) -> int:
    out_dir = manifest["outputs"]
    os.makedirs(out_dir, exist_ok=True)
    inst = build_instance(manifest["problem"])
    sched, cost_model, q_bound = build_schedule(inst, manifest)
    t_sched, t_phys = expected_cost(sched, inst.gap)
    jumps_expected = _expected_jumps(sched, inst.gap)
    bound = error_bound(inst.path, sched, inst.gap)
    tracker = EigenspaceTracker(inst.path, inst.omega0_at_0, merge_policy=inst.merge_policy)
    seed = int(manifest["seed"])
    mode = manifest["mode"]
    eps = float(manifest["epsilon"])

    result: dict = {"mode": mode}
    if mode == "ode":
        res = run_marginal_ode(
            inst.path,
            inst.gap,
            sched,
            inst.initial_state,
            omega0_at_0=inst.omega0_at_0,
            merge_policy=inst.merge_policy,
        )
        rho_final = res.rho1
        final_fidelity = res.final_fidelity
        trace_rows = [
            (s, f, t) for (s, f), t in zip(res.fidelity_trace, res.cumulative_times)
        ]
        result.update(
            {
                "steps_accepted": res.steps_accepted,
                "steps_rejected": res.steps_rejected,
                "integrator": res.method,
            }
        )
    else:
        sampler_kind = manifest.get("sampler", {}).get("kind", "ideal-dephase")
        checkpoints = tuple(k / TRACE_GRID for k in range(1, TRACE_GRID))
        noise = NoiseSpec(delta=cost_model.delta) if mode == "noisy" else None
        records = run_ensemble(
            inst.path,
            inst.gap,
            sched,
            TauSampler(sampler_kind),
            inst.initial_vector,
            int(manifest["trajectories"]),
            seed,
            checkpoints=checkpoints,
            omega0_at_0=inst.omega0_at_0,
            merge_policy=inst.merge_policy,
            noise=noise,
            cost_model=cost_model if mode == "noisy" else None,
            keep_final_state=True,
        )
        stats = ensemble_statistics(records)
        mean_state = np.mean([r.final_state for r in records], axis=0)
        mean_state = 0.5 * (mean_state + mean_state.conj().T)
        rho_final = DensityMatrix(mean_state)
        final_fidelity = stats.mean_fidelity
        trace_rows = _ensemble_trace(records, checkpoints)
        result.update(
            {
                "trajectories": stats.count,
                "mean_fidelity": stats.mean_fidelity,
                "ci95": stats.ci95,
                "mean_time": stats.mean_time,
                "ci95_time": stats.ci95_time,
                "mean_jumps": stats.mean_jumps,
            }
        )
        if mode == "noisy":
            result.update(
                {
                    "mean_calls": stats.mean_calls,
                    "q_bound": q_bound,
                    "delta_at_0": float(cost_model.delta(0.0)),
                }
            )

    tracked_fid, target_fid = _target_fidelity(inst, rho_final, tracker)
    infidelity = 1.0 - final_fidelity
    result.update(
        {
            "final_fidelity": final_fidelity,
            "final_infidelity": infidelity,
            "target_fidelity": target_fid,
            "epsilon": eps,
            "error_bound": bound,
        }
    )

    filter_report = None
    passed = infidelity <= eps + 1e-12
    if manifest.get("filter"):
        eps_f = float(manifest["filter"]["epsilon_filter"])
        win = design_window(inst.gap.delta_m, eps_f)
        omega0 = tracker.query(1.0).omega
        h1 = inst.path.evaluate(1.0)
        rho_f, repeats, total_cost = filter_until_success(
            h1, rho_final, win, omega0, seed ^ 0xF117E5, preparation_cost=t_phys
        )
        f_tracked, f_target = _target_fidelity(inst, rho_f, tracker)
        post_infid = 1.0 - f_tracked
        passed = post_infid <= eps_f + 1e-12
        filter_report = {
            "window": {
                "n": win.n,
                "delta_band": win.delta_band,
                "epsilon_target": win.epsilon_target,
                "ripple": win.ripple,
            },
            "omega0": omega0,
            "repeats": repeats,
            "total_cost": total_cost,
            "lcu_cost_per_round": lcu_cost(win.n, 1.0),
            "preparation_cost_per_round": t_phys,
            "post_filter_fidelity": f_tracked,
            "post_filter_target_fidelity": f_target,
            "post_filter_infidelity": post_infid,
            "epsilon_filter": eps_f,
            "passed": passed,
        }
        write_json(os.path.join(out_dir, "filter.json"), filter_report)

    result["passed"] = passed
    # artifacts must be byte-identical wherever they are written
    embedded = {k: v for k, v in manifest.items() if k != "outputs"}
    run_report = {
        "manifest": embedded,
        "problem": {
            "name": inst.name,
            "dim": inst.path.dim,
            "delta_m": inst.gap.delta_m,
            "alpha": inst.alpha,
            "merge_policy": inst.merge_policy,
        },
        "schedule": {
            "kind": sched.kind,
            "epsilon": sched.epsilon,
            "q": sched.q,
            "constants": dict(sorted(sched.constants.items())),
            "rate_max": sched.rate_max,
            "T_schedule": t_sched,
            "T_physical": t_phys,
            "expected_jumps": jumps_expected,
        },
        "result": result,
        "rng": {"algorithm": "sfc64", "seed": seed},
    }
    write_json(os.path.join(out_dir, "run.json"), run_report)
    write_csv(
        os.path.join(out_dir, "trace.csv"),
        ["s", "fidelity", "cumulative_time"],
        trace_rows,
    )
    line = (
        f"{inst.name}: mode={mode} infidelity={infidelity:.6g} target eps={eps:g} "
        f"T_schedule={t_sched:.6g}"
    )
    if filter_report is not None:
        line += (
            f" | filtered: infidelity={filter_report['post_filter_infidelity']:.6g} "
            f"eps_filter={filter_report['epsilon_filter']:g}"
        )
    line += f" -> {'PASS' if passed else 'FAIL'}"
    print(line)
    return 0 if passed else 1


def _sweep_geometry(manifest: dict, axis: str, value: float):
    """(path, gap, alpha, resolved manifest) for one sweep point."""
    manifest = json.loads(json.dumps(manifest))
    if axis == "grover-N":
        prob = GroverProblem(int(value), 1)
        path, gap = grover_path(prob)
        return path, gap, max(1.0, path.sup_norm), manifest
    if axis == "qlsp-kappa":
        inst = diag_qlsp_instance(float(value))
        return inst.path, inst.gap, inst.alpha, manifest
    if axis == "epsilon" and not manifest.get("filter"):
        manifest["epsilon"] = float(value)
    if axis == "q":
        manifest["schedule"] = {"kind": "adaptive", "q": float(value)}
    inst = build_instance(manifest["problem"])
    return inst.path, inst.gap, inst.alpha, manifest


def _family_constant(manifest: dict, axis: str, values: list[float]) -> float | None:
    """Shared adaptive C for instance-family axes: the largest instance C.

    The hypothesis constants of the adaptive schedule are family-level
    quantities; fitting a sweep with per-instance constants would fold
    their finite-size drift into the slope.
    """
    if axis not in ("grover-N", "qlsp-kappa"):
        return None
    if manifest["schedule"].get("kind") != "adaptive":
        return None
    q = float(manifest["schedule"].get("q", 0.5))
    eps = float(manifest["epsilon"])
    best = 0.0
    for value in values:
        path, gap, _, _ = _sweep_geometry(manifest, axis, value)
        sched = adaptive_rate(path, gap, eps, q)
        best = max(best, sched.constants["C"])
    return best


def _sweep_point(manifest: dict, axis: str, value: float, c_family: float | None) -> dict:
    path, gap, alpha, manifest = _sweep_geometry(manifest, axis, value)
    eps = float(manifest["epsilon"])
    cfg = manifest["schedule"]
    noisy = manifest["mode"] == "noisy"
    q_bound = None
    if cfg["kind"] == "constant":
        if noisy:
            sched, _, q_bound = circuit_constant_params(path, gap, eps, alpha=alpha)
        else:
            sched = constant_rate(path, gap, eps)
    else:
        q = float(cfg.get("q", 0.5))
        if noisy:
            sched, _, q_bound = circuit_adaptive_params(
                path, gap, eps, q, alpha=alpha, c_override=c_family
            )
        else:
            sched = adaptive_rate(path, gap, eps, q, c_override=c_family)

    t_sched, t_phys = expected_cost(sched, gap)
    bound = error_bound(path, sched, gap)
    point = {
        "x": float(value),
        "T_schedule": t_sched,
        "T_physical": t_phys,
        "Q_bound": q_bound,
        "infidelity_bound": bound,
        "filter_cost": None,
    }
    if manifest.get("filter"):
        eps_f = float(value) if axis == "epsilon" else float(manifest["filter"]["epsilon_filter"])
        win = design_window(gap.delta_m, eps_f)
        point["filter_cost"] = lcu_cost(win.n, 1.0)
    return point


def cmd_sweep(manifest: dict, axis: str, values: list[float]) -> int:
    if axis not in AXES:
        raise ZenopathError(f"axis must be one of {AXES}")
    if len(values) < 4:
        raise ZenopathError(f"need at least 4 axis values for a fit, got {len(values)}")
    out_dir = manifest["outputs"]
    os.makedirs(out_dir, exist_ok=True)

    try:
        c_family = _family_constant(manifest, axis, values)
    except (ZenopathError, ValueError, ArithmeticError):
        c_family = None
    points = []
    failures = 0
    for value in sorted(values):
        try:
            point = _sweep_point(manifest, axis, value, c_family)
            point["status"] = "ok"
        except (ZenopathError, ValueError, ArithmeticError) as exc:
            point = {
                "x": float(value),
                "T_schedule": None,
                "T_physical": None,
                "Q_bound": None,
                "infidelity_bound": None,
                "filter_cost": None,
                "status": f"failed:{type(exc).__name__}",
            }
            failures += 1
        points.append(point)

    good = [p for p in points if p["status"] == "ok"]
    if len(good) >= 2:
        if axis == "grover-N":
            xs = [0.5 * math.log(p["x"]) for p in good]
            ys = [math.log(p["T_schedule"]) for p in good]
            transform = "log T_schedule vs log sqrt(N)"
        elif axis == "qlsp-kappa":
            xs = [math.log(p["x"]) for p in good]
            ys = [math.log(p["T_schedule"]) for p in good]
            transform = "log T_schedule vs log kappa"
        elif axis == "epsilon" and manifest.get("filter"):
            xs = [math.log(1.0 / p["x"]) for p in good]
            ys = [p["filter_cost"] for p in good]
            transform = "filter_cost vs log(1/epsilon)"
        elif axis == "epsilon":
            xs = [math.log(1.0 / p["x"]) for p in good]
            ys = [math.log(p["T_schedule"]) for p in good]
            transform = "log T_schedule vs log(1/epsilon)"
        else:
            xs = [p["x"] for p in good]
            ys = [math.log(p["T_schedule"]) for p in good]
            transform = "log T_schedule vs q"
        slope, intercept, r2 = least_squares_fit(xs, ys)
        fit = {"slope": slope, "intercept": intercept, "r2": r2, "transform": transform}
    else:
        fit = None

    def cell(v):
        return "" if v is None else v

    write_csv(
        os.path.join(out_dir, "sweep.csv"),
        ["x", "T_schedule", "T_physical", "Q_bound", "infidelity_bound", "filter_cost", "status"],
        [
            (
                p["x"],
                cell(p["T_schedule"]),
                cell(p["T_physical"]),
                cell(p["Q_bound"]),
                cell(p["infidelity_bound"]),
                cell(p["filter_cost"]),
                p["status"],
            )
            for p in points
        ],
    )
    write_json(
        os.path.join(out_dir, "sweep.json"),
        {
            "axis": axis,
            "manifest": {k: v for k, v in manifest.items() if k != "outputs"},
            "c_family": c_family,
            "fit": fit,
            "points": points,
            "failures": failures,
        },
    )
    if fit is not None:
        print(
            f"sweep {axis}: {len(good)}/{len(points)} points, "
            f"{fit['transform']}: slope={fit['slope']:.4f} r2={fit['r2']:.6f}"
        )
    else:
        print(f"sweep {axis}: {len(good)}/{len(points)} points, no fit")
    return 0 if failures == 0 else 1


def cmd_verify(suite: str, out_dir: str | None, seed: int) -> int:
    names = list(SUITES) if suite == "all" else [suite]
    checks = []
    for name in names:
        checks.extend(run_suite(name, seed=seed))
    failures = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        if not c.passed:
            failures += 1
        print(f"[{status}] {c.suite}: {c.name} (margin={c.margin:.3e}) {c.detail}")
    print(f"{len(checks) - failures}/{len(checks)} checks passed")
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_json(
            os.path.join(out_dir, "verify.json"),
            {
                "suite": suite,
                "failures": failures,
                "checks": [
                    {
                        "suite": c.suite,
                        "name": c.name,
                        "passed": c.passed,
                        "margin": c.margin,
                        "detail": c.detail,
                    }
                    for c in checks
                ],
            },
        )
    return failures


def _plot_trace(header, rows):
    idx_s = header.index("s")
    idx_f = header.index("fidelity")
    xs = tuple(float(r[idx_s]) for r in rows)
    ys = tuple(float(r[idx_f]) for r in rows)
    return render_plot(
        [Series(xs, ys, label="fidelity", mode="line")],
        title="tracked-subspace fidelity along the path",
        xlabel="s",
        ylabel="Tr(P rho)",
    )


def _plot_sweep(header, rows):
    idx_x = header.index("x")
    idx_t = header.index("T_schedule")
    idx_status = header.index("status") if "status" in header else None
    pts = []
    for r in rows:
        if idx_status is not None and r[idx_status] != "ok":
            continue
        if r[idx_t] == "":
            continue
        pts.append((float(r[idx_x]), float(r[idx_t])))
    if len(pts) < 2:
        raise ZenopathError("sweep plot needs at least 2 successful points")
    xs = tuple(p[0] for p in pts)
    ys = tuple(p[1] for p in pts)
    slope, intercept, r2 = least_squares_fit(
        [math.log(x) for x in xs], [math.log(y) for y in ys]
    )
    fit_ys = tuple(math.exp(intercept) * x**slope for x in xs)
    return render_plot(
        [
            Series(xs, ys, label="T_schedule", mode="points"),
            Series(xs, fit_ys, label="fit", mode="line"),
        ],
        title="schedule cost scaling",
        xlabel="x",
        ylabel="T_schedule",
        logx=True,
        logy=True,
        annotations=((0.06, 0.92, f"slope {slope:.3f} (r2 {r2:.4f})"),),
    )


def _plot_window(header, rows, meta: dict | None):
    idx_k = header.index("k")
    idx_w = header.index("w_k")
    ks = [int(r[idx_k]) for r in rows]
    ws = [float(r[idx_w]) for r in rows]
    n = max(ks)
    coeff = np.zeros(2 * n + 1)
    for k, w in zip(ks, ws):
        coeff[k + n] = w
    omegas = np.linspace(0.0, math.pi, 2001)
    pos = coeff[n:]
    karr = np.arange(1, n + 1)
    resp = pos[0] + 2.0 * (np.cos(np.outer(omegas, karr)) @ pos[1:])
    mag = np.maximum(np.abs(resp), 1e-300)
    floor = max(float(mag[mag > 0].min()), 1e-18)
    hlines = []
    vlines = []
    if meta:
        if "epsilon_target" in meta:
            hlines.append((math.sqrt(float(meta["epsilon_target"])), "sqrt(eps)"))
        if "delta_band" in meta:
            vlines.append((float(meta["delta_band"]), "band edge"))
    return render_plot(
        [Series(tuple(omegas.tolist()), tuple(np.maximum(mag, floor).tolist()), label="|A(w)|")],
        title="window frequency response",
        xlabel="omega",
        ylabel="|A(omega)|",
        logy=True,
        hlines=tuple(hlines),
        vlines=tuple(vlines),
    )


def cmd_plot(input_path: str, kind: str, out_path: str | None) -> int:
    header, rows = read_csv(input_path)
    if kind == "trace":
        svg_text = _plot_trace(header, rows)
    elif kind == "sweep":
        svg_text = _plot_sweep(header, rows)
    elif kind == "window":
        meta = None
        stem = os.path.splitext(input_path)[0] + ".json"
        if os.path.exists(stem):
            with open(stem) as fh:
                loaded = json.load(fh)
            meta = loaded.get("window", loaded)
        svg_text = _plot_window(header, rows, meta)
    else:
        raise ZenopathError(f"unknown plot kind {kind!r}")
    if out_path is None:
        out_path = os.path.splitext(input_path)[0] + ".svg"
    write_svg(out_path, svg_text)
    print(f"wrote {out_path}")
    return 0


def cmd_window(delta: float, epsilon: float, out_dir: str) -> int:
    os.makedirs(out_dir, exist_ok=True)
    size = window_size(delta, epsilon)
    win = design_window(delta, epsilon)
    write_csv(
        os.path.join(out_dir, "window.csv"),
        ["k", "w_k"],
        [(k - win.n, float(w)) for k, w in enumerate(win.coefficients)],
    )
    write_json(
        os.path.join(out_dir, "window.json"),
        {
            "window": {
                "n": win.n,
                "delta_band": win.delta_band,
                "epsilon_target": win.epsilon_target,
                "ripple": win.ripple,
            },
            "size_rule": {"n": size.n, "exact": size.exact, "bound": size.bound},
            "lcu_cost_t1": lcu_cost(win.n, 1.0),
        },
    )
    print(
        f"window: n={win.n} (rule gives {size.n}), ripple={win.ripple:.6g} "
        f"target {math.sqrt(epsilon):.6g}"
    )
    return 0


def _parse_values(raw: str) -> list[float]:
    try:
        return [float(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ZenopathError(f"cannot parse --values {raw!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenopath",
        description="Poisson-dephasing eigenpath traversal simulator and analysis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--manifest", help="JSON experiment manifest")
        p.add_argument("--seed", type=int, help="PRNG seed (overrides manifest)")
        p.add_argument("--out-dir", help="output directory (overrides manifest)")
        p.add_argument("--trajectories", type=int, help="trajectory count for mc/noisy modes")
        p.add_argument("--mode", choices=MODES, help="simulation mode")
        p.add_argument("--q", type=float, help="adaptive schedule exponent (implies adaptive)")
        p.add_argument("--epsilon", type=float, help="target infidelity")
        p.add_argument("--filter-epsilon", type=float, help="enable filtering at this epsilon")

    run_p = sub.add_parser("run", help="run one experiment")
    add_common(run_p)

    sweep_p = sub.add_parser("sweep", help="scaling sweep with least-squares fit")
    add_common(sweep_p)
    sweep_p.add_argument("--axis", required=True, choices=AXES)
    sweep_p.add_argument("--values", required=True, help="comma-separated axis values")

    verify_p = sub.add_parser("verify", help="run a verification suite")
    verify_p.add_argument(
        "--suite", required=True, choices=sorted(SUITES) + ["all"], help="suite to run"
    )
    verify_p.add_argument("--out-dir", help="write verify.json here")
    verify_p.add_argument("--seed", type=int, default=20260815)

    plot_p = sub.add_parser("plot", help="render a CSV artifact to SVG")
    plot_p.add_argument("--input", required=True, help="input CSV path")
    plot_p.add_argument("--kind", required=True, choices=("trace", "sweep", "window"))
    plot_p.add_argument("--out", help="output SVG path (default: input with .svg)")

    window_p = sub.add_parser("window", help="synthesise a filter window")
    window_p.add_argument("--delta", type=float, required=True, help="stop-band edge")
    window_p.add_argument("--epsilon", type=float, required=True, help="suppression target")
    window_p.add_argument("--out-dir", default=".", help="output directory")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(resolve_manifest(args.manifest, args))
        if args.command == "sweep":
            manifest = resolve_manifest(args.manifest, args)
            return cmd_sweep(manifest, args.axis, _parse_values(args.values))
        if args.command == "verify":
            return cmd_verify(args.suite, args.out_dir, args.seed)
        if args.command == "plot":
            return cmd_plot(args.input, args.kind, args.out)
        if args.command == "window":
            return cmd_window(args.delta, args.epsilon, args.out_dir)
        raise ZenopathError(f"unknown command {args.command!r}")
    except (ZenopathError, ValueError, OSError) as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error), file=sys.stderr)
        out_dir = getattr(args, "out_dir", None)
        if out_dir:
            try:
                os.makedirs(out_dir, exist_ok=True)
                write_json(os.path.join(out_dir, "error.json"), error)
            except OSError:
                pass
        return 2


if __name__ == "__main__":
    sys.exit(main())
