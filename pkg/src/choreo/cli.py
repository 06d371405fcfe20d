"""Command-line front end: census, solve, verify, plot, sweep.

All structured output is JSON with every numeric field written with 17
significant digits (lossless for doubles, so checkpoints reload bitwise).
Plots are hand-built SVG so identical inputs give identical bytes.

Exit codes: 0 success, 1 computation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .census import SignVector, count_burnside, count_formula, enumerate_classes, hn_admissible
from .constraints import project_feasible
from .loop_model import FundamentalPath, path_from_dict, path_to_dict, resample
from .optimizer import (
    AllRunsFailedError,
    MultistartOutcome,
    SolveConfig,
    SolveResult,
    multistart,
)
from .symmetry import reconstruct, z0_period_samples
from .verify import (
    VerifyThresholds,
    bubble_count,
    crossing_counts,
    sign_pattern,
    verify_candidate,
)

SWEEP_CAP_DEFAULT = 8


def thread_count() -> int:
    env = os.environ.get("CHOREO_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# JSON with fixed 17-significant-digit floats.

def _encode(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        v = float(obj)
        out.append("%.17g" % v if math.isfinite(v) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(list(obj)):
            if i:
                out.append(",")
            _encode(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps(obj) -> str:
    out: list[str] = []
    _encode(obj, out)
    return "".join(out)


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# SVG rendering of the closed curve (deterministic bytes).

def _fmt(v: float) -> str:
    return "%.6f" % v


def render_svg(path_dict: dict, omega_label: str = "") -> str:
    """Closed curve over one period, real axis, body markers at t = 0."""
    fund = path_from_dict(path_dict)
    u = z0_period_samples(fund)
    xs, ys = u.real, u.imag
    pad = 0.1 * max(float(np.ptp(xs)), float(np.ptp(ys)), 1e-9)
    x_lo, x_hi = xs.min() - pad, xs.max() + pad
    y_lo, y_hi = ys.min() - pad, ys.max() + pad
    width, height = 640.0, 420.0
    sx = width / (x_hi - x_lo)
    sy = height / (y_hi - y_lo)
    scale = min(sx, sy)

    def to_px(x, y):
        return (x - x_lo) * scale, (y_hi - y) * scale

    pts = " ".join("%s,%s" % tuple(map(_fmt, to_px(x, y))) for x, y in zip(xs, ys))
    ax0 = to_px(x_lo, 0.0)
    ax1 = to_px(x_hi, 0.0)
    bodies = [u[j * fund.samples_per_unit] for j in range(fund.n_bodies)]
    marks = "".join(
        '<circle cx="%s" cy="%s" r="4" fill="#c33"/>' % tuple(map(_fmt, to_px(b.real, b.imag)))
        for b in bodies
    )
    label = (
        '<text x="8" y="16" font-family="monospace" font-size="13">%s</text>'
        % json.dumps(omega_label)[1:-1]
        if omega_label
        else ""
    )
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 %s %s">'
        '<rect width="100%%" height="100%%" fill="white"/>'
        '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#999" stroke-width="1"/>'
        '<polygon points="%s" fill="none" stroke="#1a56a0" stroke-width="1.5"/>'
        "%s%s</svg>"
        % (
            _fmt(width), _fmt(height),
            _fmt(ax0[0]), _fmt(ax0[1]), _fmt(ax1[0]), _fmt(ax1[1]),
            pts, marks, label,
        )
    )


# ---------------------------------------------------------------------------
# Subcommand implementations.

def _parse_omega(text: str, n_bodies: int) -> SignVector:
    try:
        signs = tuple(int(tok) for tok in text.replace("+", "").split(","))
    except ValueError as exc:
        raise ValueError(f"cannot parse sign vector {text!r}") from exc
    return SignVector(n_bodies, signs)


def run_census(args) -> int:
    classes = enumerate_classes(args.n)
    if args.hn_only:
        classes = [c for c in classes if hn_admissible(c.canonical)]
    listing = []
    if args.list or args.hn_only:
        for c in classes:
            members = sorted(m.signs for m in c.members)
            listing.append(
                {"canonical": list(c.canonical.signs), "members": [list(m) for m in members]}
            )
    doc = {
        "n": args.n,
        "formula_count": count_formula(args.n),
        "burnside_count": count_burnside(args.n),
        "classes": listing,
    }
    _write(dumps(doc), None)
    return 0


def _config_dict(cfg: SolveConfig) -> dict:
    return {
        "n": cfg.n_bodies,
        "m": cfg.samples_per_unit,
        "omega": list(cfg.omega.signs),
        "symmetry_mode": cfg.symmetry_mode,
        "alpha": cfg.alpha,
        "epsilon_schedule": list(cfg.epsilon_schedule),
        "grad_tol": cfg.grad_tol,
        "max_iter_per_stage": cfg.max_iter_per_stage,
        "seed_count": cfg.seed_count,
        "rng_seed": cfg.rng_seed,
    }


def _result_doc(cfg: SolveConfig, result: SolveResult, report) -> dict:
    trace = result.trace
    return {
        "config": _config_dict(cfg),
        "converged": result.converged,
        "failure": result.failure,
        "action": {
            "kinetic": result.breakdown.kinetic,
            "potential": result.breakdown.potential,
            "total": result.breakdown.total,
        },
        "path": path_to_dict(result.path),
        "verification": report.to_dict() if report is not None else None,
        "trace_summary": {
            "iterations": result.iterations,
            "initial_action": trace[0] if trace else None,
            "final_action": trace[-1] if trace else None,
            "projected_gradient_norm": result.pg_norm,
        },
    }


def _solve_config(args) -> SolveConfig:
    omega = _parse_omega(args.omega, args.n)
    return SolveConfig(
        n_bodies=args.n,
        omega=omega,
        samples_per_unit=args.m,
        symmetry_mode="HN" if args.hn else "DN",
        alpha=args.alpha,
        seed_count=args.seeds,
        rng_seed=args.seed_rng,
    )


def run_solve(args) -> int:
    cfg = _solve_config(args)
    try:
        outcome = multistart(cfg, max_workers=thread_count())
        best = outcome.best
    except AllRunsFailedError as exc:
        worst = exc.results[0]
        doc = _result_doc(cfg, worst, None)
        _write(dumps(doc), args.out)
        return 1
    report = verify_candidate(
        best.path,
        expected_omega=cfg.omega,
        symmetry_mode=cfg.symmetry_mode,
        alpha=cfg.alpha,
        thresholds=VerifyThresholds.for_grid(cfg.samples_per_unit),
    )
    doc = _result_doc(cfg, best, report)
    _write(dumps(doc), args.out)
    if args.csv:
        _write_csv(best.path, args.csv)
    return 0 if best.converged and report.passed else 1


def _write_csv(fund: FundamentalPath, path: str) -> None:
    full = reconstruct(fund)
    lines = ["t,body,x,y"]
    times = full.times
    for i, t in enumerate(times):
        for j in range(full.n_bodies):
            z = full.positions[j, i]
            lines.append("%.17g,%d,%.17g,%.17g" % (t, j, z.real, z.imag))
    Path(path).write_text("\n".join(lines) + "\n")


def run_verify(args) -> int:
    data = json.loads(Path(args.input).read_text())
    path_dict = data["path"] if "path" in data else data
    fund = path_from_dict(path_dict)
    cfg = data.get("config", {})
    omega = (
        SignVector(fund.n_bodies, tuple(cfg["omega"])) if "omega" in cfg else None
    )
    mode = cfg.get("symmetry_mode", "DN")
    alpha = cfg.get("alpha", 1.0)
    report = verify_candidate(
        fund,
        expected_omega=omega,
        symmetry_mode=mode,
        alpha=alpha,
        thresholds=VerifyThresholds.for_grid(fund.samples_per_unit),
    )
    doc = {"verification": report.to_dict()}
    ok = report.passed
    if args.m_check:
        fine = resample(fund, args.m_check)
        counts = crossing_counts(reconstruct(fine))
        bubbles = bubble_count(fine)
        pattern = sign_pattern(fine)
        consistent = (
            counts == report.crossing_counts
            and bubbles == report.bubble_count
            and pattern == report.sign_pattern
        )
        doc["m_check"] = {
            "m": args.m_check,
            "crossing_counts": list(counts),
            "bubble_count": bubbles,
            "sign_pattern": list(pattern.signs),
            "consistent": consistent,
        }
        ok = ok and consistent
    _write(dumps(doc), args.out)
    return 0 if ok else 1


def run_plot(args) -> int:
    data = json.loads(Path(args.input).read_text())
    path_dict = data["path"] if "path" in data else data
    omega = data.get("config", {}).get("omega")
    label = ""
    if omega:
        label = "omega = (%s)" % ",".join("%+d" % s for s in omega)
    svg = render_svg(path_dict, label)
    Path(args.out).write_text(svg)
    return 0


def run_sweep(args) -> int:
    if args.n > args.cap:
        raise _UsageError(f"sweep supports N <= {args.cap} (override with --cap)")
    classes = enumerate_classes(args.n)
    if args.hn_only:
        classes = [c for c in classes if hn_admissible(c.canonical)]
    out_dir = Path(args.out or f"sweep_n{args.n}")
    out_dir.mkdir(parents=True, exist_ok=True)

    def solve_class(cls) -> dict:
        omega = cls.canonical
        cfg = SolveConfig(
            n_bodies=args.n,
            omega=omega,
            samples_per_unit=args.m,
            seed_count=args.seeds,
            rng_seed=args.seed_rng,
        )
        name = "omega_" + "".join("p" if s > 0 else "m" for s in omega.signs)
        entry = {"omega": list(omega.signs), "file": name + ".json"}
        try:
            outcome = multistart(cfg)
            best = outcome.best
            report = verify_candidate(
                best.path,
                expected_omega=omega,
                symmetry_mode="DN",
                alpha=cfg.alpha,
                thresholds=VerifyThresholds.for_grid(cfg.samples_per_unit),
                include_return=False,
            )
            doc = _result_doc(cfg, best, report)
            entry.update(
                action=best.breakdown.total,
                bubble_count=report.bubble_count,
                converged=best.converged,
                failure=best.failure,
            )
        except AllRunsFailedError as exc:
            doc = _result_doc(cfg, exc.results[0], None)
            entry.update(
                action=None, bubble_count=None, converged=False,
                failure=exc.results[0].failure,
            )
        (out_dir / entry["file"]).write_text(dumps(doc) + "\n")
        return entry

    workers = thread_count()
    if workers > 1 and len(classes) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(solve_class, classes))
    else:
        entries = [solve_class(c) for c in classes]
    entries.sort(key=lambda e: (e["action"] is None, e["action"], e["omega"]))
    index = {"n": args.n, "m": args.m, "entries": entries}
    (out_dir / "index.json").write_text(dumps(index) + "\n")
    _write(dumps(index), None)
    return 0 if all(e["converged"] for e in entries) else 1


# ---------------------------------------------------------------------------
# Argument parsing.

class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choreo",
        description="Find, classify and verify simple choreographies of the "
        "planar equal-mass N-body problem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="count and list sign-vector classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--list", action="store_true", help="include the class listing")
    p.add_argument("--hn-only", action="store_true",
                   help="restrict to classes admissible for the extra symmetry")
    p.set_defaults(func=run_census)

    p = sub.add_parser("solve", help="minimize the action in one sign class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--omega", type=str, required=True,
                   help="comma-separated signs, e.g. --omega=-1,+1")
    p.add_argument("--hn", action="store_true", help="impose the extra symmetry")
    p.add_argument("--m", type=int, default=128, help="grid samples per time unit")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--seed-rng", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--csv", type=str, default=None)
    p.set_defaults(func=run_solve)

    p = sub.add_parser("verify", help="re-verify a result file")
    p.add_argument("--in", dest="input", type=str, required=True)
    p.add_argument("--m-check", type=int, default=None,
                   help="also recount crossings on a resampled grid")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=run_verify)

    p = sub.add_parser("plot", help="render the curve of a result file to SVG")
    p.add_argument("--in", dest="input", type=str, required=True)
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(func=run_plot)

    p = sub.add_parser("sweep", help="solve one representative per class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--hn-only", action="store_true")
    p.add_argument("--m", type=int, default=64)
    p.add_argument("--seeds", type=int, default=2)
    p.add_argument("--seed-rng", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--cap", type=int, default=SWEEP_CAP_DEFAULT)
    p.set_defaults(func=run_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_UsageError, ValueError, FileNotFoundError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
