"""The five numerical experiments as named presets.

The experiments are usually described with 1-based point numbers; the
configs below are 0-based, so point 8 of the Klein bottle is id 7:

* exp_4_1: two-point graph, f0 = f1 = (2, 0), 50 steps.
* exp_4_2: 10-point string, ends clamped to 0, impulse 10 at point 5 in both
  initial rows, 50 steps. Interior diagonal is 1 - 0.3 - 0.4 = 0.3; the end
  columns get 0.6 and 0.7 so that every column still sums to one.
* exp_4_3: Klein bottle, 0.1 on edges (diagonal 0.4), f0_8 = 16, f1_10 = 16.
* exp_4_4: projective plane, 0.1 on edges, f0_10 = 11, f1_11 = 11.
* exp_4_5: 4-sphere, 0.01 on edges (diagonal 0.92), f0_6 = 10, f1_7 = 10.

Checks run on a longer horizon (``check_steps``) than the plotting horizon
written to the CSV; the CSV rows are a prefix of the checked run.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import analysis
from .config import apply_overrides, problem_from_config
from .wave import ProblemSpec, Trace, solve

CHECK_STEPS = 10_000


def _string_triples(k: int = 10) -> list[list[float]]:
    triples = []
    for i in range(k):
        if i + 1 < k:
            triples.append([i, i + 1, 0.3])
        if i - 1 >= 0:
            triples.append([i, i - 1, 0.4])
    triples += [[0, 0, 0.6], [k - 1, k - 1, 0.7]]
    triples += [[i, i, 0.3] for i in range(1, k - 1)]
    return triples


@dataclass(frozen=True)
class Check:
    kind: str  # sum, period, period_gt, bounded, clamped, interior_nonzero
    target: Any = None
    tol: float = 0.0
    points: tuple[int, ...] = ()


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    title: str
    config: dict
    checks: tuple[Check, ...]
    report_points: tuple[int, ...]
    check_steps: int = CHECK_STEPS


PRESETS = {
    p.name: p
    for p in (
        ExperimentPreset(
            "exp_4_1",
            "two-point graph, initial value problem",
            {
                "graph": "two_point",
                "coefficients": {"dense": [[0.8, 0.3], [0.2, 0.7]]},
                "f0": {"0": 2.0},
                "f1": {"0": 2.0},
                "steps": 50,
            },
            (
                Check("sum", 2.0, 1e-9),
                Check("period", 2.0 * math.pi / math.acos(0.75), 0.01, (0, 1)),
                Check("period_gt", 2.0, 0.0, (0, 1)),
                Check("bounded", 10.0),
            ),
            (0, 1),
        ),
        ExperimentPreset(
            "exp_4_2",
            "digital string D1, boundary value problem",
            {
                "graph": "string_disk(10)",
                "coefficients": {"sparse": _string_triples(10)},
                "f0": {"4": 10.0},
                "f1": {"4": 10.0},
                "boundary": {"0": 0.0, "9": 0.0},
                "steps": 50,
            },
            (
                Check("clamped", None, 0.0, (0, 9)),
                Check("interior_nonzero", None, 0.0, tuple(range(1, 9))),
                Check("period_gt", 2.0, 0.0, (4,)),
                Check("bounded", 10.0),
            ),
            (2, 4),
        ),
        ExperimentPreset(
            "exp_4_3",
            "digital Klein bottle, initial value problem",
            {
                "graph": "klein16",
                "coefficients": {"uniform": 0.1},
                "f0": {"7": 16.0},
                "f1": {"9": 16.0},
                "steps": 100,
            },
            (
                Check("sum", 16.0, 1e-9),
                Check("period_gt", 2.0, 0.0, (0, 2)),
                Check("bounded", 10.0),
            ),
            (0, 2),
        ),
        ExperimentPreset(
            "exp_4_4",
            "digital projective plane, initial value problem",
            {
                "graph": "projective11",
                "coefficients": {"uniform": 0.1},
                "f0": {"9": 11.0},
                "f1": {"10": 11.0},
                "steps": 100,
            },
            (
                Check("sum", 11.0, 1e-9),
                Check("period_gt", 2.0, 0.0, (0, 1)),
                Check("bounded", 10.0),
            ),
            (0, 1),
        ),
        ExperimentPreset(
            "exp_4_5",
            "digital 4-sphere, initial value problem",
            {
                "graph": "sphere4_min",
                "coefficients": {"uniform": 0.01},
                "f0": {"5": 10.0},
                "f1": {"6": 10.0},
                "steps": 400,
            },
            (
                Check("sum", 10.0, 1e-9),
                Check("period_gt", 2.0, 0.0, (0, 1)),
                Check("bounded", 10.0),
            ),
            (0, 1),
        ),
    )
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"check {self.name}: {'PASS' if self.passed else 'FAIL'} ({self.detail})"


@dataclass
class ExperimentResult:
    name: str
    problem: ProblemSpec
    trace: Trace  # plotting horizon
    long_trace: Trace  # check horizon
    checks: list[CheckResult]
    report: list[str]
    files: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _period(series) -> Optional[analysis.PeriodEstimate]:
    try:
        return analysis.estimate_period(series)
    except analysis.AperiodicError:
        return None


def evaluate_check(check: Check, problem: ProblemSpec, trace: Trace) -> CheckResult:
    v = trace.values
    if check.kind == "sum":
        dev = float(np.abs(trace.sums() - check.target).max())
        return CheckResult(f"sum={check.target!r}", dev < check.tol, f"max |S^n - A| = {dev:.3e}, tol {check.tol:g}")
    if check.kind in ("period", "period_gt"):
        parts, ok = [], True
        for p in check.points:
            est = _period(v[:, p])
            if est is None:
                ok = False
                parts.append(f"p{p}: aperiodic")
                continue
            if check.kind == "period":
                rel = abs(est.period / check.target - 1.0)
                ok &= rel < check.tol
                parts.append(f"p{p}: T={est.period:.4f} vs {check.target:.4f} (rel {rel:.2e})")
            else:
                ok &= est.period > check.target and math.isfinite(est.residual)
                parts.append(f"p{p}: T={est.period:.4f}, residual={est.residual:.3g}")
        name = f"period~{check.target:.4f}" if check.kind == "period" else f"period>{check.target:g}"
        return CheckResult(name, ok, "; ".join(parts))
    if check.kind == "bounded":
        init = max(float(np.abs(problem.f0).max()), float(np.abs(problem.f1).max()))
        peak = float(np.abs(v).max())
        return CheckResult(
            f"bounded<{check.target:g}x", bool(np.isfinite(peak)) and peak <= check.target * init,
            f"max |f| = {peak:.4g}, initial max {init:.4g}",
        )
    if check.kind == "clamped":
        bad = []
        for p in check.points:
            value = problem.boundary.get(p)
            if value is None:
                bad.append(p)
                continue
            expect = np.full(len(v), value) if isinstance(value, float) else np.asarray(value)[: len(v)]
            if not np.array_equal(v[:, p], expect):
                bad.append(p)
        return CheckResult("clamped", not bad, f"points {list(check.points)}" + (f", violated at {bad}" if bad else ""))
    if check.kind == "interior_nonzero":
        hit = bool(np.any(v[2:, list(check.points)] != 0.0)) if len(v) > 2 else False
        return CheckResult("interior_nonzero", hit, f"points {list(check.points)} for n >= 2")
    raise ValueError(f"unknown check kind {check.kind!r}")


def default_out_dir() -> str:
    return os.environ.get("DIGIWAVE_OUT", ".")


def run_experiment(
    name: str,
    overrides=(),
    out_dir: Optional[str] = None,
    gnuplot: bool = False,
    write: bool = True,
) -> ExperimentResult:
    """Run a preset, evaluate its checks and (optionally) write its artifacts.

    Files written to ``out_dir``: ``<name>_trace.csv`` (or ``.dat`` with
    ``gnuplot``), ``<name>_report.txt`` and ``<name>_acf.csv``.
    """
    if name not in PRESETS:
        raise KeyError(f"unknown experiment {name!r}; known: {', '.join(PRESETS)}")
    preset = PRESETS[name]
    cfg = apply_overrides(preset.config, overrides)
    problem = problem_from_config(cfg)
    steps = problem.steps
    sequences = any(not isinstance(b, float) for b in problem.boundary.values())
    horizon = steps if sequences else max(steps, preset.check_steps)
    long_problem = ProblemSpec(problem.scheme, problem.f0, problem.f1, horizon, problem.boundary)
    long_trace = solve(long_problem)
    trace = Trace(long_trace.scheme, long_trace.values[: steps + 1], long_trace.problem, long_trace.boundary)

    checks = [evaluate_check(c, problem, long_trace) for c in preset.checks]
    cons = analysis.conservation_report(long_trace)
    report = [f"experiment={name}", f"steps={steps}", f"check_steps={horizon}"]
    report += cons.lines()
    for p in preset.report_points:
        est = _period(long_trace.series(p))
        if est is None:
            report.append(f"period[p{p}]=nan")
            report.append(f"residual[p{p}]=nan")
        else:
            report.append(f"period[p{p}]={est.period!r}")
            report.append(f"residual[p{p}]={est.residual!r}")
    report += [c.line() for c in checks]
    report.append(f"status={'PASS' if all(c.passed for c in checks) else 'FAIL'}")

    result = ExperimentResult(name, problem, trace, long_trace, checks, report)
    if write:
        out_dir = out_dir or default_out_dir()
        os.makedirs(out_dir, exist_ok=True)
        trace_path = os.path.join(out_dir, f"{name}_trace.{'dat' if gnuplot else 'csv'}")
        with open(trace_path, "w", encoding="utf-8", newline="\n") as fh:
            trace.to_csv(fh, gnuplot=gnuplot)
        report_path = os.path.join(out_dir, f"{name}_report.txt")
        with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(report) + "\n")
        acf_path = os.path.join(out_dir, f"{name}_acf.csv")
        buf = io.StringIO()
        p = preset.report_points[0]
        try:
            analysis.write_autocorrelation_csv(buf, long_trace.series(p), max_lag=min(len(long_trace.values), 1000))
        except analysis.AperiodicError:
            buf = io.StringIO("lag,autocorrelation\n")
        with open(acf_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
        result.files = [trace_path, report_path, acf_path]
    return result
