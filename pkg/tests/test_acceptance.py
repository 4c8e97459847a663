"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v -s``; the lines are
also collected into the "acceptance criteria" section of the pytest summary.
"""

import math
import time

import numpy as np
import pytest

from digiwave.analysis import closed_form_period, estimate_period, fit_two_point
from digiwave.catalog import catalog
from digiwave.config import problem_from_config
from digiwave.experiments import PRESETS, run_experiment
from digiwave.graph import delete_point, euler_characteristic, graph_from_edges, is_connected, join, rim
from digiwave.topology import (
    is_n_manifold,
    is_n_sphere,
    is_orientable,
    minimal_sphere,
    simple_point_reduction,
)
from digiwave.wave import ProblemSpec, impulse, read_trace_csv, run_ivp, uniform_scheme

from oracles import brute_clique_counts, pivot_clique_counts

HORIZON = 10_000


def _long_run(name):
    problem = problem_from_config(PRESETS[name].config)
    long = ProblemSpec(problem.scheme, problem.f0, problem.f1, HORIZON, problem.boundary)
    t0 = time.perf_counter()
    trace = run_ivp(long)
    return trace, time.perf_counter() - t0


@pytest.mark.parametrize("name,a", [("exp_4_1", 2.0), ("exp_4_3", 16.0), ("exp_4_4", 11.0), ("exp_4_5", 10.0)])
def test_c01_conservation(criterion, name, a):
    trace, elapsed = _long_run(name)
    direct = np.array([sum(row) for row in trace.values.tolist()])
    dev = float(np.abs(direct - a).max())
    criterion(
        f"C1 conservation {name}",
        dev < 1e-9 and elapsed < 1.0,
        f"A={a:g} max|S^n-A|={dev:.2e} over n<={HORIZON}, {elapsed:.2f}s",
    )


def test_c02_two_point_period(criterion):
    target = 2 * math.pi / math.acos(0.75)
    res = run_experiment("exp_4_1", write=False)
    est = estimate_period(res.long_trace.series(0))
    rel = abs(est.period / target - 1)
    closed = closed_form_period(0.8, 0.3).period
    short = ProblemSpec(res.problem.scheme, res.problem.f0, res.problem.f1, 1000)
    tr = run_ivp(short)
    fit_err = max(
        float(np.abs(fit_two_point(tr, p).predict(np.arange(1001)) - tr.series(p)).max()) for p in (0, 1)
    )
    criterion(
        "C2 two-point period",
        rel < 0.01 and abs(closed - target) < 1e-12 and fit_err < 1e-9,
        f"simulated T={est.period:.5f} vs {target:.5f} (rel {rel:.1e}), closed-form fit err {fit_err:.1e}",
    )


DRIFT_CASES = [
    ("two_point", {"dense": [[0.8, 0.3], [0.2, 0.7]]}),
    ("string_disk(10)", {"sparse": PRESETS["exp_4_2"].config["coefficients"]["sparse"]}),
    ("klein16", {"uniform": 0.1}),
    ("torus16", {"uniform": 0.1}),
    ("projective11", {"uniform": 0.1}),
    ("sphere4_min", {"uniform": 0.01}),
    ("sphere2_min", {"uniform": 0.2}),
]


@pytest.mark.parametrize("graph,coeffs", DRIFT_CASES)
def test_c03_sum_drift(criterion, graph, coeffs):
    g = catalog(graph).graph
    rng = np.random.default_rng(11)
    f0 = rng.normal(size=g.n)
    f1 = rng.normal(size=g.n)
    f1 += (math.fsum(f0) + 1.0 - math.fsum(f1)) / g.n
    assert abs(math.fsum(f1) - math.fsum(f0) - 1.0) < 1e-14
    problem = problem_from_config({"graph": graph, "coefficients": coeffs, "f0": f0.tolist(),
                                   "f1": f1.tolist(), "steps": HORIZON})
    trace = run_ivp(problem)
    s = np.array([sum(row) for row in trace.values.tolist()])
    n = np.arange(HORIZON + 1)
    excess = np.abs(s - s[0] - n)[1:] / n[1:]
    worst = float(excess.max())
    criterion(f"C3 sum drift {graph}", worst < 1e-9, f"max |S^n-S^0-n|/n = {worst:.2e}")


def test_c04_topology_recognizers(criterion):
    t0 = time.perf_counter()
    sizes = [minimal_sphere(n).n for n in range(5)]
    spheres = all(is_n_sphere(minimal_sphere(n), n) for n in range(5))
    surfaces = {
        name: is_n_manifold(catalog(name).graph, 2) and not is_n_sphere(catalog(name).graph, 2)
        for name in ("torus16", "klein16", "projective11")
    }
    k = catalog("klein16").graph
    klein_rims = all(rim(k, v).n == 6 and is_n_sphere(rim(k, v), 1) for v in k.points)
    s4 = catalog("sphere4_min").graph
    s4_rims = all(rim(s4, v).n == 8 and is_n_sphere(rim(s4, v), 3) for v in s4.points)
    elapsed = time.perf_counter() - t0
    ok = sizes == [2, 4, 6, 8, 10] and spheres and all(surfaces.values()) and klein_rims and s4_rims
    criterion(
        "C4 topology recognizers",
        ok and elapsed < 30,
        f"sphere sizes {sizes}, surfaces {surfaces}, klein rims {klein_rims}, S4 rims {s4_rims}, {elapsed:.2f}s",
    )


EULER_CASES = [
    ("S2", minimal_sphere(2), 2),
    ("S4", minimal_sphere(4), 2),
    ("S1", minimal_sphere(1), 0),
    ("S3", minimal_sphere(3), 0),
    ("torus16", catalog("torus16").graph, 0),
    ("klein16", catalog("klein16").graph, 0),
    ("projective11", catalog("projective11").graph, 1),
    ("point", graph_from_edges(1, []), 1),
]


@pytest.mark.parametrize("label,g,chi", EULER_CASES, ids=[c[0] for c in EULER_CASES])
def test_c05_euler(criterion, label, g, chi):
    counts = brute_clique_counts(g) if g.n <= 12 else pivot_clique_counts(g)
    oracle = sum((-1) ** k * c for k, c in enumerate(counts))
    got = euler_characteristic(g)
    criterion(f"C5 euler {label}", got == chi == oracle, f"chi={got}, oracle={oracle}, expected {chi}")


def test_c06_orientability(criterion):
    got = {name: is_orientable(catalog(name).graph) for name in ("torus16", "klein16", "projective11")}
    criterion(
        "C6 orientability",
        got == {"torus16": True, "klein16": False, "projective11": False},
        ", ".join(f"{k}={v}" for k, v in got.items()),
    )


def test_c07_projective_deletion(criterion):
    g = catalog("projective11").graph
    lengths, ok = [], True
    for v in g.points:
        res = simple_point_reduction(delete_point(g, v))
        chordless = res.n >= 4 and res.n_edges == res.n and all(res.degree(p) == 2 for p in res.points)
        ok &= chordless and is_connected(res) and is_n_sphere(res, 1)
        lengths.append(res.n)
    criterion("C7 projective deletion", ok, f"residual cycle lengths {lengths}")


JOIN_CASES = [((0, 0), 1), ((0, 1), 2), ((1, 1), 3), ((0, 2), 3), ((0, 3), 4)]
SPHERE_BY_DIM = {0: "sphere0", 1: "sphere1_min", 2: "sphere2_min", 3: "sphere3_min"}


@pytest.mark.parametrize("dims,expected", JOIN_CASES, ids=[f"{a}x{b}" for (a, b), _ in JOIN_CASES])
def test_c08_join_sphere_law(criterion, dims, expected):
    a, b = (catalog(SPHERE_BY_DIM[d]).graph for d in dims)
    j = join(a, b)
    criterion(f"C8 join S{dims[0]}*S{dims[1]}", is_n_sphere(j, expected), f"{j.n} points, sphere({expected})")


def test_c09_bvp_clamping(criterion, tmp_path):
    res = run_experiment("exp_4_2", out_dir=str(tmp_path))
    with open(tmp_path / "exp_4_2_trace.csv") as fh:
        csv = read_trace_csv(fh)
    clamped = all(
        np.all(v[:, 0] == 0.0) and np.all(v[:, 9] == 0.0) for v in (csv, res.long_trace.values)
    )
    moving = bool(np.any(csv[2:, 1:9] != 0.0))
    criterion("C9 BVP clamping", clamped and moving,
              f"ends zero over {len(res.long_trace.values)} rows, interior nonzero: {moving}")


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_c10_qualitative_oscillation(criterion, name, tmp_path):
    res = run_experiment(name, out_dir=str(tmp_path))
    with open(tmp_path / f"{name}_trace.csv") as fh:
        csv = read_trace_csv(fh)
    init = max(float(np.abs(res.problem.f0).max()), float(np.abs(res.problem.f1).max()))
    long = res.long_trace.values
    bounded = float(np.abs(long).max()) <= 10 * init and float(np.abs(csv).max()) <= 10 * init
    periods = []
    ok = bounded and len(long) == HORIZON + 1
    for p in PRESETS[name].report_points:
        est = estimate_period(long[:, p])
        periods.append(round(est.period, 3))
        ok &= est.period > 2 and math.isfinite(est.residual)
    criterion(
        f"C10 oscillation {name}",
        ok,
        f"max|f|={np.abs(long).max():.3g} (10x initial {10 * init:g}), periods {periods}",
    )
