"""Acceptance gate: one test per primary criterion, each printing a
PASS/FAIL line. Run with `pytest -v -s tests/test_acceptance.py` to see the
per-criterion lines."""

import itertools
import math
import time
import warnings

import numpy as np
import pytest

from qlpbench.bench import (
    CSV_COLUMNS,
    bench_lp,
    make_report,
    read_csv_rows,
    report_json,
    run_bench,
    write_csv,
)
from qlpbench.instances import (
    Graph,
    InstanceSpec,
    build_lp,
    emit_instance,
    lp_max_flow,
    lp_vertex_cover,
    random_digraph,
)
from qlpbench.lp import standardize
from qlpbench.mc import McConfig, mc_qmin, mc_qsearch
from qlpbench.mps import MpsParseError, parse_mps, to_lp, write_mps
from qlpbench.qcost import QlsParams, n_qsearch, qls_lb, qmin_inner_sum
from qlpbench.simplex import PivotRule, SolveStatus, solve

TRIALS = McConfig(trials=100_000, seed=2024)

QLS_FIXTURES = {
    (1.0, 1.0, 1, 1.0, 1e-3): 369970.06763354995,
    (1.0, 1.0, 1, 2.0, 1e-3): 1823726.3727286381,
    (0.75, 0.5, 2, 5.0, 1e-3): 12635446.889356758,
    (1.0, 1.0, 1, 1.0, 1e-6): 1885682.2073808123,
    (0.5, 0.25, 4, 10.0, 1e-4): 72162647.959912055,
}


def verdict(name: str, ok: bool, detail: str = ""):
    line = f"[PRIMARY] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def test_qsearch_formula_vs_monte_carlo():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (4, 8, 16, 32, 64):
        for t in sorted({0, 1, 2, n // 4, n // 2, n}):
            formula = n_qsearch(n, t).value
            mc = mc_qsearch(n, t, TRIALS)
            if mc.std_error > 0:
                worst = max(worst, abs(mc.mean - formula) / mc.std_error)
            else:
                assert mc.mean == pytest.approx(formula, abs=1e-9)
    elapsed = time.perf_counter() - t0
    verdict("QSearch formula vs Monte Carlo",
            worst <= 3.0 and elapsed < 120.0,
            f"max |z| = {worst:.2f}, {elapsed:.1f} s")


def test_qsearch_closed_form_spot_values():
    ok = abs(n_qsearch(4, 0).value - 3.5) <= 1e-12
    for n in (2, 4, 8, 16, 32, 64):
        ok &= abs(n_qsearch(n, n).value - 0.5) <= 1e-12
    verdict("QSearch closed-form spot values", ok)


def test_qmin_formula_vs_monte_carlo():
    worst = 0.0
    for n in (8, 32, 128):
        formula = qmin_inner_sum(n)
        mc = mc_qmin(n, TRIALS)
        worst = max(worst, abs(mc.mean - formula) / mc.std_error)
    verdict("QMin formula vs Monte Carlo", worst <= 3.0,
            f"max |z| = {worst:.2f}")


def test_simplex_brute_force_and_odd_cycles():
    from test_simplex import brute_force_optimum, random_lp
    worst = 0.0
    for seed in range(20):
        std = standardize(random_lp(seed))
        oracle = brute_force_optimum(std)
        out = solve(std, PivotRule.dantzig(), eps_opt=1e-9)
        assert out.status is SolveStatus.OPTIMAL and oracle is not None
        worst = max(worst, abs(out.objective - oracle)
                    / max(1.0, abs(oracle)))
    cyc_ok = True
    for k, want in ((3, 1.5), (5, 2.5), (7, 3.5)):
        g = Graph(k, tuple((min(i, (i + 1) % k), max(i, (i + 1) % k))
                           for i in range(k)))
        got = solve(standardize(lp_vertex_cover(g)), eps_opt=1e-9).objective
        cyc_ok &= abs(got - want) <= 1e-9
    verdict("Simplex vs brute-force vertex enumeration",
            worst <= 1e-8 and cyc_ok, f"max rel err = {worst:.2e}")


def test_max_flow_equals_min_cut():
    def min_cut(g, s, t):
        best = math.inf
        rest = [v for v in range(g.n) if v not in (s, t)]
        for r in range(len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                side = {s} | set(extra)
                best = min(best, sum(
                    c for (u, v), c in zip(g.edges, g.capacities)
                    if u in side and v not in side))
        return best

    worst = 0.0
    for seed in range(25):
        n = 4 + seed % 5
        g = random_digraph(n, 0.45, seed)
        flow = solve(standardize(lp_max_flow(g)), eps_opt=1e-9).objective
        worst = max(worst, abs(flow - min_cut(g, 0, n - 1)))
    verdict("Max-flow LP equals enumerated min cut", worst <= 1e-8,
            f"max abs err = {worst:.2e}")


def test_qls_fixture_grid_and_monotonicity():
    worst = 0.0
    for (n1, nm, d, kap, eps), want in QLS_FIXTURES.items():
        b = qls_lb(QlsParams(n1, nm, d, kap, eps))
        assert not b.flags
        worst = max(worst, abs(b.value - want) / want)
    kappas = [qls_lb(QlsParams(1.0, 1.0, 1, float(2 ** i), 1e-3))
              for i in range(11)]
    epss = [qls_lb(QlsParams(1.0, 1.0, 1, 2.0, 10.0 ** -i))
            for i in range(1, 7)]
    mono = (all(not b.flags for b in kappas + epss)
            and all(a.value < b.value for a, b in zip(kappas, kappas[1:]))
            and all(a.value < b.value for a, b in zip(epss, epss[1:])))
    verdict("QLS bound fixtures and monotonicity",
            worst <= 1e-9 and mono, f"max rel err = {worst:.2e}")


EASY_SWEEP = [
    InstanceSpec("vertex_cover", 50, 0.10, 11),
    InstanceSpec("vertex_cover", 100, 0.05, 12),
    InstanceSpec("vertex_cover", 200, 0.02, 13),
    InstanceSpec("independent_set", 50, 0.10, 21),
    InstanceSpec("independent_set", 100, 0.05, 22),
    InstanceSpec("independent_set", 200, 0.02, 23),
    InstanceSpec("max_clique", 50, 0.90, 31),
    InstanceSpec("max_clique", 100, 0.95, 32),
    InstanceSpec("max_clique", 200, 0.98, 33),
]


def test_easy_family_required_gate_time():
    t0 = time.perf_counter()
    worst = 0.0
    flag_free = 0
    for spec in EASY_SWEEP:
        lp = build_lp(spec)
        outcome, records = bench_lp(lp, spec.stem,
                                    PivotRule.steepest_edge(),
                                    eps=1e-3, delta=1e-3)
        assert outcome.status is SolveStatus.OPTIMAL, spec.stem
        for r in records:
            if r.bound.flags:
                continue
            flag_free += 1
            worst = max(worst, r.required_gate_time)
    elapsed = time.perf_counter() - t0
    verdict("EASY-family required gate time below 1e-12 s",
            flag_free > 0 and worst < 1e-12 and elapsed < 600.0,
            f"max = {worst:.2e} s over {flag_free} flag-free iterations, "
            f"{elapsed:.0f} s")


def test_pipeline_determinism(tmp_path):
    paths = [emit_instance(InstanceSpec("vertex_cover", 20, 0.2, s),
                           tmp_path / "inst") for s in (1, 2)]
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    run_bench(paths, PivotRule.random(7), out1)
    run_bench(paths, PivotRule.random(7), out2)
    timing = {"classical_iter_seconds", "required_gate_time"}
    same = True
    for p1 in sorted(out1.glob("*.csv")):
        rows1 = read_csv_rows(p1)
        rows2 = read_csv_rows(out2 / p1.name)
        same &= len(rows1) == len(rows2)
        for a, b in zip(rows1, rows2):
            same &= all(a[c] == b[c] for c in CSV_COLUMNS if c not in timing)
    # rerunning report on the same CSVs must be byte-identical
    report_same = report_json(make_report(out1)) == report_json(
        make_report(out1))
    verdict("Pipeline determinism", same and report_same)


def test_mps_round_trip_and_fuzz():
    rng = np.random.default_rng(99)
    lp = build_lp(InstanceSpec("vertex_cover", 15, 0.3, 5))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lp2 = to_lp(parse_mps(write_mps(lp)))
    preserved = (
        (lp2.num_rows, lp2.num_cols, lp2.A.nnz)
        == (lp.num_rows, lp.num_cols, lp.A.nnz)
        and np.allclose(lp2.c, lp.c) and np.allclose(lp2.b, lp.b))
    crashes = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(10_000):
            size = int(rng.integers(0, 200))
            blob = rng.integers(0, 256, size=size, dtype=np.uint8).tobytes()
            try:
                parse_mps(blob)
            except MpsParseError:
                pass
            except Exception:
                crashes += 1
    verdict("MPS robustness (round trip + fuzz)",
            preserved and crashes == 0, f"{crashes} crashes / 10000 inputs")
