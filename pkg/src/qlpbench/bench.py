"""Hybrid-benchmark harness: solve instances classically, join the logged
per-iteration quantities with the quantum gate-count lower bounds, and
aggregate into the report consumed by the figure renderer.

Artifacts: one CSV of per-iteration records per instance (schema-versioned),
a run manifest JSON, and an aggregate report JSON.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import platform
import urllib.request
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from qlpbench import __version__
from qlpbench.lp import LinearProgram, standardize
from qlpbench.metrics import (
    INV_UNAVAILABLE,
    IterationMetrics,
    MetricsCollector,
    normalized_bounds,
)
from qlpbench.mps import read_mps
from qlpbench.qcost import (
    GateCosts,
    IterationBound,
    QlsParams,
    required_gate_time,
    simplex_iter_lb,
)
from qlpbench.simplex import PivotRule, SolveOutcome, solve

CSV_SCHEMA_VERSION = 1
REFERENCE_GATE_SECONDS = 6.5e-9
ADVANTAGE_GRID = tuple(float(g) for g in np.logspace(-24.0, -6.0, 37))

CSV_COLUMNS = (
    "instance_id", "iteration", "n", "m", "nnz_basis", "d_c", "d_r", "d",
    "basis_max_abs", "norm1_basis", "norm1_basis_inv", "norm1_inv_method",
    "kappa1", "kappa_lb", "t_enter", "max_abs_reduced_cost", "c_max",
    "t_u", "u_norm2", "classical_iter_seconds", "pivot_rule",
    "is_optimal_lb", "find_column_lb", "is_unbounded_lb", "find_row_lb",
    "total_lb", "required_gate_time", "flags",
)

_INT_COLS = {"iteration", "n", "m", "nnz_basis", "d_c", "d_r", "d",
             "t_enter", "t_u"}
_STR_COLS = {"instance_id", "norm1_inv_method", "pivot_rule", "flags"}


@dataclass(frozen=True)
class BenchRecord:
    instance_id: str
    metrics: IterationMetrics
    bound: IterationBound
    required_gate_time: float

    def to_row(self) -> list[str]:
        m, b = self.metrics, self.bound
        vals = {
            "instance_id": self.instance_id,
            "iteration": m.iter,
            "n": m.n, "m": m.m, "nnz_basis": m.nnz_basis,
            "d_c": m.d_c, "d_r": m.d_r, "d": m.d,
            "basis_max_abs": m.basis_max_abs,
            "norm1_basis": m.norm1_basis,
            "norm1_basis_inv": m.norm1_basis_inv,
            "norm1_inv_method": m.norm1_inv_method,
            "kappa1": m.kappa1, "kappa_lb": m.kappa_lb,
            "t_enter": m.t_enter,
            "max_abs_reduced_cost": m.max_abs_reduced_cost,
            "c_max": m.c_max, "t_u": m.t_u, "u_norm2": m.u_norm2,
            "classical_iter_seconds": m.classical_iter_seconds,
            "pivot_rule": b.pivot_rule,
            "is_optimal_lb": b.is_optimal_lb,
            "find_column_lb": b.find_column_lb,
            "is_unbounded_lb": b.is_unbounded_lb,
            "find_row_lb": b.find_row_lb,
            "total_lb": b.total_lb,
            "required_gate_time": self.required_gate_time,
            "flags": ";".join(sorted(b.flags)),
        }
        return [_format_cell(vals[c]) for c in CSV_COLUMNS]


def _format_cell(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def bound_for_metrics(m: IterationMetrics, rule: str, eps: float,
                      delta: float,
                      costs: GateCosts = GateCosts()) -> IterationBound:
    """Instantiate the per-iteration gate bound from one metrics row."""
    nb = normalized_bounds(m)
    p = QlsParams(norm1=nb.norm1_hat_lb, norm_max=nb.norm_max_hat_lb,
                  d=m.d, kappa=m.kappa_lb, eps=eps)
    return simplex_iter_lb(rule, m.n, m.m, eps, delta, p,
                           t_enter=m.t_enter, c_max=m.c_max, t_u=m.t_u,
                           u_norm2=m.u_norm2, costs=costs)


def bench_lp(lp: LinearProgram, instance_id: str, rule: PivotRule,
             eps: float = 1e-3, delta: float = 1e-3,
             time_limit: float = 1800.0,
             eps_opt: float = 1e-3) -> tuple[SolveOutcome, list[BenchRecord]]:
    """Solve one LP and produce its per-iteration records."""
    std = standardize(lp)
    collector = MetricsCollector(improving_tol=eps_opt)
    outcome = solve(std, rule, eps_opt=eps_opt, time_budget=time_limit,
                    observer=collector)
    records = []
    for m in collector.rows:
        if m.classical_iter_seconds <= 0.0:  # clock granularity floor
            m = dataclasses.replace(m, classical_iter_seconds=1e-12)
        b = bound_for_metrics(m, rule.kind, eps, delta)
        records.append(BenchRecord(
            instance_id=instance_id, metrics=m, bound=b,
            required_gate_time=required_gate_time(m.classical_iter_seconds, b)))
    return outcome, records


def write_csv(records: list[BenchRecord], path: str | Path):
    path = Path(path)
    with path.open("w", newline="") as f:
        f.write(f"# schema={CSV_SCHEMA_VERSION}\n")
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(r.to_row())


def record_dict(r: BenchRecord) -> dict:
    row = r.to_row()
    out = {}
    for k, v in zip(CSV_COLUMNS, row):
        if k in _STR_COLS:
            out[k] = v
        elif k in _INT_COLS:
            out[k] = int(v)
        else:
            out[k] = float(v)
    return out


def write_json_records(records: list[BenchRecord], path: str | Path):
    rows = [record_dict(r) for r in records]
    # inf/nan are not valid JSON literals; spell them as strings
    for row in rows:
        for k, v in row.items():
            if isinstance(v, float) and not math.isfinite(v):
                row[k] = _format_cell(v)
    Path(path).write_text(json.dumps(rows, indent=2) + "\n")


def read_csv_rows(path: str | Path) -> list[dict]:
    """Parse a bench CSV back into typed dicts."""
    path = Path(path)
    with path.open() as f:
        first = f.readline()
        if not first.startswith("# schema="):
            raise ValueError(f"{path}: missing schema comment row")
        version = int(first.strip().split("=", 1)[1])
        if version != CSV_SCHEMA_VERSION:
            raise ValueError(f"{path}: unsupported schema {version}")
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected column set")
        rows = []
        for raw in reader:
            row = {}
            for k, v in raw.items():
                if k in _STR_COLS:
                    row[k] = v
                elif k in _INT_COLS:
                    row[k] = int(v)
                else:
                    row[k] = float(v)
            rows.append(row)
        return rows


def run_bench(paths: list[str | Path], rule: PivotRule, out_dir: str | Path,
              eps: float = 1e-3, delta: float = 1e-3,
              time_limit: float = 1800.0,
              eps_opt: float = 1e-3, fmt: str = "csv") -> dict:
    """Benchmark a list of MPS instances; returns the run summary dict.

    Unparsable or failing instances are skipped with a recorded reason;
    the run only fails outright when every instance fails.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {
        "tool_version": __version__,
        "schema": CSV_SCHEMA_VERSION,
        "parameters": {"pivot": rule.kind, "seed": rule.seed, "eps": eps,
                       "delta": delta, "time_limit": time_limit,
                       "eps_opt": eps_opt},
        "host": {"platform": platform.platform(),
                 "python": platform.python_version()},
        "instances": [],
        "errors": [],
    }
    any_ok = False
    for p in paths:
        p = Path(p)
        instance_id = p.stem.removesuffix(".mps")
        try:
            lp = read_mps(p)
            outcome, records = bench_lp(lp, instance_id, rule, eps=eps,
                                        delta=delta, time_limit=time_limit,
                                        eps_opt=eps_opt)
        except Exception as e:  # noqa: BLE001 - skip-and-log contract
            summary["errors"].append({"instance": str(p), "reason": str(e)})
            continue
        if fmt == "json":
            csv_path = out_dir / f"{instance_id}.records.json"
            write_json_records(records, csv_path)
        else:
            csv_path = out_dir / f"{instance_id}.csv"
            write_csv(records, csv_path)
        summary["instances"].append({
            "instance": instance_id,
            "status": outcome.status.value,
            "objective": None if math.isnan(outcome.objective)
            else outcome.objective,
            "iterations": outcome.iterations,
            "phase1_iterations": outcome.phase1_iterations,
            "csv": csv_path.name,
        })
        any_ok = True
    (out_dir / "run_manifest.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n")
    summary["all_failed"] = bool(paths) and not any_ok
    return summary


def make_report(csv_dir: str | Path) -> dict:
    """Aggregate per-instance means and the advantage curve.

    Rows with flags or infinite required gate time are excluded from means
    but counted. Pure function of the CSV contents.
    """
    csv_dir = Path(csv_dir)
    csv_paths = sorted(q for q in csv_dir.glob("*.csv"))
    if not csv_paths:
        raise FileNotFoundError(f"no CSV files in {csv_dir}")
    instances = []
    for q in csv_paths:
        rows = read_csv_rows(q)
        if not rows:
            continue
        usable = [r for r in rows
                  if not r["flags"] and math.isfinite(r["required_gate_time"])]
        excluded = len(rows) - len(usable)
        mean_rgt = (float(np.mean([r["required_gate_time"] for r in usable]))
                    if usable else None)
        instances.append({
            "instance_id": rows[0]["instance_id"],
            "group_key": min(rows[0]["m"], rows[0]["n"]),
            "iterations": len(rows),
            "excluded_rows": excluded,
            "mean_required_gate_time": mean_rgt,
            "mean_kappa_lb": float(np.mean([r["kappa_lb"] for r in rows])),
            "mean_col_density": float(np.mean([r["d_c"] / r["m"]
                                               for r in rows])),
            "mean_classical_iter_seconds": float(
                np.mean([r["classical_iter_seconds"] for r in rows])),
        })
    instances.sort(key=lambda d: d["instance_id"])
    with_means = [d for d in instances
                  if d["mean_required_gate_time"] is not None]
    curve = []
    for g in ADVANTAGE_GRID:
        if with_means:
            frac = sum(1 for d in with_means
                       if d["mean_required_gate_time"] >= g) / len(with_means)
        else:
            frac = 0.0
        curve.append({"gate_time": g, "fraction": frac})
    return {
        "schema": CSV_SCHEMA_VERSION,
        "reference_gate_seconds": REFERENCE_GATE_SECONDS,
        "instances": instances,
        "advantage_curve": curve,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def fetch(manifest_path: str | Path, out_dir: str | Path) -> dict:
    """Download manifest entries with SHA-256 verification.

    Manifest: JSON list of {"url", "sha256", optional "filename"}.
    Idempotent: files already present with a matching digest are skipped.
    """
    manifest_path = Path(manifest_path)
    entries = json.loads(manifest_path.read_text())
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = {"fetched": [], "skipped": [], "failed": []}
    for entry in entries:
        url = entry["url"]
        name = entry.get("filename") or url.rstrip("/").rsplit("/", 1)[-1]
        want = entry["sha256"].lower()
        dest = out_dir / name
        if dest.exists() and _sha256(dest) == want:
            results["skipped"].append(name)
            continue
        try:
            with urllib.request.urlopen(url) as resp:
                data = resp.read()
        except OSError as e:
            results["failed"].append({"file": name, "reason": str(e)})
            continue
        got = hashlib.sha256(data).hexdigest()
        if got != want:
            results["failed"].append({
                "file": name,
                "reason": f"checksum mismatch: expected {want}, got {got}"})
            continue
        dest.write_bytes(data)
        results["fetched"].append(name)
    return results
