"""Bench harness: CSV schema, determinism, report aggregation, fetch."""

import csv
import hashlib
import json
import math
from pathlib import Path

import pytest

from qlpbench.bench import (
    CSV_COLUMNS,
    REFERENCE_GATE_SECONDS,
    fetch,
    make_report,
    read_csv_rows,
    report_json,
    run_bench,
    write_json_records,
)
from qlpbench.instances import InstanceSpec, emit_instance
from qlpbench.simplex import PivotRule

DATA = Path(__file__).parent / "data"

TIMING_COLUMNS = {"classical_iter_seconds", "required_gate_time"}


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("bench")
    paths = [emit_instance(InstanceSpec("vertex_cover", 15, 0.3, s),
                           root / "inst") for s in (1, 2)]
    out = root / "out"
    summary = run_bench(paths, PivotRule.steepest_edge(), out)
    return root, paths, out, summary


class TestRunBench:
    def test_smoke(self, small_run):
        _, _, out, summary = small_run
        assert len(summary["instances"]) == 2 and not summary["errors"]
        assert (out / "run_manifest.json").exists()
        csvs = sorted(out.glob("*.csv"))
        assert len(csvs) == 2
        rows = read_csv_rows(csvs[0])
        assert rows and rows[0]["iteration"] == 0

    def test_schema_header(self, small_run):
        _, _, out, _ = small_run
        path = next(out.glob("*.csv"))
        lines = path.read_text().splitlines()
        assert lines[0] == "# schema=1"
        assert lines[1].split(",") == list(CSV_COLUMNS)

    def test_gate_time_consistency(self, small_run):
        _, _, out, _ = small_run
        for path in out.glob("*.csv"):
            for r in read_csv_rows(path):
                if r["flags"] or not math.isfinite(r["required_gate_time"]):
                    continue
                prod = r["required_gate_time"] * r["total_lb"]
                assert prod == pytest.approx(r["classical_iter_seconds"],
                                             rel=1e-12)
                assert r["total_lb"] == pytest.approx(
                    r["is_optimal_lb"] + r["find_column_lb"]
                    + r["is_unbounded_lb"] + r["find_row_lb"], rel=1e-12)

    def test_determinism_modulo_timing(self, small_run, tmp_path):
        root, paths, out, _ = small_run
        out2 = tmp_path / "again"
        run_bench(paths, PivotRule.steepest_edge(), out2)
        for p1 in sorted(out.glob("*.csv")):
            p2 = out2 / p1.name
            rows1, rows2 = read_csv_rows(p1), read_csv_rows(p2)
            assert len(rows1) == len(rows2)
            for a, b in zip(rows1, rows2):
                for col in CSV_COLUMNS:
                    if col in TIMING_COLUMNS:
                        continue
                    assert a[col] == b[col], col

    def test_unparsable_instance_skipped(self, tmp_path):
        bad = tmp_path / "bad.mps"
        bad.write_text("GARBAGE SECTION\n")
        summary = run_bench([bad], PivotRule.dantzig(), tmp_path / "o")
        assert summary["all_failed"]
        assert summary["errors"] and "bad.mps" in summary["errors"][0]["instance"]

    def test_json_format(self, tmp_path):
        p = emit_instance(InstanceSpec("vertex_cover", 8, 0.4, 1),
                          tmp_path / "i")
        run_bench([p], PivotRule.dantzig(), tmp_path / "o", fmt="json")
        rec = json.loads(next((tmp_path / "o").glob("*.records.json"))
                         .read_text())
        assert rec and set(rec[0]) == set(CSV_COLUMNS)


class TestReport:
    def test_golden_fixture(self):
        rep = make_report(DATA / "report_fixture")
        golden = (DATA / "report_fixture_golden.json").read_text()
        assert report_json(rep) == golden

    def test_fixture_semantics(self):
        rep = make_report(DATA / "report_fixture")
        by_id = {i["instance_id"]: i for i in rep["instances"]}
        assert by_id["alpha"]["mean_required_gate_time"] == 1e-18
        assert by_id["beta"]["mean_required_gate_time"] == 1e-14
        assert by_id["beta"]["excluded_rows"] == 1
        assert rep["reference_gate_seconds"] == REFERENCE_GATE_SECONDS
        at = {c["gate_time"]: c["fraction"] for c in rep["advantage_curve"]}
        assert at[1e-16] == 0.5

    def test_curve_monotone(self, small_run):
        _, _, out, _ = small_run
        fr = [c["fraction"] for c in make_report(out)["advantage_curve"]]
        assert all(a >= b for a, b in zip(fr, fr[1:]))

    def test_byte_identical_reruns(self, small_run):
        _, _, out, _ = small_run
        assert report_json(make_report(out)) == report_json(make_report(out))

    def test_empty_dir_errors(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            make_report(tmp_path)


class TestFetch:
    def test_empty_manifest(self, tmp_path):
        man = tmp_path / "m.json"
        man.write_text("[]")
        res = fetch(man, tmp_path / "o")
        assert res == {"fetched": [], "skipped": [], "failed": []}

    def test_file_url_and_idempotence(self, tmp_path):
        src = tmp_path / "inst.mps"
        src.write_text("NAME X\nENDATA\n")
        digest = hashlib.sha256(src.read_bytes()).hexdigest()
        man = tmp_path / "m.json"
        man.write_text(json.dumps([{"url": src.as_uri(), "sha256": digest}]))
        out = tmp_path / "o"
        first = fetch(man, out)
        assert first["fetched"] == ["inst.mps"]
        assert (out / "inst.mps").read_text() == src.read_text()
        second = fetch(man, out)
        assert second["skipped"] == ["inst.mps"] and not second["fetched"]

    def test_bad_checksum_rejected(self, tmp_path):
        src = tmp_path / "inst.mps"
        src.write_text("NAME X\nENDATA\n")
        man = tmp_path / "m.json"
        man.write_text(json.dumps([{"url": src.as_uri(),
                                    "sha256": "0" * 64}]))
        res = fetch(man, tmp_path / "o")
        assert res["failed"] and "checksum" in res["failed"][0]["reason"]
        assert not (tmp_path / "o" / "inst.mps").exists()
