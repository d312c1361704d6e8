"""
Tests for the scaling harness with tiny ladders. Timing values are not
asserted here; see tests/engines/test_engine_scaling.py.
"""

import json

import pytest

from src.latqd.cli.bench import BenchRow, bench_rule, machine_info, render_rows, run_sweep
from src.latqd.config import EngineConfig
from src.latqd.lattice.rule import LatticeRule


class TestRunSweep:
    def test_rows_follow_ladder(self):
        rows = run_sweep("s", "charsum", repeats=1, values=(1, 2, 3), n=31, d=2)
        assert [row.s for row in rows] == [1, 2, 3]
        assert all(row.N == 31 and row.d == 2 for row in rows)
        assert rows[0].ratio is None
        assert all(row.ratio is not None for row in rows[1:])

    def test_degree_kernel(self):
        rows = run_sweep("n", "dp-degree", repeats=2, values=(31, 61), s=2, d=3)
        assert [row.N for row in rows] == [31, 61]
        assert all(row.median_ns >= 0 for row in rows)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"sweep": "g", "engine": "charsum"},
            {"sweep": "n", "engine": "brute"},
            {"sweep": "n", "engine": "charsum", "repeats": 0},
            {"sweep": "n", "engine": "charsum", "values": ()},
        ],
    )
    def test_bad_arguments_rejected(self, kwargs):
        with pytest.raises(ValueError):
            run_sweep(**kwargs)


class TestBenchRule:
    def test_korobov_rule(self):
        assert bench_rule(31, 3) == LatticeRule(31, [1, 3, 9])

    def test_zero_component_rejected(self):
        with pytest.raises(ValueError):
            bench_rule(9, 3)


class TestRenderRows:
    ROWS = [BenchRow(31, 31, 2, 3, 1000, None), BenchRow(61, 61, 2, 3, 2100, 2.1)]

    def test_csv_table(self):
        text = render_rows(self.ROWS, "n", "charsum", "csv", {"cpu_count": 8})
        assert text.splitlines() == [
            "# cpu_count=8",
            "sweep,engine,value,N,s,d,median_ns,ratio",
            "n,charsum,31,31,2,3,1000,",
            "n,charsum,61,61,2,3,2100,2.1",
        ]

    def test_json_document(self):
        text = render_rows(self.ROWS, "n", "charsum", "json", {"cpu_count": 8})
        document = json.loads(text)
        assert document["machine"] == {"cpu_count": 8}
        assert document["rows"][1]["ratio"] == 2.1

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            render_rows(self.ROWS, "n", "charsum", "xml", {})

    def test_machine_info_reports_threads(self, monkeypatch):
        monkeypatch.delenv("LATQD_THREADS", raising=False)
        assert machine_info(EngineConfig(threads=3))["threads"] == 3
        assert machine_info()["threads"] is None
