"""
Tests for the seeded property suite.
"""

import json

import pytest

from src.latqd.cli.verify import (
    MAX_BOX_POINTS,
    PROPERTY_CLASSES,
    ClassOutcome,
    VerifyCase,
    check_oracle,
    draw_cases,
    run_verify,
)
from src.latqd.config import THREADS_ENV_VAR, EngineConfig
from src.latqd.utilities import box_size


class TestDrawCases:
    def test_same_seed_same_cases(self):
        assert draw_cases(20, seed=11) == draw_cases(20, seed=11)

    def test_different_seeds_differ(self):
        assert draw_cases(20, seed=1) != draw_cases(20, seed=2)

    def test_cases_respect_bounds(self):
        for case in draw_cases(100, seed=4, max_n=30, max_s=4, max_d=6):
            assert 2 <= case.N <= 30
            assert 1 <= len(case.g) <= 4
            assert 1 <= case.d <= 6
            assert all(1 <= g_j < case.N for g_j in case.g)
            assert sorted(case.order) == list(range(len(case.g)))
            assert box_size(case.d, len(case.g)) <= MAX_BOX_POINTS or case.d == 1

    def test_smallest_bounds(self):
        (case,) = draw_cases(1, seed=0, max_n=2, max_s=1, max_d=1)
        assert (case.N, case.g, case.d) == (2, (1,), 1)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"cases": 0},
            {"cases": 1, "max_n": 1},
            {"cases": 1, "max_s": 0},
            {"cases": 1, "max_d": 0},
        ],
    )
    def test_bad_bounds_rejected(self, kwargs):
        with pytest.raises(ValueError):
            draw_cases(seed=0, **kwargs)


class TestRunVerify:
    def test_clean_run_passes_every_class(self):
        report = run_verify(cases=10, seed=7, max_n=20, max_s=2, max_d=3)
        assert report.passed
        assert [outcome.name for outcome in report.outcomes] == list(PROPERTY_CLASSES)

    def test_report_text(self):
        text = run_verify(cases=1, seed=0, max_n=2, max_s=1, max_d=1).render_text()
        assert text.splitlines() == [
            "oracle: PASS",
            "fft_padding: PASS",
            "point_eval: PASS",
            "degree: PASS",
            "symmetry: PASS",
            "verify: PASS (1 cases)",
        ]

    def test_injected_fault_fails_oracle_only(self):
        report = run_verify(cases=6, seed=2, max_n=20, max_s=2, max_d=3, inject_fault=True)
        assert not report.passed
        failed = [outcome.name for outcome in report.outcomes if not outcome.passed]
        assert failed == ["oracle"]

    def test_failure_names_smallest_instance(self):
        report = run_verify(cases=6, seed=2, max_n=20, max_s=2, max_d=3, inject_fault=True)
        oracle = report.outcomes[0]
        case, message = oracle.minimal_failure()
        assert case.size_key() == min(failure[0].size_key() for failure in oracle.failures)
        assert "fft gave" in message
        assert case.describe() in report.render_text()

    def test_reports_reproducible(self):
        first = run_verify(cases=8, seed=5, max_n=20, max_s=2, max_d=3)
        second = run_verify(cases=8, seed=5, max_n=20, max_s=2, max_d=3)
        assert first.render_text() == second.render_text()
        assert first.serialize() == second.serialize()

    def test_thread_count_does_not_change_report(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        serial = run_verify(cases=20, seed=9, config=EngineConfig(threads=1, chunk_rows=8))
        parallel = run_verify(cases=20, seed=9, config=EngineConfig(threads=4, chunk_rows=8))
        assert serial.render_text() == parallel.render_text()
        assert json.dumps(serial.serialize()) == json.dumps(parallel.serialize())

    @pytest.mark.slow
    def test_two_hundred_default_cases(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        serial = run_verify(cases=200, config=EngineConfig(threads=1))
        parallel = run_verify(cases=200, config=EngineConfig(threads=4))
        assert serial.passed
        assert serial.render_text().splitlines()[-1] == "verify: PASS (200 cases)"
        assert json.dumps(serial.serialize()) == json.dumps(parallel.serialize())

    def test_serialized_failure(self):
        report = run_verify(cases=3, seed=1, max_n=10, max_s=1, max_d=2, inject_fault=True)
        entry = report.serialize()["classes"][0]
        assert entry["name"] == "oracle"
        assert entry["passed"] is False
        assert entry["failures"] == 3
        assert set(entry["minimal"]) == {"N", "g", "d", "case", "message"}


class TestChecks:
    def test_oracle_check_on_hand_case(self):
        case = VerifyCase(index=0, N=5, g=(1, 2), d=2, z=1j, unit=2, order=(1, 0), negate=0)
        assert check_oracle(case, None, False) is None
        assert check_oracle(case, None, True).startswith("fft gave")

    def test_describe_replays_with_cli_flags(self):
        case = VerifyCase(index=3, N=13, g=(1, 5), d=2, z=1j, unit=5, order=(0, 1), negate=1)
        assert case.describe() == "case 3: --n 13 --g 1,5 --d 2"

    def test_outcome_without_failures(self):
        outcome = ClassOutcome("oracle")
        assert outcome.passed
        assert outcome.minimal_failure() is None
