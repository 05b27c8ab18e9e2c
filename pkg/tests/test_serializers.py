"""
Tests de los serializadores de reportes.
"""
import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from models.report import CheckResult, SuiteReport
from models.serializers import (
    deserialize_report,
    report_to_json,
    serialize_check,
    serialize_report,
    serialize_run,
)
from repositories.report_repository import SuiteRunRepository

CHECK_KEYS = ["label", "anchor", "residual", "tol", "pass", "points", "ms"]


def make_report(residual: float = 2e-13) -> SuiteReport:
    report = SuiteReport("dual", 11)
    report.add(CheckResult("so3: Jacobi del bivector dual", "dual-jacobi", residual, 1e-9, 12))
    report.add(CheckResult("so3: relaciones", "hamiltonian-relations", 1e-15, 1e-9, 12, ms=0.25))
    return report


class TestSerializeReport:
    """Serialización a diccionarios y JSON."""

    def test_key_order(self):
        data = serialize_check(make_report().checks[0])
        assert list(data) == CHECK_KEYS
        assert list(serialize_report(make_report())) == ["suite", "seed", "checks"]

    def test_checks_sorted_by_anchor(self):
        anchors = [c["anchor"] for c in serialize_report(make_report())["checks"]]
        assert anchors == ["dual-jacobi", "hamiltonian-relations"]

    @pytest.mark.parametrize("residual", [math.nan, math.inf])
    def test_non_finite_residual_is_null(self, residual):
        data = serialize_check(CheckResult("x", "dual-jacobi", residual, 1e-9, 1))
        assert data["residual"] is None
        assert data["pass"] is False

    def test_json_is_strict(self):
        text = report_to_json(make_report(residual=math.nan))
        data = json.loads(text)
        assert data["checks"][0]["residual"] is None
        assert "NaN" not in text

    def test_json_is_stable(self):
        assert report_to_json(make_report()) == report_to_json(make_report())


class TestDeserializeReport:
    """Reconstrucción de reportes."""

    def test_round_trip(self):
        report = deserialize_report(serialize_report(make_report()))
        assert report.suite == "dual"
        assert report.seed == 11
        assert report.passed
        assert report.checks[1].ms == 0.25

    def test_null_residual_never_passes(self):
        data = serialize_report(make_report(residual=math.nan))
        report = deserialize_report(data)
        assert report.checks[0].residual == math.inf
        assert not report.passed

    def test_missing_key(self):
        with pytest.raises(KeyError):
            deserialize_report({"suite": "dual", "seed": 0})


class TestSerializeRun:
    """Serialización de ejecuciones archivadas."""

    def test_run_summary(self, db_session):
        run = SuiteRunRepository().save_report(db_session, make_report(residual=1.0), "gallery/so3.model")
        data = serialize_run(run)
        assert data["failed"] == 1
        assert data["total"] == 2
        assert data["passed"] is False
        assert "checks" not in data

    def test_run_with_checks(self, db_session):
        run = SuiteRunRepository().save_report(db_session, make_report(), "gallery/so3.model")
        data = serialize_run(run, include_checks=True)
        assert [c["anchor"] for c in data["checks"]] == ["dual-jacobi", "hamiltonian-relations"]
        assert list(data["checks"][0]) == CHECK_KEYS


class TestPassFlag:
    """El veredicto sobrevive a la serialización."""

    @settings(max_examples=50, deadline=None)
    @given(
        st.one_of(st.floats(min_value=0.0, allow_infinity=True), st.just(math.nan)),
        st.floats(min_value=1e-15, max_value=1.0),
    )
    def test_pass_is_preserved(self, residual, tol):
        report = SuiteReport("lifts", 0, [CheckResult("x", "lift-homomorphism", residual, tol, 1)])
        restored = deserialize_report(json.loads(report_to_json(report)))
        assert restored.passed == report.passed
        assert restored.checks[0].passed == (math.isfinite(residual) and residual < tol)
