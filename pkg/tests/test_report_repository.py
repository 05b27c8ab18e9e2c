"""
Tests del repositorio de ejecuciones archivadas.
"""
import math

from models.report import CheckResult, SuiteReport
from repositories.report_repository import SuiteRunRepository


def make_report(suite: str = "lifts", seed: int = 3, residual: float = 1e-12) -> SuiteReport:
    report = SuiteReport(suite, seed)
    report.add(CheckResult("so3: cierre", "bracket-closure", residual, 1e-8, 4, ms=1.5))
    report.add(CheckResult("so3: Jacobi", "algebroid-axioms", 0.0, 1e-9, 4))
    return report


class TestSaveReport:
    """Tests de archivado de reportes."""

    def test_save_report(self, db_session):
        repo = SuiteRunRepository()
        run = repo.save_report(db_session, make_report(), "gallery/so3.model")
        db_session.commit()

        assert run.id is not None
        assert run.passed is True
        assert run.points == 4
        # Ordenadas por ancla
        assert [c.anchor for c in run.checks] == ["algebroid-axioms", "bracket-closure"]
        assert run.checks[1].ms == 1.5

    def test_nan_residual_is_null(self, db_session):
        repo = SuiteRunRepository()
        run = repo.save_report(db_session, make_report(residual=math.nan), "gallery/so3.model")
        db_session.commit()

        record = next(c for c in run.checks if c.anchor == "bracket-closure")
        assert record.residual is None
        assert record.passed is False
        assert run.passed is False

    def test_empty_report(self, db_session):
        run = SuiteRunRepository().save_report(db_session, SuiteReport("dual", 0), "gallery")
        assert run.points == 0
        assert run.passed is True
        assert run.checks == []


class TestQueries:
    """Tests de consultas de ejecuciones."""

    def test_get_recent(self, db_session):
        repo = SuiteRunRepository()
        first = repo.save_report(db_session, make_report("lifts"), "a.model")
        second = repo.save_report(db_session, make_report("pair"), "b.model")
        db_session.commit()

        recent = repo.get_recent(db_session, limit=5)
        assert [r.id for r in recent] == [second.id, first.id]
        assert len(repo.get_recent(db_session, limit=1)) == 1

    def test_get_by_suite(self, db_session):
        repo = SuiteRunRepository()
        repo.save_report(db_session, make_report("lifts"), "a.model")
        repo.save_report(db_session, make_report("pair"), "b.model")
        repo.save_report(db_session, make_report("lifts", seed=9), "c.model")
        db_session.commit()

        runs = repo.get_by_suite(db_session, "lifts")
        assert {r.seed for r in runs} == {3, 9}
        assert all(len(r.checks) == 2 for r in runs)
        assert repo.get_by_suite(db_session, "dual") == []

    def test_get_failed(self, db_session):
        repo = SuiteRunRepository()
        repo.save_report(db_session, make_report(), "a.model")
        failing = repo.save_report(db_session, make_report(residual=1.0), "b.model")
        db_session.commit()

        assert [r.id for r in repo.get_failed(db_session)] == [failing.id]
