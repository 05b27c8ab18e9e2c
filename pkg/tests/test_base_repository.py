"""
Tests para el repositorio base genérico.
"""
from sqlalchemy import select

from models.base import CheckRecord, SuiteRun
from repositories.base_repository import BaseRepository


def make_run(suite: str = "lifts", seed: int = 0, passed: bool = True) -> SuiteRun:
    return SuiteRun(suite=suite, seed=seed, model_path="gallery/so3.model", points=12, passed=passed)


class TestBaseRepository:
    """Tests para BaseRepository."""

    def test_create(self, db_session):
        """Test crear un registro."""
        repo = BaseRepository(SuiteRun)
        created = repo.create(db_session, make_run())

        assert created.id is not None
        assert created.suite == "lifts"
        assert created.created_at is not None

    def test_get_by_id(self, db_session):
        """Test obtener registro por ID."""
        repo = BaseRepository(SuiteRun)
        run = make_run(suite="dual", seed=5)
        repo.create(db_session, run)
        db_session.commit()

        found = repo.get_by_id(db_session, run.id)
        assert found is not None
        assert found.seed == 5

    def test_get_by_id_not_found(self, db_session):
        """Test obtener registro inexistente."""
        repo = BaseRepository(SuiteRun)
        assert repo.get_by_id(db_session, 99999) is None

    def test_delete_cascades_to_checks(self, db_session):
        """Test eliminar una ejecución borra sus comprobaciones."""
        repo = BaseRepository(SuiteRun)
        run = make_run()
        run.checks.append(CheckRecord(
            label="so3: Jacobi", anchor="algebroid-axioms", residual=0.0, tol=1e-9, passed=True, points=4,
        ))
        repo.create(db_session, run)
        db_session.commit()
        run_id = run.id

        assert repo.delete(db_session, run_id) is True
        db_session.commit()

        assert repo.get_by_id(db_session, run_id) is None
        assert db_session.scalars(select(CheckRecord)).all() == []

    def test_delete_not_found(self, db_session):
        """Test eliminar registro inexistente."""
        repo = BaseRepository(SuiteRun)
        assert repo.delete(db_session, 99999) is False
