"""
Repositorio de ejecuciones archivadas para Algebroid Lifts.
Carga las comprobaciones de forma anticipada para evitar consultas N+1.
"""
import math
from typing import List, Optional

from sqlalchemy import select
from sqlalchemy.orm import Session, selectinload

from models.base import CheckRecord, SuiteRun
from models.report import SuiteReport
from repositories.base_repository import BaseRepository


class SuiteRunRepository(BaseRepository[SuiteRun]):
    """
    Repositorio para la entidad SuiteRun.
    """
    def __init__(self):
        super().__init__(SuiteRun)

    def save_report(self, db: Session, report: SuiteReport, model_path: str) -> SuiteRun:
        """
        Archiva un reporte con todas sus comprobaciones.

        Args:
            db: Sesión de base de datos
            report: Reporte de una batería
            model_path: Archivo o directorio verificado

        Retorna:
            La ejecución creada (sin confirmar)
        """
        run = SuiteRun(
            suite=report.suite,
            seed=report.seed,
            model_path=str(model_path),
            points=max((c.points for c in report.checks), default=0),
            passed=report.passed,
        )
        for check in report.sorted_checks():
            run.checks.append(CheckRecord(
                label=check.label,
                anchor=check.anchor,
                residual=None if math.isnan(check.residual) else check.residual,
                tol=check.tol,
                passed=check.passed,
                points=check.points,
                ms=check.ms,
            ))
        return self.create(db, run)

    def _runs(self):
        return select(SuiteRun).options(selectinload(SuiteRun.checks))

    def get_recent(self, db: Session, limit: int = 10) -> List[SuiteRun]:
        """
        Últimas ejecuciones archivadas, de la más reciente a la más antigua.

        Args:
            db: Sesión de base de datos
            limit: Máximo de ejecuciones

        Retorna:
            Lista de ejecuciones
        """
        query = self._runs().order_by(SuiteRun.created_at.desc(), SuiteRun.id.desc()).limit(limit)
        return list(db.scalars(query).all())

    def get_by_suite(self, db: Session, suite: str, limit: Optional[int] = None) -> List[SuiteRun]:
        """Ejecuciones de una batería, de la más reciente a la más antigua."""
        query = self._runs().filter(SuiteRun.suite == suite).order_by(
            SuiteRun.created_at.desc(), SuiteRun.id.desc()
        )
        if limit:
            query = query.limit(limit)
        return list(db.scalars(query).all())

    def get_failed(self, db: Session, limit: Optional[int] = None) -> List[SuiteRun]:
        """Ejecuciones con al menos una comprobación fallida, de la más reciente a la más antigua."""
        query = self._runs().filter(SuiteRun.passed.is_(False)).order_by(
            SuiteRun.created_at.desc(), SuiteRun.id.desc()
        )
        if limit:
            query = query.limit(limit)
        return list(db.scalars(query).all())
