"""
Modelos ORM de SQLAlchemy para el archivo de reportes de Algebroid Lifts.
Define las entidades SuiteRun y CheckRecord.
"""
from datetime import datetime
from typing import List, Optional

from sqlalchemy import Boolean, DateTime, Float, ForeignKey, Index, Integer, String, Text
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


class Base(DeclarativeBase):
    """Clase base para todos los modelos ORM."""
    pass


class SuiteRun(Base):
    """
    Ejecución archivada de una batería sobre uno o varios modelos.
    """
    __tablename__ = "suite_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    suite: Mapped[str] = mapped_column(String(30), nullable=False)
    seed: Mapped[int] = mapped_column(Integer, nullable=False)
    model_path: Mapped[str] = mapped_column(Text, nullable=False)
    points: Mapped[int] = mapped_column(Integer, nullable=False)
    passed: Mapped[bool] = mapped_column(Boolean, nullable=False)
    created_at: Mapped[datetime] = mapped_column(
        DateTime, default=datetime.now, nullable=False
    )

    # Relación con las comprobaciones
    checks: Mapped[List["CheckRecord"]] = relationship(
        "CheckRecord", back_populates="run", cascade="all, delete-orphan", order_by="CheckRecord.id"
    )

    __table_args__ = (
        Index('idx_suite_run_suite', 'suite'),
        Index('idx_suite_run_created', 'created_at'),
    )

    def __repr__(self) -> str:
        state = "OK" if self.passed else "FALLA"
        return f"<SuiteRun(id={self.id}, suite='{self.suite}', seed={self.seed}, {state})>"


class CheckRecord(Base):
    """
    Comprobación archivada. El residuo es NULL cuando fue NaN.
    """
    __tablename__ = "check_records"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(
        Integer, ForeignKey("suite_runs.id"), nullable=False
    )
    label: Mapped[str] = mapped_column(Text, nullable=False)
    anchor: Mapped[str] = mapped_column(String(60), nullable=False)
    residual: Mapped[Optional[float]] = mapped_column(Float, nullable=True)
    tol: Mapped[float] = mapped_column(Float, nullable=False)
    passed: Mapped[bool] = mapped_column(Boolean, nullable=False)
    points: Mapped[int] = mapped_column(Integer, nullable=False)
    ms: Mapped[float] = mapped_column(Float, default=0.0)

    run: Mapped["SuiteRun"] = relationship("SuiteRun", back_populates="checks")

    __table_args__ = (
        Index('idx_check_record_anchor', 'anchor'),
    )

    def __repr__(self) -> str:
        return f"<CheckRecord(id={self.id}, anchor='{self.anchor}', passed={self.passed})>"
