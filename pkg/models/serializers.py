"""
Serializadores de reportes para Algebroid Lifts.
Convierten SuiteReport y las filas archivadas a diccionarios y a JSON,
evitando errores de instancias desvinculadas de SQLAlchemy.
"""
import json
import math
from typing import Any, Dict, List, Optional

from models.base import CheckRecord, SuiteRun
from models.report import CheckResult, SuiteReport


def _finite(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None


def serialize_check(check: CheckResult) -> Dict[str, Any]:
    """
    Serializa una comprobación con las claves del esquema JSON.

    Args:
        check: Resultado de una identidad

    Retorna:
        Diccionario {label, anchor, residual, tol, pass, points, ms}; los
        residuos no finitos se escriben como None
    """
    return {
        "label": check.label,
        "anchor": check.anchor,
        "residual": _finite(check.residual),
        "tol": check.tol,
        "pass": check.passed,
        "points": check.points,
        "ms": check.ms,
    }


def serialize_report(report: SuiteReport) -> Dict[str, Any]:
    """Reporte completo con las comprobaciones ordenadas por ancla."""
    return {
        "suite": report.suite,
        "seed": report.seed,
        "checks": [serialize_check(c) for c in report.sorted_checks()],
    }


def deserialize_report(data: Dict[str, Any]) -> SuiteReport:
    """
    Reconstruye un SuiteReport desde su diccionario.
    Un residuo None vuelve como infinito, de modo que sigue sin aprobar.

    Raises:
        KeyError: si falta una clave del esquema
    """
    checks = [
        CheckResult(
            label=entry["label"],
            anchor=entry["anchor"],
            residual=math.inf if entry["residual"] is None else float(entry["residual"]),
            tol=float(entry["tol"]),
            points=int(entry["points"]),
            ms=float(entry.get("ms", 0.0)),
        )
        for entry in data["checks"]
    ]
    return SuiteReport(data["suite"], int(data["seed"]), checks)


def report_to_json(report: SuiteReport) -> str:
    """JSON estable: misma semilla, mismos bytes."""
    return json.dumps(serialize_report(report), indent=2, ensure_ascii=False, allow_nan=False)


def serialize_record(record: CheckRecord) -> Dict[str, Any]:
    return {
        "label": record.label,
        "anchor": record.anchor,
        "residual": record.residual,
        "tol": record.tol,
        "pass": record.passed,
        "points": record.points,
        "ms": record.ms,
    }


def serialize_run(run: SuiteRun, include_checks: bool = False) -> Dict[str, Any]:
    """
    Serializa una ejecución archivada.

    Args:
        run: Fila SuiteRun
        include_checks: Incluir las comprobaciones anidadas

    Retorna:
        Diccionario de la ejecución
    """
    data = {
        "id": run.id,
        "suite": run.suite,
        "seed": run.seed,
        "model_path": run.model_path,
        "points": run.points,
        "passed": run.passed,
        "created_at": run.created_at,
        "failed": sum(1 for c in run.checks if not c.passed),
        "total": len(run.checks),
    }
    if include_checks:
        data["checks"] = [serialize_record(c) for c in run.checks]
    return data


def serialize_runs(runs: List[SuiteRun]) -> List[Dict[str, Any]]:
    return [serialize_run(r) for r in runs]
