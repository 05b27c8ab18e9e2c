"""
Reportes de verificación: una entrada por identidad comprobada.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from utils.jets import Num, primal


@dataclass
class CheckResult:
    """
    Resultado de una identidad muestreada.

    `passed` se deriva siempre de residual < tol, de modo que un residuo NaN
    nunca aprueba.
    """
    label: str
    anchor: str
    residual: float
    tol: float
    points: int
    ms: float = 0.0
    location: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol)

    def __repr__(self) -> str:
        state = "OK" if self.passed else "FALLA"
        return f"<CheckResult({self.anchor}: {self.residual:.3e} < {self.tol:.0e} {state})>"


@dataclass
class SuiteReport:
    """Conjunto de verificaciones de una batería, ordenado por ancla."""
    suite: str
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, checks: Sequence[CheckResult]) -> None:
        self.checks.extend(checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def anchors(self) -> List[str]:
        return sorted({c.anchor for c in self.checks})

    def sorted_checks(self) -> List[CheckResult]:
        return sorted(self.checks, key=lambda c: (c.anchor, c.label))

    def worst(self, anchor: str) -> Optional[CheckResult]:
        candidates = [c for c in self.checks if c.anchor == anchor]
        if not candidates:
            return None
        return max(candidates, key=lambda c: c.residual if math.isfinite(c.residual) else math.inf)


@dataclass(frozen=True)
class Residual:
    """Máximo residuo de una identidad y el punto donde se alcanza."""
    value: float
    location: Tuple[float, ...] = ()
    detail: str = ""

    def describe(self) -> str:
        if not self.location:
            return self.detail
        coords = ", ".join(f"{c:.4f}" for c in self.location)
        return f"{self.detail} en ({coords})".strip()


def worst_of(residuals: Sequence[Residual]) -> Residual:
    """Combina residuos; NaN domina a cualquier valor finito."""
    best = Residual(0.0)
    for r in residuals:
        if math.isnan(r.value):
            return r
        if r.value > best.value:
            best = r
    return best


def sup_residual(
    evaluate: Callable[[Sequence[float]], Sequence[Num]],
    points: Sequence[Sequence[float]],
    detail: str = "",
) -> Residual:
    """
    Máximo de |evaluate(p)| (norma del supremo sobre componentes) en los puntos.

    Args:
        evaluate: Función que devuelve las componentes del defecto en un punto
        points: Muestras
        detail: Descripción del caso para localizar el residuo

    Retorna:
        Residual con el peor valor y su punto
    """
    worst = Residual(0.0, (), detail)
    for point in points:
        values = np.abs(np.asarray([primal(v) for v in evaluate(point)], dtype=float))
        value = float(np.max(values)) if values.size else 0.0
        if math.isnan(value):
            return Residual(value, tuple(point), detail)
        if value > worst.value:
            worst = Residual(value, tuple(point), detail)
    return worst


@dataclass(frozen=True)
class Verdict:
    """Veredicto booleano de una prueba muestreada con sus residuos por cláusula."""
    passed: bool
    residuals: Mapping[str, float] = field(default_factory=dict)

    @property
    def residual(self) -> float:
        values = list(self.residuals.values())
        if any(math.isnan(v) for v in values):
            return math.nan
        return max(values, default=0.0)

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def from_residuals(cls, tol: float, **residuals: float) -> "Verdict":
        passed = all(v < tol for v in residuals.values())
        return cls(passed, dict(residuals))
