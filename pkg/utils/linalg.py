"""
Álgebra lineal puntual compatible con jets.

`solve` elimina con pivoteo parcial sobre los valores primales, de modo que
las soluciones siguen siendo diferenciables cuando la matriz o el lado
derecho dependen de jets.
"""
import logging
from typing import List, Sequence

import numpy as np

from config import VerificationConfig
from utils.exceptions import DimensionMismatchError, SingularSolveError
from utils.jets import Num, primal

logger = logging.getLogger("algebroid_lifts.utils.linalg")


def condition_number(matrix: Sequence[Sequence[Num]]) -> float:
    """Número de condición (norma 2) de la parte primal de la matriz."""
    values = np.array([[primal(a) for a in row] for row in matrix], dtype=float)
    if values.size == 0:
        return 1.0
    return float(np.linalg.cond(values))


def solve(
    matrix: Sequence[Sequence[Num]],
    rhs: Sequence[Num],
    limit: float = VerificationConfig.CONDITION_LIMIT,
) -> List[Num]:
    """
    Resuelve matrix · x = rhs para una matriz cuadrada.

    Args:
        matrix: Filas de la matriz (floats o jets)
        rhs: Lado derecho
        limit: Número de condición máximo aceptado

    Retorna:
        Lista con la solución x
    """
    n = len(matrix)
    if len(rhs) != n:
        raise DimensionMismatchError("lado derecho", n, len(rhs))
    for row in matrix:
        if len(row) != n:
            raise DimensionMismatchError("matriz cuadrada", n, len(row))
    if n == 0:
        return []

    condition = condition_number(matrix)
    if not np.isfinite(condition) or condition > limit:
        logger.warning(f"Sistema mal condicionado: cond = {condition:.3e}")
        raise SingularSolveError(condition)

    a = [list(row) for row in matrix]
    b = list(rhs)
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(primal(a[r][col])))
        if primal(a[pivot][col]) == 0.0:
            raise SingularSolveError(float("inf"))
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        for row in range(col + 1, n):
            factor = a[row][col] / a[col][col]
            if not isinstance(factor, float) or factor != 0.0:
                for k in range(col, n):
                    a[row][k] = a[row][k] - factor * a[col][k]
                b[row] = b[row] - factor * b[col]

    x: List[Num] = [0.0] * n
    for row in reversed(range(n)):
        total = b[row]
        for k in range(row + 1, n):
            total = total - a[row][k] * x[k]
        x[row] = total / a[row][row]
    return x
