"""
Utilidades de validación de entrada para Algebroid Lifts.
Validan parámetros de la línea de comandos y de los servicios antes de
lanzar cálculos costosos.
"""
import math
from typing import Optional, Tuple

from config import VerificationConfig

SUITE_NAMES = ("lifts", "dual", "pair", "poisson-pair", "all")


def validate_dimension(value: Optional[int], field_name: str = "dimensión") -> Tuple[bool, Optional[str]]:
    """
    Valida una dimensión de carta o de fibra.

    Args:
        value: Dimensión a validar
        field_name: Nombre del campo para mensajes de error

    Retorna:
        Tupla de (es_válido, mensaje_de_error)
    """
    if value is None:
        return False, f"La {field_name} es requerida"

    if isinstance(value, bool) or not isinstance(value, int):
        return False, f"La {field_name} debe ser un número entero"

    if value < 1:
        return False, f"La {field_name} debe ser al menos 1"

    return True, None


def validate_points(points: Optional[int]) -> Tuple[bool, Optional[str]]:
    """
    Valida la cantidad de puntos de muestreo.

    Retorna:
        Tupla de (es_válido, mensaje_de_error)
    """
    if points is None:
        return False, "La cantidad de puntos es requerida"

    if isinstance(points, bool) or not isinstance(points, int):
        return False, "La cantidad de puntos debe ser un número entero"

    if points < 1:
        return False, "La cantidad de puntos debe ser mayor a 0"

    if points > VerificationConfig.MAX_POINTS:
        return False, f"La cantidad de puntos no puede exceder {VerificationConfig.MAX_POINTS}"

    return True, None


def validate_tolerance(tol: Optional[float]) -> Tuple[bool, Optional[str]]:
    """Valida una tolerancia: número finito y positivo."""
    if tol is None:
        return True, None  # Se usan las tolerancias por defecto

    if isinstance(tol, bool) or not isinstance(tol, (int, float)):
        return False, "La tolerancia debe ser un número"

    if not math.isfinite(tol) or tol <= 0:
        return False, "La tolerancia debe ser un número positivo y finito"

    return True, None


def validate_steps(steps: Optional[int]) -> Tuple[bool, Optional[str]]:
    """Valida el número de pasos de integración."""
    if steps is None:
        return False, "El número de pasos es requerido"

    if isinstance(steps, bool) or not isinstance(steps, int):
        return False, "El número de pasos debe ser un número entero"

    if steps < 1:
        return False, "El número de pasos debe ser al menos 1"

    return True, None


def validate_seed(seed: Optional[int]) -> Tuple[bool, Optional[str]]:
    if seed is None:
        return True, None

    if isinstance(seed, bool) or not isinstance(seed, int):
        return False, "La semilla debe ser un número entero"

    if seed < 0:
        return False, "La semilla no puede ser negativa"

    return True, None


def validate_suite_name(name: Optional[str]) -> Tuple[bool, Optional[str]]:
    """
    Valida el nombre de una batería de verificaciones.

    Retorna:
        Tupla de (es_válido, mensaje_de_error)
    """
    if not name:
        return False, "El nombre de la batería es requerido"

    name = name.strip()

    if name not in SUITE_NAMES:
        return False, f"Batería desconocida '{name}'; opciones: {', '.join(SUITE_NAMES)}"

    return True, None
