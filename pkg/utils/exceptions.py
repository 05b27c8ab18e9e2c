"""
Jerarquía de excepciones de Algebroid Lifts.
Los fallos de verificación nunca son excepciones: se reportan como entradas
de un reporte. Estas clases cubren errores de configuración y de entrada.
"""
from typing import Optional, Sequence, Tuple


class AlgebroidLiftsError(Exception):
    """Error base de la aplicación."""
    pass


class DimensionMismatchError(AlgebroidLiftsError, ValueError):
    """Dimensiones incompatibles entre objetos del mismo cálculo."""

    def __init__(self, obj: str, expected: int, got: int):
        self.obj = obj
        self.expected = expected
        self.got = got
        super().__init__(
            f"Dimensión incompatible en {obj}: se esperaba {expected}, se obtuvo {got}"
        )


class BaseMismatchError(AlgebroidLiftsError, ValueError):
    """Dos elementos que debían estar sobre el mismo punto base no lo están."""
    pass


class DivergenceError(AlgebroidLiftsError):
    """Valores no finitos durante la integración de un flujo."""

    def __init__(self, step: int, message: Optional[str] = None):
        self.step = step
        super().__init__(message or f"El flujo divergió en el paso {step}")


class ExpressionError(AlgebroidLiftsError):
    """Error base del lenguaje de expresiones, con posición en el texto."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (posición {position})"
        super().__init__(message)


class LexicalError(ExpressionError):
    """Carácter inesperado durante el análisis léxico."""

    def __init__(self, char: str, position: int):
        self.char = char
        super().__init__(f"Carácter inesperado {char!r}", position)


class ParseError(ExpressionError):
    """Secuencia de tokens que no respeta la gramática."""

    def __init__(self, found: str, expected: Sequence[str], position: int):
        self.found = found
        self.expected = tuple(expected)
        super().__init__(
            f"Se encontró {found!r}, se esperaba uno de: {', '.join(self.expected)}",
            position,
        )


class UnknownVariableError(ExpressionError):
    """Nombre fuera del alcance declarado."""

    def __init__(self, name: str, position: Optional[int] = None):
        self.name = name
        super().__init__(f"Nombre desconocido {name!r}", position)


class EvaluationDomainError(ExpressionError):
    """Evaluación fuera del dominio (ln de no positivo, división por cero...)."""

    def __init__(self, reason: str, point: Tuple[float, ...]):
        self.reason = reason
        self.point = point
        super().__init__(f"{reason} en el punto {point}")


class SchemaError(AlgebroidLiftsError):
    """Documento de modelo mal formado."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"Error de esquema en '{field}': {reason}")


class SingularSolveError(AlgebroidLiftsError):
    """Sistema lineal puntual singular o mal condicionado."""

    def __init__(self, condition: float):
        self.condition = condition
        super().__init__(f"Sistema singular (número de condición {condition:.3e})")


class PreconditionError(AlgebroidLiftsError):
    """Una condición previa muestreada no se cumple."""

    def __init__(self, check: str, residual: float):
        self.check = check
        self.residual = residual
        super().__init__(f"Falló la condición '{check}' (residuo {residual:.3e})")


class StarCheckError(PreconditionError):
    """El campo o la 1-forma no es estrella (o multiplicativa) como se requiere."""
    pass


class ConventionError(PreconditionError):
    """Residuo de anulación vertical por encima de la tolerancia."""
    pass


class NonPoissonError(PreconditionError):
    """El bivector no satisface la identidad de Jacobi."""
    pass
