"""
Objetos sobre el espacio total de un fibrado trivial A = R^n × R^k (o A*).
Las coordenadas son (x^0..x^{n-1}, v^0..v^{k-1}); en contextos duales las
últimas k coordenadas son las componentes ξ_a de un covector.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from models.algebroid import DualSection, SectionA
from models.fields import ChartOneForm, ChartVectorField, ScalarField, field_sum
from utils.exceptions import BaseMismatchError, DimensionMismatchError
from utils.jets import Num, derivative, primal


def _check_dim(obj: str, expected: int, got: int) -> None:
    if expected != got:
        raise DimensionMismatchError(obj, expected, got)


@dataclass(frozen=True)
class TotalPoint:
    """Punto (m, v) del espacio total."""
    base: Tuple[float, ...]
    fiber: Tuple[float, ...]

    def __post_init__(self):
        base = tuple(float(c) for c in self.base)
        fiber = tuple(float(c) for c in self.fiber)
        if not all(math.isfinite(c) for c in base + fiber):
            raise ValueError(f"Punto del espacio total no finito: {base}, {fiber}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "fiber", fiber)

    @property
    def coords(self) -> Tuple[float, ...]:
        return self.base + self.fiber

    @classmethod
    def split(cls, coords: Sequence[float], base_dim: int) -> "TotalPoint":
        return cls(tuple(coords[:base_dim]), tuple(coords[base_dim:]))


@dataclass(frozen=True)
class TotalTangent:
    """Vector tangente (base_vector, fiber_vector) en un punto del espacio total."""
    point: TotalPoint
    base_vector: Tuple[float, ...]
    fiber_vector: Tuple[float, ...]

    def __post_init__(self):
        _check_dim("parte base del tangente", len(self.point.base), len(self.base_vector))
        _check_dim("parte fibra del tangente", len(self.point.fiber), len(self.fiber_vector))
        object.__setattr__(self, "base_vector", tuple(float(c) for c in self.base_vector))
        object.__setattr__(self, "fiber_vector", tuple(float(c) for c in self.fiber_vector))

    @property
    def vector(self) -> Tuple[float, ...]:
        return self.base_vector + self.fiber_vector

    def apply(self, f: ScalarField) -> float:
        """Derivada direccional de f en el punto."""
        return primal(derivative(f, list(self.point.coords), list(self.vector)))

    def __add__(self, other: "TotalTangent") -> "TotalTangent":
        if other.point != self.point:
            raise BaseMismatchError("Los tangentes no están en el mismo punto")
        return TotalTangent(
            self.point,
            tuple(a + b for a, b in zip(self.base_vector, other.base_vector)),
            tuple(a + b for a, b in zip(self.fiber_vector, other.fiber_vector)),
        )


@dataclass(frozen=True, eq=False)
class TotalSpaceField:
    """Campo vectorial general sobre el espacio total, en n + k variables."""
    base_dim: int
    rank: int
    field: ChartVectorField
    label: str = ""

    def __post_init__(self):
        _check_dim("campo del espacio total", self.base_dim + self.rank, self.field.dim)

    @classmethod
    def from_parts(
        cls,
        base_dim: int,
        base_part: Sequence[ScalarField],
        fiber_part: Sequence[ScalarField],
        label: str = "",
    ) -> "TotalSpaceField":
        return cls(base_dim, len(fiber_part), ChartVectorField(tuple(base_part) + tuple(fiber_part)), label)

    @property
    def dim(self) -> int:
        return self.base_dim + self.rank

    @property
    def base_part(self) -> Tuple[ScalarField, ...]:
        return self.field.components[:self.base_dim]

    @property
    def fiber_part(self) -> Tuple[ScalarField, ...]:
        return self.field.components[self.base_dim:]

    def __call__(self, point: Sequence[Num]) -> Tuple[Num, ...]:
        return self.field(point)

    def at(self, point: TotalPoint) -> TotalTangent:
        values = self.field.evaluate(point.coords)
        return TotalTangent(point, values[:self.base_dim], values[self.base_dim:])

    def apply(self, f: ScalarField) -> ScalarField:
        return f.along(self.field)

    def _wrap(self, field: ChartVectorField) -> "TotalSpaceField":
        return TotalSpaceField(self.base_dim, self.rank, field)

    def __add__(self, other: "TotalSpaceField") -> "TotalSpaceField":
        return self._wrap(self.field + other.field)

    def __sub__(self, other: "TotalSpaceField") -> "TotalSpaceField":
        return self._wrap(self.field - other.field)

    def __neg__(self) -> "TotalSpaceField":
        return self._wrap(-self.field)

    def scale(self, f) -> "TotalSpaceField":
        return self._wrap(self.field.scale(f))


def fiber_coordinate(base_dim: int, rank: int, a: int) -> ScalarField:
    """La coordenada de fibra v^a (o ξ_a) como campo en n + k variables."""
    return ScalarField.coordinate(base_dim + rank, base_dim + a)


def fiber_linear(base_dim: int, rank: int, coefficients: Sequence[ScalarField]) -> ScalarField:
    """Σ_b c_b(m) v^b con coeficientes de la base."""
    dim = base_dim + rank
    return field_sum(
        [c.pullback(dim) * fiber_coordinate(base_dim, rank, b) for b, c in enumerate(coefficients)],
        dim,
    )


@dataclass(frozen=True, eq=False)
class LinearVectorField:
    """
    Campo lineal ξ(m, v) = (x(m), Γ̃^a_b(m) v^b).

    `matrix[a][b]` guarda Γ̃^a_b como campo en la base.
    """
    base: ChartVectorField
    matrix: Tuple[Tuple[ScalarField, ...], ...]
    label: str = ""

    def __post_init__(self):
        matrix = tuple(tuple(row) for row in self.matrix)
        for row in matrix:
            _check_dim("fila de la matriz de fibra", len(matrix), len(row))
            for entry in row:
                _check_dim("entrada de la matriz de fibra", self.base.dim, entry.dim)
        object.__setattr__(self, "matrix", matrix)

    @property
    def base_dim(self) -> int:
        return self.base.dim

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def as_total(self) -> TotalSpaceField:
        n, k = self.base_dim, self.rank
        base_part = [c.pullback(n + k) for c in self.base.components]
        fiber_part = [fiber_linear(n, k, row) for row in self.matrix]
        return TotalSpaceField.from_parts(n, base_part, fiber_part, self.label)

    def matrix_at(self, point: Sequence[float]):
        return [[entry.evaluate(point) for entry in row] for row in self.matrix]

    def transpose_negated(self) -> Tuple[Tuple[ScalarField, ...], ...]:
        """−Γ̃ᵀ."""
        k = self.rank
        return tuple(tuple(-self.matrix[b][a] for b in range(k)) for a in range(k))


@dataclass(frozen=True, eq=False)
class FiberwiseLinearFunction:
    """ℓ_φ(m, v) = φ_a(m) v^a."""
    phi: DualSection

    def as_scalar(self) -> ScalarField:
        return fiber_linear(self.phi.base_dim, self.phi.rank, self.phi.components)


def section_linear_function(section: SectionA) -> ScalarField:
    """ℓ_X(m, ξ) = X^a(m) ξ_a sobre el dual."""
    return fiber_linear(section.base_dim, section.rank, section.components)


@dataclass(frozen=True, eq=False)
class TotalSpaceForm:
    """
    1-forma en el espacio total con componentes (Υ_{x^i}, Υ_{v^a}).
    `condition` es el peor número de condición de la resolución que definió
    las componentes base, cuando se midió.
    """
    base_dim: int
    rank: int
    form: ChartOneForm
    condition: Optional[float] = None

    def __post_init__(self):
        _check_dim("forma del espacio total", self.base_dim + self.rank, self.form.dim)

    @classmethod
    def from_parts(cls, base_dim: int, base_part: Sequence[ScalarField], fiber_part: Sequence[ScalarField]):
        return cls(base_dim, len(fiber_part), ChartOneForm(tuple(base_part) + tuple(fiber_part)))

    @property
    def base_part(self) -> Tuple[ScalarField, ...]:
        return self.form.components[:self.base_dim]

    @property
    def fiber_part(self) -> Tuple[ScalarField, ...]:
        return self.form.components[self.base_dim:]

    def pair(self, field: TotalSpaceField) -> ScalarField:
        return self.form.pair(field.field)

    def evaluate(self, point: TotalPoint) -> Tuple[float, ...]:
        return self.form.evaluate(point.coords)
