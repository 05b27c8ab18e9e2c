"""
Campos diferenciables sobre una carta global de R^n para Algebroid Lifts.
Define puntos, campos escalares, campos vectoriales, 1-formas, 2-formas y
bivectores. Todos los objetos son inmutables y se evalúan con jets anidados.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

from utils.exceptions import DimensionMismatchError
from utils.jets import Num, derivative, primal

Scalar = Union[float, int]


@dataclass(frozen=True)
class ChartPoint:
    """Punto de la carta con coordenadas finitas."""
    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"Coordenadas no finitas: {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[float]:
        return iter(self.coords)

    def __getitem__(self, index):
        return self.coords[index]


def _check_dim(obj: str, expected: int, got: int) -> None:
    if expected != got:
        raise DimensionMismatchError(obj, expected, got)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """
    Función suave sobre R^dim.

    `fn` recibe una secuencia de coordenadas (floats o jets) y devuelve un
    valor del mismo tipo. `constant` se fija solo para campos constantes y
    permite plegar ceros en la aritmética.
    """
    dim: int
    fn: Callable[[Sequence[Num]], Num]
    label: str = ""
    constant: Optional[float] = None

    def __call__(self, point: Sequence[Num]) -> Num:
        _check_dim("campo escalar", self.dim, len(point))
        return self.fn(point)

    def evaluate(self, point: Sequence[float]) -> float:
        return primal(self(point))

    @property
    def is_zero(self) -> bool:
        return self.constant == 0.0

    @classmethod
    def const(cls, dim: int, value: float) -> "ScalarField":
        value = float(value)
        return cls(dim, lambda p: value, label=repr(value), constant=value)

    @classmethod
    def zero(cls, dim: int) -> "ScalarField":
        return cls.const(dim, 0.0)

    @classmethod
    def coordinate(cls, dim: int, index: int) -> "ScalarField":
        if not 0 <= index < dim:
            raise DimensionMismatchError("coordenada", dim, index)
        return cls(dim, lambda p: p[index], label=f"x{index}")

    def jet(self, point: Sequence[Num], direction: Sequence[Num], order: int = 1) -> Tuple[Num, ...]:
        """
        Valor de Taylor truncado en la dirección dada.

        Args:
            point: Punto de evaluación
            direction: Dirección de derivación
            order: 0, 1 o 2

        Retorna:
            (f, D f[d]) o (f, D f[d], D² f[d, d]) según el orden
        """
        if order not in (0, 1, 2):
            raise ValueError("El orden del jet debe ser 0, 1 o 2")
        _check_dim("dirección", self.dim, len(direction))
        values = [self(point)]
        if order >= 1:
            values.append(derivative(self, point, direction))
        if order == 2:
            first = lambda p: derivative(self, p, direction)
            values.append(derivative(first, point, direction))
        return tuple(values)

    def partial(self, index: int) -> "ScalarField":
        if self.constant is not None:
            return ScalarField.zero(self.dim)
        unit = [0.0] * self.dim
        unit[index] = 1.0
        return ScalarField(self.dim, lambda p: derivative(self, p, unit), label=f"∂{index}({self.label})")

    def along(self, vector: "ChartVectorField") -> "ScalarField":
        """x(f): derivada de este campo a lo largo de un campo vectorial."""
        _check_dim("campo vectorial", self.dim, vector.dim)
        if self.constant is not None or all(c.is_zero for c in vector.components):
            return ScalarField.zero(self.dim)
        return ScalarField(self.dim, lambda p: derivative(self, p, vector(p)))

    def pullback(self, dim: int, offset: int = 0) -> "ScalarField":
        """Composición con la proyección R^dim → R^self.dim que lee coordenadas desde offset."""
        if offset + self.dim > dim:
            raise DimensionMismatchError("proyección", dim, offset + self.dim)
        if self.constant is not None:
            return ScalarField.const(dim, self.constant)
        end = offset + self.dim
        return ScalarField(dim, lambda p: self.fn(p[offset:end]), label=self.label)

    def substitute(self, dim: int, mapping: Callable[[Sequence[Num]], Sequence[Num]]) -> "ScalarField":
        """Composición con una aplicación R^dim → R^self.dim."""
        if self.constant is not None:
            return ScalarField.const(dim, self.constant)
        return ScalarField(dim, lambda p: self.fn(mapping(p)), label=self.label)

    def _coerce(self, other) -> "ScalarField":
        if isinstance(other, ScalarField):
            _check_dim("suma de campos", self.dim, other.dim)
            return other
        return ScalarField.const(self.dim, float(other))

    def __add__(self, other) -> "ScalarField":
        other = self._coerce(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.constant is not None and other.constant is not None:
            return ScalarField.const(self.dim, self.constant + other.constant)
        return ScalarField(self.dim, lambda p: self.fn(p) + other.fn(p))

    __radd__ = __add__

    def __neg__(self) -> "ScalarField":
        if self.constant is not None:
            return ScalarField.const(self.dim, -self.constant)
        return ScalarField(self.dim, lambda p: -self.fn(p))

    def __sub__(self, other) -> "ScalarField":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ScalarField":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "ScalarField":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return ScalarField.zero(self.dim)
        if self.constant == 1.0:
            return other
        if other.constant == 1.0:
            return self
        if self.constant is not None and other.constant is not None:
            return ScalarField.const(self.dim, self.constant * other.constant)
        return ScalarField(self.dim, lambda p: self.fn(p) * other.fn(p))

    __rmul__ = __mul__


def field_sum(terms: Sequence[ScalarField], dim: int) -> ScalarField:
    """Suma de campos escalares omitiendo ceros."""
    total = ScalarField.zero(dim)
    for term in terms:
        total = total + term
    return total


@dataclass(frozen=True, eq=False)
class ChartVectorField:
    """Campo vectorial x = x^i ∂_i con componentes ScalarField."""
    components: Tuple[ScalarField, ...]

    def __post_init__(self):
        components = tuple(self.components)
        for c in components:
            _check_dim("componente de campo vectorial", len(components), c.dim)
        object.__setattr__(self, "components", components)

    @property
    def dim(self) -> int:
        return len(self.components)

    def __call__(self, point: Sequence[Num]) -> Tuple[Num, ...]:
        return tuple(c(point) for c in self.components)

    def evaluate(self, point: Sequence[float]) -> Tuple[float, ...]:
        return tuple(primal(v) for v in self(point))

    @classmethod
    def zero(cls, dim: int) -> "ChartVectorField":
        return cls(tuple(ScalarField.zero(dim) for _ in range(dim)))

    @classmethod
    def coordinate(cls, dim: int, index: int) -> "ChartVectorField":
        """El campo de coordenadas ∂_index."""
        return cls(tuple(ScalarField.const(dim, 1.0 if i == index else 0.0) for i in range(dim)))

    def apply(self, f: ScalarField) -> ScalarField:
        return f.along(self)

    def __add__(self, other: "ChartVectorField") -> "ChartVectorField":
        _check_dim("suma de campos vectoriales", self.dim, other.dim)
        return ChartVectorField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "ChartVectorField") -> "ChartVectorField":
        _check_dim("resta de campos vectoriales", self.dim, other.dim)
        return ChartVectorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "ChartVectorField":
        return ChartVectorField(tuple(-c for c in self.components))

    def scale(self, f: Union[ScalarField, Scalar]) -> "ChartVectorField":
        return ChartVectorField(tuple(c * f for c in self.components))


@dataclass(frozen=True, eq=False)
class ChartOneForm:
    """1-forma ω = ω_i dx^i."""
    components: Tuple[ScalarField, ...]

    def __post_init__(self):
        components = tuple(self.components)
        for c in components:
            _check_dim("componente de 1-forma", len(components), c.dim)
        object.__setattr__(self, "components", components)

    @property
    def dim(self) -> int:
        return len(self.components)

    def __call__(self, point: Sequence[Num]) -> Tuple[Num, ...]:
        return tuple(c(point) for c in self.components)

    def evaluate(self, point: Sequence[float]) -> Tuple[float, ...]:
        return tuple(primal(v) for v in self(point))

    @classmethod
    def zero(cls, dim: int) -> "ChartOneForm":
        return cls(tuple(ScalarField.zero(dim) for _ in range(dim)))

    @classmethod
    def coordinate(cls, dim: int, index: int) -> "ChartOneForm":
        """La forma dx^index."""
        return cls(tuple(ScalarField.const(dim, 1.0 if i == index else 0.0) for i in range(dim)))

    def pair(self, vector: ChartVectorField) -> ScalarField:
        """⟨ω, x⟩ como campo escalar."""
        _check_dim("apareamiento forma-campo", self.dim, vector.dim)
        return field_sum([w * v for w, v in zip(self.components, vector.components)], self.dim)

    def __add__(self, other: "ChartOneForm") -> "ChartOneForm":
        _check_dim("suma de 1-formas", self.dim, other.dim)
        return ChartOneForm(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "ChartOneForm") -> "ChartOneForm":
        _check_dim("resta de 1-formas", self.dim, other.dim)
        return ChartOneForm(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "ChartOneForm":
        return ChartOneForm(tuple(-c for c in self.components))

    def scale(self, f: Union[ScalarField, Scalar]) -> "ChartOneForm":
        return ChartOneForm(tuple(c * f for c in self.components))


def _antisymmetric_entries(
    dim: int, entries: Mapping[Tuple[int, int], ScalarField], what: str
) -> Dict[Tuple[int, int], ScalarField]:
    stored: Dict[Tuple[int, int], ScalarField] = {}
    for (i, j), value in entries.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionMismatchError(what, dim, max(i, j) + 1)
        if i == j:
            raise ValueError(f"Entrada diagonal ({i},{i}) en {what} antisimétrico")
        _check_dim(what, dim, value.dim)
        key, sign = ((i, j), 1.0) if i < j else ((j, i), -1.0)
        if key in stored:
            raise ValueError(f"Entrada ({key[0]},{key[1]}) duplicada en {what}")
        stored[key] = value if sign > 0 else -value
    return stored


@dataclass(frozen=True, eq=False)
class ChartTwoForm:
    """2-forma antisimétrica; se guardan solo las entradas i<j."""
    dim: int
    entries: Mapping[Tuple[int, int], ScalarField] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", _antisymmetric_entries(self.dim, self.entries, "2-forma"))

    def component(self, i: int, j: int) -> ScalarField:
        if i == j:
            return ScalarField.zero(self.dim)
        if i < j:
            return self.entries.get((i, j), ScalarField.zero(self.dim))
        return -self.entries.get((j, i), ScalarField.zero(self.dim))

    def on(self, u: ChartVectorField, v: ChartVectorField) -> ScalarField:
        """σ(u, v) como campo escalar."""
        terms = []
        for (i, j), value in self.entries.items():
            terms.append(value * (u.components[i] * v.components[j] - u.components[j] * v.components[i]))
        return field_sum(terms, self.dim)

    def matrix(self, point: Sequence[float]):
        return [[self.component(i, j).evaluate(point) for j in range(self.dim)] for i in range(self.dim)]


@dataclass(frozen=True, eq=False)
class Bivector:
    """Bivector π = Σ_{i<j} π^{ij} ∂_i ∧ ∂_j; la antisimetría es estructural."""
    dim: int
    entries: Mapping[Tuple[int, int], ScalarField] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "entries", _antisymmetric_entries(self.dim, self.entries, "bivector"))

    @classmethod
    def zero(cls, dim: int) -> "Bivector":
        return cls(dim, {})

    def component(self, i: int, j: int) -> ScalarField:
        if i == j:
            return ScalarField.zero(self.dim)
        if i < j:
            return self.entries.get((i, j), ScalarField.zero(self.dim))
        return -self.entries.get((j, i), ScalarField.zero(self.dim))

    def pair(self, omega: ChartOneForm, theta: ChartOneForm) -> ScalarField:
        """π(ω, θ) = ω_i π^{ij} θ_j."""
        _check_dim("bivector", self.dim, omega.dim)
        _check_dim("bivector", self.dim, theta.dim)
        terms = []
        for (i, j), value in self.entries.items():
            w, t = omega.components, theta.components
            terms.append(value * (w[i] * t[j] - w[j] * t[i]))
        return field_sum(terms, self.dim)

    def scale(self, factor: float) -> "Bivector":
        return Bivector(self.dim, {key: value * factor for key, value in self.entries.items()}, self.label)

    def matrix(self, point: Sequence[float]):
        return [[self.component(i, j).evaluate(point) for j in range(self.dim)] for i in range(self.dim)]
