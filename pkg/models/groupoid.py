"""
El groupoide de pares M × M sobre una carta de dimensión n.
Un elemento es g = (y, x) con β(g) = y (meta) y α(g) = x (fuente);
(z, y)·(y, x) = (z, x), 1_m = (m, m) y (y, x)⁻¹ = (x, y).
Los campos y 1-formas se escriben en 2n variables, primero el bloque y.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

from models.fields import Bivector, ChartOneForm, ChartVectorField, ScalarField
from utils.exceptions import BaseMismatchError, DimensionMismatchError
from utils.jets import Num

Coords = Tuple[float, ...]


def _check_dim(obj: str, expected: int, got: int) -> None:
    if expected != got:
        raise DimensionMismatchError(obj, expected, got)


@dataclass(frozen=True)
class PairGroupoid:
    """Estructura de groupoide de M × M; las fórmulas son exactas en coordenadas."""
    base_dim: int

    @property
    def dim(self) -> int:
        return 2 * self.base_dim

    def target(self, g: Sequence[float]) -> Coords:
        return tuple(g[:self.base_dim])

    def source(self, g: Sequence[float]) -> Coords:
        return tuple(g[self.base_dim:])

    def element(self, y: Sequence[float], x: Sequence[float]) -> Coords:
        _check_dim("meta", self.base_dim, len(y))
        _check_dim("fuente", self.base_dim, len(x))
        return tuple(float(c) for c in y) + tuple(float(c) for c in x)

    def compose(self, h: Sequence[float], g: Sequence[float]) -> Coords:
        """h·g, definido cuando α(h) = β(g)."""
        if self.source(h) != self.target(g):
            raise BaseMismatchError(f"Elementos no componibles: α(h) = {self.source(h)}, β(g) = {self.target(g)}")
        return self.target(h) + self.source(g)

    def identity(self, m: Sequence[float]) -> Coords:
        return self.element(m, m)

    def inverse(self, g: Sequence[float]) -> Coords:
        return self.source(g) + self.target(g)

    def diagonal(self, m: Sequence[Num]) -> list:
        """La inmersión m ↦ (m, m), válida también sobre jets."""
        return list(m) + list(m)


@dataclass(frozen=True, eq=False)
class GroupoidField:
    """Campo ξ(y, x) = (ξ^(1)(y, x), ξ^(2)(y, x)) sobre M × M."""
    base_dim: int
    first: Tuple[ScalarField, ...]
    second: Tuple[ScalarField, ...]
    label: str = ""

    def __post_init__(self):
        first, second = tuple(self.first), tuple(self.second)
        _check_dim("primer bloque", self.base_dim, len(first))
        _check_dim("segundo bloque", self.base_dim, len(second))
        for c in first + second:
            _check_dim("componente del campo en M × M", 2 * self.base_dim, c.dim)
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    @classmethod
    def from_field(cls, base_dim: int, field: ChartVectorField, label: str = "") -> "GroupoidField":
        _check_dim("campo en M × M", 2 * base_dim, field.dim)
        return cls(base_dim, field.components[:base_dim], field.components[base_dim:], label)

    @property
    def field(self) -> ChartVectorField:
        return ChartVectorField(self.first + self.second)

    def blocks(self, y: Sequence[float], x: Sequence[float]) -> Tuple[Coords, Coords]:
        values = self.field.evaluate(tuple(y) + tuple(x))
        return values[:self.base_dim], values[self.base_dim:]

    def _wrap(self, field: ChartVectorField) -> "GroupoidField":
        return GroupoidField.from_field(self.base_dim, field)

    def __add__(self, other: "GroupoidField") -> "GroupoidField":
        return self._wrap(self.field + other.field)

    def __sub__(self, other: "GroupoidField") -> "GroupoidField":
        return self._wrap(self.field - other.field)

    def __neg__(self) -> "GroupoidField":
        return self._wrap(-self.field)

    def scale(self, f) -> "GroupoidField":
        return self._wrap(self.field.scale(f))


@dataclass(frozen=True, eq=False)
class GroupoidOneForm:
    """1-forma Φ(y, x) = (Φ^(1), Φ^(2)) sobre M × M."""
    base_dim: int
    first: Tuple[ScalarField, ...]
    second: Tuple[ScalarField, ...]
    label: str = ""

    def __post_init__(self):
        first, second = tuple(self.first), tuple(self.second)
        _check_dim("primer bloque", self.base_dim, len(first))
        _check_dim("segundo bloque", self.base_dim, len(second))
        for c in first + second:
            _check_dim("componente de la 1-forma en M × M", 2 * self.base_dim, c.dim)
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    @classmethod
    def from_form(cls, base_dim: int, form: ChartOneForm, label: str = "") -> "GroupoidOneForm":
        _check_dim("1-forma en M × M", 2 * base_dim, form.dim)
        return cls(base_dim, form.components[:base_dim], form.components[base_dim:], label)

    @property
    def form(self) -> ChartOneForm:
        return ChartOneForm(self.first + self.second)

    def blocks(self, y: Sequence[float], x: Sequence[float]) -> Tuple[Coords, Coords]:
        values = self.form.evaluate(tuple(y) + tuple(x))
        return values[:self.base_dim], values[self.base_dim:]

    def pair(self, field: GroupoidField) -> ScalarField:
        return self.form.pair(field.field)

    def __add__(self, other: "GroupoidOneForm") -> "GroupoidOneForm":
        return GroupoidOneForm.from_form(self.base_dim, self.form + other.form)

    def __sub__(self, other: "GroupoidOneForm") -> "GroupoidOneForm":
        return GroupoidOneForm.from_form(self.base_dim, self.form - other.form)

    def __neg__(self) -> "GroupoidOneForm":
        return GroupoidOneForm.from_form(self.base_dim, -self.form)


@dataclass(frozen=True, eq=False)
class CoarsePoissonGroupoid:
    """
    P × P con la estructura producto π(y) ⊕ (−π(x)): β es de Poisson y α
    anti-Poisson, con ancla a_* = π♯ en A*G ≅ T*P.
    """
    pi: Bivector

    @property
    def base_dim(self) -> int:
        return self.pi.dim

    @property
    def pair(self) -> PairGroupoid:
        return PairGroupoid(self.pi.dim)

    @property
    def bivector(self) -> Bivector:
        n = self.pi.dim
        entries = {}
        for (i, j), value in self.pi.entries.items():
            entries[(i, j)] = value.pullback(2 * n)
            entries[(n + i, n + j)] = -value.pullback(2 * n, offset=n)
        return Bivector(2 * n, entries, label=f"{self.pi.label}⊕(−{self.pi.label})")
