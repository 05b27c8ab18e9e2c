"""
Algebroides de Lie trivializados sobre una carta global.
Secciones de A y de A*, el algebroide (ancla y funciones de estructura) y
los operadores diferenciales covariantes (CDO).
"""
from dataclasses import dataclass, field
from typing import Dict, Mapping, Sequence, Tuple, Union

from models.fields import ChartVectorField, ScalarField, field_sum
from utils.exceptions import DimensionMismatchError
from utils.jets import Num, primal

Scalar = Union[float, int]


def _check_dim(obj: str, expected: int, got: int) -> None:
    if expected != got:
        raise DimensionMismatchError(obj, expected, got)


@dataclass(frozen=True, eq=False)
class _FiberSection:
    """Componentes en el marco global {e_a} (o su dual) como funciones de la base."""
    base_dim: int
    components: Tuple[ScalarField, ...]
    label: str = ""

    def __post_init__(self):
        components = tuple(self.components)
        for c in components:
            _check_dim("componente de sección", self.base_dim, c.dim)
        object.__setattr__(self, "components", components)

    @property
    def rank(self) -> int:
        return len(self.components)

    def __call__(self, point: Sequence[Num]) -> Tuple[Num, ...]:
        return tuple(c(point) for c in self.components)

    def evaluate(self, point: Sequence[float]) -> Tuple[float, ...]:
        return tuple(primal(v) for v in self(point))

    @classmethod
    def zero(cls, base_dim: int, rank: int):
        return cls(base_dim, tuple(ScalarField.zero(base_dim) for _ in range(rank)))

    @classmethod
    def basis(cls, base_dim: int, rank: int, index: int):
        """e_index (o ε_index para secciones duales)."""
        if not 0 <= index < rank:
            raise DimensionMismatchError("índice de la base", rank, index)
        return cls(
            base_dim,
            tuple(ScalarField.const(base_dim, 1.0 if a == index else 0.0) for a in range(rank)),
            label=f"e{index}",
        )

    @classmethod
    def constant(cls, base_dim: int, values: Sequence[float]):
        return cls(base_dim, tuple(ScalarField.const(base_dim, v) for v in values))

    def _same_shape(self, other) -> None:
        _check_dim("base de secciones", self.base_dim, other.base_dim)
        _check_dim("rango de secciones", self.rank, other.rank)

    def __add__(self, other):
        self._same_shape(other)
        return type(self)(self.base_dim, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        self._same_shape(other)
        return type(self)(self.base_dim, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return type(self)(self.base_dim, tuple(-c for c in self.components))

    def scale(self, f: Union[ScalarField, Scalar]):
        return type(self)(self.base_dim, tuple(c * f for c in self.components))


@dataclass(frozen=True, eq=False)
class SectionA(_FiberSection):
    """Sección X = X^a e_a de A."""


@dataclass(frozen=True, eq=False)
class DualSection(_FiberSection):
    """Sección φ = φ_a ε^a de A*."""

    def pair(self, section: SectionA) -> ScalarField:
        """⟨φ, X⟩ como campo escalar en la base."""
        self._same_shape(section)
        return field_sum([p * x for p, x in zip(self.components, section.components)], self.base_dim)


def _structure_entries(
    rank: int, base_dim: int, entries: Mapping[Tuple[int, int, int], ScalarField]
) -> Dict[Tuple[int, int, int], ScalarField]:
    stored: Dict[Tuple[int, int, int], ScalarField] = {}
    for (a, b, c), value in entries.items():
        if not all(0 <= i < rank for i in (a, b, c)):
            raise DimensionMismatchError("función de estructura", rank, max(a, b, c) + 1)
        if a == b:
            raise ValueError(f"Entrada de estructura con a = b = {a}")
        _check_dim("función de estructura", base_dim, value.dim)
        key, value = ((a, b, c), value) if a < b else ((b, a, c), -value)
        if key in stored:
            raise ValueError(f"Entrada de estructura {key} duplicada")
        if not value.is_zero:
            stored[key] = value
    return stored


@dataclass(frozen=True, eq=False)
class LieAlgebroid:
    """
    Algebroide de Lie trivial A = M × R^k sobre una carta de dimensión n.

    `anchor[a]` es el campo a(e_a); `structure[(a, b, c)]` con a < b guarda
    C^c_{ab}, de modo que [e_a, e_b] = C^c_{ab} e_c.
    """
    base_dim: int
    rank: int
    anchor: Tuple[ChartVectorField, ...]
    structure: Mapping[Tuple[int, int, int], ScalarField] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        anchor = tuple(self.anchor)
        _check_dim("ancla", self.rank, len(anchor))
        for column in anchor:
            _check_dim("columna del ancla", self.base_dim, column.dim)
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "structure", _structure_entries(self.rank, self.base_dim, self.structure))

    def structure_function(self, a: int, b: int, c: int) -> ScalarField:
        """C^c_{ab} con la antisimetría en (a, b)."""
        if a == b:
            return ScalarField.zero(self.base_dim)
        if a < b:
            return self.structure.get((a, b, c), ScalarField.zero(self.base_dim))
        return -self.structure.get((b, a, c), ScalarField.zero(self.base_dim))

    def anchor_component(self, i: int, a: int) -> ScalarField:
        """a^i_a."""
        return self.anchor[a].components[i]

    def basis(self, a: int) -> SectionA:
        return SectionA.basis(self.base_dim, self.rank, a)

    def dual_basis(self, a: int) -> DualSection:
        return DualSection.basis(self.base_dim, self.rank, a)

    def zero_section(self) -> SectionA:
        return SectionA.zero(self.base_dim, self.rank)

    @property
    def total_dim(self) -> int:
        return self.base_dim + self.rank

    def __repr__(self) -> str:
        return f"<LieAlgebroid(name='{self.name}', n={self.base_dim}, k={self.rank})>"


@dataclass(frozen=True, eq=False)
class CovDiffOp:
    """
    Operador diferencial covariante D(X)^a = x(X^a) + Γ^a_b X^b sobre el
    campo base x.
    """
    base: ChartVectorField
    gamma: Tuple[Tuple[ScalarField, ...], ...]

    def __post_init__(self):
        gamma = tuple(tuple(row) for row in self.gamma)
        for row in gamma:
            _check_dim("fila de Γ", len(gamma), len(row))
            for entry in row:
                _check_dim("entrada de Γ", self.base.dim, entry.dim)
        object.__setattr__(self, "gamma", gamma)

    @property
    def base_dim(self) -> int:
        return self.base.dim

    @property
    def rank(self) -> int:
        return len(self.gamma)

    def entry(self, a: int, b: int) -> ScalarField:
        return self.gamma[a][b]

    def gamma_matrix(self, point: Sequence[float]):
        return [[entry.evaluate(point) for entry in row] for row in self.gamma]
