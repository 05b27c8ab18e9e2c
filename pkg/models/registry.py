"""
Registro inmutable de los objetos con nombre de un archivo de modelo.
"""
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

from models.algebroid import DualSection, LieAlgebroid, SectionA
from models.fields import Bivector, ChartOneForm, ChartVectorField
from models.groupoid import CoarsePoissonGroupoid, GroupoidField, GroupoidOneForm
from models.total_space import LinearVectorField

_TABLES = (
    "sections", "dual_sections", "vector_fields", "one_forms", "bivectors",
    "linear_fields", "groupoid_fields", "poisson_pairs",
)


@dataclass(frozen=True, eq=False)
class ModelRegistry:
    """
    Objetos compilados de un modelo, accesibles por nombre.

    Las tablas se exponen como vistas de solo lectura; el registro puede
    compartirse entre verificaciones sin copias.
    """
    name: str
    algebroid: LieAlgebroid
    sections: Mapping[str, SectionA] = field(default_factory=dict)
    dual_sections: Mapping[str, DualSection] = field(default_factory=dict)
    vector_fields: Mapping[str, ChartVectorField] = field(default_factory=dict)
    one_forms: Mapping[str, ChartOneForm] = field(default_factory=dict)
    bivectors: Mapping[str, Bivector] = field(default_factory=dict)
    linear_fields: Mapping[str, LinearVectorField] = field(default_factory=dict)
    groupoid_fields: Mapping[str, GroupoidField] = field(default_factory=dict)
    poisson_pairs: Mapping[str, GroupoidOneForm] = field(default_factory=dict)
    poisson_groupoid: Optional[CoarsePoissonGroupoid] = None
    source: str = ""

    def __post_init__(self):
        for table in _TABLES:
            object.__setattr__(self, table, MappingProxyType(dict(getattr(self, table))))

    @property
    def base_dim(self) -> int:
        return self.algebroid.base_dim

    @property
    def rank(self) -> int:
        return self.algebroid.rank

    def basis_sections(self):
        return [self.algebroid.basis(a) for a in range(self.rank)]

    def __repr__(self) -> str:
        counts = ", ".join(f"{t}={len(getattr(self, t))}" for t in _TABLES if getattr(self, t))
        return f"<ModelRegistry(name='{self.name}', n={self.base_dim}, k={self.rank}{', ' if counts else ''}{counts})>"
