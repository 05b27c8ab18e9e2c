"""
Servicio de archivos de modelo para Algebroid Lifts.
Lee documentos TOML (.model), compila sus expresiones y construye un
registro inmutable de objetos con nombre.
"""
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from models.algebroid import DualSection, LieAlgebroid, SectionA
from models.expr import VariableScope
from models.fields import Bivector, ChartOneForm, ChartVectorField, ScalarField
from models.groupoid import CoarsePoissonGroupoid, GroupoidField, GroupoidOneForm
from models.registry import ModelRegistry
from models.total_space import LinearVectorField, TotalSpaceField
from services.algebroid_service import AlgebroidService
from services.expression_service import ExpressionService
from services.lift_service import LiftService
from utils.exceptions import AlgebroidLiftsError, SchemaError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger("algebroid_lifts.services.model")

MODEL_SUFFIX = ".model"


def _require(doc: Mapping[str, Any], key: str, kind: type, where: str = "") -> Any:
    field = f"{where}.{key}" if where else key
    if key not in doc:
        raise SchemaError(field, "campo obligatorio ausente")
    value = doc[key]
    if kind is int and isinstance(value, bool):
        raise SchemaError(field, "se esperaba un entero")
    if not isinstance(value, kind):
        raise SchemaError(field, f"se esperaba {kind.__name__}, se obtuvo {type(value).__name__}")
    return value


def _expressions(value: Any, count: int, field: str) -> List[str]:
    if not isinstance(value, list) or not all(isinstance(v, (str, int, float)) for v in value):
        raise SchemaError(field, "se esperaba una lista de expresiones")
    if len(value) != count:
        raise SchemaError(field, f"se esperaban {count} expresiones, se obtuvieron {len(value)}")
    return [str(v) for v in value]


def _table(doc: Mapping[str, Any], key: str) -> Mapping[str, Any]:
    value = doc.get(key, {})
    if not isinstance(value, dict):
        raise SchemaError(key, "se esperaba una tabla de objetos con nombre")
    return value


class ModelService:
    """Carga y compilación de modelos declarativos."""

    @classmethod
    def _compile_list(cls, sources: Sequence[str], scope: VariableScope, field: str) -> Tuple[ScalarField, ...]:
        compiled = []
        for idx, src in enumerate(sources):
            try:
                compiled.append(ExpressionService.compile_text(src, scope, label=src))
            except SchemaError:
                raise
            except AlgebroidLiftsError as e:
                raise SchemaError(f"{field}[{idx}]", str(e)) from e
        return tuple(compiled)

    @classmethod
    def _compile_named(
        cls, doc: Mapping[str, Any], key: str, count: int, scope: VariableScope
    ) -> Dict[str, Tuple[ScalarField, ...]]:
        return {
            name: cls._compile_list(_expressions(value, count, f"{key}.{name}"), scope, f"{key}.{name}")
            for name, value in _table(doc, key).items()
        }

    @classmethod
    def _bivector(cls, components: Sequence[ScalarField], n: int, label: str) -> Bivector:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        entries = {pair: c for pair, c in zip(pairs, components) if not c.is_zero}
        return Bivector(n, entries, label=label)

    @classmethod
    def _algebroid(
        cls, doc: Mapping[str, Any], n: int, k: int, bivectors: Mapping[str, Bivector], name: str
    ) -> LieAlgebroid:
        if "cotangent_of" in doc:
            target = _require(doc, "cotangent_of", str)
            if target not in bivectors:
                raise SchemaError("cotangent_of", f"bivector '{target}' no declarado")
            if k != n:
                raise SchemaError("fiber_dim", "el algebroide cotangente requiere fiber_dim = base_dim")
            return AlgebroidService.cotangent_algebroid(bivectors[target], name=name)

        base = VariableScope(n)
        anchor_doc = _require(doc, "anchor", list)
        if len(anchor_doc) != k:
            raise SchemaError("anchor", f"se esperaban {k} columnas, se obtuvieron {len(anchor_doc)}")
        anchor = tuple(
            ChartVectorField(cls._compile_list(_expressions(column, n, f"anchor[{a}]"), base, f"anchor[{a}]"))
            for a, column in enumerate(anchor_doc)
        )

        structure: Dict[Tuple[int, int, int], ScalarField] = {}
        for idx, entry in enumerate(doc.get("structure", [])):
            where = f"structure[{idx}]"
            if not isinstance(entry, dict):
                raise SchemaError(where, "se esperaba una tabla {a, b, c, expr}")
            a, b, c = (_require(entry, key, int, where) for key in ("a", "b", "c"))
            if not all(0 <= i < k for i in (a, b, c)):
                raise SchemaError(where, f"índices fuera de rango para fiber_dim = {k}")
            if a >= b:
                raise SchemaError(where, f"se requiere a < b (a = {a}, b = {b})")
            if (a, b, c) in structure:
                raise SchemaError(where, f"entrada ({a}, {b}, {c}) duplicada")
            expr = entry.get("expr")
            if not isinstance(expr, (str, int, float)):
                raise SchemaError(f"{where}.expr", "se esperaba una expresión")
            structure[(a, b, c)] = cls._compile_list([str(expr)], base, where)[0]
        return LieAlgebroid(n, k, anchor, structure, name=name)

    @classmethod
    def load_model(cls, text: str, source: str = "") -> ModelRegistry:
        """
        Compila un documento de modelo.

        Args:
            text: Contenido TOML
            source: Ruta de origen, solo para mensajes

        Retorna:
            ModelRegistry con todos los objetos con nombre

        Raises:
            SchemaError: documento mal formado o expresión inválida
        """
        try:
            doc = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise SchemaError("documento", str(e)) from e

        n = _require(doc, "base_dim", int)
        k = _require(doc, "fiber_dim", int)
        if n < 1:
            raise SchemaError("base_dim", "debe ser al menos 1 (las álgebras de Lie usan una base ficticia)")
        if k < 1:
            raise SchemaError("fiber_dim", "debe ser al menos 1")
        name = str(doc.get("name", Path(source).stem if source else "modelo"))
        base = VariableScope(n)
        pair = VariableScope(2 * n)

        bivectors = {
            key: cls._bivector(components, n, key)
            for key, components in cls._compile_named(doc, "bivectors", n * (n - 1) // 2, base).items()
        }
        algebroid = cls._algebroid(doc, n, k, bivectors, name)

        linear_fields = {}
        for key, value in _table(doc, "linear_fields").items():
            where = f"linear_fields.{key}"
            if not isinstance(value, dict):
                raise SchemaError(where, "se esperaba una tabla {base, matrix}")
            field_base = cls._compile_list(_expressions(value.get("base"), n, f"{where}.base"), base, f"{where}.base")
            matrix_doc = value.get("matrix")
            if not isinstance(matrix_doc, list) or len(matrix_doc) != k:
                raise SchemaError(f"{where}.matrix", f"se esperaban {k} filas")
            matrix = tuple(
                cls._compile_list(_expressions(row, k, f"{where}.matrix[{a}]"), base, f"{where}.matrix[{a}]")
                for a, row in enumerate(matrix_doc)
            )
            linear_fields[key] = LinearVectorField(ChartVectorField(field_base), matrix, label=key)

        groupoid_fields = {
            key: GroupoidField(n, components[:n], components[n:], label=key)
            for key, components in cls._compile_named(doc, "groupoid_fields", 2 * n, pair).items()
        }

        poisson_pairs: Dict[str, GroupoidOneForm] = {}
        poisson_groupoid = None
        if "poisson_pair" in doc:
            block = _table(doc, "poisson_pair")
            target = _require(block, "bivector", str, "poisson_pair")
            if target not in bivectors:
                raise SchemaError("poisson_pair.bivector", f"bivector '{target}' no declarado")
            poisson_groupoid = CoarsePoissonGroupoid(bivectors[target])
            for key, value in _table(block, "forms").items():
                where = f"poisson_pair.forms.{key}"
                if not isinstance(value, dict):
                    raise SchemaError(where, "se esperaba una tabla {first, second}")
                first = cls._compile_list(_expressions(value.get("first"), n, f"{where}.first"), pair, where)
                second = cls._compile_list(_expressions(value.get("second"), n, f"{where}.second"), pair, where)
                poisson_pairs[key] = GroupoidOneForm(n, first, second, label=key)

        registry = ModelRegistry(
            name=name,
            algebroid=algebroid,
            sections={
                key: SectionA(n, c, label=key) for key, c in cls._compile_named(doc, "sections", k, base).items()
            },
            dual_sections={
                key: DualSection(n, c, label=key)
                for key, c in cls._compile_named(doc, "dual_sections", k, base).items()
            },
            vector_fields={
                key: ChartVectorField(c) for key, c in cls._compile_named(doc, "vector_fields", n, base).items()
            },
            one_forms={key: ChartOneForm(c) for key, c in cls._compile_named(doc, "one_forms", n, base).items()},
            bivectors=bivectors,
            linear_fields=linear_fields,
            groupoid_fields=groupoid_fields,
            poisson_pairs=poisson_pairs,
            poisson_groupoid=poisson_groupoid,
            source=source,
        )
        logger.info(f"Modelo '{name}' cargado: {registry!r}")
        return registry

    @classmethod
    def load_model_file(cls, path) -> Tuple[Optional[ModelRegistry], Optional[str]]:
        """
        Lee y compila un archivo de modelo.

        Retorna:
            (registro, None) si tiene éxito, o (None, mensaje de error)
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            return None, f"No se pudo leer {path}: {e.strerror or e}"
        except UnicodeDecodeError:
            return None, f"{path} no es texto UTF-8"
        try:
            return cls.load_model(text, source=str(path)), None
        except AlgebroidLiftsError as e:
            logger.error(f"Modelo inválido {path}: {e}")
            return None, f"{path}: {e}"
        except ValueError as e:
            return None, f"{path}: {e}"

    @classmethod
    def model_paths(cls, path) -> List[Path]:
        """Un archivo, o los archivos .model de un directorio en orden alfabético."""
        path = Path(path)
        if path.is_dir():
            return sorted(p for p in path.iterdir() if p.suffix == MODEL_SUFFIX)
        return [path]

    @classmethod
    def resolve_flow_field(cls, registry: ModelRegistry, name: str) -> Optional[TotalSpaceField]:
        """
        Campo del espacio total con ese nombre: un campo lineal declarado, o
        el levantamiento completo (`~X`) o vertical (`^X`) de una sección.
        """
        if name in registry.linear_fields:
            return registry.linear_fields[name].as_total()
        section = registry.sections.get(name[1:])
        if section is None:
            return None
        if name.startswith("~"):
            return LiftService.complete_lift(registry.algebroid, section).as_total()
        if name.startswith("^"):
            return LiftService.vertical_lift(section)
        return None
