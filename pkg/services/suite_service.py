"""
Servicio de baterías de verificación para Algebroid Lifts.
Construye objetos aleatorios sembrados sobre cada modelo, comprueba las
identidades de levantamientos, de la estructura de Poisson dual y de los
groupoides de pares, y reúne los residuos en un SuiteReport.
"""
import functools
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from config import VerificationConfig
from models.algebroid import DualSection, SectionA
from models.expr import VariableScope
from models.fields import Bivector, ChartOneForm, ChartVectorField, ScalarField
from models.groupoid import CoarsePoissonGroupoid, GroupoidField, PairGroupoid
from models.registry import ModelRegistry
from models.report import CheckResult, Residual, SuiteReport, Verdict, sup_residual, worst_of
from models.total_space import LinearVectorField, TotalPoint, TotalSpaceField
from services.algebroid_service import AlgebroidService
from services.calculus_service import CalculusService
from services.dual_poisson_service import DualPoissonService
from services.expression_service import ExpressionService
from services.lift_service import FlowDefect, LiftService
from services.model_service import ModelService
from services.pair_groupoid_service import PairGroupoidService
from services.poisson_pair_service import PoissonPairService
from utils.exceptions import AlgebroidLiftsError, DivergenceError
from utils.sampling import Sampler
from utils.validators import (
    validate_points, validate_seed, validate_steps, validate_suite_name, validate_tolerance,
)

logger = logging.getLogger("algebroid_lifts.services.suite")

Cfg = VerificationConfig

IDENTITY_ANCHORS: Dict[str, Tuple[str, ...]] = {
    "validate": ("algebroid-axioms", "poisson-jacobi"),
    "lifts": (
        "bracket-closure", "lift-homomorphism", "cdo-bracket-preservation", "flow-linearity",
        "dual-flow-inverse-transpose", "intrinsic-derivative", "tangent-pairing-independence",
        "dual-field-pairing", "decomposition", "dual-lift-homomorphism",
    ),
    "dual": (
        "dual-jacobi", "hamiltonian-relations", "pullback-sharp", "linear-differential-sharp",
        "morphic-iff-poisson", "coisotropic-graph-iff-closed", "tangent-coisotropy-iff-poisson-field",
        "dual-pairings",
    ),
    "pair": (
        "groupoid-axioms", "lie-functor-lift", "star-bracket-stability", "right-invariant-bracket",
        "d-xi-bracket", "d-xi-extension-independence", "tilde-equations", "star-generation",
        "affine-decomposition", "multiplicative-function",
    ),
    "poisson-pair": (
        "star-oneform-projections", "bialgebroid-bracket", "d-phi-koszul", "d-phi-theorem",
        "sharp-star", "anchor-naturality", "tilde-sharp", "tilde-bracket", "tilde-pullback-bracket",
        "pullback-brackets-commute", "closing-identity", "tilde-pairings",
    ),
}

SUITES = ("lifts", "dual", "pair", "poisson-pair")

ABORTED_ANCHOR = "suite-aborted"

Outcome = Union[float, Residual, Verdict]


def _unpack(outcome: Outcome) -> Tuple[float, str]:
    if isinstance(outcome, Residual):
        return outcome.value, outcome.describe()
    if isinstance(outcome, Verdict):
        detail = ", ".join(f"{key}={value:.3e}" for key, value in outcome.residuals.items())
        return outcome.residual, detail
    return float(outcome), ""


def _worst(values: Sequence[float]) -> float:
    """Máximo que propaga NaN."""
    if any(math.isnan(v) for v in values):
        return math.nan
    return max(values, default=0.0)


def _scalar_residual(f: ScalarField, points: Sequence[Sequence[float]], detail: str) -> Residual:
    return sup_residual(lambda p: (f(p),), points, detail)


def _vector_gap(left: Union[SectionA, ChartVectorField], right: Union[SectionA, ChartVectorField]) -> ChartVectorField:
    return ChartVectorField(tuple(a - b for a, b in zip(left.components, right.components)))


@dataclass
class SuiteContext:
    """
    Estado compartido por las comprobaciones de una batería sobre un modelo:
    muestreador sembrado, puntos y el reporte que se va llenando.
    """
    registry: ModelRegistry
    sampler: Sampler
    report: SuiteReport
    count: int
    tol_override: Optional[float] = None
    timings: bool = False
    base: List[Tuple[float, ...]] = field(default_factory=list)
    total: List[Tuple[float, ...]] = field(default_factory=list)

    @classmethod
    def create(
        cls,
        registry: ModelRegistry,
        report: SuiteReport,
        points: int,
        seed: int,
        tol: Optional[float] = None,
        timings: bool = False,
    ) -> "SuiteContext":
        sampler = Sampler(seed)
        n, k = registry.base_dim, registry.rank
        return cls(
            registry, sampler, report, points, tol, timings,
            base=sampler.points(n, points),
            total=sampler.points(n + k, points),
        )

    @property
    def heavy_count(self) -> int:
        """Muestras de las identidades con derivadas anidadas: una fracción de --points."""
        return max(1, math.ceil(self.count * Cfg.HEAVY_FRACTION))

    @property
    def heavy_base(self) -> List[Tuple[float, ...]]:
        return self.base[:self.heavy_count]

    @property
    def heavy_total(self) -> List[Tuple[float, ...]]:
        return self.total[:self.heavy_count]

    def base_sample(self, dim: int, minimum: int) -> List[Tuple[float, ...]]:
        """Puntos de la base en dim coordenadas, completados con muestras nuevas hasta minimum."""
        points = [p[:dim] for p in self.base]
        if len(points) < minimum:
            points.extend(self.sampler.points(dim, minimum - len(points)))
        return points

    def tol(self, default: float) -> float:
        return self.tol_override if self.tol_override is not None else default

    def check(
        self,
        label: str,
        anchor: str,
        compute: Callable[[], Outcome],
        tol: float,
        points: Optional[int] = None,
        counted: bool = False,
    ) -> CheckResult:
        """
        Ejecuta una comprobación y la agrega al reporte.

        Args:
            label: Descripción de la identidad
            anchor: Ancla estable de la identidad
            compute: Devuelve un residuo, un Residual o un Verdict
            tol: Tolerancia por defecto de la familia
            points: Muestras usadas (por defecto las de la base)
            counted: Las comprobaciones de concordancia cuentan discrepancias
                y no aceptan la tolerancia global

        Retorna:
            El CheckResult agregado
        """
        tol = tol if counted else self.tol(tol)
        start = time.perf_counter()
        try:
            residual, location = _unpack(compute())
        except (AlgebroidLiftsError, ValueError, ArithmeticError) as e:
            logger.warning(f"Comprobación '{label}' interrumpida: {e}")
            residual, location = math.inf, f"{type(e).__name__}: {e}"
        ms = round((time.perf_counter() - start) * 1000.0, 3) if self.timings else 0.0
        result = self.report.add(CheckResult(
            f"{self.registry.name}: {label}", anchor, float(residual), tol,
            points if points is not None else len(self.base), ms, location,
        ))
        logger.debug(f"{result.label}: {result.residual:.3e} (tol {tol:.0e})")
        if not result.passed:
            logger.warning(f"Falla {anchor} en {result.label}: {result.residual:.3e} {location}")
        return result

    # --- Objetos aleatorios ----------------------------------------------------

    def scalar(self, dim: int, degree: int = 2, label: str = "f") -> ScalarField:
        names = [f"x{i}" for i in range(dim)]
        text = self.sampler.polynomial_text(names, degree, Cfg.RANDOM_SCALE)
        return ExpressionService.compile_text(text, VariableScope(dim), label=label)

    def vector_field(self, dim: int) -> ChartVectorField:
        return ChartVectorField(tuple(self.scalar(dim) for _ in range(dim)))

    def one_form(self, dim: int) -> ChartOneForm:
        return ChartOneForm(tuple(self.scalar(dim) for _ in range(dim)))

    def section(self, label: str = "X") -> SectionA:
        n, k = self.registry.base_dim, self.registry.rank
        return SectionA(n, tuple(self.scalar(n) for _ in range(k)), label=label)

    def dual_section(self, label: str = "φ") -> DualSection:
        n, k = self.registry.base_dim, self.registry.rank
        return DualSection(n, tuple(self.scalar(n) for _ in range(k)), label=label)

    def matrix(self, rows: int, cols: int, dim: int, degree: int = 1) -> Tuple[Tuple[ScalarField, ...], ...]:
        return tuple(tuple(self.scalar(dim, degree) for _ in range(cols)) for _ in range(rows))

    def linear_field(self, label: str) -> LinearVectorField:
        n, k = self.registry.base_dim, self.registry.rank
        return LinearVectorField(self.vector_field(n), self.matrix(k, k, n, degree=2), label=label)

    # --- Estructuras de Poisson ---------------------------------------------------

    def poisson_bivector(self, dim: int) -> Bivector:
        """
        π del modelo para la dimensión dada: la del bloque poisson_pair, el
        primer bivector declarado que cumple Jacobi, o ∂0∧∂1 (cero si dim = 1).
        """
        groupoid = self.registry.poisson_groupoid
        if groupoid is not None and groupoid.base_dim == dim:
            return groupoid.pi
        for name, pi in self.registry.bivectors.items():
            if pi.dim != dim:
                continue
            try:
                jacobi = CalculusService.schouten_residual(pi, [p[:dim] for p in self.heavy_base])
            except (AlgebroidLiftsError, ArithmeticError) as e:
                logger.debug(f"Bivector '{name}' descartado: {e}")
                continue
            if jacobi < Cfg.TOL_AXIOMS:
                return pi
        if dim >= 2:
            return Bivector(dim, {(0, 1): ScalarField.const(dim, 1.0)}, label="∂0∧∂1")
        return Bivector.zero(dim)

    def poisson_groupoid(self, dim: int) -> CoarsePoissonGroupoid:
        groupoid = self.registry.poisson_groupoid
        if groupoid is not None and groupoid.base_dim == dim:
            return groupoid
        return CoarsePoissonGroupoid(self.poisson_bivector(dim))


@dataclass(frozen=True)
class FlowReport:
    """Extremo y defecto de linealidad del flujo de un campo con nombre."""
    name: str
    start: TotalPoint
    t: float
    steps: int
    defect: FlowDefect
    tol: float = Cfg.TOL_TWO_NESTED

    @property
    def verdict(self) -> str:
        if self.defect.is_linear(self.tol):
            return "lineal"
        if self.defect.affine_defect < self.tol:
            return "afín, no lineal"
        return "no lineal"


class SuiteService:
    """Baterías de identidades sobre modelos con nombre."""

    # --- Entradas -----------------------------------------------------------------

    @classmethod
    def load_models(cls, path) -> Tuple[List[ModelRegistry], Optional[str]]:
        """Todos los modelos de un archivo o directorio, o el primer error."""
        paths = ModelService.model_paths(path)
        if not paths:
            return [], f"No hay archivos de modelo en {path}"
        registries = []
        for model_path in paths:
            registry, error = ModelService.load_model_file(model_path)
            if error:
                return [], error
            registries.append(registry)
        return registries, None

    @classmethod
    def _check_params(cls, points: int, seed: int, tol: Optional[float]) -> Optional[str]:
        for is_valid, error in (validate_points(points), validate_seed(seed), validate_tolerance(tol)):
            if not is_valid:
                return error
        return None

    @classmethod
    def run(
        cls,
        suite: str,
        path,
        points: int = Cfg.DEFAULT_POINTS,
        seed: int = Cfg.DEFAULT_SEED,
        tol: Optional[float] = None,
        timings: bool = False,
    ) -> Tuple[Optional[SuiteReport], Optional[str]]:
        """
        Ejecuta una batería sobre un archivo de modelo o un directorio.

        Args:
            suite: lifts, dual, pair, poisson-pair o all
            path: Archivo .model o directorio con archivos .model
            points: Puntos de muestreo por comprobación
            seed: Semilla del muestreo
            tol: Tolerancia global (None usa las tolerancias por familia)
            timings: Medir el tiempo de cada comprobación

        Retorna:
            (reporte, None) si tiene éxito, o (None, mensaje de error)
        """
        is_valid, error = validate_suite_name(suite)
        if not is_valid:
            return None, error
        error = cls._check_params(points, seed, tol)
        if error:
            return None, error
        registries, error = cls.load_models(path)
        if error:
            return None, error

        report = SuiteReport(suite.strip(), seed)
        for registry in registries:
            cls.run_registry(suite.strip(), registry, points, seed, tol, timings, report)
        logger.info(
            f"Batería '{suite}' terminada: {len(report.checks)} comprobaciones, {len(report.failed)} fallidas"
        )
        return report, None

    @classmethod
    def run_registry(
        cls,
        suite: str,
        registry: ModelRegistry,
        points: int = Cfg.DEFAULT_POINTS,
        seed: int = Cfg.DEFAULT_SEED,
        tol: Optional[float] = None,
        timings: bool = False,
        report: Optional[SuiteReport] = None,
    ) -> SuiteReport:
        """Ejecuta una batería (o todas) sobre un modelo ya compilado."""
        report = report if report is not None else SuiteReport(suite, seed)
        batteries = {
            "lifts": cls._lifts_suite,
            "dual": cls._dual_suite,
            "pair": cls._pair_suite,
            "poisson-pair": cls._poisson_pair_suite,
        }
        names = SUITES if suite == "all" else (suite,)
        for name in names:
            logger.info(f"Batería '{name}' sobre '{registry.name}' (semilla {seed}, {points} puntos)")
            ctx = SuiteContext.create(registry, report, points, seed, tol, timings)
            try:
                batteries[name](ctx)
            except (AlgebroidLiftsError, ValueError, ArithmeticError) as e:
                logger.error(f"Batería '{name}' abortada sobre '{registry.name}': {e}")
                report.add(CheckResult(
                    f"{registry.name}: batería {name}", ABORTED_ANCHOR, math.inf, 0.0, 0,
                    location=f"{type(e).__name__}: {e}",
                ))
        return report

    @classmethod
    def validate_registry(
        cls,
        registry: ModelRegistry,
        points: int = Cfg.VALIDATE_POINTS,
        seed: int = Cfg.DEFAULT_SEED,
        tol: Optional[float] = None,
        timings: bool = False,
    ) -> SuiteReport:
        """Axiomas del algebroide, Jacobi del bivector dual y de cada bivector declarado."""
        A = registry.algebroid
        sampler = Sampler(seed)
        base = sampler.points(A.base_dim, points)
        report = AlgebroidService.validate(A, base, tol if tol is not None else Cfg.TOL_AXIOMS, seed)
        ctx = SuiteContext(
            registry, sampler, report, points, tol, timings,
            base=base, total=sampler.points(A.total_dim, points),
        )
        ctx.check(
            "Jacobi del bivector dual", "poisson-jacobi",
            lambda: DualPoissonService.jacobi_residual(A, ctx.total), Cfg.TOL_AXIOMS,
        )
        for name, pi in registry.bivectors.items():
            ctx.check(
                f"Jacobi de {name}", "poisson-jacobi",
                lambda pi=pi: CalculusService.schouten_residual(pi, ctx.base), Cfg.TOL_AXIOMS,
            )
        return report

    @classmethod
    def validate(
        cls,
        path,
        points: int = Cfg.VALIDATE_POINTS,
        seed: int = Cfg.DEFAULT_SEED,
        tol: Optional[float] = None,
        timings: bool = False,
    ) -> Tuple[Optional[SuiteReport], Optional[str]]:
        """
        Valida uno o varios modelos.

        Retorna:
            (reporte, None) si tiene éxito, o (None, mensaje de error)
        """
        error = cls._check_params(points, seed, tol)
        if error:
            return None, error
        registries, error = cls.load_models(path)
        if error:
            return None, error
        report = SuiteReport("validate", seed)
        for registry in registries:
            report.extend(cls.validate_registry(registry, points, seed, tol, timings).checks)
        return report, None

    @classmethod
    def flow_report(
        cls,
        path,
        name: str,
        t: float,
        steps: int = Cfg.RK4_STEPS,
        seed: int = Cfg.DEFAULT_SEED,
    ) -> Tuple[Optional[FlowReport], Optional[str]]:
        """
        Flujo RK4 de un campo con nombre desde un punto sembrado.

        Args:
            path: Archivo .model
            name: Campo lineal declarado, `~X` (levantamiento completo) o `^X` (vertical)
            t: Tiempo final
            steps: Pasos de RK4

        Retorna:
            (FlowReport, None) si tiene éxito, o (None, mensaje de error)
        """
        is_valid, error = validate_steps(steps)
        if not is_valid:
            return None, error
        if not math.isfinite(t):
            return None, "El tiempo debe ser un número finito"
        registry, error = ModelService.load_model_file(path)
        if error:
            return None, error
        target = ModelService.resolve_flow_field(registry, name)
        if target is None:
            return None, f"Campo '{name}' no encontrado en {registry.name}"

        sampler = Sampler(seed)
        start = TotalPoint(sampler.vector(target.base_dim), sampler.vector(target.rank))
        v, w = sampler.vector(target.rank), sampler.vector(target.rank)
        try:
            defect = LiftService.flow_linearity_defect(target, start.base, v, w, t, steps)
            endpoint = LiftService.flow(target, start, t, steps)
        except DivergenceError as e:
            logger.error(f"Flujo de '{name}' divergente: {e}")
            return None, f"El flujo de '{name}' divergió en el paso {e.step}"
        defect = FlowDefect(endpoint, defect.affine_defect, defect.offset)
        logger.info(f"Flujo de '{name}' hasta t = {t}: defecto afín {defect.affine_defect:.3e}")
        return FlowReport(name, start, t, steps, defect), None

    # --- Levantamientos ---------------------------------------------------------------

    @classmethod
    def _lifts_suite(cls, ctx: SuiteContext) -> None:
        A = ctx.registry.algebroid
        n, k = A.base_dim, A.rank
        bracket = CalculusService.lie_bracket
        total_points = [TotalPoint.split(p, n) for p in ctx.total]
        heavy = ctx.heavy_total

        X, Y = ctx.section("X"), ctx.section("Y")
        complete_x, complete_y = LiftService.complete_lift(A, X), LiftService.complete_lift(A, Y)
        linear = list(ctx.registry.linear_fields.values()) + [complete_x, complete_y]
        while len(linear) < 5:
            linear.append(ctx.linear_field(f"ξ{len(linear)}"))
        pairs = [(linear[i], linear[j]) for i in range(3) for j in range(i + 1, 3)]
        lift = lambda xi: xi.as_total().field
        sections = AlgebroidService.section_battery(A)[: k + 1] + [X]

        def closure() -> float:
            return _worst([
                LiftService.is_linear(TotalSpaceField(n, k, bracket(lift(a), lift(b))), total_points).residual
                for a, b in pairs
            ])

        ctx.check("[ξ, η] es lineal", "bracket-closure", closure, Cfg.TOL_BRACKETS, len(total_points))

        XY = AlgebroidService.bracket(A, X, Y)
        vertical_y = LiftService.vertical_lift(Y).field
        ctx.check(
            "[X̃, Ỹ] = [X, Y]~", "lift-homomorphism",
            lambda: sup_residual(
                bracket(lift(complete_x), lift(complete_y)) - lift(LiftService.complete_lift(A, XY)),
                ctx.total, "[X̃, Ỹ] − [X, Y]~",
            ),
            Cfg.TOL_BRACKETS,
        )
        ctx.check(
            "[X̃, Y↑] = [X, Y]↑", "lift-homomorphism",
            lambda: sup_residual(
                bracket(lift(complete_x), vertical_y) - LiftService.vertical_lift(XY).field,
                ctx.total, "[X̃, Y↑] − [X, Y]↑",
            ),
            Cfg.TOL_BRACKETS,
        )
        ctx.check(
            "[X↑, Y↑] = 0", "lift-homomorphism",
            lambda: sup_residual(bracket(LiftService.vertical_lift(X).field, vertical_y), ctx.total, "[X↑, Y↑]"),
            Cfg.TOL_EXACT,
        )

        def preservation() -> Residual:
            residuals = []
            for a, b in pairs:
                D_a, D_b = LiftService.cdo_from_linear(a), LiftService.cdo_from_linear(b)
                combined = LiftService.linear_from_field(TotalSpaceField(n, k, bracket(lift(a), lift(b))))
                D_ab = LiftService.cdo_from_linear(combined)
                apply = AlgebroidService.cdo_apply
                for S in sections:
                    commutator = apply(D_a, apply(D_b, S)) - apply(D_b, apply(D_a, S))
                    residuals.append(sup_residual(
                        apply(D_ab, S) - commutator, ctx.heavy_base, f"D_[{a.label}, {b.label}]({S.label})",
                    ))
            return worst_of(residuals)

        ctx.check("D_[ξ,η] = [D_ξ, D_η]", "cdo-bracket-preservation", preservation, Cfg.TOL_ONE_NESTED,
                  ctx.heavy_count)

        def vertical_brackets() -> Residual:
            residuals = []
            for xi in linear[:3]:
                D = LiftService.cdo_from_linear(xi)
                for S in sections:
                    defect = (
                        bracket(lift(xi), LiftService.vertical_lift(S).field)
                        - LiftService.vertical_lift(AlgebroidService.cdo_apply(D, S)).field
                    )
                    residuals.append(sup_residual(defect, ctx.total, f"[{xi.label}, {S.label}↑]"))
            return worst_of(residuals)

        ctx.check("[ξ, X↑] = D_ξ(X)↑", "cdo-bracket-preservation", vertical_brackets, Cfg.TOL_BRACKETS)

        m = ctx.base[0]
        v, w, phi0 = ctx.sampler.vector(k), ctx.sampler.vector(k), ctx.sampler.vector(k)
        flowing = linear[:5]

        def flow_linearity() -> Residual:
            residuals = []
            for xi in flowing:
                for t in Cfg.FLOW_TIMES:
                    defect = LiftService.flow_linearity_defect(xi.as_total(), m, v, w, t, Cfg.RK4_STEPS)
                    residuals.append(Residual(max(defect.affine_defect, defect.offset), tuple(m), f"{xi.label}, t = {t}"))
            return worst_of(residuals)

        ctx.check("flujos lineales en las fibras", "flow-linearity", flow_linearity, Cfg.TOL_TWO_NESTED,
                  len(flowing) * len(Cfg.FLOW_TIMES))

        def dual_flows() -> Residual:
            return worst_of([
                Residual(
                    LiftService.dual_flow_pairing_defect(xi, m, v, phi0, t, Cfg.RK4_STEPS),
                    tuple(m), f"{xi.label}*, t = {t}",
                )
                for xi in flowing for t in Cfg.FLOW_TIMES
            ])

        ctx.check("flujo de ξ* inverso transpuesto", "dual-flow-inverse-transpose", dual_flows,
                  Cfg.TOL_DUAL_FLOW, len(flowing) * len(Cfg.FLOW_TIMES))

        def intrinsic() -> Residual:
            residuals = []
            for xi in linear[:3]:
                for point in ctx.heavy_base:
                    value = X.evaluate(point)
                    vanishing = SectionA(n, tuple(c - c0 for c, c0 in zip(X.components, value)), label="X − X(m)")
                    residuals.append(Residual(
                        LiftService.intrinsic_derivative_residual(xi, vanishing, point), tuple(point), xi.label,
                    ))
            return worst_of(residuals)

        ctx.check("τ(X(m), D(X)(m)) en un cero de X", "intrinsic-derivative", intrinsic, Cfg.TOL_ONE_NESTED,
                  ctx.heavy_count)

        def intrinsic_flow() -> Residual:
            residuals = []
            for xi in linear[:3]:
                for point in ctx.heavy_base:
                    exact = LiftService.intrinsic_derivative(xi, X, point)
                    approx = LiftService.intrinsic_derivative_flow(xi, X, point)
                    gap = max((abs(a - b) for a, b in zip(exact, approx)), default=0.0)
                    residuals.append(Residual(gap, tuple(point), xi.label))
            return worst_of(residuals)

        ctx.check("D(X) como derivada de flujos", "intrinsic-derivative", intrinsic_flow, Cfg.TOL_DUAL_FLOW,
                  ctx.heavy_count)

        psi, shift_x, shift_phi = ctx.dual_section("ψ"), ctx.section("S"), ctx.dual_section("σ")

        def pairing_independence() -> Residual:
            residuals = []
            for xi in linear[:3]:
                star = LiftService.dual_linear_field(xi).as_total() + LiftService.vertical_lift(psi)
                for point in heavy:
                    base = tuple(point[:n])
                    frak = star.at(TotalPoint(base, phi0))
                    tangent = xi.as_total().at(TotalPoint(base, tuple(point[n:])))
                    x_ext = SectionA(n, tuple(
                        c - c0 + v0 for c, c0, v0 in zip(shift_x.components, shift_x.evaluate(base), point[n:])
                    ))
                    phi_ext = DualSection(n, tuple(
                        c - c0 + p0 for c, c0, p0 in zip(shift_phi.components, shift_phi.evaluate(base), phi0)
                    ))
                    constant = LiftService.tangent_pairing(frak, tangent)
                    shifted = LiftService.tangent_pairing(frak, tangent, phi_ext, x_ext)
                    residuals.append(Residual(abs(constant - shifted), tuple(point), xi.label))
            return worst_of(residuals)

        ctx.check("⟨⟨𝔛, ξ⟩⟩ independiente de las extensiones", "tangent-pairing-independence",
                  pairing_independence, Cfg.TOL_BRACKETS, ctx.heavy_count)

        def dual_pairing() -> Residual:
            residuals = []
            for xi in linear[:3]:
                dual = LiftService.dual_linear_field(xi).as_total()
                for point in heavy:
                    base = tuple(point[:n])
                    value = LiftService.tangent_pairing(
                        dual.at(TotalPoint(base, phi0)), xi.as_total().at(TotalPoint(base, tuple(point[n:]))),
                    )
                    residuals.append(Residual(abs(value), tuple(point), xi.label))
            return worst_of(residuals)

        ctx.check("⟨⟨ξ*, ξ⟩⟩ = 0", "dual-field-pairing", dual_pairing, Cfg.TOL_BRACKETS, ctx.heavy_count)

        star_basis = [
            LinearVectorField(ChartVectorField.coordinate(n, i), ctx.matrix(k, k, n), label=f"ζ{i}")
            for i in range(n)
        ]
        coefficients = [ctx.scalar(n) for _ in range(n)]
        remainder = ctx.section("Y")
        combined = LiftService.vertical_lift(remainder)
        for f, zeta in zip(coefficients, star_basis):
            combined = combined + zeta.as_total().scale(f.pullback(n + k))

        def decomposition() -> Residual:
            residuals = []
            for point in total_points[:ctx.heavy_count]:
                result = LiftService.decompose(combined, point, star_basis)
                expected = [f.evaluate(point.base) for f in coefficients]
                gaps = [abs(a - b) for a, b in zip(result.coefficients, expected)]
                gaps += [abs(a - b) for a, b in zip(result.remainder, remainder.evaluate(point.base))]
                residuals.append(Residual(max(gaps + [result.residual]), point.coords, "Σ f_i ζ_i + Y↑"))
            return worst_of(residuals)

        ctx.check("Ξ = Σ f_i ζ_i + Y↑", "decomposition", decomposition, Cfg.TOL_BRACKETS, ctx.heavy_count)

        def dual_homomorphism() -> Residual:
            residuals = []
            for a, b in pairs:
                combined_ab = LiftService.linear_from_field(TotalSpaceField(n, k, bracket(lift(a), lift(b))))
                defect = (
                    bracket(lift(LiftService.dual_linear_field(a)), lift(LiftService.dual_linear_field(b)))
                    - lift(LiftService.dual_linear_field(combined_ab))
                )
                residuals.append(sup_residual(defect, heavy, f"[{a.label}*, {b.label}*]"))
            return worst_of(residuals)

        ctx.check("[ξ*, η*] = [ξ, η]*", "dual-lift-homomorphism", dual_homomorphism, Cfg.TOL_ONE_NESTED,
                  ctx.heavy_count)

        def dual_vertical() -> Residual:
            residuals = []
            for xi in linear[:3]:
                D = LiftService.cdo_from_linear(xi)
                defect = (
                    bracket(lift(LiftService.dual_linear_field(xi)), LiftService.vertical_lift(psi).field)
                    - LiftService.vertical_lift(AlgebroidService.dual_cdo_apply(D, psi)).field
                )
                residuals.append(sup_residual(defect, ctx.total, f"[{xi.label}*, ψ↑]"))
            return worst_of(residuals)

        ctx.check("[ξ*, φ↑] = (D^(*)φ)↑", "dual-lift-homomorphism", dual_vertical, Cfg.TOL_BRACKETS)

    # --- Estructura de Poisson dual -------------------------------------------------------

    @classmethod
    def morphic_cases(cls, ctx: SuiteContext) -> List[LinearVectorField]:
        """
        Campos lineales de la equivalencia mórfico ⟺ Poisson: la mitad son
        levantamientos completos; el resto, levantamientos desplazados por una
        matriz constante o campos con Γ polinomial y campo base aleatorios.
        """
        A = ctx.registry.algebroid
        k = A.rank
        cases = []
        for idx in range(Cfg.MORPHIC_CASES):
            if idx % 4 == 3:
                cases.append(ctx.linear_field(f"Γ{idx}"))
                continue
            lifted = LiftService.complete_lift(A, ctx.section(f"X{idx}"))
            if idx % 4 == 1:
                shift = ctx.sampler.matrix(k, k)
                lifted = LinearVectorField(
                    lifted.base,
                    tuple(tuple(lifted.matrix[a][b] + shift[a][b] for b in range(k)) for a in range(k)),
                    label=f"X{idx}~ + E",
                )
            cases.append(lifted)
        return cases

    @classmethod
    def _dual_suite(cls, ctx: SuiteContext) -> None:
        A = ctx.registry.algebroid
        n, k = A.base_dim, A.rank
        X, Y = ctx.section("X"), ctx.section("Y")
        f = ctx.scalar(n)
        phi = ctx.dual_section("φ")
        omega = ctx.one_form(n)
        heavy = ctx.heavy_total

        ctx.check("Jacobi del bivector dual", "dual-jacobi",
                  lambda: DualPoissonService.jacobi_residual(A, ctx.total), Cfg.TOL_AXIOMS)
        ctx.check(
            "H_X(ℓ_Y), H_X(f∘q) y (dℓ_X)♯", "hamiltonian-relations",
            lambda: DualPoissonService.hamiltonian_relations_residual(A, X, Y, f, ctx.total),
            Cfg.TOL_ONE_NESTED,
        )
        ctx.check(
            "[H_X, H_Y] = H_[X,Y] y [H_X, φ↑] = (L_Xφ)↑", "hamiltonian-relations",
            lambda: DualPoissonService.hamiltonian_commutator_residual(A, X, Y, phi, heavy),
            Cfg.TOL_ONE_NESTED, ctx.heavy_count,
        )
        ctx.check("(q*ω)♯ = −(a*ω)↑", "pullback-sharp",
                  lambda: DualPoissonService.pullback_sharp_residual(A, omega, ctx.total), Cfg.TOL_BRACKETS)

        def linear_sharp() -> Residual:
            H = DualPoissonService.hamiltonian_field(A, LiftService.linear_function(X))
            explicit = DualPoissonService.hamiltonian_of_section(A, X)
            return sup_residual(H.field - explicit.field, ctx.total, "(dℓ_X)♯ − H_X")

        ctx.check("(dℓ_X)♯ = H_X", "linear-differential-sharp", linear_sharp, Cfg.TOL_BRACKETS)

        cases = cls.morphic_cases(ctx)

        def morphic_agreement() -> Residual:
            disagreements = []
            for xi in cases:
                morphic = LiftService.is_morphic(A, xi, ctx.heavy_base)
                poisson = DualPoissonService.is_poisson_field(
                    A, LiftService.dual_linear_field(xi).as_total(), heavy,
                )
                if morphic.passed != poisson.passed:
                    logger.warning(
                        f"{xi.label}: mórfico {morphic.residual:.3e}, Poisson {poisson.residual:.3e}"
                    )
                    disagreements.append(xi.label)
            return Residual(float(len(disagreements)), (), f"discrepancias: {', '.join(disagreements) or 'ninguna'}")

        ctx.check(
            f"ξ mórfico ⟺ ξ* de Poisson ({len(cases)} casos)", "morphic-iff-poisson",
            morphic_agreement, Cfg.AGREEMENT_TOL, ctx.heavy_count, counted=True,
        )

        sections = []
        exact = Cfg.COISOTROPY_CASES // 3
        for idx in range(Cfg.COISOTROPY_CASES):
            if idx < exact:
                g = ctx.scalar(n, label=f"g{idx}")
                sections.append(DualSection(n, tuple(g.along(A.anchor[a]) for a in range(k)), label=f"a*(dg{idx})"))
            elif idx == exact:
                sections.append(DualSection.zero(n, k))
            elif idx % 2:
                sections.append(DualSection.constant(n, ctx.sampler.vector(k)))
            else:
                sections.append(ctx.dual_section(f"φ{idx}"))

        def coisotropy_agreement() -> Residual:
            disagreements = 0
            for candidate in sections:
                if not DualPoissonService.is_coisotropic_graph(A, candidate, ctx.heavy_base).agree:
                    disagreements += 1
            return Residual(float(disagreements), (), f"{disagreements} discrepancias en {len(sections)} casos")

        ctx.check(
            f"im φ coisotrópica ⟺ dφ = 0 ({len(sections)} casos)", "coisotropic-graph-iff-closed",
            coisotropy_agreement, Cfg.AGREEMENT_TOL, ctx.heavy_count, counted=True,
        )

        pi = ctx.poisson_bivector(n)
        fields = []
        for idx in range(15):
            if idx < 5:
                h = ctx.scalar(n, label=f"h{idx}")
                fields.append(CalculusService.bivector_sharp(pi, CalculusService.exterior_derivative(h)))
            elif idx == 5:
                fields.append(ChartVectorField.zero(n))
            else:
                fields.append(ctx.vector_field(n))

        def tangent_agreement() -> Residual:
            disagreements = 0
            for candidate in fields:
                check = DualPoissonService.poisson_field_via_tangent_coisotropy(pi, candidate, ctx.heavy_base)
                if not check.agree:
                    disagreements += 1
            return Residual(float(disagreements), (), f"{disagreements} discrepancias en {len(fields)} casos")

        ctx.check(
            f"im X coisotrópica en TP ⟺ L_Xπ = 0 ({pi.label or 'π'})", "tangent-coisotropy-iff-poisson-field",
            tangent_agreement, Cfg.AGREEMENT_TOL, ctx.heavy_count, counted=True,
        )
        ctx.check(
            "⟨dℓ_X, H_Y⟩ y ⟨q*ω, H_X⟩", "dual-pairings",
            lambda: DualPoissonService.pairing_residual(A, X, Y, omega, ctx.total), Cfg.TOL_ONE_NESTED,
        )

    # --- Groupoide de pares ------------------------------------------------------------------

    @classmethod
    def _pair_suite(cls, ctx: SuiteContext) -> None:
        n = min(ctx.registry.base_dim, Cfg.PAIR_MAX_DIM)
        G = PairGroupoid(n)
        T = AlgebroidService.tangent_algebroid(n)
        base = [p[:n] for p in ctx.base]
        heavy = base[:ctx.heavy_count]
        functor_points = ctx.base_sample(n, Cfg.LIE_FUNCTOR_POINTS)
        triples = PairGroupoidService.composable_triples(base)
        pair_points = [tuple(y) + tuple(x) for _, y, x in triples] + [G.identity(m) for m in base]
        tangent_points = ctx.sampler.points(2 * n, ctx.count)

        stars: List[GroupoidField] = []
        if n == ctx.registry.base_dim:
            for name, declared in ctx.registry.groupoid_fields.items():
                try:
                    PairGroupoidService.require_star(declared, triples)
                    stars.append(declared)
                except AlgebroidLiftsError as e:
                    logger.info(f"Campo '{name}' excluido de la batería de campos estrella: {e}")
        product_bases = [ctx.vector_field(n) for _ in range(3)]
        products = [PairGroupoidService.product_field(x) for x in product_bases]
        stars.extend(products)
        for _ in range(Cfg.STAR_FIELDS - len(products)):
            stars.append(PairGroupoidService.star_extension(ctx.vector_field(n), ctx.matrix(n, n, 2 * n)))
        probes = [ctx.vector_field(n), ctx.vector_field(n)]
        bases = [PairGroupoidService.base_field(xi) for xi in stars]

        ctx.check("unidad, asociatividad e inverso", "groupoid-axioms",
                  lambda: PairGroupoidService.groupoid_axioms_residual(G, triples), Cfg.TOL_AXIOMS)

        def lift_matches_d_xi() -> Residual:
            residuals = []
            for idx, xi in enumerate(stars):
                D = LiftService.cdo_from_linear(PairGroupoidService.lie_functor_lift(xi, triples))
                for X in probes:
                    via_lift = AlgebroidService.cdo_apply(D, SectionA(n, X.components))
                    direct = PairGroupoidService.d_xi(xi, X)
                    residuals.append(sup_residual(_vector_gap(via_lift, direct), functor_points, f"ξ{idx}"))
            return worst_of(residuals)

        ctx.check(f"D_ξ̃ = D_ξ ({len(stars)} campos estrella)", "lie-functor-lift", lift_matches_d_xi,
                  Cfg.TOL_ONE_NESTED, len(functor_points))

        def product_lift() -> Residual:
            residuals = []
            for xi, x in zip(products, product_bases):
                lifted = PairGroupoidService.lie_functor_lift(xi).as_total().field
                complete = LiftService.complete_lift(T, SectionA(n, x.components)).as_total().field
                residuals.append(sup_residual(lifted - complete, tangent_points, "(x×x)~ − x̃"))
            return worst_of(residuals)

        ctx.check("(x×x)~ = levantamiento completo de x", "lie-functor-lift", product_lift, Cfg.TOL_BRACKETS,
                  len(tangent_points))

        def bracket_stability() -> float:
            values = []
            for idx in range(len(stars) - 1):
                combined = PairGroupoidService.bracket(stars[idx], stars[idx + 1])
                over = CalculusService.lie_bracket(bases[idx], bases[idx + 1])
                values.append(PairGroupoidService.is_star(combined, over, triples, Cfg.TOL_BRACKETS).residual)
            return _worst(values)

        ctx.check("[ξ, η] estrella sobre [x, y]", "star-bracket-stability", bracket_stability,
                  Cfg.TOL_BRACKETS)

        def right_invariant() -> Residual:
            residuals = []
            for xi, x in zip(products, product_bases):
                for X in probes:
                    combined = PairGroupoidService.bracket(xi, PairGroupoidService.right_invariant(X))
                    verdict = PairGroupoidService.is_right_invariant(combined, triples)
                    expected = PairGroupoidService.right_invariant(CalculusService.lie_bracket(x, X))
                    residuals.append(Residual(verdict.residual, (), "[x×x, X⃗] invariante a derecha"))
                    residuals.append(sup_residual(combined.field - expected.field, pair_points, "[x×x, X⃗] − [x, X]⃗"))
            return worst_of(residuals)

        ctx.check("[x×x, X⃗] = [x, X]⃗", "right-invariant-bracket", right_invariant, Cfg.TOL_BRACKETS,
                  len(pair_points))

        bracket = CalculusService.lie_bracket
        X, Y = probes

        def derivation() -> Residual:
            residuals = []
            for xi in products:
                D = lambda Z, xi=xi: PairGroupoidService.d_xi(xi, Z)
                defect = D(bracket(X, Y)) - bracket(D(X), Y) - bracket(X, D(Y))
                residuals.append(sup_residual(defect, heavy, "D[X, Y] − [DX, Y] − [X, DY]"))
            return worst_of(residuals)

        ctx.check("D_{x×x} deriva el corchete", "d-xi-bracket", derivation, Cfg.TOL_ONE_NESTED,
                  ctx.heavy_count)

        def commutator() -> Residual:
            residuals = []
            for idx in range(min(3, len(stars) - 1)):
                xi, eta = stars[idx], stars[idx + 1]
                D = PairGroupoidService.d_xi
                combined = PairGroupoidService.bracket(xi, eta)
                defect = D(combined, X) - (D(xi, D(eta, X)) - D(eta, D(xi, X)))
                residuals.append(sup_residual(defect, heavy, f"D_[ξ{idx}, ξ{idx + 1}]"))
            return worst_of(residuals)

        ctx.check("D_[ξ,η] = [D_ξ, D_η]", "d-xi-bracket", commutator, Cfg.TOL_TWO_NESTED, ctx.heavy_count)

        def product_d_xi() -> Residual:
            return worst_of([
                sup_residual(PairGroupoidService.d_xi(xi, Z) - bracket(x, Z), base, "D_{x×x}X − [x, X]")
                for xi, x in zip(products, product_bases) for Z in probes
            ])

        ctx.check("D_{x×x}X = [x, X]", "d-xi-bracket", product_d_xi, Cfg.TOL_BRACKETS)

        shifts = [
            (PairGroupoidService.diagonal_correction(n, ctx.matrix(n, n, 2 * n)),
             PairGroupoidService.diagonal_correction(n, ctx.matrix(n, n, 2 * n)))
            for _ in range(2)
        ]

        def extension_independence() -> Residual:
            residuals = []
            for idx, xi in enumerate(stars):
                direct = PairGroupoidService.d_xi(xi, X)
                for first, second in shifts:
                    extension = GroupoidField(
                        n,
                        tuple(c.pullback(2 * n) + r for c, r in zip(X.components, first)),
                        second,
                    )
                    via_extension = PairGroupoidService.d_xi_extension(xi, extension)
                    residuals.append(sup_residual(via_extension - direct, base, f"ξ{idx}"))
            return worst_of(residuals)

        ctx.check("D_ξ independiente de la extensión", "d-xi-extension-independence", extension_independence,
                  Cfg.TOL_BRACKETS)

        f = ctx.scalar(n)
        phi = DualSection(n, tuple(ctx.scalar(n) for _ in range(n)), label="φ")
        lifted = lambda xi: PairGroupoidService.lie_functor_lift(xi).as_total()

        def additivity() -> Residual:
            residuals = []
            for idx in range(min(3, len(stars) - 1)):
                xi, eta = stars[idx], stars[idx + 1]
                defect = lifted(xi + eta).field - lifted(xi).field - lifted(eta).field
                residuals.append(sup_residual(defect, tangent_points, f"(ξ{idx} + ξ{idx + 1})~"))
            return worst_of(residuals)

        ctx.check("(ξ + η)~ = ξ̃ + η̃", "tilde-equations", additivity, Cfg.TOL_BRACKETS, len(tangent_points))

        def on_pullbacks() -> Residual:
            return worst_of([
                _scalar_residual(
                    lifted(xi).apply(f.pullback(2 * n)) - f.along(x).pullback(2 * n), tangent_points, "ξ̃(f∘q)",
                )
                for xi, x in zip(stars, bases)
            ])

        ctx.check("ξ̃(f∘q) = x(f)∘q", "tilde-equations", on_pullbacks, Cfg.TOL_BRACKETS, len(tangent_points))

        def on_linear() -> Residual:
            residuals = []
            for idx, (xi, x) in enumerate(zip(stars, bases)):
                dual = DualSection(n, tuple(
                    phi.components[b].along(x)
                    - phi.pair(SectionA(n, PairGroupoidService.d_xi(xi, ChartVectorField.coordinate(n, b)).components))
                    for b in range(n)
                ))
                defect = lifted(xi).apply(LiftService.linear_function(phi)) - LiftService.linear_function(dual)
                residuals.append(_scalar_residual(defect, tangent_points, f"ξ{idx}~(ℓ_φ)"))
            return worst_of(residuals)

        ctx.check("ξ̃(ℓ_φ) = ℓ_{D^(*)φ}", "tilde-equations", on_linear, Cfg.TOL_ONE_NESTED, len(tangent_points))

        F = f.pullback(2 * n) - f.pullback(2 * n, offset=n)

        def on_tilde_functions() -> Residual:
            F_tilde = PairGroupoidService.tilde_function(F, n)
            residuals = []
            for xi in products:
                defect = lifted(xi).apply(F_tilde) - PairGroupoidService.tilde_function(F.along(xi.field), n)
                residuals.append(_scalar_residual(defect, tangent_points, "ξ̃(F̃) − (ξF)~"))
            return worst_of(residuals)

        ctx.check("ξ̃(F̃) = (ξF)~", "tilde-equations", on_tilde_functions, Cfg.TOL_ONE_NESTED, len(tangent_points))

        generators = [
            PairGroupoidService.lie_functor_lift(
                PairGroupoidService.star_extension(ChartVectorField.coordinate(n, i), ctx.matrix(n, n, 2 * n))
            )
            for i in range(n)
        ]
        target = TotalSpaceField(n, n, ctx.vector_field(2 * n))

        def generation() -> Residual:
            residuals = []
            for point in tangent_points[:ctx.heavy_count]:
                result = LiftService.decompose(target, TotalPoint.split(point, n), generators)
                residuals.append(Residual(result.residual, tuple(point), f"condición {result.condition:.2e}"))
            return worst_of(residuals)

        ctx.check("TM generado por levantamientos estrella y verticales", "star-generation", generation,
                  Cfg.TOL_BRACKETS, ctx.heavy_count)

        u, w = ctx.vector_field(n), ctx.vector_field(n)

        def affine_split() -> Residual:
            product, invariant = products[0], PairGroupoidService.right_invariant(u)
            parts, error = PairGroupoidService.affine_decompose(product + invariant, triples)
            if error:
                return Residual(math.inf, (), error)
            eta, recovered = parts
            return worst_of([
                sup_residual(eta.field - product.field, pair_points, "η − x×x"),
                sup_residual(recovered.field - invariant.field, pair_points, "X⃗ recuperado"),
            ])

        ctx.check("x×x + X⃗ se separa", "affine-decomposition", affine_split, Cfg.TOL_BRACKETS, len(pair_points))

        def affine_rejection() -> Residual:
            first = tuple(a.pullback(2 * n) + b.pullback(2 * n, offset=n) for a, b in zip(u.components, w.components))
            candidate = GroupoidField(n, first, tuple(ScalarField.zero(2 * n) for _ in range(n)))
            parts, error = PairGroupoidService.affine_decompose(candidate, triples)
            if parts is None and error and "β" in error:
                return Residual(0.0, (), error)
            return Residual(1.0, (), error or "aceptado sin ser β-proyectable")

        ctx.check("u(y) + v(x) se rechaza por β", "affine-decomposition", affine_rejection, Cfg.AGREEMENT_TOL,
                  len(triples), counted=True)

        def multiplicative_function() -> float:
            return _worst([
                PairGroupoidService.multiplicative_function_check(F, xi, triples).residual for xi in products
            ])

        ctx.check("ξ(F) multiplicativa", "multiplicative-function", multiplicative_function, Cfg.TOL_ONE_NESTED,
                  len(triples))

    # --- Groupoide de Poisson de pares -----------------------------------------------------------

    @classmethod
    def _poisson_pair_suite(cls, ctx: SuiteContext) -> None:
        n = min(ctx.registry.base_dim, Cfg.PAIR_MAX_DIM)
        G = ctx.poisson_groupoid(n)
        base = [p[:n] for p in ctx.base]
        heavy = base[:ctx.heavy_count]
        triples = PairGroupoidService.composable_triples(base)
        tangent_points = ctx.sampler.points(2 * n, ctx.heavy_count)
        lba_points = ctx.base_sample(n, Cfg.LBA_POINTS)
        service = PoissonPairService

        def star_form():
            return service.star_oneform_extension(ctx.one_form(n), ctx.matrix(n, n, 2 * n))

        Phi, Psi = star_form(), star_form()
        Mult = service.multiplicative_pair_form(ctx.one_form(n))
        omega, theta = ctx.one_form(n), ctx.one_form(n)
        declared = list(ctx.registry.poisson_pairs.values()) if G is ctx.registry.poisson_groupoid else []
        logger.info(f"Groupoide de Poisson de pares sobre {G.pi.label or 'π'} (n = {n})")

        def projections() -> float:
            values = [
                service.is_star_oneform(form, service.base_form(form), triples).residual
                for form in [Phi, Psi, Mult] + declared
            ]
            values.append(service.is_multiplicative_oneform(Mult, triples).residual)
            return _worst(values)

        ctx.check("α̃∘Φ = φ∘α y Φ∘1 = 1̃∘φ", "star-oneform-projections", projections, Cfg.TOL_AXIOMS)

        lba_cases = [(star_form(), star_form(), ctx.vector_field(n)) for _ in range(Cfg.LBA_CASES)]

        def lba() -> Residual:
            return worst_of([service.lba_residual(G, a, b, Z, lba_points) for a, b, Z in lba_cases])

        ctx.check(f"corchete explícito = Koszul ({len(lba_cases)} casos)", "bialgebroid-bracket", lba,
                  Cfg.TOL_TWO_NESTED, len(lba_points))

        d_phi_suite = functools.cache(lambda: service.d_Phi_theorem_suite(G, Mult, omega, theta, heavy))
        ctx.check("D_Φ(ω) = [φ, ω]_π", "d-phi-koszul", lambda: d_phi_suite()["koszul"], Cfg.TOL_ONE_NESTED,
                  ctx.heavy_count)
        ctx.check("[Φ, β*ω] = β*(D_Φω)", "d-phi-theorem", lambda: d_phi_suite()["pullback"], Cfg.TOL_ONE_NESTED,
                  ctx.heavy_count)
        ctx.check("D_Φ deriva el corchete de Koszul", "d-phi-theorem", lambda: d_phi_suite()["derivation"],
                  Cfg.TOL_TWO_NESTED, ctx.heavy_count)

        def sharp_star() -> float:
            return _worst([service.sharp_star_check(G, form, base).residual for form in [Phi, Psi, Mult] + declared])

        ctx.check("Φ♯ estrella sobre π♯φ", "sharp-star", sharp_star, Cfg.TOL_AXIOMS)
        ctx.check(
            "a_*^*(D_Φω) = D_{Φ♯}(a_*^*ω)", "anchor-naturality",
            lambda: service.anchor_naturality_residual(G, Mult, omega, heavy), Cfg.TOL_ONE_NESTED,
            ctx.heavy_count,
        )
        ctx.check("Φ̃♯ = (Φ♯)~", "tilde-sharp", lambda: service.tilde_sharp_residual(G, Phi, tangent_points),
                  Cfg.TOL_ONE_NESTED, len(tangent_points))

        last = functools.cache(
            lambda: service.theorem_last_suite(G, Phi, Psi, omega, theta, heavy, tangent_points)
        )
        ctx.check("[Φ̃, Ψ̃] = [Φ, Ψ]~", "tilde-bracket", lambda: last()["tilde-bracket"], Cfg.TOL_TWO_NESTED,
                  len(tangent_points))
        ctx.check("[Φ̃, q*ω] = q*(D_Φω)", "tilde-pullback-bracket", lambda: last()["tilde-pullback"],
                  Cfg.TOL_TWO_NESTED, len(tangent_points))
        ctx.check("[q*θ, q*ω] = 0", "pullback-brackets-commute", lambda: last()["pullbacks"], Cfg.TOL_EXACT,
                  len(tangent_points))
        ctx.check("identidad de cierre con ζ = Φ♯", "closing-identity", lambda: last()["closing"],
                  Cfg.TOL_ONE_NESTED, ctx.heavy_count)

        x, X = ctx.vector_field(n), ctx.vector_field(n)

        def tilde_pairings() -> Residual:
            tilde = service.tilde_oneform(G, Phi, points=heavy)
            product = PairGroupoidService.product_field(x)
            on_lift = (
                tilde.pair(PairGroupoidService.lie_functor_lift(product).as_total())
                - service.tilde_pairing(G, Phi, product)
            )
            phi = service.base_form(Phi)
            on_vertical = (
                tilde.pair(LiftService.vertical_lift(SectionA(n, X.components)))
                - phi.pair(X).pullback(2 * n)
            )
            worst = worst_of([
                _scalar_residual(on_lift, tangent_points, "⟨Φ̃, ξ̃⟩ − ⟨Φ, ξ⟩~"),
                _scalar_residual(on_vertical, tangent_points, "⟨Φ̃, X↑⟩ − ⟨φ, X⟩∘q"),
            ])
            return replace(worst, detail=f"{worst.detail} [condición {tilde.condition:.2e}]".strip())

        ctx.check("⟨Φ̃, ξ̃⟩ = ⟨Φ, ξ⟩~ y ⟨Φ̃, X↑⟩ = ⟨φ, X⟩∘q", "tilde-pairings", tilde_pairings,
                  Cfg.TOL_ONE_NESTED, len(tangent_points))
