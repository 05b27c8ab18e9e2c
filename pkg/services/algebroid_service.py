"""
Servicio de algebroides de Lie para Algebroid Lifts.
Corchete de secciones, ancla, derivada de Lie en el dual, diferencial dφ,
constructores de la galería, validación de axiomas y operadores CDO.
"""
import itertools
import logging
from typing import List, Mapping, Optional, Sequence, Tuple

from config import VerificationConfig
from models.algebroid import CovDiffOp, DualSection, LieAlgebroid, SectionA
from models.fields import Bivector, ChartOneForm, ChartVectorField, ScalarField, field_sum
from models.report import CheckResult, Residual, SuiteReport, sup_residual, worst_of
from services.calculus_service import CalculusService
from utils.exceptions import DimensionMismatchError

logger = logging.getLogger("algebroid_lifts.services.algebroid")


def _same_algebroid(A: LieAlgebroid, *sections) -> None:
    for s in sections:
        if s.base_dim != A.base_dim:
            raise DimensionMismatchError("base de la sección", A.base_dim, s.base_dim)
        if s.rank != A.rank:
            raise DimensionMismatchError("rango de la sección", A.rank, s.rank)


class AlgebroidService:
    """Operaciones sobre algebroides de Lie trivializados."""

    @classmethod
    def bracket(cls, A: LieAlgebroid, X: SectionA, Y: SectionA) -> SectionA:
        """
        Corchete [X,Y]^c = C^c_{ab} X^a Y^b + a(X)(Y^c) − a(Y)(X^c).

        Args:
            A: Algebroide
            X: Primera sección
            Y: Segunda sección

        Retorna:
            Sección [X, Y]
        """
        _same_algebroid(A, X, Y)
        n = A.base_dim
        aX = cls.anchor_apply(A, X)
        aY = cls.anchor_apply(A, Y)
        components = []
        for c in range(A.rank):
            terms = []
            for (a, b, cc), value in A.structure.items():
                if cc == c:
                    terms.append(value * (X.components[a] * Y.components[b] - X.components[b] * Y.components[a]))
            terms.append(Y.components[c].along(aX))
            terms.append(-X.components[c].along(aY))
            components.append(field_sum(terms, n))
        return SectionA(n, tuple(components))

    @classmethod
    def anchor_apply(cls, A: LieAlgebroid, X: SectionA) -> ChartVectorField:
        """(aX)^i = a^i_a X^a."""
        _same_algebroid(A, X)
        n = A.base_dim
        return ChartVectorField(tuple(
            field_sum([A.anchor_component(i, a) * X.components[a] for a in range(A.rank)], n)
            for i in range(n)
        ))

    @classmethod
    def lie_derivative_dual(cls, A: LieAlgebroid, X: SectionA, phi: DualSection) -> DualSection:
        """
        Derivada de Lie en A*: ⟨L_Xφ, e_b⟩ = a(X)(φ_b) − ⟨φ, [X, e_b]⟩.
        """
        _same_algebroid(A, X, phi)
        aX = cls.anchor_apply(A, X)
        components = []
        for b in range(A.rank):
            bracket = cls.bracket(A, X, A.basis(b))
            components.append(phi.components[b].along(aX) - phi.pair(bracket))
        return DualSection(A.base_dim, tuple(components))

    @classmethod
    def d_phi(cls, A: LieAlgebroid, phi: DualSection, X: SectionA, Y: SectionA) -> ScalarField:
        """dφ(X,Y) = a(X)⟨φ,Y⟩ − a(Y)⟨φ,X⟩ − ⟨φ,[X,Y]⟩."""
        _same_algebroid(A, phi, X, Y)
        aX = cls.anchor_apply(A, X)
        aY = cls.anchor_apply(A, Y)
        return (
            phi.pair(Y).along(aX)
            - phi.pair(X).along(aY)
            - phi.pair(cls.bracket(A, X, Y))
        )

    # --- Constructores -------------------------------------------------

    @classmethod
    def tangent_algebroid(cls, n: int) -> LieAlgebroid:
        """TM sobre R^n: ancla identidad, C ≡ 0."""
        anchor = tuple(ChartVectorField.coordinate(n, a) for a in range(n))
        return LieAlgebroid(n, n, anchor, {}, name=f"tangent{n}")

    @classmethod
    def lie_algebra(
        cls, rank: int, constants: Mapping[Tuple[int, int, int], float], name: str = ""
    ) -> LieAlgebroid:
        """
        Álgebra de Lie como algebroide sobre una base ficticia de dimensión 1.

        Args:
            rank: Dimensión del álgebra
            constants: C^c_{ab} indexadas por (a, b, c)
            name: Nombre del modelo
        """
        structure = {key: ScalarField.const(1, value) for key, value in constants.items() if value != 0.0}
        anchor = tuple(ChartVectorField.zero(1) for _ in range(rank))
        return LieAlgebroid(1, rank, anchor, structure, name=name)

    @classmethod
    def cotangent_algebroid(cls, pi: Bivector, name: str = "") -> LieAlgebroid:
        """
        Algebroide T*P de un bivector: ancla a(dx^a) = π♯dx^a y corchete de
        Koszul, que en el marco {dx^a} da C^c_{ab} = ∂_c π^{ab}.
        """
        n = pi.dim
        anchor = tuple(
            CalculusService.bivector_sharp(pi, ChartOneForm.coordinate(n, a)) for a in range(n)
        )
        structure = {}
        for (a, b), value in pi.entries.items():
            if value.constant is not None:
                continue
            for c in range(n):
                derivative = value.partial(c)
                if not derivative.is_zero:
                    structure[(a, b, c)] = derivative
        return LieAlgebroid(n, n, anchor, structure, name=name or f"cotangent({pi.label})")

    # --- Operadores diferenciales covariantes ---------------------------

    @classmethod
    def cdo_apply(cls, D: CovDiffOp, X: SectionA) -> SectionA:
        """D(X)^a = x(X^a) + Γ^a_b X^b."""
        if X.rank != D.rank:
            raise DimensionMismatchError("rango del CDO", D.rank, X.rank)
        n = D.base_dim
        components = []
        for a in range(D.rank):
            terms = [X.components[a].along(D.base)]
            terms.extend(D.entry(a, b) * X.components[b] for b in range(D.rank))
            components.append(field_sum(terms, n))
        return SectionA(n, tuple(components))

    @classmethod
    def dual_cdo_apply(cls, D: CovDiffOp, phi: DualSection) -> DualSection:
        """D^(*)(φ) definido por ⟨D^(*)φ, X⟩ = x⟨φ,X⟩ − ⟨φ, D(X)⟩."""
        if phi.rank != D.rank:
            raise DimensionMismatchError("rango del CDO", D.rank, phi.rank)
        n = D.base_dim
        components = []
        for b in range(D.rank):
            terms = [phi.components[b].along(D.base)]
            terms.extend(-(phi.components[a] * D.entry(a, b)) for a in range(D.rank))
            components.append(field_sum(terms, n))
        return DualSection(n, tuple(components))

    @classmethod
    def derivation_defect(cls, A: LieAlgebroid, D: CovDiffOp, X: SectionA, Y: SectionA) -> SectionA:
        """D[X,Y] − [DX,Y] − [X,DY]."""
        return (
            cls.cdo_apply(D, cls.bracket(A, X, Y))
            - cls.bracket(A, cls.cdo_apply(D, X), Y)
            - cls.bracket(A, X, cls.cdo_apply(D, Y))
        )

    @classmethod
    def anchor_defect(cls, A: LieAlgebroid, D: CovDiffOp, X: SectionA) -> ChartVectorField:
        """a(D(X)) − [x, a(X)]."""
        return cls.anchor_apply(A, cls.cdo_apply(D, X)) - CalculusService.lie_bracket(
            D.base, cls.anchor_apply(A, X)
        )

    # --- Validación ------------------------------------------------------

    @classmethod
    def section_battery(cls, A: LieAlgebroid) -> List[SectionA]:
        """
        Batería de secciones: la base {e_a}, las secciones x_{a mod n}·e_a y
        una sección cuadrática que mezcla todas las componentes.
        """
        n = A.base_dim
        sections = [A.basis(a) for a in range(A.rank)]
        for a in range(A.rank):
            weight = ScalarField.coordinate(n, a % n)
            sections.append(SectionA(n, A.basis(a).scale(weight).components, label=f"x{a % n}·e{a}"))
        mixed = []
        for a in range(A.rank):
            xi = ScalarField.coordinate(n, a % n)
            xj = ScalarField.coordinate(n, (a + 1) % n)
            mixed.append(xi * xj + 1.0)
        sections.append(SectionA(n, tuple(mixed), label="mixta"))
        return sections

    @classmethod
    def anchor_morphism_residual(
        cls, A: LieAlgebroid, points: Sequence[Sequence[float]], sections: Optional[List[SectionA]] = None
    ) -> Residual:
        """Máximo de |a([X,Y]) − [aX, aY]| sobre pares de la batería."""
        sections = sections or cls.section_battery(A)
        residuals = []
        for X, Y in itertools.combinations(sections, 2):
            left = cls.anchor_apply(A, cls.bracket(A, X, Y))
            right = CalculusService.lie_bracket(cls.anchor_apply(A, X), cls.anchor_apply(A, Y))
            defect = left - right
            residuals.append(sup_residual(defect, points, f"[{X.label}, {Y.label}]"))
        return worst_of(residuals)

    @classmethod
    def jacobi_residual(
        cls, A: LieAlgebroid, points: Sequence[Sequence[float]], sections: Optional[List[SectionA]] = None
    ) -> Residual:
        """Máximo de |[[X,Y],Z] + cíclico| sobre ternas de la batería."""
        sections = sections or cls.section_battery(A)
        residuals = []
        for X, Y, Z in itertools.combinations(sections, 3):
            total = (
                cls.bracket(A, cls.bracket(A, X, Y), Z)
                + cls.bracket(A, cls.bracket(A, Y, Z), X)
                + cls.bracket(A, cls.bracket(A, Z, X), Y)
            )
            residuals.append(sup_residual(total, points, f"({X.label}, {Y.label}, {Z.label})"))
        return worst_of(residuals)

    @classmethod
    def validate(
        cls,
        A: LieAlgebroid,
        points: Sequence[Sequence[float]],
        tol: float = VerificationConfig.TOL_AXIOMS,
        seed: int = VerificationConfig.DEFAULT_SEED,
    ) -> SuiteReport:
        """
        Verifica los axiomas de algebroide en los puntos dados.

        Args:
            A: Algebroide a validar
            points: Muestras de la base (no vacía)
            tol: Tolerancia de aprobación

        Retorna:
            Reporte con los residuos de morfismo del ancla y de Jacobi
        """
        if not points:
            raise ValueError("La validación requiere al menos un punto")
        sections = cls.section_battery(A)
        report = SuiteReport("validate", seed)
        anchor = cls.anchor_morphism_residual(A, points, sections)
        report.add(CheckResult(
            f"{A.name}: a([X,Y]) = [aX, aY]", "algebroid-axioms", anchor.value, tol,
            len(points), location=anchor.describe(),
        ))
        jacobi = cls.jacobi_residual(A, points, sections)
        report.add(CheckResult(
            f"{A.name}: Jacobi", "algebroid-axioms", jacobi.value, tol,
            len(points), location=jacobi.describe(),
        ))
        for check in report.checks:
            if not check.passed:
                logger.warning(f"Falla de axioma en {A.name}: {check.label} ({check.residual:.3e}) {check.location}")
        return report
