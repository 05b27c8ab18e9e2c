"""
Servicio de levantamientos para Algebroid Lifts.
Levantamientos verticales y completos, campos lineales y su correspondencia
con los CDO, derivada intrínseca, apareamiento tangente, campo dual,
descomposición de campos, prueba de campos mórficos, 1-formas lineales y
flujos sobre el espacio total.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from config import VerificationConfig
from models.algebroid import CovDiffOp, DualSection, LieAlgebroid, SectionA
from models.fields import ChartOneForm, ChartVectorField, ScalarField, field_sum
from models.report import Residual, Verdict, sup_residual, worst_of
from models.total_space import (
    FiberwiseLinearFunction, LinearVectorField, TotalPoint, TotalSpaceField, TotalSpaceForm,
    TotalTangent,
)
from services.algebroid_service import AlgebroidService
from services.calculus_service import CalculusService
from utils.exceptions import BaseMismatchError, DimensionMismatchError, PreconditionError
from utils.jets import Num, derivative, primal
from utils.linalg import condition_number, solve

logger = logging.getLogger("algebroid_lifts.services.lifts")


@dataclass(frozen=True)
class Decomposition:
    """Ξ(at) = Σ c_i ξ_i(at) + (0, remainder)."""
    coefficients: Tuple[float, ...]
    remainder: Tuple[float, ...]
    condition: float
    residual: float


@dataclass(frozen=True)
class FlowDefect:
    """Defecto de linealidad del mapa de flujo v ↦ Φ_t(m, v)."""
    endpoint: TotalPoint
    affine_defect: float
    offset: float

    def is_linear(self, tol: float) -> bool:
        return self.affine_defect < tol and self.offset < tol


def _extend_with_zero_fiber(n: int, k: int):
    return lambda p: list(p) + [0.0] * k


class LiftService:
    """Cálculo de levantamientos sobre el espacio total de A y de A*."""

    # --- Funciones y levantamientos básicos ----------------------------

    @classmethod
    def pullback_function(cls, f: ScalarField, rank: int) -> ScalarField:
        """f∘q."""
        return f.pullback(f.dim + rank)

    @classmethod
    def linear_function(cls, phi: Union[DualSection, SectionA]) -> ScalarField:
        """ℓ_φ sobre A (o ℓ_X sobre A* si se pasa una sección de A)."""
        return FiberwiseLinearFunction(DualSection(phi.base_dim, phi.components)).as_scalar()

    @classmethod
    def vertical_lift(cls, X: Union[SectionA, DualSection]) -> TotalSpaceField:
        """
        Levantamiento vertical X↑(m, v) = (0, X(m)).

        Sirve igual para secciones de A* (campo φ↑ sobre A*).
        """
        n, k = X.base_dim, X.rank
        base_part = [ScalarField.zero(n + k) for _ in range(n)]
        fiber_part = [c.pullback(n + k) for c in X.components]
        return TotalSpaceField.from_parts(n, base_part, fiber_part, label=f"{X.label}↑")

    @classmethod
    def translation_tau(cls, X: TotalPoint, Y: TotalPoint) -> TotalTangent:
        """τ(X, Y): tangente vertical (0, Y) con cola en X."""
        if X.base != Y.base:
            raise BaseMismatchError(f"τ requiere el mismo punto base: {X.base} ≠ {Y.base}")
        return TotalTangent(X, tuple(0.0 for _ in X.base), Y.fiber)

    # --- Correspondencia campos lineales / CDO --------------------------

    @classmethod
    def linear_from_cdo(cls, D: CovDiffOp) -> LinearVectorField:
        """Campo lineal con base x y Γ̃ = −Γ."""
        matrix = tuple(tuple(-entry for entry in row) for row in D.gamma)
        return LinearVectorField(D.base, matrix)

    @classmethod
    def cdo_from_linear(cls, xi: LinearVectorField) -> CovDiffOp:
        """D_ξ(X)^a = x(X^a) − Γ̃^a_b X^b."""
        gamma = tuple(tuple(-entry for entry in row) for row in xi.matrix)
        return CovDiffOp(xi.base, gamma)

    @classmethod
    def linear_from_field(cls, field: TotalSpaceField) -> LinearVectorField:
        """
        Extrae (x, Γ̃) de un campo del espacio total que se sabe lineal:
        x(m) = b(m, 0) y Γ̃^a_b(m) = ∂c^a/∂v^b en (m, 0).
        """
        n, k = field.base_dim, field.rank
        extend = _extend_with_zero_fiber(n, k)
        base = ChartVectorField(tuple(b.substitute(n, extend) for b in field.base_part))
        rows = []
        for a, c in enumerate(field.fiber_part):
            row = []
            for b in range(k):
                if c.constant is not None:
                    row.append(ScalarField.zero(n))
                    continue
                unit = [0.0] * (n + k)
                unit[n + b] = 1.0
                row.append(ScalarField(n, lambda p, c=c, unit=unit: derivative(c, extend(p), unit)))
            rows.append(tuple(row))
        return LinearVectorField(base, tuple(rows), label=field.label)

    @classmethod
    def is_linear(
        cls,
        field: TotalSpaceField,
        points: Sequence[TotalPoint],
        tol: float = VerificationConfig.TOL_AXIOMS,
        scalars: Sequence[float] = (0.0, -1.5, 2.0),
    ) -> Verdict:
        """
        Prueba muestreada de linealidad fibra a fibra.

        Aditividad: ξ(m, v+w) = ξ(m, v) ⧺ ξ(m, w), es decir partes base iguales
        y partes de fibra que suman. Homogeneidad: ξ(m, λv) = λ·ξ(m, v).
        w se toma de la fibra del punto siguiente de la muestra.
        """
        n = field.base_dim
        additivity, homogeneity = 0.0, 0.0
        for idx, point in enumerate(points):
            m, v = point.base, point.fiber
            w = points[(idx + 1) % len(points)].fiber
            at_v = field.field.evaluate(m + v)
            at_w = field.field.evaluate(m + w)
            at_sum = field.field.evaluate(m + tuple(a + b for a, b in zip(v, w)))
            defects = [abs(at_sum[i] - at_v[i]) for i in range(n)]
            defects += [abs(at_sum[i] - at_w[i]) for i in range(n)]
            defects += [abs(at_sum[i] - at_v[i] - at_w[i]) for i in range(n, field.dim)]
            additivity = max([additivity] + defects)
            for lam in scalars:
                at_scaled = field.field.evaluate(m + tuple(lam * a for a in v))
                defects = [abs(at_scaled[i] - at_v[i]) for i in range(n)]
                defects += [abs(at_scaled[i] - lam * at_v[i]) for i in range(n, field.dim)]
                homogeneity = max([homogeneity] + defects)
        return Verdict.from_residuals(tol, additivity=additivity, homogeneity=homogeneity)

    # --- Levantamiento completo y derivada intrínseca --------------------

    @classmethod
    def complete_lift(cls, A: LieAlgebroid, X: SectionA) -> LinearVectorField:
        """
        X̃: campo lineal con base a(X) y CDO D = [X, ·].

        Γ̃^c_b = a(e_b)(X^c) − C^c_{ab} X^a.
        """
        n = A.base_dim
        rows = []
        for c in range(A.rank):
            row = []
            for b in range(A.rank):
                terms = [X.components[c].along(A.anchor[b])]
                terms.extend(-(A.structure_function(a, b, c) * X.components[a]) for a in range(A.rank))
                row.append(field_sum(terms, n))
            rows.append(tuple(row))
        return LinearVectorField(AlgebroidService.anchor_apply(A, X), tuple(rows), label=f"{X.label}~")

    @classmethod
    def intrinsic_derivative(cls, xi: LinearVectorField, X: SectionA, m: Sequence[float]) -> Tuple[float, ...]:
        """D_ξ(X)(m)."""
        return AlgebroidService.cdo_apply(cls.cdo_from_linear(xi), X).evaluate(m)

    @classmethod
    def intrinsic_derivative_residual(cls, xi: LinearVectorField, X: SectionA, m: Sequence[float]) -> float:
        """
        Residuo de τ(X(m), D(X)(m)) = T(X)(x(m)) − ξ(X(m)) en un cero de X.
        """
        value = X.evaluate(m)
        if max((abs(v) for v in value), default=0.0) > VerificationConfig.TOL_AXIOMS:
            raise PreconditionError("X(m) = 0", max(abs(v) for v in value))
        n = xi.base_dim
        x_m = xi.base.evaluate(m)
        tangent_of_section = tuple(x_m) + tuple(primal(derivative(c, list(m), list(x_m))) for c in X.components)
        field_at = xi.as_total().field.evaluate(tuple(m) + tuple(value))
        difference = [a - b for a, b in zip(tangent_of_section, field_at)]
        expected = [0.0] * n + list(cls.intrinsic_derivative(xi, X, m))
        return max(abs(a - b) for a, b in zip(difference, expected))

    @classmethod
    def intrinsic_derivative_flow(
        cls,
        xi: LinearVectorField,
        X: SectionA,
        m: Sequence[float],
        h: float = 1e-3,
        steps: int = 16,
    ) -> Tuple[float, ...]:
        """
        D(X)(m) como derivada en t = 0 de X(f_t m) − φ_t(X(m)), por
        diferencia central de flujos RK4.
        """
        field = xi.as_total().field
        start = tuple(m) + X.evaluate(m)
        n = xi.base_dim

        def gap(t: float) -> np.ndarray:
            end = CalculusService.flow_rk4(field, start, t, steps).coords
            return np.asarray(X.evaluate(end[:n])) - np.asarray(end[n:])

        return tuple(((gap(h) - gap(-h)) / (2.0 * h)).tolist())

    # --- Apareamiento tangente y campo dual -----------------------------

    @classmethod
    def tangent_pairing(
        cls,
        frak: TotalTangent,
        xi: TotalTangent,
        phi_ext: Optional[DualSection] = None,
        x_ext: Optional[SectionA] = None,
    ) -> float:
        """
        ⟨⟨𝔛, ξ⟩⟩ = 𝔛(ℓ_X) + ξ(ℓ_φ) − x⟨φ, X⟩ para extensiones X, φ que pasan
        por los puntos de ξ y 𝔛.

        Args:
            frak: Tangente a A* en (m, φ0)
            xi: Tangente a A en (m, v0)
            phi_ext: Sección de A* con φ(m) = φ0 (constante por defecto)
            x_ext: Sección de A con X(m) = v0 (constante por defecto)
        """
        m = frak.point.base
        drift = max((abs(a - b) for a, b in zip(frak.base_vector, xi.base_vector)), default=0.0)
        if xi.point.base != m or drift > 1e-12:
            raise BaseMismatchError("Los tangentes no proyectan al mismo x(m)")
        n = len(m)
        phi_ext = phi_ext or DualSection.constant(n, frak.point.fiber)
        x_ext = x_ext or SectionA.constant(n, xi.point.fiber)
        for ext, target in ((phi_ext, frak.point.fiber), (x_ext, xi.point.fiber)):
            if max((abs(a - b) for a, b in zip(ext.evaluate(m), target)), default=0.0) > 1e-12:
                raise BaseMismatchError("La extensión no pasa por el punto dado")
        x_m = list(frak.base_vector)
        pairing = phi_ext.pair(x_ext)
        return (
            frak.apply(cls.linear_function(x_ext))
            + xi.apply(cls.linear_function(phi_ext))
            - primal(derivative(pairing, list(m), x_m))
        )

    @classmethod
    def dual_linear_field(cls, xi: LinearVectorField) -> LinearVectorField:
        """ξ* sobre A*: base x y matriz −Γ̃ᵀ (CDO dual D^(*))."""
        return LinearVectorField(xi.base, xi.transpose_negated(), label=f"{xi.label}*")

    # --- Descomposición y 1-formas lineales ------------------------------

    @classmethod
    def decompose(
        cls,
        field: TotalSpaceField,
        at: TotalPoint,
        star_basis: Sequence[LinearVectorField],
    ) -> Decomposition:
        """
        Separa Ξ(at) = Σ c_i ξ_i(at) + (0, Y) con un sistema lineal puntual.

        Args:
            field: Campo Ξ del espacio total
            at: Punto de evaluación
            star_basis: n campos lineales con partes base independientes en q(at)

        Retorna:
            Coeficientes, resto vertical Y, condición del sistema y residuo
        """
        n, k = field.base_dim, field.rank
        if len(star_basis) != n:
            raise DimensionMismatchError("base estrella", n, len(star_basis))
        m, v = at.base, at.fiber
        values = field.field.evaluate(at.coords)
        bases = [xi.base.evaluate(m) for xi in star_basis]
        matrix = [[bases[i][j] for i in range(n)] for j in range(n)]
        condition = condition_number(matrix)
        coefficients = [float(c) for c in solve(matrix, list(values[:n]))]
        fibers = [np.asarray(xi.matrix_at(m), dtype=float) @ np.asarray(v, dtype=float) for xi in star_basis]
        combination = sum((c * f for c, f in zip(coefficients, fibers)), np.zeros(k))
        remainder = np.asarray(values[n:], dtype=float) - combination
        base_rebuilt = sum((c * np.asarray(b) for c, b in zip(coefficients, bases)), np.zeros(n))
        residual = float(np.max(np.abs(base_rebuilt - np.asarray(values[:n]))))
        return Decomposition(tuple(coefficients), tuple(remainder.tolist()), condition, residual)

    @classmethod
    def linear_oneform(
        cls,
        phi: DualSection,
        family: Sequence[LinearVectorField],
        values: Sequence[ScalarField],
    ) -> TotalSpaceForm:
        """
        1-forma lineal determinada por sus apareamientos:
        ⟨Υ, X↑⟩ = ⟨φ, X⟩∘q y ⟨Υ, ξ_k⟩ = values[k] para la familia dada.

        Las componentes base se obtienen con una resolución puntual
        compatible con jets, de modo que la forma sigue siendo derivable.
        """
        n, k = phi.base_dim, phi.rank
        dim = n + k
        if len(family) != n or len(values) != n:
            raise DimensionMismatchError("familia de campos lineales", n, len(family))

        def base_components(p: Sequence[Num]) -> List[Num]:
            m, v = p[:n], p[n:]
            matrix = [list(xi.base(m)) for xi in family]
            phi_m = phi(m)
            rhs = []
            for xi, value in zip(family, values):
                correction = 0.0
                for a in range(k):
                    for b in range(k):
                        correction = correction + phi_m[a] * xi.matrix[a][b](m) * v[b]
                rhs.append(value(p) - correction)
            return solve(matrix, rhs)

        base_part = [ScalarField(dim, lambda p, i=i: base_components(p)[i]) for i in range(n)]
        fiber_part = [c.pullback(dim) for c in phi.components]
        return TotalSpaceForm.from_parts(n, base_part, fiber_part)

    @classmethod
    def pullback_form(cls, omega: ChartOneForm, rank: int) -> TotalSpaceForm:
        """q*ω = (ω∘q, 0)."""
        dim = omega.dim + rank
        base_part = [c.pullback(dim) for c in omega.components]
        return TotalSpaceForm.from_parts(omega.dim, base_part, [ScalarField.zero(dim) for _ in range(rank)])

    # --- Campos mórficos --------------------------------------------------

    @classmethod
    def morphic_residuals(
        cls,
        A: LieAlgebroid,
        xi: LinearVectorField,
        points: Sequence[Sequence[float]],
        sections: Optional[List[SectionA]] = None,
    ) -> Tuple[Residual, Residual]:
        """(defecto de derivación, defecto del ancla) del CDO de ξ."""
        D = cls.cdo_from_linear(xi)
        sections = sections or AlgebroidService.section_battery(A)
        derivation = []
        for idx, X in enumerate(sections):
            for Y in sections[idx + 1:]:
                defect = AlgebroidService.derivation_defect(A, D, X, Y)
                derivation.append(sup_residual(defect, points, f"D[{X.label}, {Y.label}]"))
        anchor = [sup_residual(AlgebroidService.anchor_defect(A, D, X), points, f"a(D{X.label})") for X in sections]
        return worst_of(derivation), worst_of(anchor)

    @classmethod
    def is_morphic(
        cls,
        A: LieAlgebroid,
        xi: LinearVectorField,
        points: Sequence[Sequence[float]],
        tol: float = VerificationConfig.TOL_ONE_NESTED,
        sections: Optional[List[SectionA]] = None,
    ) -> Verdict:
        """
        ξ es mórfico si D_ξ es derivación del corchete y a(D(X)) = [x, a(X)].
        """
        derivation, anchor = cls.morphic_residuals(A, xi, points, sections)
        return Verdict.from_residuals(tol, derivation=derivation.value, anchor=anchor.value)

    # --- Flujos -------------------------------------------------------------

    @classmethod
    def flow(cls, field: TotalSpaceField, point: TotalPoint, t: float, steps: int) -> TotalPoint:
        end = CalculusService.flow_rk4(field.field, point.coords, t, steps)
        return TotalPoint.split(end.coords, field.base_dim)

    @classmethod
    def flow_linearity_defect(
        cls,
        field: TotalSpaceField,
        m: Sequence[float],
        v: Sequence[float],
        w: Sequence[float],
        t: float,
        steps: int = VerificationConfig.RK4_STEPS,
        lam: float = -0.7,
    ) -> FlowDefect:
        """
        Defecto de linealidad de v ↦ Φ_t(m, v): la parte afín (base
        independiente de v, fibra afín en v) y el desplazamiento Φ_t(m, 0).
        """
        n = field.base_dim
        m = tuple(m)

        def end(fiber: Sequence[float]) -> np.ndarray:
            return np.asarray(cls.flow(field, TotalPoint(m, tuple(fiber)), t, steps).coords)

        zero = end([0.0] * field.rank)
        at_v = end(v)
        at_w = end(w)
        at_sum = end([a + b for a, b in zip(v, w)])
        at_scaled = end([lam * a for a in v])
        base_defect = max(
            float(np.max(np.abs(sample[:n] - zero[:n]))) if n else 0.0
            for sample in (at_v, at_w, at_sum, at_scaled)
        )
        fib = slice(n, None)
        additive = np.abs(at_sum[fib] - at_v[fib] - at_w[fib] + zero[fib])
        homogeneous = np.abs(at_scaled[fib] - lam * at_v[fib] - (1.0 - lam) * zero[fib])
        affine = max(base_defect, float(np.max(additive, initial=0.0)), float(np.max(homogeneous, initial=0.0)))
        offset = float(np.max(np.abs(zero[fib]), initial=0.0))
        return FlowDefect(TotalPoint.split(at_v.tolist(), n), affine, offset)

    @classmethod
    def dual_flow_pairing_defect(
        cls,
        xi: LinearVectorField,
        m: Sequence[float],
        v: Sequence[float],
        phi: Sequence[float],
        t: float,
        steps: int = VerificationConfig.RK4_STEPS,
    ) -> float:
        """
        |⟨ψ_t(φ), Φ_t(v)⟩ − ⟨φ, v⟩| y discrepancia de las trayectorias base:
        el flujo de ξ* es el inverso transpuesto del flujo de ξ.
        """
        forward = cls.flow(xi.as_total(), TotalPoint(tuple(m), tuple(v)), t, steps)
        dual = cls.flow(cls.dual_linear_field(xi).as_total(), TotalPoint(tuple(m), tuple(phi)), t, steps)
        base_gap = max((abs(a - b) for a, b in zip(forward.base, dual.base)), default=0.0)
        before = float(np.dot(phi, v))
        after = float(np.dot(dual.fiber, forward.fiber))
        return max(base_gap, abs(after - before))

