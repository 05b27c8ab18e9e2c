"""
Servicio del groupoide de Poisson de pares P × P para Algebroid Lifts.
Proyecciones cotangentes, 1-formas estrella y multiplicativas, el operador
D_Φ, el corchete explícito del bialgebroide y las identidades que ligan las
formas levantadas a TP con el corchete de Koszul.
"""
import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import VerificationConfig
from models.algebroid import DualSection
from models.fields import Bivector, ChartOneForm, ChartVectorField, ScalarField
from models.groupoid import CoarsePoissonGroupoid, GroupoidField, GroupoidOneForm, PairGroupoid
from models.report import Residual, Verdict, sup_residual
from models.total_space import LinearVectorField, TotalSpaceForm
from services.algebroid_service import AlgebroidService
from services.calculus_service import CalculusService
from services.dual_poisson_service import DualPoissonService
from services.lift_service import LiftService
from services.pair_groupoid_service import PairGroupoidService, Triple
from utils.exceptions import ConventionError, DimensionMismatchError, StarCheckError
from utils.linalg import condition_number

logger = logging.getLogger("algebroid_lifts.services.poisson_pair")


def _gap(a: Sequence[float], b: Sequence[float]) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)), initial=0.0))


def _form_residual(form: ChartOneForm, points: Sequence[Sequence[float]], detail: str) -> Residual:
    return sup_residual(form, points, detail)


class PoissonPairService:
    """Identidades de 1-formas sobre el groupoide de Poisson de pares."""

    # --- Proyecciones y constructores ------------------------------------------

    @classmethod
    def cotangent_projections(
        cls, Phi: GroupoidOneForm, y: Sequence[float], x: Sequence[float]
    ) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
        """
        (α̃(ω), β̃(ω)) para ω = Φ(y, x): α̃(ω) = −ω^(2) en x y β̃(ω) = ω^(1) en y.
        """
        first, second = Phi.blocks(y, x)
        return tuple(-c for c in second), first

    @classmethod
    def identity_covector(cls, phi: ChartOneForm, m: Sequence[float]) -> Tuple[float, ...]:
        """1̃_φ en (m, m): el covector (φ(m), −φ(m))."""
        value = phi.evaluate(m)
        return tuple(value) + tuple(-c for c in value)

    @classmethod
    def multiplicative_pair_form(cls, omega: ChartOneForm) -> GroupoidOneForm:
        """(ω(y), −ω(x)), multiplicativa sobre ω."""
        n = omega.dim
        return GroupoidOneForm(
            n,
            tuple(c.pullback(2 * n) for c in omega.components),
            tuple(-c.pullback(2 * n, offset=n) for c in omega.components),
            label="par",
        )

    @classmethod
    def identity_form(cls, phi: ChartOneForm) -> GroupoidOneForm:
        """Extensión estrella canónica de φ; en las identidades vale 1̃_φ."""
        return cls.star_oneform_extension(phi)

    @classmethod
    def star_oneform_extension(
        cls,
        phi: ChartOneForm,
        correction: Optional[Sequence[Sequence[ScalarField]]] = None,
    ) -> GroupoidOneForm:
        """
        1-forma estrella sobre φ: Φ^(1)_a = φ_a(y) + Σ_b (y − x)_b P_ab(y, x)
        y Φ^(2) = −φ(x).
        """
        n = phi.dim
        first = tuple(c.pullback(2 * n) for c in phi.components)
        if correction is not None:
            first = tuple(a + b for a, b in zip(first, PairGroupoidService.diagonal_correction(n, correction)))
        second = tuple(-c.pullback(2 * n, offset=n) for c in phi.components)
        return GroupoidOneForm(n, first, second, label="estrella")

    @classmethod
    def base_form(cls, Phi: GroupoidOneForm) -> ChartOneForm:
        """φ(m) = Φ^(1)(m, m)."""
        G = PairGroupoid(Phi.base_dim)
        return ChartOneForm(tuple(c.substitute(Phi.base_dim, G.diagonal) for c in Phi.first))

    @classmethod
    def pullback_beta(cls, omega: ChartOneForm) -> GroupoidOneForm:
        """β*ω = (ω(y), 0)."""
        n = omega.dim
        return GroupoidOneForm(
            n,
            tuple(c.pullback(2 * n) for c in omega.components),
            tuple(ScalarField.zero(2 * n) for _ in range(n)),
        )

    # --- Pruebas sobre 1-formas -------------------------------------------------

    @classmethod
    def is_star_oneform(
        cls,
        Phi: GroupoidOneForm,
        phi: ChartOneForm,
        triples: Sequence[Triple],
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> Verdict:
        """α̃∘Φ = φ∘α y Φ∘1 = 1̃∘φ en las muestras."""
        if phi.dim != Phi.base_dim:
            raise DimensionMismatchError("1-forma base", Phi.base_dim, phi.dim)
        source = identity = 0.0
        for _, y, m in triples:
            alpha, _ = cls.cotangent_projections(Phi, y, m)
            source = max(source, _gap(alpha, phi.evaluate(m)))
            first, second = Phi.blocks(m, m)
            identity = max(identity, _gap(first + second, cls.identity_covector(phi, m)))
        return Verdict.from_residuals(tol, source=source, identity=identity)

    @classmethod
    def is_multiplicative_oneform(
        cls,
        Phi: GroupoidOneForm,
        triples: Sequence[Triple],
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> Verdict:
        """
        Cláusulas de morfismo sobre (z, y, x): Φ^(1)(z,x) = Φ^(1)(z,y),
        Φ^(2)(z,x) = Φ^(2)(y,x) y Φ^(2)(z,y) + Φ^(1)(y,x) = 0.
        """
        target = source = composable = 0.0
        for z, y, x in triples:
            zx1, zx2 = Phi.blocks(z, x)
            zy1, zy2 = Phi.blocks(z, y)
            yx1, yx2 = Phi.blocks(y, x)
            target = max(target, _gap(zx1, zy1))
            source = max(source, _gap(zx2, yx2))
            composable = max(composable, _gap([a + b for a, b in zip(zy2, yx1)], [0.0] * len(zy2)))
        return Verdict.from_residuals(tol, target=target, source=source, composable=composable)

    @classmethod
    def require_star_oneform(
        cls,
        Phi: GroupoidOneForm,
        triples: Optional[Sequence[Triple]],
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> ChartOneForm:
        phi = cls.base_form(Phi)
        if not triples:
            triples = PairGroupoidService.default_triples(Phi.base_dim)
        verdict = cls.is_star_oneform(Phi, phi, triples, tol)
        if not verdict:
            logger.warning(f"1-forma no estrella: residuo {verdict.residual:.3e}")
            raise StarCheckError("Φ estrella", verdict.residual)
        return phi

    # --- Corchetes --------------------------------------------------------------

    @classmethod
    def koszul_bracket(cls, pi: Bivector, omega: ChartOneForm, theta: ChartOneForm) -> ChartOneForm:
        """
        [ω, θ] = L_{π♯ω}θ − L_{π♯θ}ω − d(π(ω, θ)).

        Args:
            pi: Bivector
            omega: Primera 1-forma
            theta: Segunda 1-forma

        Retorna:
            La 1-forma [ω, θ]_π
        """
        if not (pi.dim == omega.dim == theta.dim):
            raise DimensionMismatchError("corchete de Koszul", pi.dim, omega.dim)
        first = CalculusService.lie_derivative_form(CalculusService.bivector_sharp(pi, omega), theta)
        second = CalculusService.lie_derivative_form(CalculusService.bivector_sharp(pi, theta), omega)
        exact = CalculusService.exterior_derivative(pi.pair(omega, theta))
        return first - second - exact

    @classmethod
    def groupoid_bracket(cls, G: CoarsePoissonGroupoid, Phi: GroupoidOneForm, Psi: GroupoidOneForm) -> GroupoidOneForm:
        """Corchete de Koszul de la estructura producto sobre P × P."""
        return GroupoidOneForm.from_form(G.base_dim, cls.koszul_bracket(G.bivector, Phi.form, Psi.form))

    @classmethod
    def groupoid_sharp(cls, G: CoarsePoissonGroupoid, Phi: GroupoidOneForm) -> GroupoidField:
        """Φ♯ respecto de π ⊕ (−π)."""
        field = CalculusService.bivector_sharp(G.bivector, Phi.form)
        return GroupoidField.from_field(G.base_dim, field, label=f"{Phi.label}♯")

    @classmethod
    def anchor_dual(cls, G: CoarsePoissonGroupoid, omega: ChartOneForm) -> ChartVectorField:
        """a_*^*(ω) = −π♯ω como sección de AG ≅ TP."""
        return -CalculusService.bivector_sharp(G.pi, omega)

    # --- D_Φ -----------------------------------------------------------------------

    @classmethod
    def vertical_annihilation_residual(
        cls, G: CoarsePoissonGroupoid, bracket: GroupoidOneForm, points: Sequence[Sequence[float]]
    ) -> Residual:
        """Segundo bloque de [Φ, β*ω] en las identidades (debe anularse)."""
        n = G.base_dim
        on_diagonal = ChartOneForm(tuple(c.substitute(n, G.pair.diagonal) for c in bracket.second))
        return _form_residual(on_diagonal, points, "anulación β-vertical")

    @classmethod
    def d_Phi(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        omega: ChartOneForm,
        points: Optional[Sequence[Sequence[float]]] = None,
        tol: float = VerificationConfig.TOL_ONE_NESTED,
    ) -> ChartOneForm:
        """
        D_Φ(ω) con ⟨D_Φ(ω), Tβ(Y)⟩ = ⟨[Φ, β*ω], Y⟩ en las identidades.

        Args:
            G: Groupoide de Poisson de pares
            Phi: 1-forma estrella
            omega: 1-forma en P
            points: Muestras de P para las comprobaciones previas (opcional)
            tol: Tolerancia de las comprobaciones

        Retorna:
            La 1-forma D_Φ(ω) en P

        Raises:
            StarCheckError: si Φ no es estrella en las muestras
            ConventionError: si [Φ, β*ω] no anula los vectores β-verticales
        """
        n = G.base_dim
        triples = PairGroupoidService.composable_triples(points) if points else None
        cls.require_star_oneform(Phi, triples, VerificationConfig.TOL_AXIOMS)
        bracket = cls.groupoid_bracket(G, Phi, cls.pullback_beta(omega))
        if points:
            vertical = cls.vertical_annihilation_residual(G, bracket, points)
            if not vertical.value < tol:
                logger.error(f"Anulación β-vertical violada: {vertical.value:.3e} {vertical.describe()}")
                raise ConventionError("anulación β-vertical", vertical.value)
        return ChartOneForm(tuple(c.substitute(n, G.pair.diagonal) for c in bracket.first))

    @classmethod
    def d_Phi_theorem_suite(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        omega: ChartOneForm,
        theta: ChartOneForm,
        points: Sequence[Sequence[float]],
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> Dict[str, Residual]:
        """
        Para Φ multiplicativa: D_Φ(ω) = [φ, ω]_π, [Φ, β*ω] = β*(D_Φω) en
        todo P × P y D_Φ deriva el corchete de Koszul.

        Retorna:
            Residuos "koszul", "pullback" y "derivation"
        """
        triples = PairGroupoidService.composable_triples(points)
        verdict = cls.is_multiplicative_oneform(Phi, triples, tol)
        if not verdict:
            raise StarCheckError("Φ multiplicativa", verdict.residual)
        phi = cls.base_form(Phi)
        d_omega = cls.d_Phi(G, Phi, omega, points)
        d_theta = cls.d_Phi(G, Phi, theta, points)

        koszul = d_omega - cls.koszul_bracket(G.pi, phi, omega)

        bracket = cls.groupoid_bracket(G, Phi, cls.pullback_beta(omega))
        lifted = cls.pullback_beta(d_omega)
        pair_points = [list(y) + list(x) for _, y, x in triples] + [list(m) + list(m) for m in points]
        pullback = sup_residual(bracket.form - lifted.form, pair_points, "[Φ, β*ω] − β*(D_Φω)")

        bracket_pi = lambda a, b: cls.koszul_bracket(G.pi, a, b)
        derivation = (
            cls.d_Phi(G, Phi, bracket_pi(omega, theta))
            - bracket_pi(d_omega, theta)
            - bracket_pi(omega, d_theta)
        )
        return {
            "koszul": _form_residual(koszul, points, "D_Φ(ω) − [φ, ω]"),
            "pullback": pullback,
            "derivation": _form_residual(derivation, points, "D_Φ[ω, θ]"),
        }

    # --- Corchete del bialgebroide ----------------------------------------------------

    @classmethod
    def at_identity_along(cls, G: CoarsePoissonGroupoid, F: ScalarField, Z: ChartVectorField) -> ScalarField:
        """Z actuando como (Z, 0) sobre una función de P × P en las identidades."""
        n = G.base_dim
        derived = F.along(PairGroupoidService.right_invariant(Z).field)
        return derived.substitute(n, G.pair.diagonal)

    @classmethod
    def lba_bracket(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        Psi: GroupoidOneForm,
        Z: ChartVectorField,
        points: Optional[Sequence[Sequence[float]]] = None,
    ) -> ScalarField:
        """
        ⟨[φ, ψ], Z⟩ = a_*(φ)⟨ψ,Z⟩ − a_*(ψ)⟨φ,Z⟩ + ⟨φ, D_η Z⟩ − ⟨ψ, D_ξ Z⟩ − Z⟨Ψ,ξ⟩
        con ξ = Φ♯, η = Ψ♯ y a_* = π♯.

        Args:
            G: Groupoide de Poisson de pares
            Phi: 1-forma estrella sobre φ
            Psi: 1-forma estrella sobre ψ
            Z: Sección de AG ≅ TP
            points: Muestras para comprobar la condición estrella (opcional)

        Retorna:
            Función en P
        """
        triples = PairGroupoidService.composable_triples(points) if points else None
        phi = cls.require_star_oneform(Phi, triples)
        psi = cls.require_star_oneform(Psi, triples)
        xi = cls.groupoid_sharp(G, Phi)
        eta = cls.groupoid_sharp(G, Psi)
        a_phi = CalculusService.bivector_sharp(G.pi, phi)
        a_psi = CalculusService.bivector_sharp(G.pi, psi)
        return (
            psi.pair(Z).along(a_phi)
            - phi.pair(Z).along(a_psi)
            + phi.pair(PairGroupoidService.d_xi(eta, Z, triples))
            - psi.pair(PairGroupoidService.d_xi(xi, Z, triples))
            - cls.at_identity_along(G, Psi.pair(xi), Z)
        )

    @classmethod
    def lba_residual(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        Psi: GroupoidOneForm,
        Z: ChartVectorField,
        points: Sequence[Sequence[float]],
    ) -> Residual:
        """|lba_bracket − ⟨[φ, ψ]_π, Z⟩|."""
        expected = cls.koszul_bracket(G.pi, cls.base_form(Phi), cls.base_form(Psi)).pair(Z)
        defect = cls.lba_bracket(G, Phi, Psi, Z, points) - expected
        return sup_residual(lambda p: (defect(p),), points, "corchete del bialgebroide − Koszul")

    # --- Sharp y naturalidad -------------------------------------------------------------

    @classmethod
    def sharp_star_check(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        points: Sequence[Sequence[float]],
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> Verdict:
        """Φ♯ es un campo estrella sobre π♯φ."""
        triples = PairGroupoidService.composable_triples(points)
        x = CalculusService.bivector_sharp(G.pi, cls.base_form(Phi))
        return PairGroupoidService.is_star(cls.groupoid_sharp(G, Phi), x, triples, tol)

    @classmethod
    def anchor_naturality_residual(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        omega: ChartOneForm,
        points: Sequence[Sequence[float]],
    ) -> Residual:
        """a_*^*(D_Φ ω) = D_{Φ♯}(a_*^* ω)."""
        left = cls.anchor_dual(G, cls.d_Phi(G, Phi, omega))
        right = PairGroupoidService.d_xi(cls.groupoid_sharp(G, Phi), cls.anchor_dual(G, omega))
        return sup_residual(left - right, points, "a_*^*(D_Φω) − D_{Φ♯}(a_*^*ω)")

    # --- Formas levantadas a TP ------------------------------------------------------------

    @classmethod
    def cotangent_lift_family(cls, n: int) -> List[GroupoidField]:
        """Campos estrella e_k × e_k; sus levantamientos dan bases coordenadas en TP."""
        return [
            PairGroupoidService.product_field(ChartVectorField.coordinate(n, k))
            for k in range(n)
        ]

    @classmethod
    def family_condition(cls, family_lifts: Sequence[LinearVectorField], points: Sequence[Sequence[float]]) -> float:
        """Peor número de condición de la matriz de partes base en las muestras."""
        worst = 1.0
        for m in points:
            matrix = [list(xi.base.evaluate(m)) for xi in family_lifts]
            worst = max(worst, condition_number(matrix))
        return worst

    @classmethod
    def tilde_pairing(cls, G: CoarsePoissonGroupoid, Phi: GroupoidOneForm, zeta: GroupoidField) -> ScalarField:
        """
        ⟨Φ, ζ⟩~ en TP: derivada de ⟨Φ, ζ⟩ en (m, m) en la dirección (v, 0).
        """
        return PairGroupoidService.tilde_function(Phi.pair(zeta), G.base_dim)

    @classmethod
    def tilde_oneform(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        family: Optional[Sequence[GroupoidField]] = None,
        points: Optional[Sequence[Sequence[float]]] = None,
    ) -> TotalSpaceForm:
        """
        Φ̃ en AG ≅ TP, determinada por ⟨Φ̃, X↑⟩ = ⟨φ, X⟩∘q y
        ⟨Φ̃, ζ̃⟩ = ⟨Φ, ζ⟩~ sobre una familia de campos estrella.

        Args:
            G: Groupoide de Poisson de pares
            Phi: 1-forma estrella
            family: n campos estrella con bases independientes (e_k × e_k por defecto)
            points: Muestras de P para la comprobación estrella y el condicionamiento (opcional)

        Retorna:
            TotalSpaceForm sobre TP; con muestras, `condition` lleva el peor número de
            condición de la familia
        """
        n = G.base_dim
        triples = PairGroupoidService.composable_triples(points) if points else None
        phi = cls.require_star_oneform(Phi, triples)
        family = list(family) if family is not None else cls.cotangent_lift_family(n)
        lifts = [PairGroupoidService.lie_functor_lift(zeta) for zeta in family]
        values = [cls.tilde_pairing(G, Phi, zeta) for zeta in family]
        tilde = LiftService.linear_oneform(DualSection(n, phi.components), lifts, values)
        if points:
            condition = cls.family_condition(lifts, points)
            logger.debug(f"Condición de la familia de levantamientos: {condition:.3e}")
            if condition > VerificationConfig.CONDITION_LIMIT:
                logger.warning(f"Familia de levantamientos mal condicionada: {condition:.3e}")
            tilde = replace(tilde, condition=condition)
        return tilde

    @classmethod
    def tangent_poisson_bivector(cls, G: CoarsePoissonGroupoid) -> Bivector:
        """Estructura tangente en TP: el dual del algebroide cotangente de π."""
        return DualPoissonService.dual_bivector(AlgebroidService.cotangent_algebroid(G.pi))

    @classmethod
    def tilde_sharp_residual(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        points: Sequence[Sequence[float]],
    ) -> Residual:
        """Φ̃♯ = (Φ♯)~ con la estructura tangente; puntos en TP."""
        tangent = cls.tangent_poisson_bivector(G)
        sharp = CalculusService.bivector_sharp(tangent, cls.tilde_oneform(G, Phi).form)
        lifted = PairGroupoidService.lie_functor_lift(cls.groupoid_sharp(G, Phi)).as_total().field
        return sup_residual(sharp - lifted, points, "Φ̃♯ − (Φ♯)~")

    @classmethod
    def closing_identity_residual(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        zeta: GroupoidField,
        omega: ChartOneForm,
        points: Sequence[Sequence[float]],
    ) -> Residual:
        """
        ⟨D_Φ(ω), z⟩ − ⟨φ, D_ζ(a_*^*ω)⟩ = a_*^*(ω)⟨Φ, ζ⟩ + dω(π♯φ, z) para ζ
        estrella sobre z.
        """
        phi = cls.base_form(Phi)
        z = PairGroupoidService.base_field(zeta)
        a_omega = cls.anchor_dual(G, omega)
        left = (
            cls.d_Phi(G, Phi, omega).pair(z)
            - phi.pair(PairGroupoidService.d_xi(zeta, a_omega))
        )
        d_omega = CalculusService.exterior_derivative(omega)
        right = (
            cls.at_identity_along(G, Phi.pair(zeta), a_omega)
            + d_omega.on(CalculusService.bivector_sharp(G.pi, phi), z)
        )
        defect = left - right
        return sup_residual(lambda p: (defect(p),), points, "identidad de cierre")

    @classmethod
    def theorem_last_suite(
        cls,
        G: CoarsePoissonGroupoid,
        Phi: GroupoidOneForm,
        Psi: GroupoidOneForm,
        omega: ChartOneForm,
        theta: ChartOneForm,
        points: Sequence[Sequence[float]],
        tangent_points: Sequence[Sequence[float]],
    ) -> Dict[str, Residual]:
        """
        Identidades en TP con el corchete de Koszul de la estructura tangente:
        [Φ̃, Ψ̃] = [Φ, Ψ]~, [Φ̃, q*ω] = q*(D_Φ ω), [q*θ, q*ω] = 0 y la identidad
        de cierre con ζ = Φ♯.

        Args:
            points: Muestras de P
            tangent_points: Muestras (m, v) de TP

        Retorna:
            Residuos "tilde-bracket", "tilde-pullback", "pullbacks" y "closing"
        """
        n = G.base_dim
        triples = PairGroupoidService.composable_triples(points)
        for form in (Phi, Psi):
            cls.require_star_oneform(form, triples)
        tangent = cls.tangent_poisson_bivector(G)
        bracket_t = lambda a, b: cls.koszul_bracket(tangent, a, b)

        tilde_phi = cls.tilde_oneform(G, Phi).form
        tilde_psi = cls.tilde_oneform(G, Psi).form
        tilde_of_bracket = cls.tilde_oneform(G, cls.groupoid_bracket(G, Phi, Psi)).form
        tilde_bracket = bracket_t(tilde_phi, tilde_psi) - tilde_of_bracket

        pulled_omega = LiftService.pullback_form(omega, n).form
        pulled_theta = LiftService.pullback_form(theta, n).form
        tilde_pullback = (
            bracket_t(tilde_phi, pulled_omega)
            - LiftService.pullback_form(cls.d_Phi(G, Phi, omega), n).form
        )
        pullbacks = bracket_t(pulled_theta, pulled_omega)

        zeta = cls.groupoid_sharp(G, Phi)
        return {
            "tilde-bracket": _form_residual(tilde_bracket, tangent_points, "[Φ̃, Ψ̃] − [Φ, Ψ]~"),
            "tilde-pullback": _form_residual(tilde_pullback, tangent_points, "[Φ̃, q*ω] − q*(D_Φω)"),
            "pullbacks": _form_residual(pullbacks, tangent_points, "[q*θ, q*ω]"),
            "closing": cls.closing_identity_residual(G, Phi, zeta, omega, points),
        }
