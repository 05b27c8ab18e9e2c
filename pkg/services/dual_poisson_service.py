"""
Servicio de la estructura de Poisson dual (lineal en las fibras) sobre A*.
Corchete de funciones, campos hamiltonianos, prueba de campos de Poisson y
los criterios de coisotropía para grafos de secciones duales y para
imágenes de campos vectoriales en TP.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import List, Sequence

from config import VerificationConfig
from models.algebroid import DualSection, LieAlgebroid, SectionA
from models.fields import Bivector, ChartOneForm, ChartVectorField, ScalarField
from models.report import Residual, Verdict, sup_residual, worst_of
from models.total_space import TotalSpaceField, fiber_coordinate, section_linear_function
from services.algebroid_service import AlgebroidService
from services.calculus_service import CalculusService
from services.lift_service import LiftService
from utils.exceptions import DimensionMismatchError, NonPoissonError

logger = logging.getLogger("algebroid_lifts.services.dual_poisson")

# Funciones sobre el espacio total de A*, en las variables (x^i, ξ_a).
DualTotalFunction = ScalarField


@dataclass(frozen=True)
class CoisotropyCheck:
    """Veredicto de coisotropía junto al criterio independiente que debe coincidir."""
    coisotropic: Verdict
    reference: Verdict

    @property
    def agree(self) -> bool:
        return self.coisotropic.passed == self.reference.passed


class DualPoissonService:
    """La estructura de Poisson lineal de A* derivada, en cada llamada, del algebroide."""

    @classmethod
    def dual_bivector(cls, A: LieAlgebroid) -> Bivector:
        """
        Bivector de A* en coordenadas (x^i, ξ_a):
        {ξ_a, ξ_b} = C^c_{ab} ξ_c, {ξ_a, x^i} = a^i_a, {x^i, x^j} = 0.
        """
        n, k = A.base_dim, A.rank
        dim = n + k
        entries = {}
        for i in range(n):
            for a in range(k):
                component = A.anchor_component(i, a)
                if not component.is_zero:
                    entries[(i, n + a)] = -component.pullback(dim)
        for (a, b, c), value in A.structure.items():
            term = value.pullback(dim) * fiber_coordinate(n, k, c)
            key = (n + a, n + b)
            entries[key] = entries[key] + term if key in entries else term
        return Bivector(dim, entries, label=f"{A.name}*")

    @classmethod
    def _check_function(cls, A: LieAlgebroid, *functions: ScalarField) -> None:
        for f in functions:
            if f.dim != A.total_dim:
                raise DimensionMismatchError("función sobre A*", A.total_dim, f.dim)

    @classmethod
    def poisson_bracket(cls, A: LieAlgebroid, F: DualTotalFunction, G: DualTotalFunction) -> DualTotalFunction:
        """
        {F, G} = Π(dF, dG) con el bivector dual.

        Args:
            A: Algebroide cuyo dual se considera
            F: Función en n + k variables
            G: Función en n + k variables

        Retorna:
            La función {F, G}
        """
        cls._check_function(A, F, G)
        return CalculusService.poisson_bracket_functions(cls.dual_bivector(A), F, G)

    @classmethod
    def hamiltonian_field(cls, A: LieAlgebroid, F: DualTotalFunction) -> TotalSpaceField:
        """Campo hamiltoniano {F, ·} = Π♯(dF)."""
        cls._check_function(A, F)
        field = CalculusService.bivector_sharp(cls.dual_bivector(A), CalculusService.exterior_derivative(F))
        return TotalSpaceField(A.base_dim, A.rank, field, label=f"H({F.label})")

    @classmethod
    def hamiltonian_of_section(cls, A: LieAlgebroid, X: SectionA) -> TotalSpaceField:
        """
        H_X construido por sus relaciones: H_X(f∘q) = a(X)(f)∘q y
        H_X(ℓ_Y) = ℓ_{[X,Y]}, es decir base a(X) y fibra ⟨ξ, [X, e_b]⟩.
        """
        n, k = A.base_dim, A.rank
        dim = n + k
        base_part = [c.pullback(dim) for c in AlgebroidService.anchor_apply(A, X).components]
        fiber_part = [
            section_linear_function(AlgebroidService.bracket(A, X, A.basis(b))) for b in range(k)
        ]
        return TotalSpaceField.from_parts(n, base_part, fiber_part, label=f"H_{X.label}")

    @classmethod
    def generating_functions(cls, A: LieAlgebroid) -> List[DualTotalFunction]:
        """Las coordenadas x^i (= q*x^i) y ξ_a (= ℓ_{e_a})."""
        dim = A.total_dim
        return [ScalarField.coordinate(dim, i) for i in range(dim)]

    @classmethod
    def poisson_field_defect(
        cls, A: LieAlgebroid, V: TotalSpaceField, points: Sequence[Sequence[float]]
    ) -> Residual:
        """Máximo de |V{F,G} − {VF,G} − {F,VG}| sobre la familia generadora."""
        if V.dim != A.total_dim:
            raise DimensionMismatchError("campo sobre A*", A.total_dim, V.dim)
        pi = cls.dual_bivector(A)
        bracket = lambda f, g: CalculusService.poisson_bracket_functions(pi, f, g)
        functions = cls.generating_functions(A)
        residuals = []
        for (i, F), (j, G) in itertools.combinations(enumerate(functions), 2):
            defect = (
                V.apply(bracket(F, G))
                - bracket(V.apply(F), G)
                - bracket(F, V.apply(G))
            )
            residuals.append(sup_residual(lambda p, d=defect: (d(p),), points, f"coordenadas ({i}, {j})"))
        return worst_of(residuals)

    @classmethod
    def is_poisson_field(
        cls,
        A: LieAlgebroid,
        V: TotalSpaceField,
        points: Sequence[Sequence[float]],
        tol: float = VerificationConfig.TOL_ONE_NESTED,
    ) -> Verdict:
        """V es de Poisson si deriva el corchete sobre la familia generadora."""
        return Verdict.from_residuals(tol, derivation=cls.poisson_field_defect(A, V, points).value)

    # --- Coisotropía ---------------------------------------------------------

    @classmethod
    def graph_bracket(cls, A: LieAlgebroid, phi: DualSection, a: int, b: int) -> ScalarField:
        """
        {ξ_a − φ_a∘q, ξ_b − φ_b∘q} restringido al grafo de φ, como función
        de la base.
        """
        n, k = A.base_dim, A.rank
        dim = n + k
        generator = lambda c: fiber_coordinate(n, k, c) - phi.components[c].pullback(dim)
        value = cls.poisson_bracket(A, generator(a), generator(b))
        on_graph = lambda p: list(p) + list(phi(p))
        return value.substitute(n, on_graph)

    @classmethod
    def is_coisotropic_graph(
        cls,
        A: LieAlgebroid,
        phi: DualSection,
        points: Sequence[Sequence[float]],
        tol: float = VerificationConfig.TOL_ONE_NESTED,
    ) -> CoisotropyCheck:
        """
        Coisotropía de im φ ⊂ A* por la familia generadora del ideal de
        anulación, junto al residuo independiente de dφ.

        Args:
            A: Algebroide
            phi: Sección de A*
            points: Muestras de la base
            tol: Tolerancia de ambos veredictos

        Retorna:
            CoisotropyCheck con el veredicto de corchetes y el de dφ = 0
        """
        brackets, closedness = [], []
        for a, b in itertools.combinations(range(A.rank), 2):
            bracket = cls.graph_bracket(A, phi, a, b)
            brackets.append(sup_residual(lambda p, f=bracket: (f(p),), points, f"(e{a}, e{b})"))
            d_phi = AlgebroidService.d_phi(A, phi, A.basis(a), A.basis(b))
            closedness.append(sup_residual(lambda p, f=d_phi: (f(p),), points, f"dφ(e{a}, e{b})"))
        check = CoisotropyCheck(
            Verdict.from_residuals(tol, brackets=worst_of(brackets).value),
            Verdict.from_residuals(tol, closed=worst_of(closedness).value),
        )
        if not check.agree:
            logger.warning(
                f"Veredictos de coisotropía discrepantes para {A.name}: "
                f"corchetes {check.coisotropic.residual:.3e}, dφ {check.reference.residual:.3e}"
            )
        return check

    @classmethod
    def poisson_field_via_tangent_coisotropy(
        cls,
        P: Bivector,
        X: ChartVectorField,
        points: Sequence[Sequence[float]],
        tol: float = VerificationConfig.TOL_ONE_NESTED,
    ) -> CoisotropyCheck:
        """
        X es de Poisson para π si y solo si im X es coisotrópica en TP con la
        estructura tangente. Compara ambos lados: la coisotropía del grafo
        de X visto como sección dual del algebroide cotangente y L_Xπ = 0.

        Raises:
            NonPoissonError: si π no cumple Jacobi en las muestras
        """
        if X.dim != P.dim:
            raise DimensionMismatchError("campo sobre P", P.dim, X.dim)
        jacobi = CalculusService.schouten_residual(P, points)
        if not jacobi < VerificationConfig.TOL_AXIOMS:
            raise NonPoissonError("Jacobi de π", jacobi)
        A = AlgebroidService.cotangent_algebroid(P)
        graph = cls.is_coisotropic_graph(A, DualSection(P.dim, X.components), points, tol)
        lie = CalculusService.lie_derivative_bivector(X, P)
        residuals = [
            sup_residual(lambda p, f=value: (f(p),), points, f"(L_Xπ)^{key}")
            for key, value in lie.entries.items()
        ]
        check = CoisotropyCheck(
            graph.coisotropic,
            Verdict.from_residuals(tol, lie_derivative=worst_of(residuals).value),
        )
        if not check.agree:
            logger.warning(f"Coisotropía en TP y L_Xπ = 0 discrepan para {P.label or 'π'}")
        return check

    @classmethod
    def jacobi_residual(cls, A: LieAlgebroid, points: Sequence[Sequence[float]]) -> float:
        """Residuo de Jacobi del bivector dual en puntos del espacio total de A*."""
        return CalculusService.schouten_residual(cls.dual_bivector(A), points)

    # --- Identidades hamiltonianas ---------------------------------------------

    @classmethod
    def hamiltonian_relations_residual(
        cls,
        A: LieAlgebroid,
        X: SectionA,
        Y: SectionA,
        f: ScalarField,
        points: Sequence[Sequence[float]],
    ) -> Residual:
        """
        H_X(ℓ_Y) = ℓ_{[X,Y]}, H_X(f∘q) = a(X)(f)∘q y (dℓ_X)♯ = H_X, con H_X
        tomado del sharp del bivector dual.
        """
        dim = A.total_dim
        H = cls.hamiltonian_field(A, section_linear_function(X))
        explicit = cls.hamiltonian_of_section(A, X)
        on_linear = H.apply(section_linear_function(Y)) - section_linear_function(AlgebroidService.bracket(A, X, Y))
        on_pullback = H.apply(f.pullback(dim)) - f.along(AlgebroidService.anchor_apply(A, X)).pullback(dim)
        difference = H.field - explicit.field
        return worst_of([
            sup_residual(lambda p: (on_linear(p),), points, f"H_{X.label}(ℓ_{Y.label})"),
            sup_residual(lambda p: (on_pullback(p),), points, f"H_{X.label}(f∘q)"),
            sup_residual(difference, points, f"(dℓ_{X.label})♯ − H_{X.label}"),
        ])

    @classmethod
    def hamiltonian_commutator_residual(
        cls,
        A: LieAlgebroid,
        X: SectionA,
        Y: SectionA,
        phi: DualSection,
        points: Sequence[Sequence[float]],
    ) -> Residual:
        """[H_X, H_Y] = H_{[X,Y]} y [H_X, φ↑] = (L_Xφ)↑."""
        HX = cls.hamiltonian_of_section(A, X)
        HY = cls.hamiltonian_of_section(A, Y)
        HXY = cls.hamiltonian_of_section(A, AlgebroidService.bracket(A, X, Y))
        commutator = CalculusService.lie_bracket(HX.field, HY.field) - HXY.field
        lifted = CalculusService.lie_bracket(HX.field, LiftService.vertical_lift(phi).field)
        expected = LiftService.vertical_lift(AlgebroidService.lie_derivative_dual(A, X, phi)).field
        return worst_of([
            sup_residual(commutator, points, f"[H_{X.label}, H_{Y.label}]"),
            sup_residual(lifted - expected, points, f"[H_{X.label}, φ↑]"),
        ])

    @classmethod
    def pullback_sharp_residual(
        cls, A: LieAlgebroid, omega: ChartOneForm, points: Sequence[Sequence[float]]
    ) -> Residual:
        """(q*ω)♯ = −(a*ω)↑ con (a*ω)_a = ⟨ω, a(e_a)⟩."""
        n, k = A.base_dim, A.rank
        pulled = ChartOneForm(
            tuple(c.pullback(n + k) for c in omega.components)
            + tuple(ScalarField.zero(n + k) for _ in range(k))
        )
        sharp = CalculusService.bivector_sharp(cls.dual_bivector(A), pulled)
        a_star = DualSection(n, tuple(omega.pair(A.anchor[a]) for a in range(k)))
        expected = -LiftService.vertical_lift(a_star).field
        return sup_residual(sharp - expected, points, "(q*ω)♯ + (a*ω)↑")

    @classmethod
    def pairing_residual(
        cls,
        A: LieAlgebroid,
        X: SectionA,
        Y: SectionA,
        omega: ChartOneForm,
        points: Sequence[Sequence[float]],
    ) -> Residual:
        """⟨dℓ_X, H_Y⟩ = ℓ_{[Y,X]} y ⟨q*ω, H_X⟩ = ⟨ω, a(X)⟩∘q."""
        dim = A.total_dim
        HY = cls.hamiltonian_of_section(A, Y)
        HX = cls.hamiltonian_of_section(A, X)
        d_ell = CalculusService.exterior_derivative(section_linear_function(X))
        first = d_ell.pair(HY.field) - section_linear_function(AlgebroidService.bracket(A, Y, X))
        pulled = ChartOneForm(
            tuple(c.pullback(dim) for c in omega.components)
            + tuple(ScalarField.zero(dim) for _ in range(A.rank))
        )
        second = pulled.pair(HX.field) - omega.pair(AlgebroidService.anchor_apply(A, X)).pullback(dim)
        return worst_of([
            sup_residual(lambda p: (first(p),), points, f"⟨dℓ_{X.label}, H_{Y.label}⟩"),
            sup_residual(lambda p: (second(p),), points, f"⟨q*ω, H_{X.label}⟩"),
        ])

    @classmethod
    def graph_points(cls, phi: DualSection, base_points: Sequence[Sequence[float]]) -> List[List[float]]:
        return [list(m) + list(phi.evaluate(m)) for m in base_points]
