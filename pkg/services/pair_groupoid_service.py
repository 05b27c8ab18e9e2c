"""
Servicio del groupoide de pares para Algebroid Lifts.
Campos invariantes, multiplicativos, estrella y afines sobre M × M, el
operador D_ξ por corchetes, el levantamiento ξ̃ por diferenciación en la
diagonal y la descomposición de campos afines.
"""
import functools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import VerificationConfig
from models.fields import ChartVectorField, ScalarField, field_sum
from models.groupoid import GroupoidField, PairGroupoid
from models.report import Verdict
from models.total_space import LinearVectorField
from services.calculus_service import CalculusService
from utils.exceptions import DimensionMismatchError, PreconditionError, StarCheckError
from utils.jets import derivative
from utils.sampling import Sampler

logger = logging.getLogger("algebroid_lifts.services.pair_groupoid")

Triple = Tuple[Sequence[float], Sequence[float], Sequence[float]]


def _max_gap(a: Sequence[float], b: Sequence[float]) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)), initial=0.0))


def _check_pair_function(F: ScalarField, base_dim: int) -> None:
    if F.dim != 2 * base_dim:
        raise DimensionMismatchError("función en M × M", 2 * base_dim, F.dim)


class PairGroupoidService:
    """Cálculo de campos vectoriales sobre M × M con β = primer bloque y α = segundo."""

    @staticmethod
    def composable_triples(points: Sequence[Sequence[float]]) -> List[Triple]:
        """Ternas (z, y, x) cíclicas de la muestra: (z, y)·(y, x) = (z, x)."""
        count = len(points)
        return [(points[i], points[(i + 1) % count], points[(i + 2) % count]) for i in range(count)]

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def default_triples(base_dim: int) -> Tuple[Triple, ...]:
        """Ternas sembradas para la condición estrella cuando no hay muestras."""
        sampler = Sampler(VerificationConfig.DEFAULT_SEED)
        points = sampler.points(base_dim, VerificationConfig.STAR_CHECK_POINTS)
        return tuple(PairGroupoidService.composable_triples(points))

    @staticmethod
    def _slot(f: ScalarField, n: int, slot: int) -> ScalarField:
        return f.pullback(2 * n, offset=slot * n)

    # --- Constructores -------------------------------------------------------

    @classmethod
    def right_invariant(cls, X: ChartVectorField) -> GroupoidField:
        """X⃗(y, x) = (X(y), 0)."""
        n = X.dim
        return GroupoidField(
            n,
            tuple(cls._slot(c, n, 0) for c in X.components),
            tuple(ScalarField.zero(2 * n) for _ in range(n)),
            label="→",
        )

    @classmethod
    def left_invariant(cls, X: ChartVectorField) -> GroupoidField:
        """X⃖(y, x) = (0, X(x))."""
        n = X.dim
        return GroupoidField(
            n,
            tuple(ScalarField.zero(2 * n) for _ in range(n)),
            tuple(cls._slot(c, n, 1) for c in X.components),
            label="←",
        )

    @classmethod
    def product_field(cls, x: ChartVectorField) -> GroupoidField:
        """x × x, el campo multiplicativo sobre x."""
        n = x.dim
        return GroupoidField(
            n,
            tuple(cls._slot(c, n, 0) for c in x.components),
            tuple(cls._slot(c, n, 1) for c in x.components),
            label="x×x",
        )

    @staticmethod
    def diagonal_correction(n: int, correction: Sequence[Sequence[ScalarField]]) -> Tuple[ScalarField, ...]:
        """Componentes Σ_b (y_b − x_b) P_ab(y, x); se anulan en la diagonal."""
        dim = 2 * n
        gaps = [ScalarField.coordinate(dim, b) - ScalarField.coordinate(dim, n + b) for b in range(n)]
        return tuple(field_sum([gaps[b] * correction[a][b] for b in range(n)], dim) for a in range(n))

    @classmethod
    def star_extension(
        cls,
        x: ChartVectorField,
        correction: Optional[Sequence[Sequence[ScalarField]]] = None,
    ) -> GroupoidField:
        """
        Campo estrella sobre x: ξ^(1)a = x^a(y) + Σ_b (y_b − x_b) P^a_b(y, x)
        y ξ^(2) = x(x).

        Args:
            x: Campo base
            correction: Matriz P^a_b de funciones en 2n variables (cero por defecto)
        """
        n = x.dim
        first = tuple(cls._slot(c, n, 0) for c in x.components)
        if correction is not None:
            first = tuple(a + b for a, b in zip(first, cls.diagonal_correction(n, correction)))
        second = tuple(cls._slot(c, n, 1) for c in x.components)
        return GroupoidField(n, first, second, label="estrella")

    @classmethod
    def bracket(cls, xi: GroupoidField, eta: GroupoidField) -> GroupoidField:
        return GroupoidField.from_field(xi.base_dim, CalculusService.lie_bracket(xi.field, eta.field))

    @classmethod
    def base_field(cls, xi: GroupoidField) -> ChartVectorField:
        """x(m) = ξ^(2)(m, m)."""
        G = PairGroupoid(xi.base_dim)
        return ChartVectorField(tuple(c.substitute(xi.base_dim, G.diagonal) for c in xi.second))

    # --- Pruebas muestreadas ---------------------------------------------------

    @classmethod
    def groupoid_axioms_residual(cls, G: PairGroupoid, triples: Sequence[Triple]) -> float:
        """Unidad, asociatividad e inverso sobre ternas componibles."""
        worst = 0.0
        for z, y, x in triples:
            h, g = G.element(z, y), G.element(y, x)
            k = G.element(x, z)
            worst = max(
                worst,
                _max_gap(G.compose(G.identity(z), h), h),
                _max_gap(G.compose(h, G.identity(y)), h),
                _max_gap(G.compose(G.compose(k, h), g), G.compose(k, G.compose(h, g))),
                _max_gap(G.compose(g, G.inverse(g)), G.identity(y)),
                _max_gap(G.compose(G.inverse(g), g), G.identity(x)),
            )
        return worst

    @classmethod
    def is_multiplicative(
        cls,
        xi: GroupoidField,
        triples: Sequence[Triple],
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> Verdict:
        """
        Ley de morfismo ξ(hg) = ξ(h)∘ξ(g) sobre ternas (z, y, x): meta
        ξ^(1)(z,x) = ξ^(1)(z,y), fuente ξ^(2)(z,x) = ξ^(2)(y,x),
        componibilidad ξ^(2)(z,y) = ξ^(1)(y,x) e identidades en la diagonal.
        """
        target = source = composable = identity = 0.0
        for z, y, x in triples:
            zx1, zx2 = xi.blocks(z, x)
            zy1, zy2 = xi.blocks(z, y)
            yx1, yx2 = xi.blocks(y, x)
            yy1, yy2 = xi.blocks(y, y)
            target = max(target, _max_gap(zx1, zy1))
            source = max(source, _max_gap(zx2, yx2))
            composable = max(composable, _max_gap(zy2, yx1))
            identity = max(identity, _max_gap(yy1, yy2))
        return Verdict.from_residuals(
            tol, target=target, source=source, composable=composable, identity=identity
        )

    @classmethod
    def is_star(
        cls,
        xi: GroupoidField,
        x: ChartVectorField,
        triples: Sequence[Triple],
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> Verdict:
        """Tα∘ξ = x∘α y ξ∘1 = T(1)∘x en las muestras."""
        if x.dim != xi.base_dim:
            raise DimensionMismatchError("campo base", xi.base_dim, x.dim)
        source = identity = 0.0
        for _, y, m in triples:
            _, yx2 = xi.blocks(y, m)
            source = max(source, _max_gap(yx2, x.evaluate(m)))
            mm1, mm2 = xi.blocks(m, m)
            identity = max(identity, _max_gap(mm1, x.evaluate(m)), _max_gap(mm2, x.evaluate(m)))
        return Verdict.from_residuals(tol, source=source, identity=identity)

    @classmethod
    def is_right_invariant(
        cls,
        Z: GroupoidField,
        triples: Sequence[Triple],
        tol: float = VerificationConfig.TOL_BRACKETS,
    ) -> Verdict:
        """Z(y, x) = (Z^(1)(y), 0): segundo bloque nulo y primero independiente de x."""
        vertical = independence = 0.0
        for z, y, x in triples:
            zx1, zx2 = Z.blocks(z, x)
            zy1, _ = Z.blocks(z, y)
            vertical = max(vertical, _max_gap(zx2, [0.0] * Z.base_dim))
            independence = max(independence, _max_gap(zx1, zy1))
        return Verdict.from_residuals(tol, vertical=vertical, independence=independence)

    @classmethod
    def require_star(
        cls,
        xi: GroupoidField,
        triples: Optional[Sequence[Triple]],
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> ChartVectorField:
        """Devuelve el campo base de ξ y exige que ξ sea estrella; sin muestras usa default_triples."""
        x = cls.base_field(xi)
        if not triples:
            triples = cls.default_triples(xi.base_dim)
        verdict = cls.is_star(xi, x, triples, tol)
        if not verdict:
            logger.warning(f"Campo no estrella: residuo {verdict.residual:.3e}")
            raise StarCheckError("ξ estrella", verdict.residual)
        return x

    # --- D_ξ y levantamiento --------------------------------------------------

    @classmethod
    def a_part_on_diagonal(cls, Z: GroupoidField) -> ChartVectorField:
        """Parte en A de Z(m, m): (u, w) = (u − w, 0) + (w, w)."""
        n = Z.base_dim
        G = PairGroupoid(n)
        return ChartVectorField(tuple(
            (Z.first[a] - Z.second[a]).substitute(n, G.diagonal) for a in range(n)
        ))

    @classmethod
    def d_xi_extension(cls, xi: GroupoidField, extension: GroupoidField) -> ChartVectorField:
        """Parte en A de [ξ, X̄] en las identidades, para cualquier X̄ con X̄∘1 = X."""
        return cls.a_part_on_diagonal(cls.bracket(xi, extension))

    @classmethod
    def d_xi(
        cls,
        xi: GroupoidField,
        X: ChartVectorField,
        triples: Optional[Sequence[Triple]] = None,
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> ChartVectorField:
        """
        D_ξ(X) = [ξ, X⃗]∘1, leído en A ≅ TM.

        Args:
            xi: Campo estrella
            X: Sección del algebroide del groupoide de pares (campo en M)
            triples: Muestras para verificar la condición estrella (default_triples si faltan)

        Retorna:
            Campo vectorial en M; para ξ = x×x es [x, X]
        """
        cls.require_star(xi, triples, tol)
        return cls.d_xi_extension(xi, cls.right_invariant(X))

    @classmethod
    def lie_functor_lift(
        cls,
        xi: GroupoidField,
        triples: Optional[Sequence[Triple]] = None,
        tol: float = VerificationConfig.TOL_AXIOMS,
    ) -> LinearVectorField:
        """
        ξ̃ sobre TM: base x(m) = ξ^(2)(m, m) y matriz Γ̃^a_b = ∂ξ^(1)a/∂y^b en (m, m).
        """
        x = cls.require_star(xi, triples, tol)
        n = xi.base_dim
        G = PairGroupoid(n)
        matrix = tuple(
            tuple(xi.first[a].partial(b).substitute(n, G.diagonal) for b in range(n))
            for a in range(n)
        )
        return LinearVectorField(x, matrix, label=f"{xi.label}~")

    @classmethod
    def tilde_function(cls, F: ScalarField, base_dim: int) -> ScalarField:
        """F̃ sobre TM: F̃(m, v) = dF en (m, m) aplicado a (v, 0)."""
        _check_pair_function(F, base_dim)
        n = base_dim
        G = PairGroupoid(n)

        def value(p):
            m, v = p[:n], p[n:]
            return derivative(F, G.diagonal(m), list(v) + [0.0] * n)

        return ScalarField(2 * n, value, label=f"{F.label}~")

    # --- Campos afines y funciones multiplicativas -------------------------------

    @classmethod
    def affinity_residual(
        cls,
        xi: GroupoidField,
        triples: Sequence[Triple],
        jacobians: Optional[Sequence[Tuple[Sequence[Sequence[float]], Sequence[Sequence[float]]]]] = None,
    ) -> float:
        """
        Condición afín con bisecciones afines: para cada par (B, C),
        ξ^(1)(z,x) = ξ^(1)(z,y) + B(ξ^(1)(y,x) − ξ^(1)(y,y)) y
        ξ^(2)(z,x) = ξ^(2)(y,x) + C(ξ^(2)(z,y) − ξ^(2)(y,y)).
        Sin pares se usan traslaciones (B = C = I).
        """
        n = xi.base_dim
        identity = np.eye(n)
        pairs = list(jacobians) if jacobians else [(identity, identity)]
        worst = 0.0
        for z, y, x in triples:
            zx1, zx2 = (np.asarray(b) for b in xi.blocks(z, x))
            zy1, zy2 = (np.asarray(b) for b in xi.blocks(z, y))
            yx1, yx2 = (np.asarray(b) for b in xi.blocks(y, x))
            yy1, yy2 = (np.asarray(b) for b in xi.blocks(y, y))
            for B, C in pairs:
                B, C = np.asarray(B, dtype=float), np.asarray(C, dtype=float)
                worst = max(
                    worst,
                    _max_gap(zx1, zy1 + B @ (yx1 - yy1)),
                    _max_gap(zx2, yx2 + C @ (zy2 - yy2)),
                )
        return worst

    @classmethod
    def projectability_residual(cls, xi: GroupoidField, triples: Sequence[Triple]) -> Tuple[float, float]:
        """(α, β): ξ^(2) independiente de y, ξ^(1) independiente de x."""
        alpha = beta = 0.0
        for z, y, x in triples:
            zx1, zx2 = xi.blocks(z, x)
            zy1, _ = xi.blocks(z, y)
            _, yx2 = xi.blocks(y, x)
            alpha = max(alpha, _max_gap(zx2, yx2))
            beta = max(beta, _max_gap(zx1, zy1))
        return alpha, beta

    @classmethod
    def affine_decompose(
        cls,
        xi: GroupoidField,
        triples: Sequence[Triple],
        tol: float = VerificationConfig.TOL_AXIOMS,
        jacobians=None,
    ) -> Tuple[Optional[Tuple[GroupoidField, GroupoidField]], Optional[str]]:
        """
        Separa un campo afín y proyectable en parte multiplicativa y parte
        invariante a derecha.

        Args:
            xi: Campo sobre M × M
            triples: Ternas componibles de muestra
            tol: Tolerancia de las pruebas previas
            jacobians: Pares (B, C) adicionales para la condición afín

        Retorna:
            ((η, X⃗), None) si tiene éxito, o (None, mensaje) indicando qué falló
        """
        affinity = cls.affinity_residual(xi, triples, jacobians)
        if not affinity < tol:
            return None, f"El campo no es afín (residuo {affinity:.3e})"
        alpha, beta = cls.projectability_residual(xi, triples)
        if not alpha < tol:
            return None, f"El campo no es α-proyectable (residuo {alpha:.3e})"
        if not beta < tol:
            return None, f"El campo no es β-proyectable (residuo {beta:.3e})"

        n = xi.base_dim
        G = PairGroupoid(n)
        X = ChartVectorField(tuple(
            (xi.first[a] - xi.second[a]).substitute(n, G.diagonal) for a in range(n)
        ))
        invariant = cls.right_invariant(X)
        eta = xi - invariant
        verdict = cls.is_multiplicative(eta, triples, tol)
        if not verdict:
            return None, f"La parte η = ξ − X⃗ no es multiplicativa (residuo {verdict.residual:.3e})"
        logger.debug(f"Descomposición afín con residuo de multiplicatividad {verdict.residual:.3e}")
        return (eta, invariant), None

    @classmethod
    def function_multiplicativity(cls, F: ScalarField, triples: Sequence[Triple]) -> float:
        """max |F(z,x) − F(z,y) − F(y,x)|."""
        worst = 0.0
        for z, y, x in triples:
            gap = F.evaluate(tuple(z) + tuple(x)) - F.evaluate(tuple(z) + tuple(y)) - F.evaluate(tuple(y) + tuple(x))
            worst = max(worst, abs(gap))
        return worst

    @classmethod
    def multiplicative_function_check(
        cls,
        F: ScalarField,
        xi: GroupoidField,
        triples: Sequence[Triple],
        tol: float = VerificationConfig.TOL_ONE_NESTED,
    ) -> Verdict:
        """
        Si F es multiplicativa y ξ multiplicativo, ξ(F) es multiplicativa.

        Raises:
            PreconditionError: si F no es multiplicativa en las muestras
        """
        _check_pair_function(F, xi.base_dim)
        precondition = cls.function_multiplicativity(F, triples)
        if not precondition < tol:
            raise PreconditionError("F multiplicativa", precondition)
        derived = F.along(xi.field)
        return Verdict.from_residuals(tol, derived=cls.function_multiplicativity(derived, triples))
