"""
Servicio de cálculo diferencial en carta global para Algebroid Lifts.
Corchetes de Lie, derivadas de Lie, diferencial exterior, contracciones con
bivectores y flujos numéricos (RK4 de paso fijo).
"""
import logging
from typing import Sequence, Union

import numpy as np

from models.fields import (
    Bivector, ChartOneForm, ChartPoint, ChartTwoForm, ChartVectorField, ScalarField, field_sum,
)
from utils.exceptions import DimensionMismatchError, DivergenceError
from utils.jets import derivative, primal

logger = logging.getLogger("algebroid_lifts.services.calculus")


def _same_dim(obj: str, a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(obj, a, b)


class CalculusService:
    """
    Operaciones del cálculo en una carta: todas devuelven objetos nuevos
    evaluables con jets anidados, sin estado compartido.
    """

    @classmethod
    def lie_bracket(cls, x: ChartVectorField, y: ChartVectorField) -> ChartVectorField:
        """
        Corchete de Lie [x, y]^i = x(y^i) − y(x^i).

        Args:
            x: Primer campo
            y: Segundo campo

        Retorna:
            Campo vectorial [x, y]
        """
        _same_dim("corchete de Lie", x.dim, y.dim)
        components = []
        for xi, yi in zip(x.components, y.components):
            if xi.constant is not None and yi.constant is not None:
                components.append(ScalarField.zero(x.dim))
                continue
            components.append(cls._bracket_component(x, y, xi, yi))
        return ChartVectorField(tuple(components))

    @staticmethod
    def _bracket_component(x, y, xi: ScalarField, yi: ScalarField) -> ScalarField:
        def component(p):
            value = 0.0
            if yi.constant is None:
                value = value + derivative(yi, p, x(p))
            if xi.constant is None:
                value = value - derivative(xi, p, y(p))
            return value
        return ScalarField(x.dim, component)

    @classmethod
    def interior(cls, x: ChartVectorField, omega: ChartOneForm) -> ScalarField:
        """ι_x ω."""
        return omega.pair(x)

    @classmethod
    def exterior_derivative(
        cls, f_or_omega: Union[ScalarField, ChartOneForm]
    ) -> Union[ChartOneForm, ChartTwoForm]:
        """
        Diferencial exterior.

        Args:
            f_or_omega: Campo escalar o 1-forma

        Retorna:
            df como ChartOneForm, o dω como ChartTwoForm con (dω)_{ij} = ∂_iω_j − ∂_jω_i
        """
        if isinstance(f_or_omega, ScalarField):
            f = f_or_omega
            return ChartOneForm(tuple(f.partial(i) for i in range(f.dim)))
        if isinstance(f_or_omega, ChartOneForm):
            omega = f_or_omega
            entries = {}
            for i in range(omega.dim):
                for j in range(i + 1, omega.dim):
                    entry = omega.components[j].partial(i) - omega.components[i].partial(j)
                    if not entry.is_zero:
                        entries[(i, j)] = entry
            return ChartTwoForm(omega.dim, entries)
        raise TypeError(f"No se puede derivar un objeto de tipo {type(f_or_omega).__name__}")

    @classmethod
    def interior_two_form(cls, x: ChartVectorField, sigma: ChartTwoForm) -> ChartOneForm:
        """(ι_x σ)_j = x^i σ_{ij}."""
        _same_dim("contracción de 2-forma", x.dim, sigma.dim)
        components = []
        for j in range(sigma.dim):
            terms = [x.components[i] * sigma.component(i, j) for i in range(sigma.dim) if i != j]
            components.append(field_sum(terms, sigma.dim))
        return ChartOneForm(tuple(components))

    @classmethod
    def lie_derivative_form(cls, x: ChartVectorField, omega: ChartOneForm) -> ChartOneForm:
        """
        Derivada de Lie de una 1-forma por la fórmula de Cartan
        L_x ω = d(ι_x ω) + ι_x dω.
        """
        _same_dim("derivada de Lie", x.dim, omega.dim)
        exact_part = cls.exterior_derivative(cls.interior(x, omega))
        contracted = cls.interior_two_form(x, cls.exterior_derivative(omega))
        return exact_part + contracted

    @classmethod
    def bivector_sharp(cls, pi: Bivector, omega: ChartOneForm) -> ChartVectorField:
        """
        π♯(ω) = π(ω, ·), es decir (π♯ω)^j = ω_i π^{ij}.

        Args:
            pi: Bivector
            omega: 1-forma

        Retorna:
            Campo vectorial π♯ω
        """
        _same_dim("contracción con bivector", pi.dim, omega.dim)
        components = []
        for j in range(pi.dim):
            terms = [omega.components[i] * pi.component(i, j) for i in range(pi.dim) if i != j]
            components.append(field_sum(terms, pi.dim))
        return ChartVectorField(tuple(components))

    @classmethod
    def poisson_bracket_functions(cls, pi: Bivector, f: ScalarField, g: ScalarField) -> ScalarField:
        """{f, g} = π(df, dg)."""
        return pi.pair(cls.exterior_derivative(f), cls.exterior_derivative(g))

    @classmethod
    def lie_derivative_bivector(cls, x: ChartVectorField, pi: Bivector) -> Bivector:
        """(L_x π)^{ij} = x(π^{ij}) − π^{kj} ∂_k x^i − π^{ik} ∂_k x^j."""
        _same_dim("derivada de Lie de bivector", x.dim, pi.dim)
        n = pi.dim
        entries = {}
        for i in range(n):
            for j in range(i + 1, n):
                terms = [pi.component(i, j).along(x)]
                for k in range(n):
                    terms.append(-(pi.component(k, j) * x.components[i].partial(k)))
                    terms.append(-(pi.component(i, k) * x.components[j].partial(k)))
                entry = field_sum(terms, n)
                if not entry.is_zero:
                    entries[(i, j)] = entry
        return Bivector(n, entries)

    @classmethod
    def schouten_residual(cls, pi: Bivector, points: Sequence[Sequence[float]]) -> float:
        """
        Residuo máximo de Jacobi Σ_l π^{li}∂_lπ^{jk} + cíclico sobre los puntos dados.
        """
        n = pi.dim
        worst = 0.0
        triples = [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)]
        if not triples or not pi.entries:
            return 0.0
        for point in points:
            for i, j, k in triples:
                total = 0.0
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    target = pi.component(b, c)
                    if target.constant is not None:
                        continue
                    for l in range(n):
                        coefficient = pi.component(l, a).evaluate(point)
                        if coefficient != 0.0:
                            total += coefficient * primal(target.partial(l)(point))
                worst = max(worst, abs(total))
        return worst

    @classmethod
    def flow_rk4(
        cls, x: ChartVectorField, p: Sequence[float], t: float, steps: int
    ) -> ChartPoint:
        """
        Flujo de tiempo t por Runge–Kutta clásico de orden 4.

        Args:
            x: Campo vectorial
            p: Punto inicial
            t: Tiempo final
            steps: Número de pasos (>= 1)

        Retorna:
            Punto final aproximado
        """
        if steps < 1:
            raise ValueError("El número de pasos debe ser al menos 1")
        _same_dim("punto inicial del flujo", x.dim, len(p))
        h = float(t) / steps
        state = np.asarray([float(c) for c in p], dtype=float)

        def velocity(q: np.ndarray) -> np.ndarray:
            return np.asarray(x.evaluate(q.tolist()), dtype=float)

        for step in range(1, steps + 1):
            k1 = velocity(state)
            k2 = velocity(state + 0.5 * h * k1)
            k3 = velocity(state + 0.5 * h * k2)
            k4 = velocity(state + h * k3)
            state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(state)):
                logger.warning(f"Flujo RK4 divergió en el paso {step} de {steps}")
                raise DivergenceError(step)
        return ChartPoint(tuple(state.tolist()))
