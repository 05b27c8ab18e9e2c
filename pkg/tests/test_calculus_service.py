"""
Tests del cálculo diferencial en carta: corchetes, formas, bivectores y flujos.
"""
import math

import pytest
from hypothesis import given, settings, strategies as st

from models.expr import VariableScope
from models.fields import Bivector, ChartOneForm, ChartVectorField, ScalarField
from services.calculus_service import CalculusService
from services.expression_service import ExpressionService
from utils.exceptions import DimensionMismatchError, DivergenceError


def field(*sources: str) -> ChartVectorField:
    scope = VariableScope(len(sources))
    return ChartVectorField(tuple(ExpressionService.compile_text(s, scope) for s in sources))


def form(*sources: str) -> ChartOneForm:
    scope = VariableScope(len(sources))
    return ChartOneForm(tuple(ExpressionService.compile_text(s, scope) for s in sources))


def scalar(src: str, dim: int) -> ScalarField:
    return ExpressionService.compile_text(src, VariableScope(dim))


SYMPLECTIC = Bivector(2, {(0, 1): ScalarField.const(2, 1.0)})


class TestLieBracket:
    """Tests del corchete de campos vectoriales."""

    def test_dilation_with_translation(self):
        bracket = CalculusService.lie_bracket(field("x0"), field("1"))
        assert bracket.evaluate([0.3]) == pytest.approx((-1.0,))

    def test_self_bracket_vanishes(self):
        x = field("x1^2 + x0", "sin(x0)*x1")
        bracket = CalculusService.lie_bracket(x, x)
        assert bracket.evaluate([0.4, -1.2]) == pytest.approx((0.0, 0.0), abs=1e-14)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
    def test_antisymmetry(self, a, b):
        x, y = field("x1", "x0*x1"), field("x0^2", "1")
        p = [a, b]
        left = CalculusService.lie_bracket(x, y).evaluate(p)
        right = CalculusService.lie_bracket(y, x).evaluate(p)
        assert left == pytest.approx(tuple(-v for v in right))

    def test_jacobi(self):
        x, y, z = field("x1", "-x0"), field("x0*x1", "x1^2"), field("1", "x0^3")
        b = CalculusService.lie_bracket
        total = b(b(x, y), z) + b(b(y, z), x) + b(b(z, x), y)
        assert max(abs(v) for v in total.evaluate([0.3, 0.8])) < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            CalculusService.lie_bracket(field("x0"), field("1", "0"))


class TestForms:
    """Tests de la diferencial exterior y la derivada de Lie de formas."""

    def test_exterior_derivative_of_function(self):
        d = CalculusService.exterior_derivative(scalar("x0^2", 1))
        assert d.evaluate([1.5]) == pytest.approx((3.0,))

    def test_exterior_derivative_of_form(self):
        d = CalculusService.exterior_derivative(form("x1", "0"))
        assert d.component(0, 1).evaluate([0.2, 0.9]) == pytest.approx(-1.0)
        assert d.component(1, 0).evaluate([0.2, 0.9]) == pytest.approx(1.0)

    def test_exact_form_is_closed(self):
        d = CalculusService.exterior_derivative(
            CalculusService.exterior_derivative(scalar("x0*x1^2 + exp(x0)", 2))
        )
        assert d.component(0, 1).evaluate([0.5, -0.3]) == pytest.approx(0.0, abs=1e-12)

    def test_lie_derivative_along_invariant_direction(self):
        result = CalculusService.lie_derivative_form(field("0", "1"), form("0", "x0"))
        assert result.evaluate([0.6, 1.1]) == pytest.approx((0.0, 0.0))

    def test_lie_derivative_of_differential(self):
        result = CalculusService.lie_derivative_form(field("-x0"), form("1"))
        assert result.evaluate([2.0]) == pytest.approx((-1.0,))

    def test_not_differentiable(self):
        with pytest.raises(TypeError):
            CalculusService.exterior_derivative(field("x0"))


class TestBivectors:
    """Tests de contracciones y Jacobi de bivectores."""

    def test_sharp_of_dx0(self):
        sharp = CalculusService.bivector_sharp(SYMPLECTIC, ChartOneForm.coordinate(2, 0))
        assert sharp.evaluate([0.1, 0.2]) == (0.0, 1.0)

    def test_coordinate_bracket(self):
        bracket = CalculusService.poisson_bracket_functions(SYMPLECTIC, scalar("x0", 2), scalar("x1", 2))
        assert bracket.evaluate([0.3, 0.3]) == 1.0

    def test_lie_derivative_of_bivector(self):
        lie = CalculusService.lie_derivative_bivector(field("x0", "0"), SYMPLECTIC)
        assert lie.component(0, 1).evaluate([0.5, 0.5]) == pytest.approx(-1.0)

    def test_symmetry_of_constant_bivector(self):
        lie = CalculusService.lie_derivative_bivector(field("1", "0"), SYMPLECTIC)
        assert lie.entries == {}

    def test_casimir_bivector_is_poisson(self):
        pi = Bivector(3, {(0, 1): scalar("x2", 3)})
        points = [[0.1, 0.2, 0.3], [-0.5, 0.8, 1.1]]
        assert CalculusService.schouten_residual(pi, points) < 1e-12

    def test_non_poisson_bivector(self):
        pi = Bivector(3, {(0, 1): ScalarField.const(3, 1.0), (1, 2): scalar("x1", 3)})
        assert CalculusService.schouten_residual(pi, [[0.0, 0.0, 0.0]]) == pytest.approx(1.0)

    def test_planar_bivectors_always_satisfy_jacobi(self):
        pi = Bivector(2, {(0, 1): scalar("x0*x1^2", 2)})
        assert CalculusService.schouten_residual(pi, [[0.3, 0.4]]) == 0.0


class TestFlow:
    """Tests del integrador RK4."""

    def test_translation(self):
        end = CalculusService.flow_rk4(field("1", "0"), [0.0, 0.0], 1.0, 10)
        assert end.coords == pytest.approx((1.0, 0.0))

    def test_exponential_growth(self):
        end = CalculusService.flow_rk4(field("x0"), [1.0], math.log(2.0), 64)
        assert abs(end.coords[0] - 2.0) < 1e-8

    def test_zero_time_is_identity(self):
        start = [0.3, -0.7]
        end = CalculusService.flow_rk4(field("x1", "-x0"), start, 0.0, 8)
        assert end.coords == tuple(start)

    def test_composition(self):
        rotation = field("x1", "-x0")
        half = CalculusService.flow_rk4(rotation, [1.0, 0.5], 0.5, 64)
        twice = CalculusService.flow_rk4(rotation, half.coords, 0.5, 64)
        whole = CalculusService.flow_rk4(rotation, [1.0, 0.5], 1.0, 128)
        assert max(abs(a - b) for a, b in zip(twice.coords, whole.coords)) < 1e-7

    def test_divergence(self):
        square = ChartVectorField((ScalarField(1, lambda p: p[0] * p[0]),))
        with pytest.raises(DivergenceError) as exc:
            CalculusService.flow_rk4(square, [1e200], 1.0, 4)
        assert exc.value.step == 1

    def test_steps_must_be_positive(self):
        with pytest.raises(ValueError):
            CalculusService.flow_rk4(field("x0"), [1.0], 1.0, 0)
