"""
Tests del groupoide de pares: campos invariantes, multiplicativos, estrella y afines.
"""
import pytest

from config import VerificationConfig
from models.expr import VariableScope
from models.fields import ChartVectorField, ScalarField
from models.groupoid import GroupoidField, PairGroupoid
from services.expression_service import ExpressionService
from services.pair_groupoid_service import PairGroupoidService
from utils.exceptions import DimensionMismatchError, PreconditionError, StarCheckError

LINE_POINTS = [[0.2], [-0.5], [0.9]]
PLANE_POINTS = [[0.3, 0.7], [-0.4, 0.1], [0.8, -0.6]]


def field(*sources: str) -> ChartVectorField:
    scope = VariableScope(len(sources))
    return ChartVectorField(tuple(ExpressionService.compile_text(s, scope) for s in sources))


def pair_function(src: str, n: int) -> ScalarField:
    """Función sobre M × M; y = x0..x{n-1}, x = x{n}..x{2n-1}."""
    return ExpressionService.compile_text(src, VariableScope(2 * n))


class TestStructure:
    """Estructura del groupoide y ternas componibles."""

    def test_triples_are_cyclic(self):
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        assert len(triples) == 3
        assert triples[2] == ([0.9], [0.2], [-0.5])

    def test_axioms(self):
        triples = PairGroupoidService.composable_triples(PLANE_POINTS)
        assert PairGroupoidService.groupoid_axioms_residual(PairGroupoid(2), triples) == 0.0


class TestInvariantFields:
    """Campos invariantes, producto y estrella."""

    def test_right_invariant(self):
        Z = PairGroupoidService.right_invariant(field("1 + x0^2"))
        assert Z.blocks([2.0], [7.0]) == ((5.0,), (0.0,))
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        assert PairGroupoidService.is_right_invariant(Z, triples)

    def test_left_invariant(self):
        Z = PairGroupoidService.left_invariant(field("1 + x0^2"))
        assert Z.blocks([2.0], [7.0]) == ((0.0,), (50.0,))
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        assert not PairGroupoidService.is_right_invariant(Z, triples)

    def test_product_is_multiplicative(self, tangent2):
        triples = PairGroupoidService.composable_triples(PLANE_POINTS)
        xi = tangent2.groupoid_fields["rotation_pair"]
        assert PairGroupoidService.is_multiplicative(xi, triples)
        assert PairGroupoidService.is_star(xi, tangent2.vector_fields["rotation"], triples)

    def test_star_is_not_multiplicative(self, tangent2):
        triples = PairGroupoidService.composable_triples(PLANE_POINTS)
        xi = tangent2.groupoid_fields["rotation_star"]
        assert PairGroupoidService.is_star(xi, tangent2.vector_fields["rotation"], triples)
        verdict = PairGroupoidService.is_multiplicative(xi, triples)
        assert not verdict
        assert verdict.residuals["target"] > 0.0

    def test_star_extension_matches_gallery(self, tangent2):
        x = tangent2.vector_fields["rotation"]
        zero = ScalarField.zero(4)
        y1 = ScalarField.coordinate(4, 1)
        built = PairGroupoidService.star_extension(x, [[y1, zero], [zero, zero]])
        declared = tangent2.groupoid_fields["rotation_star"]
        at = [0.3, -0.2, 1.1, 0.5]
        assert built.field.evaluate(at) == pytest.approx(declared.field.evaluate(at))

    def test_correction_vanishes_on_diagonal(self):
        correction = PairGroupoidService.diagonal_correction(1, [[pair_function("x0*x1 + 3", 1)]])
        assert correction[0].evaluate([0.4, 0.4]) == 0.0
        assert correction[0].evaluate([1.0, 0.0]) == pytest.approx(3.0)

    def test_base_field(self, tangent2):
        x = PairGroupoidService.base_field(tangent2.groupoid_fields["rotation_star"])
        assert x.evaluate([0.3, 0.7]) == pytest.approx((0.7, -0.3))

    def test_star_dimension(self, tangent2):
        triples = PairGroupoidService.composable_triples(PLANE_POINTS)
        with pytest.raises(DimensionMismatchError):
            PairGroupoidService.is_star(tangent2.groupoid_fields["rotation_pair"], field("x0"), triples)


class TestIntrinsicOperator:
    """El operador D_ξ y el levantamiento ξ̃."""

    def test_product_field_gives_bracket(self):
        xi = PairGroupoidService.product_field(field("x0"))
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        result = PairGroupoidService.d_xi(xi, field("1"), triples)
        assert result.evaluate([0.6]) == pytest.approx((-1.0,))

    def test_correction_shifts_operator(self):
        x = field("x0")
        correction = [[pair_function("2", 1)]]
        xi = PairGroupoidService.star_extension(x, correction)
        result = PairGroupoidService.d_xi(xi, field("1"))
        assert result.evaluate([0.6]) == pytest.approx((-3.0,))

    def test_requires_star(self):
        xi = PairGroupoidService.right_invariant(field("1"))
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        with pytest.raises(StarCheckError):
            PairGroupoidService.d_xi(xi, field("1"), triples)

    def test_requires_star_without_samples(self):
        xi = PairGroupoidService.right_invariant(field("1"))
        with pytest.raises(StarCheckError):
            PairGroupoidService.d_xi(xi, field("1"))
        with pytest.raises(StarCheckError):
            PairGroupoidService.lie_functor_lift(xi)

    def test_default_triples_are_seeded(self):
        triples = PairGroupoidService.default_triples(2)
        assert len(triples) == VerificationConfig.STAR_CHECK_POINTS
        assert all(len(point) == 2 for triple in triples for point in triple)
        assert triples == PairGroupoidService.default_triples(2)

    def test_lie_functor_of_product(self):
        xi = PairGroupoidService.product_field(field("x0"))
        lift = PairGroupoidService.lie_functor_lift(xi, PairGroupoidService.composable_triples(LINE_POINTS))
        assert lift.matrix_at([0.5]) == [[1.0]]
        assert lift.base.evaluate([0.5]) == (0.5,)

    def test_lie_functor_of_star(self, tangent2):
        lift = PairGroupoidService.lie_functor_lift(tangent2.groupoid_fields["rotation_star"])
        matrix = lift.matrix_at([0.3, 0.7])
        assert matrix[0] == pytest.approx([0.7, 1.0])
        assert matrix[1] == pytest.approx([-1.0, 0.0])

    def test_tilde_function(self):
        F = pair_function("x0^2 - x1^2", 1)
        tilde = PairGroupoidService.tilde_function(F, 1)
        assert tilde.evaluate([0.5, 2.0]) == pytest.approx(2.0)

    def test_tilde_function_dimension(self):
        with pytest.raises(DimensionMismatchError):
            PairGroupoidService.tilde_function(ScalarField.zero(3), 1)


class TestAffineFields:
    """Campos afines y su descomposición."""

    def test_decomposition(self):
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        X = field("1 + x0^2")
        xi = PairGroupoidService.product_field(field("x0")) + PairGroupoidService.right_invariant(X)
        result, error = PairGroupoidService.affine_decompose(xi, triples)
        assert error is None
        eta, invariant = result
        assert PairGroupoidService.is_multiplicative(eta, triples)
        first, second = invariant.blocks([0.5], [2.0])
        assert first == pytest.approx((1.25,))
        assert second == (0.0,)

    def test_not_beta_projectable(self):
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        xi = GroupoidField(1, (ScalarField.coordinate(2, 1),), (ScalarField.zero(2),))
        result, error = PairGroupoidService.affine_decompose(xi, triples)
        assert result is None
        assert "β-proyectable" in error

    def test_not_affine(self):
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        xi = GroupoidField(1, (pair_function("x0*x1", 1),), (ScalarField.zero(2),))
        result, error = PairGroupoidService.affine_decompose(xi, triples)
        assert result is None
        assert "no es afín" in error

    def test_affinity_with_bisection_jacobians(self):
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        xi = PairGroupoidService.product_field(field("x0"))
        residual = PairGroupoidService.affinity_residual(xi, triples, [([[1.0]], [[1.0]]), ([[2.0]], [[0.5]])])
        assert residual == pytest.approx(0.0, abs=1e-12)


class TestMultiplicativeFunctions:
    """Funciones multiplicativas F(z,x) = F(z,y) + F(y,x)."""

    def test_difference_is_multiplicative(self):
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        F = pair_function("x0^2 - x1^2", 1)
        assert PairGroupoidService.function_multiplicativity(F, triples) == pytest.approx(0.0, abs=1e-12)
        xi = PairGroupoidService.product_field(field("x0"))
        assert PairGroupoidService.multiplicative_function_check(F, xi, triples)

    def test_sum_is_rejected(self):
        triples = PairGroupoidService.composable_triples(LINE_POINTS)
        F = pair_function("x0^2 + x1^2", 1)
        xi = PairGroupoidService.product_field(field("x0"))
        with pytest.raises(PreconditionError):
            PairGroupoidService.multiplicative_function_check(F, xi, triples)
