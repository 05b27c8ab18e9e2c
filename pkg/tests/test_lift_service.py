"""
Tests de LiftService: levantamientos, campos lineales, derivada intrínseca,
apareamiento tangente, descomposición, 1-formas lineales y flujos.
"""
import pytest

from models.algebroid import CovDiffOp, DualSection, SectionA
from models.expr import VariableScope
from models.fields import ChartVectorField, ScalarField
from models.total_space import TotalPoint, TotalTangent
from services.algebroid_service import AlgebroidService
from services.expression_service import ExpressionService
from services.lift_service import LiftService
from utils.exceptions import BaseMismatchError, DimensionMismatchError, PreconditionError


def section(dim: int, *sources: str) -> SectionA:
    scope = VariableScope(dim)
    return SectionA(dim, tuple(ExpressionService.compile_text(s, scope) for s in sources))


def dual(dim: int, *sources: str) -> DualSection:
    scope = VariableScope(dim)
    return DualSection(dim, tuple(ExpressionService.compile_text(s, scope) for s in sources))


def dilation_cdo() -> CovDiffOp:
    base = ChartVectorField((ScalarField.coordinate(1, 0),))
    return CovDiffOp(base, ((ScalarField.const(1, -1.0),),))


class TestBasicLifts:
    """Levantamiento vertical, funciones lineales y traslación τ."""

    def test_vertical_lift(self, tangent1):
        lift = LiftService.vertical_lift(tangent1.sections["X"])
        assert lift.field.evaluate([1.5, 2.0]) == pytest.approx((0.0, 2.25))

    def test_linear_function(self, tangent1):
        ell = LiftService.linear_function(tangent1.dual_sections["phi"])
        assert ell.evaluate([0.0, 3.0]) == pytest.approx(3.0)

    def test_pullback_function(self):
        f = LiftService.pullback_function(ScalarField.coordinate(1, 0), 1)
        assert f.evaluate([4.0, -9.0]) == 4.0

    def test_translation(self):
        tau = LiftService.translation_tau(TotalPoint((1.0,), (2.0,)), TotalPoint((1.0,), (5.0,)))
        assert tau.base_vector == (0.0,)
        assert tau.fiber_vector == (5.0,)
        assert tau.point.fiber == (2.0,)

    def test_translation_requires_same_base(self):
        with pytest.raises(BaseMismatchError):
            LiftService.translation_tau(TotalPoint((1.0,), (2.0,)), TotalPoint((0.0,), (2.0,)))


class TestLinearFields:
    """Correspondencia entre campos lineales y CDO."""

    def test_linear_from_cdo(self):
        xi = LiftService.linear_from_cdo(dilation_cdo())
        assert xi.matrix_at([0.7]) == [[1.0]]
        assert xi.as_total().field.evaluate([2.0, 3.0]) == (2.0, 3.0)

    def test_cdo_round_trip(self):
        D = LiftService.cdo_from_linear(LiftService.linear_from_cdo(dilation_cdo()))
        assert D.gamma_matrix([0.7]) == [[-1.0]]

    def test_linear_from_field(self, tangent1):
        field = tangent1.linear_fields["complete_X"].as_total()
        xi = LiftService.linear_from_field(field)
        assert xi.base.evaluate([0.5]) == pytest.approx((0.25,))
        assert xi.matrix_at([0.5])[0][0] == pytest.approx(1.0)

    def test_is_linear(self, tangent1):
        points = [TotalPoint((0.5,), (1.0,)), TotalPoint((-0.3,), (2.0,))]
        assert LiftService.is_linear(tangent1.linear_fields["dilation"].as_total(), points)
        verdict = LiftService.is_linear(LiftService.vertical_lift(tangent1.sections["X"]), points)
        assert not verdict
        assert verdict.residuals["additivity"] > 0.0

    def test_dual_linear_field(self, tangent2):
        dual_field = LiftService.dual_linear_field(tangent2.linear_fields["scaling"])
        assert dual_field.matrix_at([2.0, 3.0]) == [[-2.0, -3.0], [-0.0, -1.0]]


class TestCompleteLift:
    """Levantamiento completo de secciones."""

    def test_tangent_line(self):
        A = AlgebroidService.tangent_algebroid(1)
        lift = LiftService.complete_lift(A, section(1, "x0"))
        assert lift.matrix_at([0.3])[0][0] == pytest.approx(1.0)
        assert lift.base.evaluate([0.3]) == pytest.approx((0.3,))

    def test_so3_basis(self, so3):
        A = so3.algebroid
        lift = LiftService.complete_lift(A, A.basis(0))
        assert lift.matrix_at([0.0]) == [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]]
        image = AlgebroidService.cdo_apply(LiftService.cdo_from_linear(lift), A.basis(1))
        assert image.evaluate([0.0]) == pytest.approx((0.0, 0.0, 1.0))

    def test_abelian_without_anchor_is_zero(self):
        A = AlgebroidService.lie_algebra(2, {})
        lift = LiftService.complete_lift(A, SectionA.constant(1, (1.0, 2.0)))
        assert lift.matrix_at([0.0]) == [[0.0, 0.0], [0.0, 0.0]]
        assert lift.base.evaluate([0.0]) == (0.0,)

    def test_complete_lift_is_morphic(self, tangent2):
        A = tangent2.algebroid
        lift = LiftService.complete_lift(A, tangent2.sections["X"])
        assert LiftService.is_morphic(A, lift, [[0.2, -0.4], [0.9, 0.1]])

    def test_non_derivation_is_not_morphic(self, so3):
        one, zero = ScalarField.const(1, 1.0), ScalarField.zero(1)
        D = CovDiffOp(ChartVectorField.zero(1), ((one, zero, zero), (zero, one, zero), (zero, zero, zero)))
        verdict = LiftService.is_morphic(so3.algebroid, LiftService.linear_from_cdo(D), [[0.0], [0.5]])
        assert not verdict
        assert verdict.residuals["derivation"] >= 1.0
        assert verdict.residuals["anchor"] == 0.0


class TestIntrinsicDerivative:
    """Derivada intrínseca en un cero de la sección."""

    C = 0.4

    def _section(self) -> SectionA:
        return section(1, f"x0 - {self.C}")

    def test_value(self):
        xi = LiftService.linear_from_cdo(dilation_cdo())
        assert LiftService.intrinsic_derivative(xi, self._section(), [self.C]) == pytest.approx((self.C,))

    def test_residual_at_zero(self):
        xi = LiftService.linear_from_cdo(dilation_cdo())
        assert LiftService.intrinsic_derivative_residual(xi, self._section(), [self.C]) < 1e-12

    def test_requires_zero(self):
        xi = LiftService.linear_from_cdo(dilation_cdo())
        with pytest.raises(PreconditionError):
            LiftService.intrinsic_derivative_residual(xi, self._section(), [self.C + 1.0])

    def test_flow_agrees(self):
        xi = LiftService.linear_from_cdo(dilation_cdo())
        value = LiftService.intrinsic_derivative_flow(xi, self._section(), [self.C])
        assert value == pytest.approx((self.C,), abs=1e-5)


class TestTangentPairing:
    """Apareamiento entre TA* y TA."""

    M = (0.5,)

    def test_vertical_vectors(self):
        frak = TotalTangent(TotalPoint(self.M, (2.0,)), (0.0,), (0.0,))
        xi = TotalTangent(TotalPoint(self.M, (1.0,)), (0.0,), (3.0,))
        assert LiftService.tangent_pairing(frak, xi) == pytest.approx(6.0)

    def test_independent_of_extensions(self):
        frak = TotalTangent(TotalPoint(self.M, (2.0,)), (1.0,), (0.3,))
        xi = TotalTangent(TotalPoint(self.M, (1.0,)), (1.0,), (-0.4,))
        constant = LiftService.tangent_pairing(frak, xi)
        varying = LiftService.tangent_pairing(
            frak, xi,
            phi_ext=dual(1, "2 + (x0 - 0.5)*x0"),
            x_ext=section(1, "1 + (x0 - 0.5)*3"),
        )
        assert constant == pytest.approx(-0.5)
        assert varying == pytest.approx(constant)

    def test_extension_must_pass_through_point(self):
        frak = TotalTangent(TotalPoint(self.M, (2.0,)), (0.0,), (0.0,))
        xi = TotalTangent(TotalPoint(self.M, (1.0,)), (0.0,), (3.0,))
        with pytest.raises(BaseMismatchError):
            LiftService.tangent_pairing(frak, xi, phi_ext=dual(1, "x0"))

    def test_different_projections(self):
        frak = TotalTangent(TotalPoint(self.M, (2.0,)), (1.0,), (0.0,))
        xi = TotalTangent(TotalPoint(self.M, (1.0,)), (0.0,), (3.0,))
        with pytest.raises(BaseMismatchError):
            LiftService.tangent_pairing(frak, xi)


class TestDecompose:
    """Descomposición sobre una base de campos estrella."""

    def _star_basis(self, A):
        return [LiftService.complete_lift(A, A.basis(a)) for a in range(A.base_dim)]

    def test_vertical_field(self, tangent2):
        A = tangent2.algebroid
        at = TotalPoint((0.3, 0.7), (1.0, 2.0))
        result = LiftService.decompose(LiftService.vertical_lift(tangent2.sections["X"]), at, self._star_basis(A))
        assert result.coefficients == pytest.approx((0.0, 0.0))
        assert result.remainder == pytest.approx((0.7, -0.3))
        assert result.condition == pytest.approx(1.0)
        assert result.residual == 0.0

    def test_complete_lift(self, tangent2):
        A = tangent2.algebroid
        at = TotalPoint((0.3, 0.7), (1.0, 2.0))
        field = LiftService.complete_lift(A, tangent2.sections["X"]).as_total()
        result = LiftService.decompose(field, at, self._star_basis(A))
        assert result.coefficients == pytest.approx((0.7, -0.3))
        assert result.remainder == pytest.approx((2.0, -1.0))

    def test_basis_size(self, tangent2):
        at = TotalPoint((0.3, 0.7), (1.0, 2.0))
        with pytest.raises(DimensionMismatchError):
            LiftService.decompose(
                LiftService.vertical_lift(tangent2.sections["X"]), at, self._star_basis(tangent2.algebroid)[:1]
            )


class TestLinearOneForm:
    """1-formas lineales determinadas por sus apareamientos."""

    def test_pairings(self, tangent2):
        family = [tangent2.linear_fields["rotation_lift"], tangent2.linear_fields["scaling"]]
        values = [ScalarField.coordinate(4, 2), ScalarField.const(4, 3.0)]
        upsilon = LiftService.linear_oneform(tangent2.dual_sections["phi"], family, values)
        p = [0.5, 0.3, 1.0, -2.0]
        for xi, value in zip(family, values):
            assert upsilon.pair(xi.as_total()).evaluate(p) == pytest.approx(value.evaluate(p))
        Y = tangent2.sections["Y"]
        expected = tangent2.dual_sections["phi"].pair(Y).evaluate(p[:2])
        assert upsilon.pair(LiftService.vertical_lift(Y)).evaluate(p) == pytest.approx(expected)

    def test_family_size(self, tangent2):
        with pytest.raises(DimensionMismatchError):
            LiftService.linear_oneform(
                tangent2.dual_sections["phi"], [tangent2.linear_fields["scaling"]], [ScalarField.zero(4)]
            )

    def test_pullback_form(self, tangent1):
        form = LiftService.pullback_form(tangent1.one_forms["omega"], 1)
        assert form.evaluate(TotalPoint((2.0,), (5.0,))) == pytest.approx((4.0, 0.0))


class TestFlows:
    """Flujos de campos del espacio total."""

    def test_zero_time(self, tangent1):
        start = TotalPoint((0.5,), (1.0,))
        end = LiftService.flow(tangent1.linear_fields["dilation"].as_total(), start, 0.0, 4)
        assert end == start

    def test_linear_flow(self, tangent1):
        defect = LiftService.flow_linearity_defect(
            tangent1.linear_fields["dilation"].as_total(), [0.5], [1.0], [-2.0], 0.5
        )
        assert defect.is_linear(1e-6)

    def test_vertical_flow_is_affine(self, tangent1):
        defect = LiftService.flow_linearity_defect(
            LiftService.vertical_lift(tangent1.sections["X"]), [1.0], [1.0], [-2.0], 0.5
        )
        assert defect.affine_defect < 1e-9
        assert defect.offset == pytest.approx(0.5)
        assert not defect.is_linear(1e-6)

    def test_dual_flow_preserves_pairing(self, tangent2):
        defect = LiftService.dual_flow_pairing_defect(
            tangent2.linear_fields["scaling"], [0.4, 0.2], [1.0, -1.0], [0.5, 2.0], 0.5
        )
        assert defect < 1e-6
