"""
Tests de la estructura de Poisson lineal sobre A*.
"""
import pytest

from models.algebroid import CovDiffOp, DualSection
from models.expr import VariableScope
from models.fields import Bivector, ChartVectorField, ScalarField
from models.total_space import section_linear_function
from services.dual_poisson_service import DualPoissonService
from services.expression_service import ExpressionService
from services.lift_service import LiftService
from utils.exceptions import DimensionMismatchError, NonPoissonError

SYMPLECTIC = Bivector(2, {(0, 1): ScalarField.const(2, 1.0)})


def compile_all(dim: int, *sources: str):
    scope = VariableScope(dim)
    return tuple(ExpressionService.compile_text(s, scope) for s in sources)


class TestBracket:
    """Corchete de Poisson lineal."""

    def test_so3_linear_functions(self, so3):
        A = so3.algebroid
        F = section_linear_function(A.basis(0))
        G = section_linear_function(A.basis(1))
        bracket = DualPoissonService.poisson_bracket(A, F, G)
        assert bracket.evaluate([0.0, 0.1, 0.2, 0.3]) == pytest.approx(0.3)

    def test_anchor_term(self, tangent1):
        A = tangent1.algebroid
        xi = ScalarField.coordinate(2, 1)
        pulled = ExpressionService.compile_text("x0^2", VariableScope(1)).pullback(2)
        bracket = DualPoissonService.poisson_bracket(A, xi, pulled)
        assert bracket.evaluate([1.5, 0.7]) == pytest.approx(3.0)

    def test_base_functions_commute(self, tangent2):
        A = tangent2.algebroid
        x0, x1 = ScalarField.coordinate(4, 0), ScalarField.coordinate(4, 1)
        assert DualPoissonService.poisson_bracket(A, x0, x1).evaluate([0.1, 0.2, 0.3, 0.4]) == 0.0

    def test_function_dimension(self, so3):
        with pytest.raises(DimensionMismatchError):
            DualPoissonService.poisson_bracket(so3.algebroid, ScalarField.zero(3), ScalarField.zero(4))

    def test_jacobi(self, so3, load_gallery):
        point = [[0.0, 0.2, 0.9, -0.3]]
        assert DualPoissonService.jacobi_residual(so3.algebroid, point) < 1e-12
        broken = load_gallery("broken/so3_broken").algebroid
        assert DualPoissonService.jacobi_residual(broken, point) == pytest.approx(0.9)


class TestHamiltonian:
    """Campos hamiltonianos de funciones lineales."""

    POINTS = [[0.3, -0.5, 1.0, 2.0], [-0.8, 0.4, -1.5, 0.5]]

    def test_sharp_matches_relations(self, tangent2):
        A = tangent2.algebroid
        f = ExpressionService.compile_text("x0*x1^2", VariableScope(2))
        residual = DualPoissonService.hamiltonian_relations_residual(
            A, tangent2.sections["X"], tangent2.sections["Y"], f, self.POINTS
        )
        assert residual.value < 1e-9

    def test_commutators(self, tangent2):
        residual = DualPoissonService.hamiltonian_commutator_residual(
            tangent2.algebroid, tangent2.sections["X"], tangent2.sections["Y"],
            tangent2.dual_sections["phi"], self.POINTS,
        )
        assert residual.value < 1e-8

    def test_pullback_sharp(self, tangent2):
        residual = DualPoissonService.pullback_sharp_residual(
            tangent2.algebroid, tangent2.one_forms["omega"], self.POINTS
        )
        assert residual.value < 1e-12

    def test_pairings(self, tangent2):
        residual = DualPoissonService.pairing_residual(
            tangent2.algebroid, tangent2.sections["X"], tangent2.sections["Y"],
            tangent2.one_forms["omega"], self.POINTS,
        )
        assert residual.value < 1e-9

    def test_so3_hamiltonian(self, so3):
        H = DualPoissonService.hamiltonian_of_section(so3.algebroid, so3.algebroid.basis(0))
        assert H.field.evaluate([0.0, 1.0, 2.0, 3.0]) == pytest.approx((0.0, 0.0, 3.0, -2.0))


class TestPoissonFields:
    """Prueba de campos de Poisson sobre A*."""

    def test_hamiltonian_is_poisson(self, tangent2):
        A = tangent2.algebroid
        H = DualPoissonService.hamiltonian_of_section(A, tangent2.sections["X"])
        assert DualPoissonService.is_poisson_field(A, H, [[0.3, -0.5, 1.0, 2.0]])

    def test_dual_of_complete_lift_is_poisson(self, so3):
        A = so3.algebroid
        lift = LiftService.complete_lift(A, A.basis(2))
        V = LiftService.dual_linear_field(lift).as_total()
        assert DualPoissonService.is_poisson_field(A, V, [[0.0, 0.2, 0.9, -0.3]])

    def test_non_derivation_dual_is_not_poisson(self, so3):
        one, zero = ScalarField.const(1, 1.0), ScalarField.zero(1)
        D = CovDiffOp(ChartVectorField.zero(1), ((one, zero, zero), (zero, one, zero), (zero, zero, zero)))
        V = LiftService.dual_linear_field(LiftService.linear_from_cdo(D)).as_total()
        verdict = DualPoissonService.is_poisson_field(so3.algebroid, V, [[0.0, 0.2, 0.9, -0.3]])
        assert not verdict
        assert verdict.residual == pytest.approx(0.6)

    def test_field_dimension(self, so3, tangent1):
        V = tangent1.linear_fields["dilation"].as_total()
        with pytest.raises(DimensionMismatchError):
            DualPoissonService.poisson_field_defect(so3.algebroid, V, [[0.0, 0.0]])


class TestCoisotropy:
    """Coisotropía de grafos de secciones duales."""

    POINTS = [[0.3, -0.6], [1.1, 0.4]]

    def test_non_closed_section(self, tangent2):
        phi = DualSection(2, compile_all(2, "x1", "0"))
        check = DualPoissonService.is_coisotropic_graph(tangent2.algebroid, phi, self.POINTS)
        assert not check.coisotropic
        assert not check.reference
        assert check.agree

    def test_exact_section(self, tangent2):
        phi = DualSection(2, compile_all(2, "x1", "x0"))
        check = DualPoissonService.is_coisotropic_graph(tangent2.algebroid, phi, self.POINTS)
        assert check.coisotropic
        assert check.reference

    def test_zero_section_of_lie_algebra(self, so3):
        phi = DualSection.zero(1, 3)
        check = DualPoissonService.is_coisotropic_graph(so3.algebroid, phi, [[0.0]])
        assert check.coisotropic and check.agree

    def test_graph_points(self, tangent2):
        points = DualPoissonService.graph_points(tangent2.dual_sections["phi"], [[0.5, 2.0]])
        assert points == [[0.5, 2.0, 2.0, 0.25]]


class TestTangentCoisotropy:
    """Campos de Poisson vistos como imágenes coisotrópicas en TP."""

    POINTS = [[0.3, -0.6], [1.1, 0.4]]

    @pytest.mark.parametrize("sources, expected", [
        (("1", "0"), True),
        (("x0", "0"), False),
        (("0", "0"), True),
        (("x1", "-x0"), True),
    ])
    def test_symplectic_plane(self, sources, expected):
        X = ChartVectorField(compile_all(2, *sources))
        check = DualPoissonService.poisson_field_via_tangent_coisotropy(SYMPLECTIC, X, self.POINTS)
        assert check.coisotropic.passed is expected
        assert check.reference.passed is expected

    def test_non_poisson_bivector(self):
        pi = Bivector(3, {(0, 1): ScalarField.const(3, 1.0), (1, 2): ScalarField.coordinate(3, 1)})
        with pytest.raises(NonPoissonError):
            DualPoissonService.poisson_field_via_tangent_coisotropy(
                pi, ChartVectorField.zero(3), [[0.0, 0.0, 0.0]]
            )

    def test_dimension(self):
        with pytest.raises(DimensionMismatchError):
            DualPoissonService.poisson_field_via_tangent_coisotropy(
                SYMPLECTIC, ChartVectorField.zero(3), self.POINTS
            )
