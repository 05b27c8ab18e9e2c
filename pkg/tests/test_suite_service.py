"""
Tests del servicio de baterías: parámetros, validación, determinismo y flujos.
"""
import pytest

from config import VerificationConfig
from models.report import CheckResult, SuiteReport
from models.serializers import report_to_json
from services.lift_service import LiftService
from services.suite_service import ABORTED_ANCHOR, IDENTITY_ANCHORS, SUITES, SuiteContext, SuiteService


class TestParameters:
    """Errores de uso devueltos como (None, mensaje)."""

    def test_unknown_suite(self, gallery_dir):
        report, error = SuiteService.run("lift", gallery_dir / "tangent1.model")
        assert report is None
        assert "Batería desconocida" in error

    def test_zero_points(self, gallery_dir):
        report, error = SuiteService.run("lifts", gallery_dir / "tangent1.model", points=0)
        assert report is None
        assert "mayor a 0" in error

    def test_negative_tolerance(self, gallery_dir):
        report, error = SuiteService.validate(gallery_dir / "so3.model", points=2, tol=-1.0)
        assert report is None
        assert "tolerancia" in error

    def test_negative_seed(self, gallery_dir):
        _, error = SuiteService.validate(gallery_dir / "so3.model", points=2, seed=-1)
        assert "negativa" in error

    def test_missing_path(self, tmp_path):
        report, error = SuiteService.validate(tmp_path / "nada.model", points=2)
        assert report is None
        assert error

    def test_empty_directory(self, tmp_path):
        registries, error = SuiteService.load_models(tmp_path)
        assert registries == []
        assert "No hay archivos de modelo" in error


class TestValidate:
    """Validación de modelos de la galería."""

    def test_heisenberg(self, gallery_dir):
        report, error = SuiteService.validate(gallery_dir / "heisenberg.model", points=3, seed=1)
        assert error is None
        assert report.suite == "validate"
        assert report.passed
        assert set(report.anchors) <= set(IDENTITY_ANCHORS["validate"])

    def test_cotangent_checks_declared_bivectors(self, load_gallery):
        registry = load_gallery("cotangent_linear")
        report = SuiteService.validate_registry(registry, points=3, seed=2)
        jacobi = [c for c in report.checks if c.anchor == "poisson-jacobi"]
        assert len(jacobi) == 1 + len(registry.bivectors)
        assert report.passed

    def test_broken_model_fails(self, gallery_dir):
        report, error = SuiteService.validate(gallery_dir / "broken" / "so3_broken.model", points=3)
        assert error is None
        assert not report.passed
        assert {c.anchor for c in report.failed} == {"algebroid-axioms", "poisson-jacobi"}


class TestRun:
    """Ejecución de baterías."""

    def test_same_seed_same_json(self, gallery_dir):
        path = gallery_dir / "tangent1.model"
        first, _ = SuiteService.run("lifts", path, points=2, seed=7)
        second, _ = SuiteService.run("lifts", path, points=2, seed=7)
        assert report_to_json(first) == report_to_json(second)

    def test_lifts_on_tangent_line(self, gallery_dir):
        report, error = SuiteService.run("lifts", gallery_dir / "tangent1.model", points=2, seed=7)
        assert error is None
        assert report.passed, [c.label for c in report.failed]
        assert set(report.anchors) <= set(IDENTITY_ANCHORS["lifts"])
        assert all(c.label.startswith("tangent1: ") for c in report.checks)

    def test_timings(self, load_gallery):
        report = SuiteService.run_registry("lifts", load_gallery("tangent1"), points=2, seed=7, timings=True)
        assert any(c.ms > 0.0 for c in report.checks)

    def test_anchor_table_covers_suites(self):
        assert set(SUITES) | {"validate"} == set(IDENTITY_ANCHORS)
        assert ABORTED_ANCHOR not in {a for anchors in IDENTITY_ANCHORS.values() for a in anchors}

    def test_aborted_check_never_passes(self):
        check = CheckResult("so3: batería pair", ABORTED_ANCHOR, float("inf"), 0.0, 0)
        assert not check.passed


class TestSampleSizes:
    """Muestras de las comprobaciones según --points."""

    @pytest.mark.parametrize("points, expected", [(1, 1), (2, 1), (12, 3), (40, 10)])
    def test_heavy_count_follows_points(self, load_gallery, points, expected):
        ctx = SuiteContext.create(load_gallery("tangent1"), SuiteReport("pair", 0), points, 0)
        assert ctx.heavy_count == expected
        assert len(ctx.heavy_base) == expected

    def test_base_sample_has_minimum(self, load_gallery):
        ctx = SuiteContext.create(load_gallery("tangent2"), SuiteReport("pair", 0), 4, 0)
        points = ctx.base_sample(2, 10)
        assert len(points) == 10
        assert points[:4] == ctx.base
        assert len(ctx.base_sample(1, 2)) == 4

    def test_lie_functor_points(self, load_gallery):
        report = SuiteService.run_registry("pair", load_gallery("tangent1"), points=2, seed=7)
        functor = [c for c in report.checks if c.anchor == "lie-functor-lift" and "campos estrella" in c.label]
        assert functor[0].points == VerificationConfig.LIE_FUNCTOR_POINTS
        assert functor[0].passed

    def test_poisson_pair_samples_and_conditioning(self, load_gallery):
        report = SuiteService.run_registry("poisson-pair", load_gallery("cotangent_symplectic"), points=2, seed=7)
        lba = [c for c in report.checks if c.anchor == "bialgebroid-bracket"]
        assert lba[0].points == VerificationConfig.LBA_POINTS
        assert lba[0].passed
        pairings = [c for c in report.checks if c.anchor == "tilde-pairings"]
        assert "condición 1.00e+00" in pairings[0].location

    def test_nested_checks_follow_points(self, load_gallery):
        report = SuiteService.run_registry("pair", load_gallery("tangent1"), points=8, seed=7)
        nested = [c for c in report.checks if c.anchor == "d-xi-bracket" and c.tol == VerificationConfig.TOL_TWO_NESTED]
        assert nested[0].points == 2


class TestMorphicCases:
    """Casos de la equivalencia mórfico ⟺ Poisson."""

    @pytest.mark.parametrize("name", ["tangent2", "so3"])
    def test_designed_true_and_false(self, load_gallery, name):
        registry = load_gallery(name)
        ctx = SuiteContext.create(registry, SuiteReport("dual", 0), 4, 3)
        cases = SuiteService.morphic_cases(ctx)
        verdicts = [LiftService.is_morphic(registry.algebroid, xi, ctx.base).passed for xi in cases]
        assert len(cases) == VerificationConfig.MORPHIC_CASES
        assert verdicts.count(True) >= 5
        assert verdicts.count(False) >= 5
        random_gamma = [ok for xi, ok in zip(cases, verdicts) if xi.label.startswith("Γ")]
        assert len(random_gamma) >= 5
        assert not any(random_gamma)

    def test_battery_agrees(self, load_gallery):
        report = SuiteService.run_registry("dual", load_gallery("tangent2"), points=2, seed=7)
        morphic = [c for c in report.checks if c.anchor == "morphic-iff-poisson"]
        assert morphic[0].residual == 0.0


class TestFlowReport:
    """Informe del flujo de un campo con nombre."""

    def test_linear_field(self, gallery_dir):
        result, error = SuiteService.flow_report(gallery_dir / "tangent1.model", "dilation", 0.5, steps=32, seed=3)
        assert error is None
        assert result.verdict == "lineal"
        assert result.defect.offset == 0.0

    def test_vertical_lift_is_affine(self, gallery_dir):
        result, error = SuiteService.flow_report(gallery_dir / "tangent1.model", "^Y", 1.0, steps=16, seed=3)
        assert error is None
        assert result.verdict == "afín, no lineal"

    def test_zero_time(self, gallery_dir):
        result, _ = SuiteService.flow_report(gallery_dir / "so3.model", "~X", 0.0, steps=8, seed=3)
        assert result.defect.endpoint.coords == pytest.approx(result.start.coords)

    def test_unknown_field(self, gallery_dir):
        result, error = SuiteService.flow_report(gallery_dir / "tangent1.model", "Z", 1.0)
        assert result is None
        assert "'Z' no encontrado" in error

    def test_zero_steps(self, gallery_dir):
        result, error = SuiteService.flow_report(gallery_dir / "tangent1.model", "dilation", 1.0, steps=0)
        assert result is None
        assert "al menos 1" in error

    def test_non_finite_time(self, gallery_dir):
        _, error = SuiteService.flow_report(gallery_dir / "tangent1.model", "dilation", float("nan"))
        assert "finito" in error
