"""
Tests de la línea de comandos: códigos de salida y formatos de reporte.
"""
import json

from config import AppConfig
from main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from models.report import CheckResult, SuiteReport
from repositories.report_repository import SuiteRunRepository


def archive_reports(archive_db):
    """Archiva una ejecución aprobada y una fallida; devuelve sus ids."""
    repo = SuiteRunRepository()
    with archive_db.get_db() as db:
        ok = repo.save_report(
            db, SuiteReport("dual", 1, [CheckResult("so3: Jacobi", "dual-jacobi", 0.0, 1e-9, 2)]), "gallery/so3.model"
        )
        bad = repo.save_report(
            db, SuiteReport("lifts", 2, [CheckResult("so3: X~", "lift-homomorphism", 1.0, 1e-8, 2)]), "b.model"
        )
        ids = ok.id, bad.id
    return ids


class TestValidateCommand:
    """Comando validate."""

    def test_gallery_model_passes(self, gallery_dir, capsys):
        code = main(["validate", str(gallery_dir / "heisenberg.model"), "--points", "5"])
        assert code == EXIT_OK
        assert "0 fallidas" in capsys.readouterr().out

    def test_broken_model_fails(self, gallery_dir, capsys):
        code = main(["validate", str(gallery_dir / "broken" / "so3_broken.model"), "--points", "3"])
        assert code == EXIT_FAILED
        assert "[FALLA]" in capsys.readouterr().out

    def test_zero_points_is_usage_error(self, gallery_dir):
        assert main(["validate", str(gallery_dir / "so3.model"), "--points", "0"]) == EXIT_USAGE

    def test_json_output(self, gallery_dir, capsys):
        code = main(["validate", str(gallery_dir / "so3.model"), "--points", "3", "--format", "json"])
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["suite"] == "validate"
        assert data["seed"] == 0
        assert list(data["checks"][0]) == ["label", "anchor", "residual", "tol", "pass", "points", "ms"]


class TestSuiteCommand:
    """Comando suite."""

    def test_unknown_suite(self, gallery_dir):
        assert main(["suite", "everything", str(gallery_dir)]) == EXIT_USAGE

    def test_same_seed_same_bytes(self, gallery_dir, capsys):
        args = ["suite", "dual", str(gallery_dir / "tangent1.model"), "--points", "2", "--seed", "4", "--format", "json"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first

    def test_full_gallery(self, gallery_dir, capsys):
        code = main(["suite", "all", str(gallery_dir), "--seed", "7", "--points", "2"])
        out = capsys.readouterr().out
        assert code == EXIT_OK, out
        assert " 0 fallidas" in out


class TestFlowCommand:
    """Comando flow."""

    def test_linear_flow(self, gallery_dir, capsys):
        code = main(["flow", str(gallery_dir / "tangent1.model"), "dilation", "--t", "0.5", "--steps", "16"])
        assert code == EXIT_OK
        assert "Flujo lineal" in capsys.readouterr().out

    def test_missing_time(self, gallery_dir):
        assert main(["flow", str(gallery_dir / "tangent1.model"), "dilation"]) == EXIT_USAGE

    def test_unknown_field(self, gallery_dir):
        assert main(["flow", str(gallery_dir / "tangent1.model"), "nada", "--t", "1"]) == EXIT_USAGE


class TestHistoryCommand:
    """Comando history sobre el archivo de reportes."""

    def test_empty_archive(self, archive_db, capsys):
        assert main(["history"]) == EXIT_OK
        assert "No hay ejecuciones archivadas" in capsys.readouterr().out

    def test_failed_only(self, archive_db, capsys):
        ok_id, bad_id = archive_reports(archive_db)
        assert main(["history", "--failed"]) == EXIT_OK
        out = capsys.readouterr().out
        assert f"#{bad_id:<4}" in out
        assert f"#{ok_id:<4}" not in out

    def test_delete(self, archive_db, capsys):
        ok_id, bad_id = archive_reports(archive_db)
        assert main(["history", "--delete", str(ok_id)]) == EXIT_OK
        assert main(["history", "--delete", str(ok_id)]) == EXIT_USAGE
        capsys.readouterr()
        main(["history"])
        out = capsys.readouterr().out
        assert f"#{ok_id:<4}" not in out
        assert f"#{bad_id:<4}" in out

    def test_failed_and_delete_are_exclusive(self, archive_db):
        assert main(["history", "--failed", "--delete", "1"]) == EXIT_USAGE


class TestParser:
    """Opciones generales."""

    def test_version(self, capsys):
        assert main(["--version"]) == EXIT_OK
        assert AppConfig.APP_VERSION in capsys.readouterr().out

    def test_no_command(self):
        assert main([]) == EXIT_USAGE
