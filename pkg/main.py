"""
Algebroid Lifts - Punto de Entrada Principal

Verificación numérica de levantamientos de algebroides de Lie: carga modelos
.model, ejecuta las baterías de identidades y reporta residuos en texto o JSON.

Códigos de salida: 0 todo aprobado, 1 alguna comprobación fallida,
2 error de uso o de entrada.
"""
import argparse
import logging
import math
import sys
from typing import List, Optional

from config import AppConfig, VerificationConfig, logger
from models.report import SuiteReport
from models.serializers import report_to_json, serialize_runs
from services.suite_service import SuiteService

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _print_report(report: SuiteReport, fmt: str) -> None:
    """Escribe el reporte en stdout; el logging va a stderr."""
    if fmt == "json":
        print(report_to_json(report))
        return
    print(f"{AppConfig.APP_NAME} - batería '{report.suite}' (semilla {report.seed})")
    for check in report.sorted_checks():
        state = "OK   " if check.passed else "FALLA"
        line = f"[{state}] {check.anchor:<38} {check.residual:.3e} < {check.tol:.0e}  {check.label}"
        if check.ms:
            line += f"  ({check.ms:.1f} ms)"
        print(line)
        if not check.passed and check.location:
            print(f"        {check.location}")
    failed = len(report.failed)
    print(f"{len(report.checks)} comprobaciones, {failed} fallidas")


def _archive(report: SuiteReport, path: str) -> None:
    from database import get_db, init_db
    from repositories.report_repository import SuiteRunRepository

    init_db()
    with get_db() as db:
        run = SuiteRunRepository().save_report(db, report, path)
        logger.info(f"Reporte archivado con id {run.id}")


def cmd_validate(args: argparse.Namespace) -> int:
    report, error = SuiteService.validate(args.path, args.points, args.seed, args.tol, args.timings)
    if error:
        logger.error(error)
        return EXIT_USAGE
    _print_report(report, args.format)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_suite(args: argparse.Namespace) -> int:
    report, error = SuiteService.run(args.name, args.path, args.points, args.seed, args.tol, args.timings)
    if error:
        logger.error(error)
        return EXIT_USAGE
    _print_report(report, args.format)
    if args.archive:
        _archive(report, args.path)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_flow(args: argparse.Namespace) -> int:
    result, error = SuiteService.flow_report(args.path, args.field, args.t, args.steps, args.seed)
    if error:
        logger.error(error)
        return EXIT_USAGE
    defect = result.defect
    print(f"Campo:      {result.name}")
    print(f"Inicio:     base {list(result.start.base)}, fibra {list(result.start.fiber)}")
    print(f"t = {result.t}, {result.steps} pasos RK4")
    print(f"Extremo:    base {list(defect.endpoint.base)}, fibra {list(defect.endpoint.fiber)}")
    print(f"Defecto afín: {defect.affine_defect:.3e}")
    print(f"Desplazamiento Φ_t(m, 0): {defect.offset:.3e}")
    print(f"Flujo {result.verdict}")
    return EXIT_OK


def cmd_history(args: argparse.Namespace) -> int:
    from database import get_db, init_db
    from repositories.report_repository import SuiteRunRepository

    init_db()
    repo = SuiteRunRepository()
    with get_db() as db:
        if args.delete is not None:
            if not repo.delete(db, args.delete):
                logger.error(f"Ejecución #{args.delete} no encontrada")
                return EXIT_USAGE
            print(f"Ejecución #{args.delete} eliminada")
            return EXIT_OK
        if args.failed:
            runs = repo.get_failed(db, args.limit)
        elif args.suite:
            runs = repo.get_by_suite(db, args.suite, args.limit)
        else:
            runs = repo.get_recent(db, args.limit)
        rows = serialize_runs(runs)
    if not rows:
        print("No hay ejecuciones archivadas")
        return EXIT_OK
    for row in rows:
        state = "OK   " if row["passed"] else "FALLA"
        stamp = row["created_at"].strftime("%Y-%m-%d %H:%M:%S")
        print(
            f"#{row['id']:<4} {stamp} [{state}] {row['suite']:<12} semilla {row['seed']:<6} "
            f"{row['total'] - row['failed']}/{row['total']}  {row['model_path']}"
        )
    return EXIT_OK


def _finite_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("se esperaba un número finito")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algebroid-lifts",
        description="Verificación numérica de levantamientos de algebroides de Lie",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {AppConfig.APP_VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Residuos por comprobación en el log")
    commands = parser.add_subparsers(dest="command", required=True)

    def common(sub: argparse.ArgumentParser, points: int) -> None:
        sub.add_argument("--points", type=int, default=points, help="Puntos de muestreo")
        sub.add_argument("--seed", type=int, default=VerificationConfig.DEFAULT_SEED, help="Semilla PCG64")
        sub.add_argument("--tol", type=_finite_float, default=None, help="Tolerancia global")
        sub.add_argument("--format", choices=("text", "json"), default="text")
        sub.add_argument("--timings", action="store_true", help="Medir el tiempo de cada comprobación")

    validate = commands.add_parser("validate", help="Axiomas del algebroide y Jacobi")
    validate.add_argument("path", help="Archivo .model o directorio")
    common(validate, VerificationConfig.VALIDATE_POINTS)
    validate.set_defaults(handler=cmd_validate)

    suite = commands.add_parser("suite", help="Batería de identidades")
    suite.add_argument("name", help="lifts, dual, pair, poisson-pair o all")
    suite.add_argument("path", help="Archivo .model o directorio")
    common(suite, VerificationConfig.DEFAULT_POINTS)
    suite.add_argument("--archive", action="store_true", help="Guardar el reporte en el archivo")
    suite.set_defaults(handler=cmd_suite)

    flow = commands.add_parser("flow", help="Flujo RK4 de un campo con nombre")
    flow.add_argument("path", help="Archivo .model")
    flow.add_argument("field", help="Campo lineal, ~X (levantamiento completo) o ^X (vertical)")
    flow.add_argument("--t", type=_finite_float, required=True, help="Tiempo final")
    flow.add_argument("--steps", type=int, default=VerificationConfig.RK4_STEPS, help="Pasos de RK4")
    flow.add_argument("--seed", type=int, default=VerificationConfig.DEFAULT_SEED)
    flow.set_defaults(handler=cmd_flow)

    history = commands.add_parser("history", help="Ejecuciones archivadas")
    history.add_argument("--suite", default=None)
    history.add_argument("--limit", type=int, default=10)
    selection = history.add_mutually_exclusive_group()
    selection.add_argument("--failed", action="store_true", help="Solo ejecuciones con comprobaciones fallidas")
    selection.add_argument("--delete", type=int, default=None, metavar="ID", help="Eliminar una ejecución archivada")
    history.set_defaults(handler=cmd_history)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Punto de entrada de la línea de comandos.

    Args:
        argv: Argumentos (sys.argv[1:] por defecto)

    Retorna:
        Código de salida
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.verbose:
        logger.setLevel(logging.DEBUG)
    try:
        return args.handler(args)
    except KeyboardInterrupt:
        logger.error("Interrumpido por el usuario")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
