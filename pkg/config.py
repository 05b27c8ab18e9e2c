"""
Configuración centralizada para Algebroid Lifts.
Las tolerancias y parámetros de muestreo son constantes de código; solo el
archivo de reportes y el logging leen variables de entorno.
"""
import os
import logging
from typing import Optional


class VerificationConfig:
    """Tolerancias y parámetros de muestreo de las verificaciones."""

    # Tolerancias por familia de identidades
    TOL_AXIOMS: float = 1e-9
    TOL_BRACKETS: float = 1e-8
    TOL_ONE_NESTED: float = 1e-7
    TOL_TWO_NESTED: float = 1e-6
    TOL_DUAL_FLOW: float = 1e-5
    TOL_EXACT: float = 1e-12
    # Las verificaciones de concordancia cuentan discrepancias
    AGREEMENT_TOL: float = 1.0

    # Muestreo
    DEFAULT_POINTS: int = 12
    DEFAULT_SEED: int = 0
    SAMPLE_BOX: float = 1.0
    MAX_POINTS: int = 10000
    # Fracción de --points para identidades con derivadas anidadas sobre P × P o TP
    HEAVY_FRACTION: float = 0.25
    # Mínimos de muestras de D_ξ̃ = D_ξ y del corchete explícito del bialgebroide
    LIE_FUNCTOR_POINTS: int = 50
    LBA_POINTS: int = 30
    VALIDATE_POINTS: int = 100
    # Muestras de la condición estrella cuando el llamador no da puntos
    STAR_CHECK_POINTS: int = 4
    # Dimensión máxima de la base de los groupoides de pares en las baterías
    PAIR_MAX_DIM: int = 2
    # Escala de los coeficientes de los polinomios aleatorios
    RANDOM_SCALE: float = 0.5

    # Casos por batería
    MORPHIC_CASES: int = 20
    COISOTROPY_CASES: int = 30
    STAR_FIELDS: int = 10
    LBA_CASES: int = 5

    # Diferencias finitas y flujos
    FD_STEP: float = 1e-5
    RK4_STEPS: int = 64
    FLOW_TIMES: tuple = (0.1, 0.5, 1.0)

    # Sistemas lineales puntuales
    CONDITION_LIMIT: float = 1e12


class DatabaseConfig:
    """Configuración del archivo de reportes."""

    # URL de base de datos - puede ser sobrescrita con variable de entorno
    DATABASE_URL: str = os.getenv("DATABASE_URL", "sqlite:///algebroid_lifts.db")

    # Configuración de SQLAlchemy
    ECHO_SQL: bool = os.getenv("ECHO_SQL", "false").lower() == "true"


class AppConfig:
    """Configuración general de la aplicación."""

    APP_NAME: str = "Algebroid Lifts"
    APP_VERSION: str = "1.0.0"

    # Modo debug
    DEBUG: bool = os.getenv("DEBUG", "false").lower() == "true"


class LoggingConfig:
    """Configuración de logging."""

    LEVEL: int = logging.DEBUG if AppConfig.DEBUG else logging.INFO

    FORMAT: str = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
    DATE_FORMAT: str = "%Y-%m-%d %H:%M:%S"

    # Archivo de log (opcional)
    LOG_FILE: Optional[str] = os.getenv("LOG_FILE", None)


def setup_logging() -> logging.Logger:
    """
    Configura el logging de la aplicación sobre stderr.

    Retorna:
        Logger: Logger raíz "algebroid_lifts" configurado
    """
    root_logger = logging.getLogger("algebroid_lifts")
    root_logger.setLevel(LoggingConfig.LEVEL)

    # Idempotente: no duplicar handlers al reimportar
    if root_logger.handlers:
        return root_logger

    formatter = logging.Formatter(
        LoggingConfig.FORMAT,
        datefmt=LoggingConfig.DATE_FORMAT
    )

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if LoggingConfig.LOG_FILE:
        file_handler = logging.FileHandler(LoggingConfig.LOG_FILE)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    return root_logger


# Inicializar logger
logger = setup_logging()
