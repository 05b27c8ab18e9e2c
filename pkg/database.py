"""
Configuración y gestión de sesiones del archivo de reportes de Algebroid Lifts.
Maneja la conexión SQLite y la fábrica de sesiones.
"""
import logging
import os
from contextlib import contextmanager
from typing import Generator

from dotenv import load_dotenv
from sqlalchemy import create_engine
from sqlalchemy.orm import Session, sessionmaker

from config import DatabaseConfig
from models.base import Base

# Cargar variables de entorno desde .env
load_dotenv()

logger = logging.getLogger("algebroid_lifts.database")

DATABASE_URL = os.getenv("DATABASE_URL", DatabaseConfig.DATABASE_URL)

engine = create_engine(
    DATABASE_URL,
    echo=DatabaseConfig.ECHO_SQL,
    connect_args={"check_same_thread": False}
)

# Fábrica de sesiones
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


@contextmanager
def get_db() -> Generator[Session, None, None]:
    """
    Context manager para sesiones del archivo.
    Confirma al salir y revierte ante cualquier excepción.

    Uso:
        with get_db() as db:
            SuiteRunRepository().get_recent(db)
    """
    db = SessionLocal()
    try:
        yield db
        db.commit()
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()


def init_db() -> None:
    """Crea las tablas del archivo si no existen."""
    Base.metadata.create_all(bind=engine)
    logger.debug(f"Archivo de reportes listo en {DATABASE_URL}")
