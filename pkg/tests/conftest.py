"""
Configuración de pytest y fixtures de Algebroid Lifts.
"""
from pathlib import Path
from typing import Callable, Generator

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool

from models.base import Base
from models.registry import ModelRegistry
from services.model_service import ModelService
from utils.sampling import Sampler

# Base de datos de prueba - SQLite en memoria
TEST_DATABASE_URL = "sqlite:///:memory:"

GALLERY = Path(__file__).resolve().parent.parent / "gallery"


@pytest.fixture(scope="function")
def db_engine():
    """Motor nuevo para cada test."""
    engine = create_engine(
        TEST_DATABASE_URL,
        connect_args={"check_same_thread": False}
    )
    Base.metadata.create_all(bind=engine)
    yield engine
    Base.metadata.drop_all(bind=engine)


@pytest.fixture(scope="function")
def archive_db(monkeypatch):
    """Archivo de reportes en memoria compartido por las sesiones de main.py."""
    import database

    engine = create_engine(TEST_DATABASE_URL, connect_args={"check_same_thread": False}, poolclass=StaticPool)
    monkeypatch.setattr(database, "engine", engine)
    monkeypatch.setattr(database, "SessionLocal", sessionmaker(autocommit=False, autoflush=False, bind=engine))
    database.init_db()
    yield database
    engine.dispose()


@pytest.fixture(scope="function")
def db_session(db_engine) -> Generator[Session, None, None]:
    """Sesión de base de datos para el test."""
    SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=db_engine)
    session = SessionLocal()
    try:
        yield session
    finally:
        session.rollback()
        session.close()


@pytest.fixture(scope="session")
def gallery_dir() -> Path:
    return GALLERY


@pytest.fixture(scope="session")
def load_gallery() -> Callable[[str], ModelRegistry]:
    """Carga un modelo de la galería por nombre (broken/so3_broken incluido)."""
    cache = {}

    def load(name: str) -> ModelRegistry:
        if name not in cache:
            registry, error = ModelService.load_model_file(GALLERY / f"{name}.model")
            assert error is None, error
            cache[name] = registry
        return cache[name]

    return load


@pytest.fixture
def tangent1(load_gallery) -> ModelRegistry:
    return load_gallery("tangent1")


@pytest.fixture
def tangent2(load_gallery) -> ModelRegistry:
    return load_gallery("tangent2")


@pytest.fixture
def so3(load_gallery) -> ModelRegistry:
    return load_gallery("so3")


@pytest.fixture
def cotangent_symplectic(load_gallery) -> ModelRegistry:
    return load_gallery("cotangent_symplectic")


@pytest.fixture
def sampler() -> Sampler:
    """Muestreador sembrado; cada test recibe uno nuevo."""
    return Sampler(7)
