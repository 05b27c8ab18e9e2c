"""
Repositorio base genérico para Algebroid Lifts.
Proporciona operaciones CRUD comunes sobre el archivo de reportes.
"""
from typing import Any, Generic, Optional, Type, TypeVar

from sqlalchemy.orm import Session

T = TypeVar("T")


class BaseRepository(Generic[T]):
    """
    Implementación base de repositorio con operaciones CRUD comunes.
    """
    def __init__(self, model: Type[T]):
        """
        Inicializa el repositorio con el modelo especificado.

        Args:
            model: Clase del modelo SQLAlchemy
        """
        self.model = model

    def get_by_id(self, db: Session, id: Any) -> Optional[T]:
        """
        Obtiene un registro por su ID.

        Retorna:
            Registro si se encuentra, None en caso contrario
        """
        return db.get(self.model, id)

    def create(self, db: Session, obj_in: T) -> T:
        """
        Crea un nuevo registro y lo envía a la base sin confirmar.

        Args:
            db: Sesión de base de datos
            obj_in: Objeto a crear

        Retorna:
            Objeto creado, con su ID asignado
        """
        db.add(obj_in)
        db.flush()
        return obj_in

    def delete(self, db: Session, id: Any) -> bool:
        """
        Elimina un registro por ID.

        Retorna:
            True si se eliminó, False si no se encontró
        """
        obj = self.get_by_id(db, id)
        if obj:
            db.delete(obj)
            return True
        return False
