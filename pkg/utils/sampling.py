"""
Muestreo reproducible para Algebroid Lifts.

Todas las muestras salen de numpy.random.Generator con PCG64 sembrado; el
mismo seed produce los mismos puntos en cualquier plataforma.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import VerificationConfig


class Sampler:
    """Fuente de puntos, vectores y polinomios aleatorios."""

    def __init__(self, seed: int = VerificationConfig.DEFAULT_SEED, box: float = VerificationConfig.SAMPLE_BOX):
        self.seed = seed
        self.box = box
        self.rng = np.random.Generator(np.random.PCG64(seed))

    def uniform(self, low: float = -1.0, high: float = 1.0) -> float:
        return float(self.rng.uniform(low, high))

    def vector(self, dim: int, scale: Optional[float] = None) -> Tuple[float, ...]:
        scale = self.box if scale is None else scale
        return tuple(float(v) for v in self.rng.uniform(-scale, scale, size=dim))

    def points(self, dim: int, count: int, scale: Optional[float] = None) -> List[Tuple[float, ...]]:
        """count puntos uniformes en [-scale, scale]^dim."""
        return [self.vector(dim, scale) for _ in range(count)]

    def matrix(self, rows: int, cols: int, scale: float = 1.0) -> List[List[float]]:
        return [list(self.vector(cols, scale)) for _ in range(rows)]

    def integer(self, low: int, high: int) -> int:
        """Entero en [low, high)."""
        return int(self.rng.integers(low, high))

    def choice(self, options: Sequence):
        return options[self.integer(0, len(options))]

    def polynomial_text(self, variables: Sequence[str], degree: int = 2, scale: float = 1.0) -> str:
        """
        Polinomio aleatorio de grado <= degree (a lo sumo cuadrático en cada
        término) escrito en el lenguaje de expresiones.
        """
        terms = [f"{self._coefficient(scale)!r}"]
        for name in variables:
            terms.append(f"{self._coefficient(scale)!r}*{name}")
        if degree >= 2:
            for i, first in enumerate(variables):
                for second in variables[i:]:
                    terms.append(f"{self._coefficient(scale)!r}*{first}*{second}")
        return " + ".join(f"({t})" if t.startswith("-") else t for t in terms)

    def _coefficient(self, scale: float) -> float:
        return round(self.uniform(-scale, scale), 6)
