"""
Aritmética de jets de primer orden (números duales etiquetados).

Cada llamada a `derivative` crea una etiqueta nueva; un jet con etiqueta t
solo contiene jets de etiqueta menor en sus componentes, de modo que las
derivadas anidadas (orden 2 y superiores) no se confunden entre sí.
"""
import itertools
import math
from numbers import Real
from typing import Callable, List, Sequence, Tuple, Union

_TAGS = itertools.count(1)


class Jet:
    """Valor truncado a primer orden: value + slope·ε_tag."""

    __slots__ = ("value", "slope", "tag")

    def __init__(self, value: "Num", slope: "Num", tag: int):
        self.value = value
        self.slope = slope
        self.tag = tag

    def __repr__(self) -> str:
        return f"Jet({self.value!r}, {self.slope!r}, tag={self.tag})"

    def __add__(self, other):
        if not _is_num(other):
            return NotImplemented
        tag = _top_tag(self, other)
        a1, b1 = _split(self, tag)
        a2, b2 = _split(other, tag)
        return _make(a1 + a2, b1 + b2, tag)

    __radd__ = __add__

    def __sub__(self, other):
        if not _is_num(other):
            return NotImplemented
        tag = _top_tag(self, other)
        a1, b1 = _split(self, tag)
        a2, b2 = _split(other, tag)
        return _make(a1 - a2, b1 - b2, tag)

    def __rsub__(self, other):
        if not _is_num(other):
            return NotImplemented
        tag = _top_tag(self, other)
        a1, b1 = _split(other, tag)
        a2, b2 = _split(self, tag)
        return _make(a1 - a2, b1 - b2, tag)

    def __mul__(self, other):
        if not _is_num(other):
            return NotImplemented
        tag = _top_tag(self, other)
        a1, b1 = _split(self, tag)
        a2, b2 = _split(other, tag)
        return _make(a1 * a2, a1 * b2 + b1 * a2, tag)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _is_num(other):
            return NotImplemented
        return _divide(self, other)

    def __rtruediv__(self, other):
        if not _is_num(other):
            return NotImplemented
        return _divide(other, self)

    def __neg__(self):
        return Jet(-self.value, -self.slope, self.tag)

    def __pos__(self):
        return self

    def __pow__(self, other):
        if not _is_num(other):
            return NotImplemented
        return power(self, other)

    def __rpow__(self, other):
        if not _is_num(other):
            return NotImplemented
        return power(other, self)


Num = Union[float, Jet]


def _is_num(x) -> bool:
    return isinstance(x, (Jet, Real))


def _top_tag(x: Num, y: Num) -> int:
    tx = x.tag if isinstance(x, Jet) else 0
    ty = y.tag if isinstance(y, Jet) else 0
    return tx if tx > ty else ty


def _split(x: Num, tag: int) -> Tuple[Num, Num]:
    if isinstance(x, Jet) and x.tag == tag:
        return x.value, x.slope
    return x, 0.0


def _make(value: Num, slope: Num, tag: int) -> Num:
    # Una pendiente exactamente nula no necesita jet.
    if not isinstance(slope, Jet) and slope == 0:
        return value
    return Jet(value, slope, tag)


def _divide(x: Num, y: Num) -> Num:
    tag = _top_tag(x, y)
    if tag == 0:
        return x / y
    a1, b1 = _split(x, tag)
    a2, b2 = _split(y, tag)
    quotient = _divide(a1, a2)
    return _make(quotient, _divide(b1 - quotient * b2, a2), tag)


def primal(x: Num) -> float:
    """Parte real más interna de un valor (descarta todas las perturbaciones)."""
    while isinstance(x, Jet):
        x = x.value
    return float(x)


def sin(x: Num) -> Num:
    if isinstance(x, Jet):
        return _make(sin(x.value), cos(x.value) * x.slope, x.tag)
    return math.sin(x)


def cos(x: Num) -> Num:
    if isinstance(x, Jet):
        return _make(cos(x.value), -sin(x.value) * x.slope, x.tag)
    return math.cos(x)


def exp(x: Num) -> Num:
    if isinstance(x, Jet):
        value = exp(x.value)
        return _make(value, value * x.slope, x.tag)
    return math.exp(x)


def log(x: Num) -> Num:
    if isinstance(x, Jet):
        return _make(log(x.value), _divide(x.slope, x.value), x.tag)
    if x <= 0:
        raise ValueError("logaritmo de un argumento no positivo")
    return math.log(x)


def sqrt(x: Num) -> Num:
    if isinstance(x, Jet):
        root = sqrt(x.value)
        return _make(root, _divide(x.slope, 2.0 * root), x.tag)
    if x < 0:
        raise ValueError("raíz cuadrada de un argumento negativo")
    return math.sqrt(x)


def _power_const(x: Num, c: float) -> Num:
    if isinstance(x, Jet):
        if c == 0:
            return 1.0
        return _make(_power_const(x.value, c), c * _power_const(x.value, c - 1) * x.slope, x.tag)
    if x < 0 and not float(c).is_integer():
        raise ValueError("potencia fraccionaria de un argumento negativo")
    if x == 0 and c < 0:
        raise ZeroDivisionError("potencia negativa de cero")
    return float(x) ** c


def power(x: Num, y: Num) -> Num:
    """x^y; con exponente jet se usa exp(y·ln x), que exige base positiva."""
    if not isinstance(y, Jet):
        return _power_const(x, float(y))
    if primal(x) <= 0:
        raise ValueError("potencia con exponente variable y base no positiva")
    return exp(y * log(x))


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "exp": exp,
    "ln": log,
    "sqrt": sqrt,
}


def new_tag() -> int:
    return next(_TAGS)


def tangent(x: Num, tag: int) -> Num:
    """Extrae el coeficiente de ε_tag (cero si el valor no depende de él)."""
    if isinstance(x, Jet) and x.tag == tag:
        return x.slope
    return 0.0


def derivative(
    fn: Callable[[Sequence[Num]], Num],
    point: Sequence[Num],
    direction: Sequence[Num],
) -> Num:
    """
    Derivada direccional exacta de fn en point a lo largo de direction.

    Args:
        fn: Función de una secuencia de coordenadas
        point: Punto (puede contener jets de derivadas exteriores)
        direction: Dirección con la misma dimensión que point

    Retorna:
        D fn(point)[direction]
    """
    tag = new_tag()
    seeded = [_make(p, d, tag) if _is_nonzero(d) else p for p, d in zip(point, direction)]
    return tangent(fn(seeded), tag)


def _is_nonzero(d: Num) -> bool:
    return isinstance(d, Jet) or d != 0


def partial(fn: Callable[[Sequence[Num]], Num], point: Sequence[Num], index: int) -> Num:
    direction = [0.0] * len(point)
    direction[index] = 1.0
    return derivative(fn, point, direction)


def gradient(fn: Callable[[Sequence[Num]], Num], point: Sequence[Num]) -> List[Num]:
    return [partial(fn, point, i) for i in range(len(point))]
