"""
Árbol de sintaxis del lenguaje de expresiones de modelos.
"""
import re
from dataclasses import dataclass
from typing import Optional, Union

VARIABLE_PATTERN = re.compile(r"^([xv])(\d+)$")


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Variable:
    kind: str  # "x" (base) o "v" (fibra)
    index: int

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    function: str
    argument: "Expr"


Expr = Union[Number, Variable, UnaryOp, BinaryOp, Call]


@dataclass(frozen=True)
class VariableScope:
    """
    Variables permitidas: x0..x{base_dim-1} y, si allow_fiber, v0..v{fiber_dim-1}.
    Las variables de fibra ocupan las posiciones base_dim.. del punto.
    """
    base_dim: int
    fiber_dim: int = 0
    allow_fiber: bool = False

    @property
    def dim(self) -> int:
        return self.base_dim + (self.fiber_dim if self.allow_fiber else 0)

    def resolve(self, name: str) -> Optional[Variable]:
        match = VARIABLE_PATTERN.match(name)
        if not match:
            return None
        kind, index = match.group(1), int(match.group(2))
        if kind == "x" and index < self.base_dim:
            return Variable(kind, index)
        if kind == "v" and self.allow_fiber and index < self.fiber_dim:
            return Variable(kind, index)
        return None

    def offset(self, variable: Variable) -> int:
        return variable.index if variable.kind == "x" else self.base_dim + variable.index
