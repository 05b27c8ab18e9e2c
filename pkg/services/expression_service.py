"""
Servicio del lenguaje de expresiones para Algebroid Lifts.
Análisis léxico, parser de precedencias (Pratt), impresión canónica y
compilación de árboles a campos escalares diferenciables.
"""
import logging
import math
import re
from dataclasses import dataclass
from typing import Callable, List, Sequence

from models.expr import BinaryOp, Call, Expr, Number, UnaryOp, Variable, VariableScope
from models.fields import ScalarField
from utils.exceptions import EvaluationDomainError, LexicalError, ParseError, UnknownVariableError
from utils.jets import FUNCTIONS, Num, power, primal

logger = logging.getLogger("algebroid_lifts.services.expression")

NUMBER_PATTERN = re.compile(r"([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?")
NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
OPERATOR_CHARS = "+-*/^()"

# Potencias de enlace: (izquierda, derecha) de cada operador binario.
BINDING_POWER = {
    "+": (10, 11),
    "-": (10, 11),
    "*": (20, 21),
    "/": (20, 21),
    "^": (40, 39),
}
UNARY_BINDING_POWER = 30

# Precedencias del impresor: 5 para átomos y llamadas.
PRINT_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
UNARY_PRECEDENCE = 3
ATOM_PRECEDENCE = 5

START_TOKENS = ("número", "variable", "función", "'('", "'-'")


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "name", "op" o "end"
    text: str
    position: int


def tokenize(source: str) -> List[Token]:
    """
    Convierte el texto en una lista de tokens terminada en "end".

    Args:
        source: Texto de la expresión

    Retorna:
        Lista de tokens con su posición en el texto
    """
    tokens: List[Token] = []
    idx = 0
    while idx < len(source):
        c = source[idx]
        if c.isspace():
            idx += 1
            continue
        match = NUMBER_PATTERN.match(source, idx)
        if match:
            text = match.group(0)
            if not math.isfinite(float(text)):
                raise LexicalError(text, idx)
            tokens.append(Token("number", text, idx))
            idx = match.end()
            continue
        match = NAME_PATTERN.match(source, idx)
        if match:
            tokens.append(Token("name", match.group(0), idx))
            idx = match.end()
            continue
        if c in OPERATOR_CHARS:
            tokens.append(Token("op", c, idx))
            idx += 1
            continue
        raise LexicalError(c, idx)
    tokens.append(Token("end", "", len(source)))
    return tokens


class _Parser:
    """Parser de descenso con potencias de enlace sobre una lista de tokens."""

    def __init__(self, tokens: Sequence[Token], scope: VariableScope):
        self.tokens = tokens
        self.scope = scope
        self.idx = 0

    def peek(self) -> Token:
        return self.tokens[self.idx]

    def advance(self) -> Token:
        token = self.tokens[self.idx]
        self.idx += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.kind != "op" or token.text != text:
            raise ParseError(_describe(token), [f"'{text}'"], token.position)
        return self.advance()

    def parse(self) -> Expr:
        result = self.expression(0)
        token = self.peek()
        if token.kind != "end":
            raise ParseError(_describe(token), ["operador", "fin de la expresión"], token.position)
        return result

    def expression(self, min_bp: int) -> Expr:
        left = self.prefix()
        while True:
            token = self.peek()
            if token.kind != "op" or token.text not in BINDING_POWER:
                break
            left_bp, right_bp = BINDING_POWER[token.text]
            if left_bp <= min_bp:
                break
            self.advance()
            right = self.expression(right_bp)
            left = BinaryOp(token.text, left, right)
        return left

    def prefix(self) -> Expr:
        token = self.advance()
        if token.kind == "number":
            return Number(float(token.text))
        if token.kind == "op" and token.text == "-":
            return UnaryOp("-", self.expression(UNARY_BINDING_POWER))
        if token.kind == "op" and token.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if token.kind == "name":
            if token.text in FUNCTIONS:
                self.expect("(")
                argument = self.expression(0)
                self.expect(")")
                return Call(token.text, argument)
            variable = self.scope.resolve(token.text)
            if variable is None:
                raise UnknownVariableError(token.text, token.position)
            return variable
        raise ParseError(_describe(token), START_TOKENS, token.position)


def _describe(token: Token) -> str:
    return "fin de la expresión" if token.kind == "end" else token.text


def _precedence(expr: Expr) -> int:
    if isinstance(expr, BinaryOp):
        return PRINT_PRECEDENCE[expr.op]
    if isinstance(expr, UnaryOp):
        return UNARY_PRECEDENCE
    if isinstance(expr, Number) and (expr.value < 0 or math.copysign(1.0, expr.value) < 0):
        return UNARY_PRECEDENCE
    return ATOM_PRECEDENCE


def _wrap(expr: Expr, needs_parens: bool) -> str:
    text = ExpressionService.to_text(expr)
    return f"({text})" if needs_parens else text


def _has_variables(expr: Expr) -> bool:
    if isinstance(expr, Variable):
        return True
    if isinstance(expr, Number):
        return False
    if isinstance(expr, UnaryOp):
        return _has_variables(expr.operand)
    if isinstance(expr, Call):
        return _has_variables(expr.argument)
    return _has_variables(expr.left) or _has_variables(expr.right)


_BINARY: dict = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "^": power,
}


class ExpressionService:
    """Parseo, impresión y compilación de expresiones."""

    @classmethod
    def parse(cls, src: str, scope: VariableScope) -> Expr:
        """
        Parsea una expresión con las variables permitidas por el alcance.

        Precedencia: ^ > - unario > * / > + -; ^ asocia a la derecha.

        Args:
            src: Texto de la expresión (no vacío)
            scope: Variables permitidas

        Retorna:
            Árbol de sintaxis
        """
        tokens = tokenize(src)
        if tokens[0].kind == "end":
            raise ParseError("fin de la expresión", START_TOKENS, 0)
        return _Parser(tokens, scope).parse()

    @classmethod
    def to_text(cls, expr: Expr) -> str:
        """Texto canónico con los paréntesis mínimos para reconstruir el mismo árbol."""
        if isinstance(expr, Number):
            return repr(float(expr.value))
        if isinstance(expr, Variable):
            return expr.name
        if isinstance(expr, Call):
            return f"{expr.function}({cls.to_text(expr.argument)})"
        if isinstance(expr, UnaryOp):
            return "-" + _wrap(expr.operand, _precedence(expr.operand) < UNARY_PRECEDENCE)
        prec = PRINT_PRECEDENCE[expr.op]
        if expr.op == "^":
            left = _wrap(expr.left, _precedence(expr.left) < ATOM_PRECEDENCE)
            right = _wrap(expr.right, _precedence(expr.right) < UNARY_PRECEDENCE)
            return f"{left}^{right}"
        left = _wrap(expr.left, _precedence(expr.left) < prec)
        right = _wrap(expr.right, _precedence(expr.right) <= prec)
        return f"{left}{expr.op}{right}"

    @classmethod
    def compile(cls, expr: Expr, scope: VariableScope, label: str = "") -> ScalarField:
        """
        Compila un árbol a un ScalarField de dimensión scope.dim.

        Las expresiones sin variables se pliegan a constantes cuando su
        valor es finito. Los errores de dominio se reportan con el punto.
        """
        evaluator = cls._build(expr, scope)
        label = label or cls.to_text(expr)
        if not _has_variables(expr):
            try:
                value = primal(evaluator(()))
            except (ZeroDivisionError, ValueError, OverflowError):
                value = None
            if value is not None and math.isfinite(value):
                return ScalarField.const(scope.dim, value)

        def fn(point: Sequence[Num]) -> Num:
            try:
                return evaluator(point)
            except ZeroDivisionError:
                raise EvaluationDomainError("División por cero", _primal_point(point)) from None
            except ValueError as exc:
                raise EvaluationDomainError(f"Fuera de dominio: {exc}", _primal_point(point)) from None
            except OverflowError:
                raise EvaluationDomainError("Desbordamiento numérico", _primal_point(point)) from None

        return ScalarField(scope.dim, fn, label=label)

    @classmethod
    def compile_text(cls, src: str, scope: VariableScope, label: str = "") -> ScalarField:
        return cls.compile(cls.parse(src, scope), scope, label or src.strip())

    @classmethod
    def _build(cls, expr: Expr, scope: VariableScope) -> Callable[[Sequence[Num]], Num]:
        if isinstance(expr, Number):
            value = float(expr.value)
            return lambda p: value
        if isinstance(expr, Variable):
            offset = scope.offset(expr)
            return lambda p: p[offset]
        if isinstance(expr, UnaryOp):
            operand = cls._build(expr.operand, scope)
            return lambda p: -operand(p)
        if isinstance(expr, Call):
            function = FUNCTIONS[expr.function]
            argument = cls._build(expr.argument, scope)
            return lambda p: function(argument(p))
        op = _BINARY[expr.op]
        left = cls._build(expr.left, scope)
        right = cls._build(expr.right, scope)
        return lambda p: op(left(p), right(p))


def _primal_point(point: Sequence[Num]) -> tuple:
    return tuple(primal(c) for c in point)

