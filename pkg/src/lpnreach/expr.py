"""Numeric and Boolean label expressions for LPN transitions.

Concrete syntax (lowest to highest precedence)::

    bool    := or
    or      := and ('||' and)*
    and     := cmp ('&&' cmp)*
    cmp     := sum [('==' | '>=' | '>' | '<=' | '<') sum]
    sum     := product (('+' | '-') product)*
    product := power (('*' | '/' | '%') power)*
    power   := unary ['**' power]
    unary   := ('-' | '!') unary | atom
    atom    := INT | IDENT | 'true' | 'false' | '(' bool ')'
             | 'NOT' '(' num ')' | ('OR' | 'AND' | 'XOR') '(' num ',' num ')'
             | 'INT' '(' bool ')'

The parser is untyped; a sort check afterwards decides which sub-terms are
numeric and which are Boolean.  A bare variable is numeric, or truthy
(nonzero) where a Boolean is expected.  Integers are signed 64-bit; any
intermediate result outside that range raises :class:`EvalError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Union

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

KEYWORDS = frozenset({"true", "false", "NOT", "OR", "AND", "XOR", "INT"})


class ExprSyntaxError(ValueError):
    """Raised for text that is not derivable from the expression grammar."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.message = message
        self.pos = pos


class EvalError(ArithmeticError):
    """Division by zero, negative exponent or 64-bit overflow."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: NumExpr


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / % **
    left: NumExpr
    right: NumExpr


@dataclass(frozen=True)
class BitNot:
    operand: NumExpr


@dataclass(frozen=True)
class BitOp:
    op: str  # OR, AND, XOR
    left: NumExpr
    right: NumExpr


@dataclass(frozen=True)
class IntOf:
    operand: BoolExpr


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Truthy:
    name: str


@dataclass(frozen=True)
class Not:
    operand: BoolExpr


@dataclass(frozen=True)
class And:
    left: BoolExpr
    right: BoolExpr


@dataclass(frozen=True)
class Or:
    left: BoolExpr
    right: BoolExpr


@dataclass(frozen=True)
class Cmp:
    op: str  # == >= > <= <
    left: NumExpr
    right: NumExpr


NumExpr = Union[Const, Var, Neg, BinOp, BitNot, BitOp, IntOf]
BoolExpr = Union[BoolConst, Truthy, Not, And, Or, Cmp]

_NUM_TYPES = (Const, Var, Neg, BinOp, BitNot, BitOp, IntOf)
_BOOL_TYPES = (BoolConst, Truthy, Not, And, Or, Cmp)

CMP_OPS = ("==", ">=", ">", "<=", "<")
ARITH_OPS = ("+", "-", "*", "/", "%", "**")
BIT_FUNCS = ("OR", "AND", "XOR")


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<int>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|==|>=|<=|&&|\|\||[-+*/%<>!(),])"
    r")"
)
_SPACE_RE = re.compile(r"\s*")


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, op, eof
    text: str
    pos: int


def tokenize(text: str, start: int = 0) -> list[Token]:
    """Split ``text`` into tokens, ending with an ``eof`` or ``bad`` token."""
    tokens = []
    pos = start
    n = len(text)
    while True:
        pos = _SPACE_RE.match(text, pos).end()
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            # left to the parser: a prefix parse may legitimately stop here
            tokens.append(Token("bad", text[pos], pos))
            return tokens
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("eof", "", n))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    """Precedence-climbing parser over a token list."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def _expect(self, text: str) -> Token:
        tok = self.tok
        if not self._accept(text):
            found = tok.text or "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", tok.pos)
        return tok

    def parse_or(self):
        left = self.parse_and()
        while self.tok.text == "||" and self.tok.kind == "op":
            pos = self.tok.pos
            self.i += 1
            left = Or(_as_bool(left, pos), _as_bool(self.parse_and(), pos))
        return left

    def parse_and(self):
        left = self.parse_cmp()
        while self.tok.text == "&&" and self.tok.kind == "op":
            pos = self.tok.pos
            self.i += 1
            left = And(_as_bool(left, pos), _as_bool(self.parse_cmp(), pos))
        return left

    def parse_cmp(self):
        left = self.parse_sum()
        tok = self.tok
        if tok.kind == "op" and tok.text in CMP_OPS:
            self.i += 1
            right = self.parse_sum()
            node = Cmp(tok.text, _as_num(left, tok.pos), _as_num(right, tok.pos))
            nxt = self.tok
            if nxt.kind == "op" and nxt.text in CMP_OPS:
                raise ExprSyntaxError("comparisons do not chain", nxt.pos)
            return node
        return left

    def parse_sum(self):
        left = self.parse_product()
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            tok = self.tok
            self.i += 1
            right = self.parse_product()
            left = BinOp(tok.text, _as_num(left, tok.pos), _as_num(right, tok.pos))
        return left

    def parse_product(self):
        left = self.parse_power()
        while self.tok.kind == "op" and self.tok.text in ("*", "/", "%"):
            tok = self.tok
            self.i += 1
            right = self.parse_power()
            left = BinOp(tok.text, _as_num(left, tok.pos), _as_num(right, tok.pos))
        return left

    def parse_power(self):
        base = self.parse_unary()
        tok = self.tok
        if tok.kind == "op" and tok.text == "**":
            self.i += 1
            exponent = self.parse_power()
            return BinOp("**", _as_num(base, tok.pos), _as_num(exponent, tok.pos))
        return base

    def parse_unary(self):
        tok = self.tok
        if self._accept("-"):
            return Neg(_as_num(self.parse_unary(), tok.pos))
        if self._accept("!"):
            return Not(_as_bool(self.parse_unary(), tok.pos))
        return self.parse_atom()

    def parse_atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            value = int(tok.text)
            if value > INT_MAX:
                raise ExprSyntaxError("integer literal out of 64-bit range", tok.pos)
            return Const(value)
        if tok.kind == "ident":
            self.i += 1
            name = tok.text
            if name == "true":
                return BoolConst(True)
            if name == "false":
                return BoolConst(False)
            if self.tok.kind == "op" and self.tok.text == "(":
                return self._call(name, tok.pos)
            if name in KEYWORDS:
                raise ExprSyntaxError(f"{name} requires an argument list", tok.pos)
            return Var(name)
        if self._accept("("):
            inner = self.parse_or()
            self._expect(")")
            return inner
        if tok.kind == "bad":
            raise ExprSyntaxError(f"unexpected character {tok.text!r}", tok.pos)
        found = tok.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", tok.pos)

    def _call(self, name: str, pos: int):
        if name not in ("NOT", "INT") + BIT_FUNCS:
            raise ExprSyntaxError(f"unknown function {name!r}", pos)
        self._expect("(")
        first = self.parse_or()
        if name in BIT_FUNCS:
            self._expect(",")
            second = self.parse_or()
            self._expect(")")
            return BitOp(name, _as_num(first, pos), _as_num(second, pos))
        self._expect(")")
        if name == "NOT":
            return BitNot(_as_num(first, pos))
        return IntOf(_as_bool(first, pos))


def _as_num(node, pos: int) -> NumExpr:
    if isinstance(node, _NUM_TYPES):
        return node
    raise ExprSyntaxError("Boolean expression used where a number is expected "
                          "(wrap it in INT(...))", pos)


def _as_bool(node, pos: int) -> BoolExpr:
    if isinstance(node, _BOOL_TYPES):
        return node
    if isinstance(node, Var):
        return Truthy(node.name)
    raise ExprSyntaxError("numeric expression used where a Boolean is expected", pos)


def _parse(text: str, start: int, whole: bool):
    parser = _Parser(tokenize(text, start))
    node = parser.parse_or()
    if whole and parser.tok.kind != "eof":
        raise ExprSyntaxError(f"unexpected {parser.tok.text!r}", parser.tok.pos)
    return node, parser.tok.pos


def parse_numeric(text: str) -> NumExpr:
    node, end = _parse(text, 0, True)
    return _as_num(node, 0)


def parse_boolean(text: str) -> BoolExpr:
    node, end = _parse(text, 0, True)
    return _as_bool(node, 0)


def parse_numeric_prefix(text: str, start: int = 0) -> tuple[NumExpr, int]:
    """Parse the longest numeric expression starting at ``start``.

    Returns the AST and the offset of the first unconsumed character, so a
    caller can continue scanning after the expression.
    """
    node, end = _parse(text, start, False)
    return _as_num(node, start), end


def parse_boolean_prefix(text: str, start: int = 0) -> tuple[BoolExpr, int]:
    node, end = _parse(text, start, False)
    return _as_bool(node, start), end


# ---------------------------------------------------------------------------
# Printing

_BIN_PREC = {"||": 1, "&&": 2, "==": 3, ">=": 3, ">": 3, "<=": 3, "<": 3,
             "+": 4, "-": 4, "*": 5, "/": 5, "%": 5, "**": 6}
_UNARY_PREC = 7


def _prec(node) -> int:
    if isinstance(node, Or):
        return 1
    if isinstance(node, And):
        return 2
    if isinstance(node, (Cmp, BinOp)):
        return _BIN_PREC[node.op]
    if isinstance(node, (Neg, Not)):
        return _UNARY_PREC
    return 8


def to_text(node) -> str:
    """Render an AST in concrete syntax; ``parse`` of the result is ``node``."""
    if isinstance(node, Const):
        # a negative constant has no literal form
        return str(node.value) if node.value >= 0 else f"({node.value})"
    if isinstance(node, (Var, Truthy)):
        return node.name
    if isinstance(node, BoolConst):
        return "true" if node.value else "false"
    if isinstance(node, BitNot):
        return f"NOT({to_text(node.operand)})"
    if isinstance(node, BitOp):
        return f"{node.op}({to_text(node.left)}, {to_text(node.right)})"
    if isinstance(node, IntOf):
        return f"INT({to_text(node.operand)})"
    if isinstance(node, (Neg, Not)):
        sym = "-" if isinstance(node, Neg) else "!"
        return sym + _wrap(node.operand, _prec(node.operand) < _UNARY_PREC)
    if isinstance(node, (BinOp, Cmp, And, Or)):
        op = node.op if isinstance(node, (BinOp, Cmp)) else (
            "&&" if isinstance(node, And) else "||")
        p = _prec(node)
        lp, rp = _prec(node.left), _prec(node.right)
        if op == "**":
            # right associative, and the base binds only unary operands
            left = _wrap(node.left, lp <= p)
            right = _wrap(node.right, rp < p)
        elif isinstance(node, Cmp):
            left = _wrap(node.left, lp <= p)
            right = _wrap(node.right, rp <= p)
        else:
            left = _wrap(node.left, lp < p)
            right = _wrap(node.right, rp <= p)
        return f"{left} {op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node, paren: bool) -> str:
    text = to_text(node)
    return f"({text})" if paren else text


def variables(node) -> frozenset[str]:
    """Names of all variables referenced by ``node``."""
    if isinstance(node, (Var, Truthy)):
        return frozenset((node.name,))
    if isinstance(node, (Const, BoolConst)):
        return frozenset()
    if isinstance(node, (Neg, BitNot, IntOf, Not)):
        return variables(node.operand)
    return variables(node.left) | variables(node.right)


# ---------------------------------------------------------------------------
# Evaluation


def _check(value: int) -> int:
    if value < INT_MIN or value > INT_MAX:
        raise EvalError(f"integer overflow: {value} does not fit in 64 bits")
    return value


def c_div(a: int, b: int) -> int:
    if b == 0:
        raise EvalError("division by zero")
    q = abs(a) // abs(b)
    return _check(q if (a >= 0) == (b >= 0) else -q)


def c_mod(a: int, b: int) -> int:
    if b == 0:
        raise EvalError("modulus by zero")
    r = abs(a) % abs(b)
    return r if a >= 0 else -r


def int_pow(base: int, exp: int) -> int:
    if exp < 0:
        raise EvalError("negative exponent")
    if base in (0, 1):
        return base if exp else 1
    if base == -1:
        return -1 if exp % 2 else 1
    if exp >= 64:
        raise EvalError(f"integer overflow: {base} ** {exp}")
    return _check(base**exp)


_ARITH: dict[str, Callable[[int, int], int]] = {
    "+": lambda a, b: _check(a + b),
    "-": lambda a, b: _check(a - b),
    "*": lambda a, b: _check(a * b),
    "/": c_div,
    "%": c_mod,
    "**": int_pow,
}
_BITS: dict[str, Callable[[int, int], int]] = {
    "OR": lambda a, b: a | b,
    "AND": lambda a, b: a & b,
    "XOR": lambda a, b: a ^ b,
}
_CMP: dict[str, Callable[[int, int], bool]] = {
    "==": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
}


def eval_num(e: NumExpr, env: Mapping[str, int]) -> int:
    match e:
        case Const(value):
            return value
        case Var(name):
            return env[name]
        case Neg(operand):
            return _check(-eval_num(operand, env))
        case BinOp(op, left, right):
            return _ARITH[op](eval_num(left, env), eval_num(right, env))
        case BitNot(operand):
            return ~eval_num(operand, env)
        case BitOp(op, left, right):
            return _BITS[op](eval_num(left, env), eval_num(right, env))
        case IntOf(operand):
            return 1 if eval_bool(operand, env) else 0
    raise TypeError(f"not a numeric expression: {e!r}")


def eval_bool(e: BoolExpr, env: Mapping[str, int]) -> bool:
    match e:
        case BoolConst(value):
            return value
        case Truthy(name):
            return env[name] != 0
        case Not(operand):
            return not eval_bool(operand, env)
        case And(left, right):
            return eval_bool(left, env) and eval_bool(right, env)
        case Or(left, right):
            return eval_bool(left, env) or eval_bool(right, env)
        case Cmp(op, left, right):
            return _CMP[op](eval_num(left, env), eval_num(right, env))
    raise TypeError(f"not a Boolean expression: {e!r}")


# ---------------------------------------------------------------------------
# Compilation to closures over positional valuations
#
# The search evaluates the same guards millions of times, so expressions are
# turned into nested closures reading from a tuple indexed by variable slot.


def compile_num(e: NumExpr, slots: Mapping[str, int]) -> Callable[[tuple], int]:
    match e:
        case Const(value):
            return lambda vals: value
        case Var(name):
            i = slots[name]
            return lambda vals: vals[i]
        case Neg(operand):
            f = compile_num(operand, slots)
            return lambda vals: _check(-f(vals))
        case BinOp(op, left, right):
            fl, fr, g = compile_num(left, slots), compile_num(right, slots), _ARITH[op]
            return lambda vals: g(fl(vals), fr(vals))
        case BitNot(operand):
            f = compile_num(operand, slots)
            return lambda vals: ~f(vals)
        case BitOp(op, left, right):
            fl, fr, g = compile_num(left, slots), compile_num(right, slots), _BITS[op]
            return lambda vals: g(fl(vals), fr(vals))
        case IntOf(operand):
            f = compile_bool(operand, slots)
            return lambda vals: 1 if f(vals) else 0
    raise TypeError(f"not a numeric expression: {e!r}")


def compile_bool(e: BoolExpr, slots: Mapping[str, int]) -> Callable[[tuple], bool]:
    match e:
        case BoolConst(value):
            return lambda vals: value
        case Truthy(name):
            i = slots[name]
            return lambda vals: vals[i] != 0
        case Not(operand):
            f = compile_bool(operand, slots)
            return lambda vals: not f(vals)
        case And(left, right):
            fl, fr = compile_bool(left, slots), compile_bool(right, slots)
            return lambda vals: fl(vals) and fr(vals)
        case Or(left, right):
            fl, fr = compile_bool(left, slots), compile_bool(right, slots)
            return lambda vals: fl(vals) or fr(vals)
        case Cmp(op, left, right):
            fl, fr, g = compile_num(left, slots), compile_num(right, slots), _CMP[op]
            return lambda vals: g(fl(vals), fr(vals))
    raise TypeError(f"not a Boolean expression: {e!r}")
