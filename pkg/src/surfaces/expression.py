"""
Expression language for user-defined immersions.

Grammar (whitespace insignificant):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Identifiers resolve at parse time to the variables x and y, the constants
pi and e, user parameters, or (when followed by '(') one of the supported
functions. Parsed trees compile to closures that evaluate on floats or on
HyperDual numbers alike.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from ..utils.errors import SurfaceSyntaxError, UnboundIdentifier
from . import hyperdual as hd

VARIABLES = ("x", "y")
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTION_NAMES = tuple(sorted(hd.FUNCTIONS))
RESERVED = set(VARIABLES) | set(CONSTANTS) | set(FUNCTION_NAMES)

# Limits on parenthesis/sign/power nesting and on tree depth; parsing,
# compiling and evaluating recurse once per level.
MAX_NESTING = 100
MAX_DEPTH = 200

Evaluator = Callable[[object, object], object]


# ─── Tokens ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Token:
    kind: str        # 'num', 'ident', 'op', 'lparen', 'rparen', 'end'
    text: str
    position: int    # 1-based column
    value: float = 0.0


_OPERATORS = "+-*/^"


def tokenize(text: str, line: Optional[int] = None) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            start = i
            while i < n and (text[i].isdigit() or text[i] == "."):
                i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            literal = text[start:i]
            try:
                value = float(literal)
            except ValueError:
                raise SurfaceSyntaxError(start + 1, f"malformed number '{literal}'", line)
            tokens.append(Token("num", literal, start + 1, value))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("ident", text[start:i], start + 1))
            continue
        if ch in _OPERATORS:
            tokens.append(Token("op", ch, i + 1))
        elif ch == "(":
            tokens.append(Token("lparen", ch, i + 1))
        elif ch == ")":
            tokens.append(Token("rparen", ch, i + 1))
        else:
            raise SurfaceSyntaxError(i + 1, f"unexpected character '{ch}'", line)
        i += 1
    tokens.append(Token("end", "", n + 1))
    return tokens


# ─── AST ─────────────────────────────────────────────────────────────────────

class Expr:
    """Base AST node"""

    depth: int = 1

    def compile(self) -> Evaluator:
        raise NotImplementedError

    def __call__(self, x, y):
        return self.compile()(x, y)


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def compile(self) -> Evaluator:
        v = self.value
        return lambda x, y: v

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Const(Expr):
    name: str
    value: float

    def compile(self) -> Evaluator:
        v = self.value
        return lambda x, y: v

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def compile(self) -> Evaluator:
        if self.name == "x":
            return lambda x, y: x
        return lambda x, y: y

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr
    depth: int = field(init=False, default=1, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", self.operand.depth + 1)

    def compile(self) -> Evaluator:
        f = self.operand.compile()
        return lambda x, y: -f(x, y)

    def __str__(self) -> str:
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    depth: int = field(init=False, default=1, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", max(self.left.depth, self.right.depth) + 1)

    def compile(self) -> Evaluator:
        a = self.left.compile()
        b = self.right.compile()
        if self.op == "+":
            return lambda x, y: a(x, y) + b(x, y)
        if self.op == "-":
            return lambda x, y: a(x, y) - b(x, y)
        if self.op == "*":
            return lambda x, y: a(x, y) * b(x, y)
        if self.op == "/":
            return lambda x, y: a(x, y) / b(x, y)
        return lambda x, y: hd.power(a(x, y), b(x, y))

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call(Expr):
    function: str
    argument: Expr
    depth: int = field(init=False, default=1, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", self.argument.depth + 1)

    def compile(self) -> Evaluator:
        fn = hd.FUNCTIONS[self.function]
        arg = self.argument.compile()
        return lambda x, y: fn(arg(x, y))

    def __str__(self) -> str:
        return f"{self.function}({self.argument})"


# ─── Parser ──────────────────────────────────────────────────────────────────

class Parser:
    """Recursive-descent parser over one expression string"""

    def __init__(self, text: str, params: Optional[Dict[str, float]] = None,
                 line: Optional[int] = None, column_offset: int = 0):
        self.params = params or {}
        self.line = line
        self.offset = column_offset
        self.tokens = tokenize(text, line)
        self.index = 0
        self.nesting = 0

    # helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        tok = self.tokens[self.index]
        if tok.kind != "end":
            self.index += 1
        return tok

    def _error(self, token: Token, message: str) -> SurfaceSyntaxError:
        return SurfaceSyntaxError(token.position + self.offset, message, self.line)

    def _expect(self, kind: str, what: str) -> Token:
        tok = self.current
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise self._error(tok, f"expected {what}, found '{found}'")
        return self._advance()

    # grammar

    def parse(self) -> Expr:
        if self.current.kind == "end":
            raise self._error(self.current, "empty expression")
        node = self._expr()
        if self.current.kind != "end":
            raise self._error(self.current, f"unexpected '{self.current.text}'")
        return node

    def _expr(self) -> Expr:
        node = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            tok = self._advance()
            node = self._bounded(BinOp(tok.text, node, self._term()), tok)
        return node

    def _term(self) -> Expr:
        node = self._unary()
        while self.current.kind == "op" and self.current.text in "*/":
            tok = self._advance()
            node = self._bounded(BinOp(tok.text, node, self._unary()), tok)
        return node

    def _unary(self) -> Expr:
        tok = self.current
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            raise self._error(tok, "expression nested too deeply")
        try:
            if tok.kind == "op" and tok.text == "-":
                self._advance()
                return self._bounded(Neg(self._unary()), tok)
            if tok.kind == "op" and tok.text == "+":
                self._advance()
                return self._unary()
            return self._power()
        finally:
            self.nesting -= 1

    def _power(self) -> Expr:
        base = self._atom()
        if self.current.kind == "op" and self.current.text == "^":
            tok = self._advance()
            # right-associative: a^b^c = a^(b^c)
            return self._bounded(BinOp("^", base, self._unary()), tok)
        return base

    def _atom(self) -> Expr:
        tok = self.current
        if tok.kind == "num":
            self._advance()
            return Num(tok.value)
        if tok.kind == "lparen":
            self._advance()
            node = self._expr()
            self._expect("rparen", "')'")
            return node
        if tok.kind == "ident":
            self._advance()
            return self._identifier(tok)
        found = tok.text or "end of input"
        raise self._error(tok, f"expected a value, found '{found}'")

    def _identifier(self, tok: Token) -> Expr:
        name = tok.text
        if self.current.kind == "lparen":
            if name not in hd.FUNCTIONS:
                raise UnboundIdentifier(name, tok.position + self.offset)
            self._advance()
            arg = self._expr()
            self._expect("rparen", "')'")
            return self._bounded(Call(name, arg), tok)
        if name in hd.FUNCTIONS:
            raise self._error(tok, f"function '{name}' needs an argument")
        if name in VARIABLES:
            return Var(name)
        if name in self.params:
            return Const(name, float(self.params[name]))
        if name in CONSTANTS:
            return Const(name, CONSTANTS[name])
        raise UnboundIdentifier(name, tok.position + self.offset)


def parse_expression(text: str, params: Optional[Dict[str, float]] = None,
                     line: Optional[int] = None, column_offset: int = 0) -> Expr:
    """Parse one expression; identifiers must resolve against params"""
    return Parser(text, params, line, column_offset).parse()


class CompiledTriple:
    """Three compiled component expressions (X, Y, Z)"""

    def __init__(self, components: Tuple[Expr, Expr, Expr]):
        self.components = components
        self._evaluators = tuple(c.compile() for c in components)

    def __call__(self, x, y):
        return tuple(f(x, y) for f in self._evaluators)

    def __getstate__(self):
        return {"components": self.components}

    def __setstate__(self, state):
        self.__init__(state["components"])
