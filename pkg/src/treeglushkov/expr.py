"""Regular tree expressions: AST, parser, validation, linearization."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .trees import Symbol, sort_key

DOLLAR = Symbol("$", 1)


@dataclass(frozen=True)
class Apply:
    symbol: Symbol
    args: tuple[Expr, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return str(self.symbol)
        return f"{self.symbol}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Sum:
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"{self.left}+{_wrap(self.right, Sum)}"


@dataclass(frozen=True)
class Product:
    left: Expr
    c: Symbol
    right: Expr

    def __str__(self) -> str:
        sep = " " if "_" in self.c.name else ""
        return f"{_wrap(self.left, Sum)}.{self.c}{sep}{_wrap(self.right, (Sum, Product))}"


@dataclass(frozen=True)
class Star:
    inner: Expr
    c: Symbol

    def __str__(self) -> str:
        return f"{_wrap(self.inner, (Sum, Product, Star))}*{self.c}"


Expr = Union[Apply, Sum, Product, Star]


def _wrap(e: Expr, kinds) -> str:
    return f"({e})" if isinstance(e, kinds) else str(e)


def sym(name: str, *args: Expr) -> Apply:
    """Shorthand used by tests: ``sym("f", sym("a"), sym("a"))``."""
    return Apply(Symbol(name, len(args)), tuple(args))


def nullary(name: str) -> Symbol:
    return Symbol(name, 0)


# --- parsing ---------------------------------------------------------------

class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        # 1-based: the first character of the input is at offset 1
        super().__init__(f"{message} at offset {offset + 1}")
        self.offset = offset + 1


# Single letter, optionally extended by "_suffix"; keeps `.bf(...)` unambiguous.
_IDENT = re.compile(r"[A-Za-z](?:_[A-Za-z0-9]+)?")


class _Parser:
    """Precedence: postfix ``*c`` > infix ``.c`` (left-assoc) > infix ``+``."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.arities: dict[str, tuple[int, int]] = {}

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message: str, at: int | None = None):
        raise ExprSyntaxError(message, self.pos if at is None else at)

    def ident(self) -> tuple[str, int]:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            if self.pos >= len(self.text):
                self.fail("unexpected end of input")
            ch = self.text[self.pos]
            if ch == "$":
                self.fail("'$' is reserved")
            self.fail(f"unexpected character {ch!r}")
        self.pos = m.end()
        return m.group(), m.start()

    def declare(self, name: str, arity: int, at: int) -> Symbol:
        seen = self.arities.setdefault(name, (arity, at))
        if seen[0] != arity:
            self.fail(
                f"symbol {name!r} used with arity {arity} but arity {seen[0]} "
                f"at offset {seen[1]}",
                at,
            )
        return Symbol(name, arity)

    def subscript(self) -> Symbol:
        name, at = self.ident()
        return self.declare(name, 0, at)

    def parse(self) -> Expr:
        e = self.sum()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self.peek() == "+":
            self.pos += 1
            e = Sum(e, self.product())
        return e

    def product(self) -> Expr:
        e = self.star()
        while self.peek() == ".":
            self.pos += 1
            c = self.subscript()
            e = Product(e, c, self.star())
        return e

    def star(self) -> Expr:
        e = self.atom()
        while self.peek() == "*":
            self.pos += 1
            e = Star(e, self.subscript())
        return e

    def atom(self) -> Expr:
        if self.peek() == "(":
            self.pos += 1
            e = self.sum()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return e
        name, at = self.ident()
        args: list[Expr] = []
        if self.peek() == "(":
            self.pos += 1
            args.append(self.sum())
            while self.peek() == ",":
                self.pos += 1
                args.append(self.sum())
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
        return Apply(self.declare(name, len(args), at), tuple(args))


def parse(text: str) -> Expr:
    """Parse the concrete syntax, e.g. ``(f(a,a)+g(b))*a.bf(g(a),b)``.

    Arities are inferred from usage; a name used with two arities is rejected.
    """
    return _Parser(text).parse()


# --- structural queries ----------------------------------------------------

def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order, left to right, matching the reading order of the text."""
    yield e
    if isinstance(e, Apply):
        for a in e.args:
            yield from walk(a)
    elif isinstance(e, Sum):
        yield from walk(e.left)
        yield from walk(e.right)
    elif isinstance(e, Product):
        yield from walk(e.left)
        yield from walk(e.right)
    else:
        yield from walk(e.inner)


def symbols_of(e: Expr) -> frozenset[Symbol]:
    """Every symbol occurring in ``e``, product and star subscripts included."""
    out = set()
    for node in walk(e):
        if isinstance(node, Apply):
            out.add(node.symbol)
        elif isinstance(node, (Product, Star)):
            out.add(node.c)
    return frozenset(out)


def occurs(e: Expr, c: Symbol) -> bool:
    return c in symbols_of(e)


def is_linear(e: Expr) -> bool:
    seen = set()
    for node in walk(e):
        if isinstance(node, Apply) and node.symbol.arity >= 1:
            if node.symbol in seen:
                return False
            seen.add(node.symbol)
    return True


def contains_nullary(e: Expr, c: Symbol) -> bool:
    """Decide whether the one-node tree ``c`` belongs to L(e), syntactically."""
    if c.arity != 0:
        raise ValueError(f"{c} is not nullary")
    if isinstance(e, Apply):
        return e.symbol == c
    if isinstance(e, Sum):
        return contains_nullary(e.left, c) or contains_nullary(e.right, c)
    if isinstance(e, Product):
        return (c != e.c and contains_nullary(e.left, c)) or (
            contains_nullary(e.left, e.c) and contains_nullary(e.right, c)
        )
    return c == e.c or contains_nullary(e.inner, c)


def validate(e: Expr) -> list[str]:
    """Return every well-formedness violation; an empty list means valid."""
    problems: list[str] = []
    arity: dict[str, int] = {}

    def note(s: Symbol):
        if s.name == DOLLAR.name:
            problems.append("'$' is a reserved symbol")
        key = str(s)
        if arity.setdefault(key, s.arity) != s.arity:
            problems.append(f"symbol {key} used with arities {arity[key]} and {s.arity}")

    for node in walk(e):
        if isinstance(node, Apply):
            note(node.symbol)
            if len(node.args) != node.symbol.arity:
                problems.append(
                    f"arity mismatch: {node.symbol} has arity {node.symbol.arity} "
                    f"but is applied to {len(node.args)} arguments"
                )
        elif isinstance(node, (Product, Star)):
            note(node.c)
            if node.c.arity != 0:
                problems.append(f"subscript {node.c} is not nullary")
            if isinstance(node, Product) and not occurs(node.left, node.c):
                problems.append(f"product .{node.c}: {node.c} absent from left operand")
    return list(dict.fromkeys(problems))


def require_valid(e: Expr):
    problems = validate(e)
    if problems:
        raise ValueError("invalid expression: " + "; ".join(problems))


# --- linearization ---------------------------------------------------------

@dataclass(frozen=True)
class LinearExpr:
    expr: Expr
    positions: frozenset[Symbol]
    delinearizer: Mapping[Symbol, Symbol]

    def __hash__(self):
        return hash(self.expr)

    def sorted_positions(self) -> list[Symbol]:
        return sorted(self.positions, key=sort_key)

    def __str__(self) -> str:
        return str(self.expr)


def linearize(e: Expr) -> LinearExpr:
    """Index arity >= 1 occurrences 1, 2, ... in text order; nullaries stay as they are."""
    require_valid(e)
    counter = 0

    def go(node: Expr) -> Expr:
        nonlocal counter
        if isinstance(node, Apply):
            s = node.symbol
            if s.arity >= 1:
                counter += 1
                s = Symbol(s.name, s.arity, counter)
            return Apply(s, tuple(go(a) for a in node.args))
        if isinstance(node, Sum):
            left = go(node.left)
            return Sum(left, go(node.right))
        if isinstance(node, Product):
            left = go(node.left)
            return Product(left, node.c, go(node.right))
        return Star(go(node.inner), node.c)

    lin = go(e)
    positions = symbols_of(lin)
    return LinearExpr(lin, positions, {p: p.base for p in positions})


def as_linear(e: Expr) -> LinearExpr:
    """Wrap an expression that is already linear, keeping its symbols as positions."""
    require_valid(e)
    if not is_linear(e):
        raise ValueError("expression is not linear")
    positions = symbols_of(e)
    return LinearExpr(e, positions, {p: p for p in positions})


def relabel(e: Expr, phi: Mapping[Symbol, Symbol]) -> Expr:
    if isinstance(e, Apply):
        return Apply(phi[e.symbol], tuple(relabel(a, phi) for a in e.args))
    if isinstance(e, Sum):
        return Sum(relabel(e.left, phi), relabel(e.right, phi))
    if isinstance(e, Product):
        return Product(relabel(e.left, phi), phi[e.c], relabel(e.right, phi))
    return Star(relabel(e.inner, phi), phi[e.c])


def delinearize(lin: LinearExpr) -> Expr:
    return relabel(lin.expr, lin.delinearizer)


def to_json(e: Expr) -> dict:
    if isinstance(e, Apply):
        return {
            "kind": "apply",
            "symbol": str(e.symbol),
            "arity": e.symbol.arity,
            "children": [to_json(a) for a in e.args],
        }
    if isinstance(e, Sum):
        return {"kind": "sum", "children": [to_json(e.left), to_json(e.right)]}
    if isinstance(e, Product):
        return {
            "kind": "product",
            "c": str(e.c),
            "children": [to_json(e.left), to_json(e.right)],
        }
    return {"kind": "star", "c": str(e.c), "children": [to_json(e.inner)]}
