"""AST for the Java-like input subset.

Every node carries a ``loc``.  Locations and resolved bindings are excluded
from equality so two parses of equivalent code compare equal even when their
byte spans differ.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional


@dataclass(frozen=True)
class SourceLoc:
    path: str
    line: int
    col: int
    start: int   # byte offsets into the UTF-8 encoding of raw_text
    end: int

    @property
    def span(self):
        return (self.start, self.end)

    def to_json(self):
        return {'line': self.line, 'col': self.col, 'span': [self.start, self.end]}


NOLOC = SourceLoc('', 0, 0, 0, 0)


def _loc():
    return field(default=NOLOC, compare=False, repr=False)


def _binding():
    return field(default=None, compare=False, repr=False)


class Node:
    """Base for all AST nodes."""

    def children(self) -> Iterator['Node']:
        for v in self.__dict__.values():
            if isinstance(v, Node):
                yield v
            elif isinstance(v, list):
                for x in v:
                    if isinstance(x, Node):
                        yield x

    def walk(self) -> Iterator['Node']:
        yield self
        for c in self.children():
            yield from c.walk()


# Expressions

@dataclass(eq=True)
class Literal(Node):
    kind: str          # int, float, string, char, bool, null
    value: str
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Name(Node):
    id: str
    loc: SourceLoc = _loc()
    decl: Optional['VarDecl'] = _binding()

    def children(self):
        return iter(())


@dataclass(eq=True)
class This(Node):
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class FieldAccess(Node):
    target: Node
    name: str
    loc: SourceLoc = _loc()
    decl: Optional['VarDecl'] = _binding()

    def children(self):
        yield self.target


@dataclass(eq=True)
class Call(Node):
    receiver: Optional[Node]
    name: str
    args: list
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Binary(Node):
    op: str
    left: Node
    right: Node
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Unary(Node):
    op: str
    operand: Node
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Index(Node):
    array: Node
    index: Node
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Assign(Node):
    target: Node
    op: str            # '=' or a compound operator such as '+='
    value: Node
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class IncDec(Node):
    op: str            # '++' or '--'
    target: Node
    prefix: bool
    loc: SourceLoc = _loc()


# Statements

@dataclass(eq=True)
class Block(Node):
    body: list
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class LocalVar(Node):
    decls: list
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class ExprStmt(Node):
    expr: Node
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class If(Node):
    cond: Node
    then: Node
    orelse: Optional[Node]
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class While(Node):
    cond: Node
    body: Node
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class DoWhile(Node):
    body: Node
    cond: Node
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class For(Node):
    init: list
    cond: Optional[Node]
    update: list
    body: Node
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Return(Node):
    value: Optional[Node]
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Break(Node):
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Continue(Node):
    loc: SourceLoc = _loc()


@dataclass(eq=True)
class Empty(Node):
    loc: SourceLoc = _loc()


# Declarations

PARAM, LOCAL, FIELD = 'param', 'local', 'field'


@dataclass(eq=True)
class VarDecl(Node):
    name: str
    declared_type: str
    kind: str
    loc: SourceLoc = _loc()
    init: Optional[Node] = None
    implicit: bool = False
    modifiers: tuple = ()
    # Filled by resolve_names.
    owner: Optional[str] = field(default=None, compare=False, repr=False)

    @property
    def id(self):
        return f'{self.loc.path}:{self.loc.line}:{self.loc.col}:{self.name}'

    def children(self):
        if self.init is not None:
            yield self.init


@dataclass(eq=True)
class MethodDecl(Node):
    name: str
    params: list
    return_type: str
    body: Optional[Block]
    loc: SourceLoc = _loc()
    modifiers: tuple = ()
    owner: str = field(default='', compare=False, repr=False)
    # Implicit locals created by resolve_names (assignment to an undeclared name).
    implicit_locals: list = field(default_factory=list, compare=False, repr=False)

    @property
    def arity(self):
        return len(self.params)

    def children(self):
        yield from self.params
        if self.body is not None:
            yield self.body

    @property
    def id(self):
        return f'{self.owner}.{self.name}/{self.arity}'

    def locals(self):
        """Explicit and implicit local declarations, in source order."""
        out = list(self.implicit_locals)
        if self.body is not None:
            for n in self.body.walk():
                if isinstance(n, LocalVar):
                    out.extend(n.decls)
        out.sort(key=lambda d: (d.loc.start, d.loc.line, d.loc.col))
        return out


@dataclass(eq=True)
class TypeDecl(Node):
    name: str
    superclass: Optional[str]
    fields: list
    methods: list
    loc: SourceLoc = _loc()
    implicit: bool = False
    modifiers: tuple = ()

    def method(self, name, arity):
        for m in self.methods:
            if m.name == name and m.arity == arity:
                return m
        return None


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    loc: SourceLoc

    def to_json(self):
        return {'code': self.code, 'message': self.message, 'path': self.loc.path,
                'line': self.loc.line, 'col': self.loc.col}


@dataclass(eq=True)
class SourceUnit(Node):
    path: str
    types: list
    raw_text: str = field(default='', compare=False, repr=False)
    diagnostics: list = field(default_factory=list, compare=False, repr=False)

    def variables(self):
        """All variable declarations (fields, params, locals) in declaration order."""
        out = []
        for t in self.types:
            out.extend(t.fields)
            for m in t.methods:
                out.extend(m.params)
                out.extend(m.locals())
        return out

    def methods(self):
        for t in self.types:
            yield from t.methods

    def snippet(self, loc, context=2):
        lines = self.raw_text.splitlines()
        lo = max(1, loc.line - context)
        hi = min(len(lines), loc.line + context)
        return lo, lines[lo - 1:hi]
