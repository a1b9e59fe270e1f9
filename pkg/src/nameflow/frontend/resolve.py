"""Lexical scope resolution.

Binds every ``Name`` (and ``this.f``-style ``FieldAccess``) to its VarDecl,
innermost scope first: block locals, then method-level names (params and
implicit locals), then fields of the enclosing class and its superclasses.

Assigning to a name that resolves nowhere declares an implicit method-level
local at that point; reading such a name records an ``unresolved``
diagnostic and leaves the binding empty.
"""
from __future__ import annotations

from . import ast as A


class TypeTable:
    """Class lookup across all units of a program."""

    def __init__(self, types=()):
        self.types = {}
        for t in types:
            self.types.setdefault(t.name, t)

    def get(self, name):
        if name is None:
            return None
        t = self.types.get(name)
        if t is None and '.' in name:
            t = self.types.get(name.rsplit('.', 1)[1])
        return t

    def ancestors(self, name):
        """The type itself followed by its known superclasses, nearest first."""
        seen = set()
        t = self.get(name)
        while t is not None and t.name not in seen:
            seen.add(t.name)
            yield t
            t = self.get(t.superclass)

    def lookup_field(self, type_name, name):
        for t in self.ancestors(type_name):
            for f in t.fields:
                if f.name == name:
                    return f
        return None


def static_type(expr, owner, types: TypeTable):
    """Declared class name of an expression's value, when cheaply known."""
    if isinstance(expr, A.This):
        return owner
    decl = getattr(expr, 'decl', None)
    if isinstance(expr, (A.Name, A.FieldAccess)) and decl is not None:
        return decl.declared_type or None
    return None


class _Scopes:

    def __init__(self, method, owner, types, unit):
        self.method = method
        self.owner = owner
        self.types = types
        self.unit = unit
        self.method_scope = {}
        self.blocks = []

    def lookup(self, name):
        for scope in reversed(self.blocks):
            if name in scope:
                return scope[name]
        if name in self.method_scope:
            return self.method_scope[name]
        return self.types.lookup_field(self.owner, name)

    def declare(self, decl):
        decl.owner = self.method.id
        (self.blocks[-1] if self.blocks else self.method_scope)[decl.name] = decl

    def unresolved(self, node, name):
        self.unit.diagnostics.append(
            A.Diagnostic('unresolved', f'unresolved identifier {name!r}', node.loc))


def resolve_names(unit: A.SourceUnit, types: TypeTable | None = None) -> A.SourceUnit:
    """Annotate ``unit`` in place with bindings and return it.

    ``types`` supplies classes from other units so inherited fields resolve;
    it defaults to the unit's own classes.
    """
    if types is None:
        types = TypeTable(unit.types)
    unit.diagnostics = [d for d in unit.diagnostics if d.code != 'unresolved']
    for t in unit.types:
        for f in t.fields:
            f.owner = t.name
        for m in t.methods:
            m.owner = t.name
            m.implicit_locals = []
            for p in m.params:
                p.owner = m.id
        # field initializers see only fields
        for f in t.fields:
            if f.init is not None:
                dummy = A.MethodDecl('<init>', [], '', None, owner=t.name)
                _expr(f.init, _Scopes(dummy, t.name, types, unit))
        for m in t.methods:
            sc = _Scopes(m, t.name, types, unit)
            for p in m.params:
                sc.method_scope[p.name] = p
            if m.body is not None:
                _stmt(m.body, sc)
    return unit


def _stmt(s, sc: _Scopes):
    if isinstance(s, A.Block):
        sc.blocks.append({})
        for x in s.body:
            _stmt(x, sc)
        sc.blocks.pop()
    elif isinstance(s, A.LocalVar):
        for d in s.decls:
            if d.init is not None:
                _expr(d.init, sc)
            sc.declare(d)
    elif isinstance(s, A.ExprStmt):
        _expr(s.expr, sc)
    elif isinstance(s, A.If):
        _expr(s.cond, sc)
        _branch(s.then, sc)
        if s.orelse is not None:
            _branch(s.orelse, sc)
    elif isinstance(s, A.While):
        _expr(s.cond, sc)
        _branch(s.body, sc)
    elif isinstance(s, A.DoWhile):
        _branch(s.body, sc)
        _expr(s.cond, sc)
    elif isinstance(s, A.For):
        sc.blocks.append({})
        for x in s.init:
            _stmt(x, sc)
        if s.cond is not None:
            _expr(s.cond, sc)
        _branch(s.body, sc)
        for e in s.update:
            _expr(e, sc)
        sc.blocks.pop()
    elif isinstance(s, A.Return):
        if s.value is not None:
            _expr(s.value, sc)


def _branch(s, sc):
    # a lone statement in a branch still gets its own scope
    sc.blocks.append({})
    _stmt(s, sc)
    sc.blocks.pop()


def _expr(e, sc: _Scopes):
    if isinstance(e, A.Name):
        e.decl = sc.lookup(e.id)
        if e.decl is None:
            sc.unresolved(e, e.id)
    elif isinstance(e, A.FieldAccess):
        _field_access(e, sc)
    elif isinstance(e, A.Assign):
        _expr(e.value, sc)
        _assign_target(e.target, sc, compound=e.op != '=')
    elif isinstance(e, A.IncDec):
        _expr(e.target, sc)
    elif isinstance(e, A.Call):
        if e.receiver is not None:
            _expr(e.receiver, sc)
        for a in e.args:
            _expr(a, sc)
    elif isinstance(e, A.Binary):
        _expr(e.left, sc)
        _expr(e.right, sc)
    elif isinstance(e, A.Unary):
        _expr(e.operand, sc)
    elif isinstance(e, A.Index):
        _expr(e.array, sc)
        _expr(e.index, sc)


def _field_access(e, sc):
    if isinstance(e.target, A.This):
        e.decl = sc.types.lookup_field(sc.owner, e.name)
        if e.decl is None:
            sc.unresolved(e, 'this.' + e.name)
        return
    _expr(e.target, sc)
    t = static_type(e.target, sc.owner, sc.types)
    e.decl = sc.types.lookup_field(t, e.name) if t else None


def _assign_target(target, sc, compound):
    if not isinstance(target, A.Name):
        _expr(target, sc)
        return
    target.decl = sc.lookup(target.id)
    if target.decl is not None:
        return
    if compound:
        sc.unresolved(target, target.id)
    d = A.VarDecl(target.id, '', A.LOCAL, loc=target.loc, implicit=True)
    d.owner = sc.method.id
    sc.method.implicit_locals.append(d)
    sc.method_scope[d.name] = d
    target.decl = d
