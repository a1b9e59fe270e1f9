"""Read and write the ``ufg-ast/1`` parse-tree interchange format.

The format lets an external, full-language parser feed the pipeline.  See
docs/interchange.md for the node kinds.
"""
from __future__ import annotations

import json

from ..errors import SchemaError, UnsupportedConstruct
from . import ast as A

SCHEMA = 'ufg-ast/1'

BINARY_OPS = {'||', '&&', '==', '!=', '<', '<=', '>', '>=', '+', '-', '*', '/', '%'}
UNARY_OPS = {'-', '!', '+'}
ASSIGN_OPS = {'=', '+=', '-=', '*=', '/=', '%='}
LITERAL_TYPES = {'int', 'float', 'string', 'char', 'bool', 'null'}

# Java constructs an external parser may emit but the pipeline does not model.
UNSUPPORTED_KINDS = {
    'lambda', 'new', 'new_array', 'array_init', 'cast', 'conditional', 'instanceof',
    'try', 'throw', 'switch', 'synchronized', 'assert', 'labeled', 'foreach',
    'super', 'method_ref', 'class_literal', 'interface', 'enum', 'nested_class',
    'annotation', 'generic',
}


def _loc(obj, path, where):
    loc = obj.get('loc')
    if loc is None:
        return A.SourceLoc(path, 0, 0, 0, 0)
    if not isinstance(loc, dict):
        raise SchemaError(where + '.loc')
    line, col = loc.get('line'), loc.get('col')
    span = loc.get('span', [0, 0])
    if not isinstance(line, int) or not isinstance(col, int):
        raise SchemaError(where + '.loc')
    if not (isinstance(span, list) and len(span) == 2 and all(isinstance(x, int) for x in span)):
        raise SchemaError(where + '.loc.span')
    return A.SourceLoc(path, line, col, span[0], span[1])


class _Reader:

    def __init__(self, path):
        self.path = path

    def req(self, obj, key, typ, where):
        if not isinstance(obj, dict) or key not in obj:
            raise SchemaError(f'{where}.{key}', 'missing field')
        v = obj[key]
        if not isinstance(v, typ) or (typ is int and isinstance(v, bool)):
            raise SchemaError(f'{where}.{key}', 'ill-typed field')
        return v

    def opt(self, obj, key, typ, where, default=None):
        v = obj.get(key, default)
        if v is None:
            return default
        if not isinstance(v, typ):
            raise SchemaError(f'{where}.{key}', 'ill-typed field')
        return v

    def kind(self, obj, where, allowed):
        if not isinstance(obj, dict):
            raise SchemaError(where, 'expected an object')
        k = self.req(obj, 'kind', str, where)
        if k in UNSUPPORTED_KINDS:
            raise UnsupportedConstruct(k, _loc(obj, self.path, where))
        if k not in allowed:
            raise SchemaError(f'{where}.kind', f'unknown node kind {k!r}')
        return k

    def type_decl(self, obj, where):
        self.kind(obj, where, {'class'})
        fields = [self.var(f, f'{where}.fields[{i}]', A.FIELD)
                  for i, f in enumerate(self.req(obj, 'fields', list, where))]
        methods = [self.method(m, f'{where}.methods[{i}]')
                   for i, m in enumerate(self.req(obj, 'methods', list, where))]
        t = A.TypeDecl(self.req(obj, 'name', str, where),
                       self.opt(obj, 'superclass', str, where),
                       fields, methods, loc=_loc(obj, self.path, where),
                       implicit=self.opt(obj, 'implicit', bool, where, False),
                       modifiers=tuple(self.opt(obj, 'modifiers', list, where, [])))
        for m in methods:
            m.owner = t.name
        for f in fields:
            f.owner = t.name
        return t

    def var(self, obj, where, role=None):
        self.kind(obj, where, {'var'})
        r = self.req(obj, 'role', str, where)
        if r not in (A.PARAM, A.LOCAL, A.FIELD) or (role is not None and r != role):
            raise SchemaError(f'{where}.role', f'unexpected role {r!r}')
        init = obj.get('init')
        return A.VarDecl(self.req(obj, 'name', str, where), self.opt(obj, 'type', str, where, ''),
                         r, loc=_loc(obj, self.path, where),
                         init=self.expr(init, where + '.init') if init is not None else None,
                         modifiers=tuple(self.opt(obj, 'modifiers', list, where, [])))

    def method(self, obj, where):
        self.kind(obj, where, {'method'})
        params = [self.var(p, f'{where}.params[{i}]', A.PARAM)
                  for i, p in enumerate(self.req(obj, 'params', list, where))]
        body = obj.get('body')
        return A.MethodDecl(self.req(obj, 'name', str, where), params,
                            self.opt(obj, 'return_type', str, where, ''),
                            self.stmt(body, where + '.body') if body is not None else None,
                            loc=_loc(obj, self.path, where),
                            modifiers=tuple(self.opt(obj, 'modifiers', list, where, [])))

    _STMTS = {'block', 'local', 'expr', 'if', 'while', 'do', 'for', 'return',
              'break', 'continue', 'empty'}

    def stmt(self, obj, where):
        k = self.kind(obj, where, self._STMTS)
        loc = _loc(obj, self.path, where)
        if k == 'block':
            return A.Block([self.stmt(s, f'{where}.body[{i}]')
                            for i, s in enumerate(self.req(obj, 'body', list, where))], loc=loc)
        if k == 'local':
            return A.LocalVar([self.var(d, f'{where}.decls[{i}]', A.LOCAL)
                               for i, d in enumerate(self.req(obj, 'decls', list, where))], loc=loc)
        if k == 'expr':
            return A.ExprStmt(self.expr(self.req(obj, 'expr', dict, where), where + '.expr'), loc=loc)
        if k == 'if':
            orelse = obj.get('else')
            return A.If(self.expr(self.req(obj, 'cond', dict, where), where + '.cond'),
                        self.stmt(self.req(obj, 'then', dict, where), where + '.then'),
                        self.stmt(orelse, where + '.else') if orelse is not None else None, loc=loc)
        if k == 'while':
            return A.While(self.expr(self.req(obj, 'cond', dict, where), where + '.cond'),
                           self.stmt(self.req(obj, 'body', dict, where), where + '.body'), loc=loc)
        if k == 'do':
            return A.DoWhile(self.stmt(self.req(obj, 'body', dict, where), where + '.body'),
                             self.expr(self.req(obj, 'cond', dict, where), where + '.cond'), loc=loc)
        if k == 'for':
            cond = obj.get('cond')
            return A.For([self.stmt(s, f'{where}.init[{i}]')
                          for i, s in enumerate(self.opt(obj, 'init', list, where, []))],
                         self.expr(cond, where + '.cond') if cond is not None else None,
                         [self.expr(e, f'{where}.update[{i}]')
                          for i, e in enumerate(self.opt(obj, 'update', list, where, []))],
                         self.stmt(self.req(obj, 'body', dict, where), where + '.body'), loc=loc)
        if k == 'return':
            v = obj.get('value')
            return A.Return(self.expr(v, where + '.value') if v is not None else None, loc=loc)
        if k == 'break':
            return A.Break(loc=loc)
        if k == 'continue':
            return A.Continue(loc=loc)
        return A.Empty(loc=loc)

    _EXPRS = {'literal', 'name', 'this', 'field', 'call', 'binary', 'unary', 'index',
              'assign', 'incdec'}

    def expr(self, obj, where):
        k = self.kind(obj, where, self._EXPRS)
        loc = _loc(obj, self.path, where)
        if k == 'literal':
            t = self.req(obj, 'type', str, where)
            if t not in LITERAL_TYPES:
                raise SchemaError(where + '.type', f'unknown literal type {t!r}')
            return A.Literal(t, self.req(obj, 'value', str, where), loc=loc)
        if k == 'name':
            return A.Name(self.req(obj, 'id', str, where), loc=loc)
        if k == 'this':
            return A.This(loc=loc)
        if k == 'field':
            return A.FieldAccess(self.expr(self.req(obj, 'target', dict, where), where + '.target'),
                                 self.req(obj, 'name', str, where), loc=loc)
        if k == 'call':
            recv = obj.get('receiver')
            return A.Call(self.expr(recv, where + '.receiver') if recv is not None else None,
                          self.req(obj, 'name', str, where),
                          [self.expr(a, f'{where}.args[{i}]')
                           for i, a in enumerate(self.req(obj, 'args', list, where))], loc=loc)
        if k == 'binary':
            op = self.req(obj, 'op', str, where)
            if op not in BINARY_OPS:
                raise UnsupportedConstruct(f'binary operator {op}', loc)
            return A.Binary(op, self.expr(self.req(obj, 'left', dict, where), where + '.left'),
                            self.expr(self.req(obj, 'right', dict, where), where + '.right'), loc=loc)
        if k == 'unary':
            op = self.req(obj, 'op', str, where)
            if op not in UNARY_OPS:
                raise UnsupportedConstruct(f'unary operator {op}', loc)
            return A.Unary(op, self.expr(self.req(obj, 'operand', dict, where), where + '.operand'),
                           loc=loc)
        if k == 'index':
            return A.Index(self.expr(self.req(obj, 'array', dict, where), where + '.array'),
                           self.expr(self.req(obj, 'index', dict, where), where + '.index'), loc=loc)
        if k == 'assign':
            op = self.req(obj, 'op', str, where)
            if op not in ASSIGN_OPS:
                raise UnsupportedConstruct(f'assignment operator {op}', loc)
            target = self.expr(self.req(obj, 'target', dict, where), where + '.target')
            if not isinstance(target, (A.Name, A.FieldAccess, A.Index)):
                raise SchemaError(where + '.target', 'not assignable')
            return A.Assign(target, op,
                            self.expr(self.req(obj, 'value', dict, where), where + '.value'), loc=loc)
        op = self.req(obj, 'op', str, where)
        if op not in ('++', '--'):
            raise SchemaError(where + '.op', f'bad increment operator {op!r}')
        return A.IncDec(op, self.expr(self.req(obj, 'target', dict, where), where + '.target'),
                        bool(obj.get('prefix', False)), loc=loc)


def parse_interchange(doc) -> A.SourceUnit:
    """Build a SourceUnit from an interchange document (dict or JSON text)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise SchemaError('<document>', f'invalid JSON: {e}') from None
    if not isinstance(doc, dict):
        raise SchemaError('<document>', 'expected an object')
    if doc.get('schema', SCHEMA) != SCHEMA:
        raise SchemaError('schema', f'unsupported schema {doc.get("schema")!r}')
    r = _Reader('')
    path = r.req(doc, 'path', str, '')
    r.path = path
    types = [r.type_decl(t, f'types[{i}]') for i, t in enumerate(r.req(doc, 'types', list, ''))]
    return A.SourceUnit(path, types, raw_text=r.opt(doc, 'text', str, '', ''))


# writer

def _wloc(loc):
    return loc.to_json()


def _wvar(d):
    out = {'kind': 'var', 'name': d.name, 'type': d.declared_type, 'role': d.kind, 'loc': _wloc(d.loc)}
    if d.modifiers:
        out['modifiers'] = list(d.modifiers)
    if d.init is not None:
        out['init'] = _wexpr(d.init)
    return out


def _wstmt(s):
    loc = _wloc(s.loc)
    if isinstance(s, A.Block):
        return {'kind': 'block', 'body': [_wstmt(x) for x in s.body], 'loc': loc}
    if isinstance(s, A.LocalVar):
        return {'kind': 'local', 'decls': [_wvar(d) for d in s.decls], 'loc': loc}
    if isinstance(s, A.ExprStmt):
        return {'kind': 'expr', 'expr': _wexpr(s.expr), 'loc': loc}
    if isinstance(s, A.If):
        return {'kind': 'if', 'cond': _wexpr(s.cond), 'then': _wstmt(s.then),
                'else': _wstmt(s.orelse) if s.orelse is not None else None, 'loc': loc}
    if isinstance(s, A.While):
        return {'kind': 'while', 'cond': _wexpr(s.cond), 'body': _wstmt(s.body), 'loc': loc}
    if isinstance(s, A.DoWhile):
        return {'kind': 'do', 'body': _wstmt(s.body), 'cond': _wexpr(s.cond), 'loc': loc}
    if isinstance(s, A.For):
        return {'kind': 'for', 'init': [_wstmt(x) for x in s.init],
                'cond': _wexpr(s.cond) if s.cond is not None else None,
                'update': [_wexpr(e) for e in s.update], 'body': _wstmt(s.body), 'loc': loc}
    if isinstance(s, A.Return):
        return {'kind': 'return', 'value': _wexpr(s.value) if s.value is not None else None, 'loc': loc}
    if isinstance(s, A.Break):
        return {'kind': 'break', 'loc': loc}
    if isinstance(s, A.Continue):
        return {'kind': 'continue', 'loc': loc}
    return {'kind': 'empty', 'loc': loc}


def _wexpr(e):
    loc = _wloc(e.loc)
    if isinstance(e, A.Literal):
        return {'kind': 'literal', 'type': e.kind, 'value': e.value, 'loc': loc}
    if isinstance(e, A.Name):
        return {'kind': 'name', 'id': e.id, 'loc': loc}
    if isinstance(e, A.This):
        return {'kind': 'this', 'loc': loc}
    if isinstance(e, A.FieldAccess):
        return {'kind': 'field', 'target': _wexpr(e.target), 'name': e.name, 'loc': loc}
    if isinstance(e, A.Call):
        return {'kind': 'call', 'receiver': _wexpr(e.receiver) if e.receiver is not None else None,
                'name': e.name, 'args': [_wexpr(a) for a in e.args], 'loc': loc}
    if isinstance(e, A.Binary):
        return {'kind': 'binary', 'op': e.op, 'left': _wexpr(e.left), 'right': _wexpr(e.right),
                'loc': loc}
    if isinstance(e, A.Unary):
        return {'kind': 'unary', 'op': e.op, 'operand': _wexpr(e.operand), 'loc': loc}
    if isinstance(e, A.Index):
        return {'kind': 'index', 'array': _wexpr(e.array), 'index': _wexpr(e.index), 'loc': loc}
    if isinstance(e, A.Assign):
        return {'kind': 'assign', 'op': e.op, 'target': _wexpr(e.target), 'value': _wexpr(e.value),
                'loc': loc}
    if isinstance(e, A.IncDec):
        return {'kind': 'incdec', 'op': e.op, 'target': _wexpr(e.target), 'prefix': e.prefix,
                'loc': loc}
    raise TypeError(f'not an expression: {e!r}')


def to_interchange(unit: A.SourceUnit, include_text=True) -> dict:
    types = []
    for t in unit.types:
        td = {'kind': 'class', 'name': t.name, 'superclass': t.superclass,
              'fields': [_wvar(f) for f in t.fields], 'loc': _wloc(t.loc),
              'methods': [{'kind': 'method', 'name': m.name, 'params': [_wvar(p) for p in m.params],
                           'return_type': m.return_type,
                           'body': _wstmt(m.body) if m.body is not None else None,
                           'loc': _wloc(m.loc), 'modifiers': list(m.modifiers)}
                          for m in t.methods]}
        if t.implicit:
            td['implicit'] = True
        if t.modifiers:
            td['modifiers'] = list(t.modifiers)
        types.append(td)
    doc = {'schema': SCHEMA, 'path': unit.path, 'types': types}
    if include_text and unit.raw_text:
        doc['text'] = unit.raw_text
    return doc
