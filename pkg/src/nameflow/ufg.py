"""Use-flow graphs: lowering a method body into value-flow nodes and edges.

Each node is a place a value lives (variable, field, constant, array slot) or
an operation applied to values (operator, call, return).  Edges point the way
the value moves.  Control constructs add Join (if) and Begin/End (loops) nodes
for every variable they modify.

Variables are versioned: each assignment made in the variable's own control
region creates a fresh node.  An assignment made inside a nested branch or
loop body stays "pending" (the value node itself stands for the variable)
until the enclosing Join/End node carries it back out, so ``if (x) y = 1;
else y = 2;`` yields ``1 -> Join <- 2`` and ``Join -> y``.

Node ids grow in creation order and every edge goes from an older node to a
newer one, so a method graph is acyclic by construction (loops have no back
edge; Begin/End stand in for the repetition).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import InternalLoweringError, SchemaError
from .frontend import ast as A
from .frontend.resolve import TypeTable, static_type

VARREF, FIELDREF, CONST = 'VarRef', 'FieldRef', 'Const'
BINOP, UNOP, CALL, RETURN = 'BinOp', 'UnOp', 'Call', 'Return'
JOIN, BEGIN, END, ARRAYSLOT = 'Join', 'Begin', 'End', 'ArraySlot'
NODE_KINDS = (VARREF, FIELDREF, CONST, BINOP, UNOP, CALL, RETURN, JOIN, BEGIN, END, ARRAYSLOT)
VAR_KINDS = (VARREF, FIELDREF)

COND = 'cond'
COND_TRUE, COND_FALSE = 'cond:true', 'cond:false'
RETURN_LABEL = '#return'

SCHEMA = 'ufg/1'


def arg_label(k):
    return f'#arg{k}'


def arg_index(label):
    """K for a ``#argK`` label, else None."""
    if label.startswith('#arg'):
        return int(label[4:])
    return None


@dataclass
class UfgNode:
    id: int
    kind: str
    label: str
    loc: A.SourceLoc = A.NOLOC
    decl: Optional[str] = None      # VarDecl id for VarRef/FieldRef nodes bound to a declaration
    method: str = ''

    def to_record(self):
        r = {'n': self.id, 'k': self.kind, 'l': self.label, 'loc': self.loc.to_json()}
        if self.decl is not None:
            r['decl'] = self.decl
        return r


@dataclass(frozen=True, order=True)
class UfgEdge:
    src: int
    dst: int
    label: str = ''


@dataclass
class CallInfo:
    """What is statically known about a call node."""
    name: str
    arity: int
    receiver_type: Optional[str]
    owner: str                      # class of the calling method


@dataclass
class Ufg:
    method: str
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    params: list = field(default_factory=list)         # node id per parameter position
    calls: dict = field(default_factory=dict)          # node id -> CallInfo

    def __post_init__(self):
        self._out = None
        self._in = None

    def add_node(self, kind, label, loc=A.NOLOC, decl=None):
        n = UfgNode(len(self.nodes), kind, label, loc, decl, self.method)
        self.nodes.append(n)
        self._out = self._in = None
        return n.id

    def add_edge(self, src, dst, label=''):
        if src >= dst:
            raise InternalLoweringError(f'{self.method}: edge {src}->{dst} breaks creation order')
        self.edges.append(UfgEdge(src, dst, label))
        self._out = self._in = None

    def _index(self):
        out = [[] for _ in self.nodes]
        inn = [[] for _ in self.nodes]
        for e in self.edges:
            out[e.src].append(e)
            inn[e.dst].append(e)
        self._out, self._in = out, inn

    def out_edges(self, n):
        if self._out is None:
            self._index()
        return self._out[n]

    def in_edges(self, n):
        if self._in is None:
            self._index()
        return self._in[n]

    @property
    def returns(self):
        return [n.id for n in self.nodes if n.kind == RETURN]

    def origins(self):
        """decl id -> ids of the nodes that hold that variable."""
        out = {}
        for n in self.nodes:
            if n.decl is not None:
                out.setdefault(n.decl, []).append(n.id)
        return out

    def check(self):
        """Raise InternalLoweringError unless the structural invariants hold."""
        for e in self.edges:
            if not (0 <= e.src < e.dst < len(self.nodes)):
                raise InternalLoweringError(f'{self.method}: bad edge {e}')
        for n in self.nodes:
            ins = self.in_edges(n.id)
            if n.kind == RETURN and self.out_edges(n.id):
                raise InternalLoweringError(f'{self.method}: Return node {n.id} has out-edges')
            if n.kind == BINOP and sorted(e.label for e in ins) != ['L', 'R']:
                raise InternalLoweringError(f'{self.method}: BinOp {n.id} needs one L and one R')
            if n.kind == JOIN:
                branch = [e.label for e in ins if e.label != COND]
                if len(ins) < 2 or len(set(branch)) != len(branch):
                    raise InternalLoweringError(f'{self.method}: malformed Join {n.id}')
        for e in self.edges:
            dk = self.nodes[e.dst].kind
            if e.label in ('L', 'R') and dk != BINOP:
                raise InternalLoweringError(f'{self.method}: {e.label} edge into {dk}')
            if arg_index(e.label) is not None and dk != CALL:
                raise InternalLoweringError(f'{self.method}: argument edge into {dk}')
            if e.label == 'this' and dk not in (CALL, FIELDREF):
                raise InternalLoweringError(f'{self.method}: receiver edge into {dk}')
            if e.label in (COND_TRUE, COND_FALSE) and dk not in (JOIN, END):
                raise InternalLoweringError(f'{self.method}: branch edge into {dk}')
            if e.label == RETURN_LABEL and self.nodes[e.src].kind != CALL:
                raise InternalLoweringError(f'{self.method}: #return edge out of non-call')
        return self


@dataclass
class _Binding:
    node: int
    materialized: bool      # node is a VarRef/FieldRef of this decl (vs. a pending value)
    version: int


class _Lowering:

    def __init__(self, m: A.MethodDecl, types: TypeTable):
        self.m = m
        self.types = types
        self.g = Ufg(m.id)
        self.env: dict = {}
        self.region_of: dict = {}
        self.region = 0
        self._next_region = 1
        self._version = 0

    # helpers

    def new_region(self):
        r = self._next_region
        self._next_region += 1
        return r

    def bump(self):
        self._version += 1
        return self._version

    def flow(self, src, dst, label=''):
        # a call's result leaves through its #return port
        if not label and self.g.nodes[src].kind == CALL:
            label = RETURN_LABEL
        self.g.add_edge(src, dst, label)

    def var_kind(self, decl):
        return FIELDREF if decl.kind == A.FIELD else VARREF

    def register(self, decl):
        if decl.id not in self.region_of:
            outer = decl.kind in (A.FIELD, A.PARAM) or decl.implicit
            self.region_of[decl.id] = 0 if outer else self.region

    # variables

    def read_var(self, decl, loc):
        b = self.env.get(decl.id)
        if b is None:
            # first read of a field (or of a never-assigned local): its incoming value
            self.register(decl)
            n = self.g.add_node(self.var_kind(decl), decl.name, loc, decl.id)
            self.env[decl.id] = _Binding(n, True, 0)
            return n
        if not b.materialized:
            n = self.g.add_node(self.var_kind(decl), decl.name, loc, decl.id)
            self.flow(b.node, n)
            self.env[decl.id] = _Binding(n, True, b.version)
            return n
        return b.node

    def write_var(self, decl, value, loc):
        """Bind ``value`` (a node id or None) as the new version of ``decl``."""
        self.register(decl)
        version = self.bump()
        if self.region_of[decl.id] == self.region or value is None:
            n = self.g.add_node(self.var_kind(decl), decl.name, loc, decl.id)
            if value is not None:
                self.flow(value, n)
            self.env[decl.id] = _Binding(n, True, version)
            return n
        self.env[decl.id] = _Binding(value, False, version)
        return value

    # statements

    def run(self):
        for p in self.m.params:
            self.register(p)
            self.g.params.append(self.write_var(p, None, p.loc))
        if self.m.body is not None:
            self.stmt(self.m.body)
        return self.g.check()

    def stmt(self, s):
        if isinstance(s, A.Block):
            for x in s.body:
                self.stmt(x)
        elif isinstance(s, A.LocalVar):
            for d in s.decls:
                self.region_of[d.id] = self.region
                if d.init is not None:
                    self.write_var(d, self.expr(d.init), d.loc)
        elif isinstance(s, A.ExprStmt):
            self.expr(s.expr)
        elif isinstance(s, A.If):
            self.if_stmt(s)
        elif isinstance(s, A.While):
            self.loop(s, s.cond, [s.body], post_test=False)
        elif isinstance(s, A.DoWhile):
            self.loop(s, s.cond, [s.body], post_test=True)
        elif isinstance(s, A.For):
            for x in s.init:
                self.stmt(x)
            self.loop(s, s.cond, [s.body] + [A.ExprStmt(e) for e in s.update], post_test=False)
        elif isinstance(s, A.Return):
            if s.value is not None:
                v = self.expr(s.value)
                r = self.g.add_node(RETURN, 'return', s.loc)
                if v is not None:
                    self.flow(v, r)
        # break / continue / empty: no value flow

    def branch(self, body, env):
        saved_env, saved_region = self.env, self.region
        self.env = env
        self.region = self.new_region()
        if body is not None:
            self.stmt(body)
        out = self.env
        self.env, self.region = saved_env, saved_region
        return out

    def if_stmt(self, s):
        pred = self.expr(s.cond)
        before = dict(self.env)
        first_inner = self._next_region
        then_env = self.branch(s.then, {k: _copy(b) for k, b in before.items()})
        else_env = self.branch(s.orelse, {k: _copy(b) for k, b in before.items()})
        merged = dict(before)
        changed = []
        for env in (then_env, else_env):
            for k, b in env.items():
                prior = before.get(k)
                if prior is None or b.version != prior.version:
                    if self.region_of.get(k, first_inner) < first_inner and b.version != 0:
                        if k not in changed:
                            changed.append(k)
                    elif k not in merged:
                        # declared inside the branch, or a first field read there
                        merged[k] = b
        self.env = merged
        for k in changed:
            j_inputs = []
            for env, label in ((then_env, COND_TRUE), (else_env, COND_FALSE)):
                b = env.get(k)
                if b is not None:
                    j_inputs.append((b.node, label))
            j = self.g.add_node(JOIN, 'Join', s.loc)
            for src, label in j_inputs:
                self.flow(src, j, label)
            if pred is not None:
                self.flow(pred, j, COND)
            decl = self._decl(k)
            self.write_var(decl, j, s.loc)

    def loop(self, s, cond, body, post_test):
        modified = []
        for part in body + ([cond] if cond is not None else []):
            for d in _assigned_decls(part):
                if (d.id in self.region_of or d.kind == A.FIELD or d.implicit) and d not in modified:
                    modified.append(d)
        pred = None
        if not post_test and cond is not None:
            pred = self.expr(cond)
        for d in modified:
            self.register(d)
            b = self.env.get(d.id)
            begin = self.g.add_node(BEGIN, 'Begin', s.loc)
            if b is not None:
                self.flow(b.node, begin)
            if pred is not None:
                self.flow(pred, begin, COND)
            self.env[d.id] = _Binding(begin, False, self.bump())
        saved_region = self.region
        self.region = self.new_region()
        for part in body:
            self.stmt(part)
        if post_test and cond is not None:
            pred = self.expr(cond)
        finals = {d.id: self.env[d.id] for d in modified}
        self.region = saved_region
        for d in modified:
            end = self.g.add_node(END, 'End', s.loc)
            self.flow(finals[d.id].node, end)
            if post_test and pred is not None:
                self.flow(pred, end, COND)
            self.write_var(d, end, s.loc)

    def _decl(self, decl_id):
        return self._decls[decl_id]

    # expressions

    def expr(self, e) -> Optional[int]:
        g = self.g
        if isinstance(e, A.Literal):
            return g.add_node(CONST, 'const', e.loc)
        if isinstance(e, A.Name):
            if e.decl is None:
                # unresolved: a fresh, unbound node per use
                return g.add_node(VARREF, e.id, e.loc)
            self._decls[e.decl.id] = e.decl
            return self.read_var(e.decl, e.loc)
        if isinstance(e, A.This):
            return None
        if isinstance(e, A.FieldAccess):
            if isinstance(e.target, A.This) and e.decl is not None:
                self._decls[e.decl.id] = e.decl
                return self.read_var(e.decl, e.loc)
            base = self.expr(e.target)
            n = g.add_node(FIELDREF, e.name, e.loc)
            if base is not None:
                self.flow(base, n, 'this')
            return n
        if isinstance(e, A.Binary):
            left = self.expr(e.left)
            right = self.expr(e.right)
            n = g.add_node(BINOP, e.op, e.loc)
            self._operand(left, n, 'L', e.left.loc)
            self._operand(right, n, 'R', e.right.loc)
            return n
        if isinstance(e, A.Unary):
            v = self.expr(e.operand)
            n = g.add_node(UNOP, e.op, e.loc)
            if v is not None:
                self.flow(v, n)
            return n
        if isinstance(e, A.Index):
            base = self.expr(e.array)
            idx = self.expr(e.index)
            n = g.add_node(ARRAYSLOT, '[]', e.loc)
            if base is not None:
                self.flow(base, n)
            if idx is not None:
                self.flow(idx, n, '[]')
            return n
        if isinstance(e, A.Call):
            return self.call(e)
        if isinstance(e, A.Assign):
            if e.op == '=':
                value = self.expr(e.value)
            else:
                cur = self.expr(e.target)
                rhs = self.expr(e.value)
                value = g.add_node(BINOP, e.op[:-1], e.loc)
                self._operand(cur, value, 'L', e.target.loc)
                self._operand(rhs, value, 'R', e.value.loc)
            return self.store(e.target, value, e.loc)
        if isinstance(e, A.IncDec):
            cur = self.expr(e.target)
            one = g.add_node(CONST, 'const', e.loc)
            value = g.add_node(BINOP, e.op[0], e.loc)
            self._operand(cur, value, 'L', e.target.loc)
            self.flow(one, value, 'R')
            new = self.store(e.target, value, e.loc)
            return new if e.prefix else cur
        raise InternalLoweringError(f'cannot lower {type(e).__name__}')

    def _operand(self, v, op, side, loc):
        if v is None:
            # `this` as an operand still needs a source for the operator's L/R port
            v = self.g.add_node(CONST, 'const', loc)
        self.flow(v, op, side)

    def store(self, target, value, loc):
        g = self.g
        if isinstance(target, A.Name):
            if target.decl is None:
                n = g.add_node(VARREF, target.id, target.loc)
                if value is not None:
                    self.flow(value, n)
                return n
            self._decls[target.decl.id] = target.decl
            return self.write_var(target.decl, value, target.loc)
        if isinstance(target, A.FieldAccess):
            if isinstance(target.target, A.This) and target.decl is not None:
                self._decls[target.decl.id] = target.decl
                return self.write_var(target.decl, value, target.loc)
            base = self.expr(target.target)
            n = g.add_node(FIELDREF, target.name, target.loc)
            if value is not None:
                self.flow(value, n)
            if base is not None:
                self.flow(base, n, 'this')
            return n
        if isinstance(target, A.Index):
            base = self.expr(target.array)
            idx = self.expr(target.index)
            n = g.add_node(ARRAYSLOT, '[]', target.loc)
            if base is not None:
                self.flow(base, n)
            if idx is not None:
                self.flow(idx, n, '[]')
            if value is not None:
                self.flow(value, n, '=')
            return n
        raise InternalLoweringError(f'cannot assign to {type(target).__name__}')

    def call(self, e):
        recv = None
        if e.receiver is not None and not isinstance(e.receiver, A.This):
            recv = self.expr(e.receiver)
            rtype = static_type(e.receiver, self.m.owner, self.types)
        else:
            rtype = self.m.owner
        args = [self.expr(a) for a in e.args]
        n = self.g.add_node(CALL, e.name + '()', e.loc)
        if recv is not None:
            self.flow(recv, n, 'this')
        for k, a in enumerate(args):
            if a is not None:
                self.flow(a, n, arg_label(k))
        self.g.calls[n] = CallInfo(e.name, len(e.args), rtype or None, self.m.owner)
        return n


def _copy(b):
    return _Binding(b.node, b.materialized, b.version)


def _assigned_decls(node):
    """Declarations written anywhere inside ``node`` (assignments, ++/--)."""
    out = []
    for n in node.walk():
        target = None
        if isinstance(n, A.Assign):
            target = n.target
        elif isinstance(n, A.IncDec):
            target = n.target
        if isinstance(target, (A.Name, A.FieldAccess)) and target.decl is not None:
            out.append(target.decl)
    return out


def build_method_graph(m: A.MethodDecl, types: TypeTable | None = None) -> Ufg:
    """Lower one scope-annotated method to its use-flow graph."""
    low = _Lowering(m, types or TypeTable())
    low._decls = {p.id: p for p in m.params}
    for d in m.locals():
        low._decls[d.id] = d
    return low.run()


# record stream

def graph_to_records(g: Ufg) -> list:
    """Header, then nodes by id, then edges by (src, dst, label)."""
    out = [{'schema': SCHEMA, 'method': g.method, 'params': list(g.params)}]
    for n in sorted(g.nodes, key=lambda n: n.id):
        r = n.to_record()
        info = g.calls.get(n.id)
        if info is not None:
            r['call'] = {'name': info.name, 'arity': info.arity, 'recv': info.receiver_type,
                         'owner': info.owner}
        out.append(r)
    for e in sorted(g.edges):
        out.append({'e': [e.src, e.dst], 'l': e.label})
    return out


def records_to_graph(records) -> Ufg:
    records = list(records)
    if not records or records[0].get('schema') != SCHEMA:
        raise SchemaError('schema', 'expected a ufg/1 header record')
    head = records[0]
    g = Ufg(head.get('method', ''))
    g.params = list(head.get('params', []))
    for r in records[1:]:
        if 'n' in r:
            loc = r.get('loc') or {}
            span = loc.get('span', [0, 0])
            node = UfgNode(r['n'], r['k'], r['l'],
                           A.SourceLoc('', loc.get('line', 0), loc.get('col', 0), span[0], span[1]),
                           r.get('decl'), g.method)
            if node.id != len(g.nodes):
                raise SchemaError('n', f'node ids must be dense and sorted, got {node.id}')
            g.nodes.append(node)
            c = r.get('call')
            if c is not None:
                g.calls[node.id] = CallInfo(c['name'], c['arity'], c.get('recv'), c.get('owner', ''))
        elif 'e' in r:
            src, dst = r['e']
            g.add_edge(src, dst, r.get('l', ''))
        else:
            raise SchemaError('record', f'neither node nor edge: {r!r}')
    return g


def write_records(records, fp):
    for r in records:
        fp.write(json.dumps(r, sort_keys=True) + '\n')


def read_records(fp):
    return [json.loads(line) for line in fp if line.strip()]
