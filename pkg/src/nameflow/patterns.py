"""Usage patterns: bounded paths through the program graph from a variable.

Starting at every node that holds the variable, a depth-first walk follows
out-edges (forward) or in-edges (backward) and records each node it passes.
A walk stops when it has taken ``max_length`` steps or cannot continue; the
starting node itself is not part of the pattern.

Calls with known callees are entered like inlined code when ``interproc`` is
on.  Forward, a value passed as argument K steps onto the Call node and then
onto parameter K of each callee (push); a callee Return pops back to the
nodes receiving the call's result, or, with nothing pushed, to the receivers
of every call site of that method (fan-out).  Backward is the mirror image:
a bound Call reached from its result steps into the callee Return nodes, and
a parameter leaves through the matching argument of the pushed call (or of
every caller).  Calls without known callees are plain operators.  With
``interproc`` off, bound Call nodes, Returns and parameters end the walk.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .frontend import ast as A
from .interproc import ProgramGraph
from .ufg import CALL, RETURN, arg_index

FORWARD, BACKWARD = 'F', 'B'
PUSH, POP, FAN = 'push', 'pop', 'fan'


@dataclass(frozen=True)
class Step:
    label: str          # label of the edge taken ('' when unlabeled or a cross-method hop)
    desc: str           # descriptor of the node reached
    kind: str           # UFG node kind of the node reached
    node: int           # global node id
    event: str = ''     # push / pop / fan when the hop changed the call stack


@dataclass(frozen=True)
class UsagePattern:
    origin: str         # VarDecl id
    direction: str      # 'F' or 'B'
    steps: tuple
    origin_node: int = -1

    def __post_init__(self):
        if not self.steps:
            raise ValueError('a usage pattern needs at least one step')

    @property
    def dists(self):
        return tuple(range(1, len(self.steps) + 1))

    @property
    def key(self):
        return pattern_key(self)

    @property
    def nodes(self):
        return tuple(s.node for s in self.steps)


@dataclass
class TraversalConfig:
    max_length: int = 5
    max_virtuals: int = 5
    interproc: bool = True
    max_patterns_per_variable: int = 10000

    def __post_init__(self):
        for name in ('max_length', 'max_virtuals', 'max_patterns_per_variable'):
            if getattr(self, name) <= 0:
                raise ValueError(f'{name} must be positive')


def _escape(s):
    return s.replace('\\', '\\\\').replace('|', '\\|').replace(':', '\\:')


def pattern_key(p: UsagePattern) -> str:
    """``F|label:desc|label:desc...`` with ``\\``, ``|`` and ``:`` escaped inside parts."""
    if not p.steps:
        raise ValueError('a usage pattern needs at least one step')
    return p.direction + '|' + '|'.join(_escape(s.label) + ':' + _escape(s.desc) for s in p.steps)


class _BudgetExceeded(Exception):
    pass


class _Walker:

    def __init__(self, pg: ProgramGraph, cfg: TraversalConfig):
        self.pg = pg
        self.cfg = cfg
        self.param_index = {}
        for mid, ps in pg.params.items():
            for k, gid in enumerate(ps):
                self.param_index[gid] = k

    def _callers(self, gid):
        return self.pg.callers.get(self.pg.method_of[gid], [])[:self.cfg.max_virtuals]

    def forward(self, gid, via, stack, restrict):
        pg, on = self.pg, self.cfg.interproc
        kind = pg.kind[gid]
        if kind == CALL and gid in pg.bound:
            if not on:
                return []
            k = arg_index(via) if via else None
            if k is not None:
                nxt = stack + (gid,)
                return [(pg.params[mid][k], '', nxt, PUSH, None)
                        for mid in pg.bound[gid][:self.cfg.max_virtuals]]
        elif kind == RETURN:
            if not on:
                return []
            if stack:
                c = stack[-1]
                return [(dst, lbl, stack[:-1], POP, None) for dst, lbl in pg.out[c]]
            return [(dst, lbl, (), FAN, None) for c in self._callers(gid) for dst, lbl in pg.out[c]]
        return [(dst, lbl, stack, '', None) for dst, lbl in pg.out[gid]]

    def backward(self, gid, via, stack, restrict):
        pg, on = self.pg, self.cfg.interproc
        if restrict is not None:
            return [(src, lbl, stack, '', None) for src, lbl in pg.inn[gid] if lbl == restrict]
        kind = pg.kind[gid]
        if kind == CALL and gid in pg.bound:
            if not on:
                return []
            nxt = stack + (gid,)
            return [(r, '', nxt, PUSH, None)
                    for mid in pg.bound[gid][:self.cfg.max_virtuals] for r in pg.returns[mid]]
        k = self.param_index.get(gid)
        if k is not None and on:
            label = f'#arg{k}'
            if stack:
                return [(stack[-1], '', stack[:-1], POP, label)]
            return [(c, '', (), FAN, label) for c in self._callers(gid)]
        return [(src, lbl, stack, '', None) for src, lbl in pg.inn[gid]]

    def walk(self, origin_decl, start, direction, out, seen):
        succ = self.forward if direction == FORWARD else self.backward
        pg = self.pg
        limit = self.cfg.max_length
        budget = self.cfg.max_patterns_per_variable

        def emit(path):
            sig = tuple((s.node, s.label, s.event) for s in path)
            if sig in seen:
                return
            if len(out) >= budget:
                raise _BudgetExceeded
            seen.add(sig)
            out.append(UsagePattern(origin_decl, direction, tuple(path), start))

        def dfs(gid, via, stack, restrict, path):
            if len(path) == limit:
                emit(path)
                return
            nexts = succ(gid, via, stack, restrict)
            if not nexts:
                if path:
                    emit(path)
                return
            for nid, lbl, nstack, event, nrestrict in nexts:
                path.append(Step(lbl, pg.label[nid], pg.kind[nid], nid, event))
                dfs(nid, lbl, nstack, nrestrict, path)
                path.pop()

        dfs(start, None, (), None, [])


def collect_patterns(pg: ProgramGraph, v, cfg: TraversalConfig | None = None,
                     diagnostics: list | None = None) -> list:
    """All distinct forward and backward usage paths of variable ``v``.

    Returns the patterns in deterministic walk order (forward before
    backward, origin nodes by id).  When ``max_patterns_per_variable`` trips
    the list is cut at that point and a ``budget-exceeded`` diagnostic is
    appended to ``diagnostics``.
    """
    cfg = cfg or TraversalConfig()
    return _collect(_Walker(pg, cfg), v if isinstance(v, str) else v.id, diagnostics)


def _collect(w, decl_id, diagnostics):
    pg, cfg = w.pg, w.cfg
    out = []
    try:
        for direction in (FORWARD, BACKWARD):
            seen = set()
            for start in pg.origins.get(decl_id, ()):
                w.walk(decl_id, start, direction, out, seen)
    except _BudgetExceeded:
        if diagnostics is not None:
            d = pg.decls.get(decl_id)
            diagnostics.append(A.Diagnostic(
                'budget-exceeded',
                f'{decl_id}: more than {cfg.max_patterns_per_variable} patterns, truncated',
                d.loc if d is not None else A.NOLOC))
    return out


def variable_order(decl):
    return (decl.loc.path, decl.loc.line, decl.loc.col, decl.name)


def collect_all(pg: ProgramGraph, cfg: TraversalConfig | None = None, diagnostics=None) -> dict:
    """decl id -> patterns for every declared variable, in source order."""
    w = _Walker(pg, cfg or TraversalConfig())
    return {d.id: _collect(w, d.id, diagnostics)
            for d in sorted(pg.decls.values(), key=variable_order)}


def term_frequencies(patterns) -> Counter:
    """Pattern key -> number of distinct paths producing it."""
    return Counter(p.key for p in patterns)


def dump_records(patterns):
    return [{'var': p.origin, 'dir': p.direction, 'key': p.key, 'dist': list(p.dists)}
            for p in patterns]
