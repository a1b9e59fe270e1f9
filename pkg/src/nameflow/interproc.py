"""Whole-program graph: call resolution and cross-method linkage.

Method graphs stay separate; ``ProgramGraph`` gives every node a global id
(methods sorted by id, node ids offset) and records which callees each call
node may reach.  The caller-argument -> callee-parameter and
callee-return -> caller-receiver edges are not stored; the pattern walker
follows them on demand through ``bound``, ``params``, ``returns`` and
``callers``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .frontend import ast as A
from .frontend.resolve import TypeTable, resolve_names
from .ufg import CALL, Ufg, build_method_graph, RETURN

MAX_VIRTUALS = 5


@dataclass(frozen=True, order=True)
class CallSite:
    node: int                       # global node id of the Call node
    name: str
    arity: int
    receiver_type: Optional[str] = None


class Hierarchy:
    """Subtype relation over the classes of one program."""

    def __init__(self, types: TypeTable):
        self.types = types
        self.children = {}
        for t in types.types.values():
            if t.superclass and types.get(t.superclass) is not None:
                self.children.setdefault(types.get(t.superclass).name, []).append(t.name)
        for v in self.children.values():
            v.sort()

    def depth(self, name):
        return sum(1 for _ in self.types.ancestors(name)) - 1

    def subtypes(self, name):
        """All transitive subtypes of ``name`` (excluding itself)."""
        out, todo, seen = [], list(self.children.get(name, ())), {name}
        while todo:
            n = todo.pop()
            if n in seen:
                continue
            seen.add(n)
            out.append(n)
            todo.extend(self.children.get(n, ()))
        return out

    def is_subtype(self, sub, sup):
        return any(t.name == sup for t in self.types.ancestors(sub))


def resolve_callees(site: CallSite, hierarchy: Hierarchy, max_virtuals: int = MAX_VIRTUALS):
    """Methods a call may dispatch to, most specific class first.

    Candidates are the declaration the receiver type inherits or declares
    plus every override in its subtypes.  An unknown receiver type (library
    classes, untyped locals) yields an empty, opaque result.
    """
    t = hierarchy.types.get(site.receiver_type)
    if t is None:
        return []
    found = []
    for anc in hierarchy.types.ancestors(t.name):
        m = anc.method(site.name, site.arity)
        if m is not None:
            found.append((anc.name, m))
            break
    for sub in hierarchy.subtypes(t.name):
        m = hierarchy.types.get(sub).method(site.name, site.arity)
        if m is not None:
            found.append((sub, m))
    found.sort(key=lambda tm: (-hierarchy.depth(tm[0]), tm[0]))
    return [m.id for _, m in found[:max_virtuals]]


@dataclass
class ProgramGraph:
    ufgs: dict                                  # method id -> Ufg
    call_bindings: dict                         # CallSite -> tuple of method ids
    hierarchy: Optional[Hierarchy] = None
    units: list = field(default_factory=list)
    decls: dict = field(default_factory=dict)   # VarDecl id -> VarDecl
    methods: dict = field(default_factory=dict)  # method id -> MethodDecl
    diagnostics: list = field(default_factory=list)
    max_virtuals: int = MAX_VIRTUALS

    def __post_init__(self):
        self.offsets = {}
        self.kind, self.label, self.decl, self.method_of, self.loc = [], [], [], [], []
        self.out, self.inn = [], []
        self.params, self.returns = {}, {}
        for mid in sorted(self.ufgs):
            g = self.ufgs[mid]
            off = len(self.kind)
            self.offsets[mid] = off
            for n in g.nodes:
                self.kind.append(n.kind)
                self.label.append(n.label)
                self.decl.append(n.decl)
                self.method_of.append(mid)
                self.loc.append(n.loc)
                self.out.append([])
                self.inn.append([])
            for e in g.edges:
                self.out[off + e.src].append((off + e.dst, e.label))
                self.inn[off + e.dst].append((off + e.src, e.label))
            self.params[mid] = [off + p for p in g.params]
            self.returns[mid] = [off + r for r in g.returns]
        for lst in self.out + self.inn:
            lst.sort()
        self.bound = {}
        self.site_of = {}
        callers = {}
        for site in sorted(self.call_bindings):
            mids = tuple(self.call_bindings[site])
            self.site_of[site.node] = site
            if mids:
                self.bound[site.node] = mids
            for mid in mids:
                callers.setdefault(mid, []).append(site.node)
        self.callers = {mid: sorted(v) for mid, v in callers.items()}
        self.origins = {}
        for gid, d in enumerate(self.decl):
            if d is not None:
                self.origins.setdefault(d, []).append(gid)

    def __len__(self):
        return len(self.kind)

    def descriptor(self, gid):
        return self.label[gid]

    def local_id(self, gid):
        return gid - self.offsets[self.method_of[gid]]

    def bindings_records(self):
        """Sidecar records, one per call site; ``call`` is the node id within ``method``."""
        return [{'call': self.local_id(s.node), 'method': self.method_of[s.node], 'name': s.name,
                 'methods': list(self.call_bindings[s])}
                for s in sorted(self.call_bindings)]


def call_sites(ufgs) -> list:
    """Every call node of every method, with global ids."""
    out = []
    off = 0
    for mid in sorted(ufgs):
        g = ufgs[mid]
        for local, info in sorted(g.calls.items()):
            out.append(CallSite(off + local, info.name, info.arity, info.receiver_type))
        off += len(g.nodes)
    return out


def link(ufgs, bindings, hierarchy=None, max_virtuals=MAX_VIRTUALS, **extra) -> ProgramGraph:
    """Validate call bindings and assemble the program graph.

    Bindings to unknown methods or with the wrong arity are dropped with a
    diagnostic.  At most ``max_virtuals`` callees survive per call site.
    """
    diags = list(extra.pop('diagnostics', []))
    clean = {}
    for site in sorted(bindings):
        keep = []
        for mid in bindings[site]:
            g = ufgs.get(mid)
            if g is None:
                diags.append(A.Diagnostic('unknown-callee', f'call {site.name}() bound to unknown {mid}',
                                          A.NOLOC))
            elif len(g.params) != site.arity:
                diags.append(A.Diagnostic(
                    'arity-mismatch',
                    f'call {site.name}() passes {site.arity} arguments but {mid} takes {len(g.params)}',
                    A.NOLOC))
            else:
                keep.append(mid)
        clean[site] = tuple(keep[:max_virtuals])
    return ProgramGraph(ufgs, clean, hierarchy, diagnostics=diags, max_virtuals=max_virtuals, **extra)


def build_program(units, max_virtuals=MAX_VIRTUALS) -> ProgramGraph:
    """Resolve, lower, bind and link a list of parsed SourceUnits."""
    types = TypeTable([t for u in units for t in u.types])
    for u in units:
        resolve_names(u, types)
    hierarchy = Hierarchy(types)
    ufgs, methods, decls = {}, {}, {}
    diags = [d for u in units for d in u.diagnostics]
    owner = {}
    for u in units:
        for t in u.types:
            first = owner.setdefault(t.name, u.path)
            if first != u.path or types.get(t.name) is not t:
                # same class declared twice: the first declaration wins
                diags.append(A.Diagnostic('duplicate-type',
                                          f'class {t.name} already declared in {first}', t.loc))
                continue
            for f in t.fields:
                decls[f.id] = f
            for m in t.methods:
                methods[m.id] = m
                for d in m.params + m.locals():
                    decls[d.id] = d
                ufgs[m.id] = build_method_graph(m, types)
    bindings = {s: resolve_callees(s, hierarchy, max_virtuals) for s in call_sites(ufgs)}
    return link(ufgs, bindings, hierarchy, max_virtuals, units=list(units), decls=decls,
                methods=methods, diagnostics=diags)


__all__ = ['CallSite', 'Hierarchy', 'ProgramGraph', 'resolve_callees', 'link', 'build_program',
           'call_sites', 'MAX_VIRTUALS', 'CALL', 'RETURN', 'Ufg']
