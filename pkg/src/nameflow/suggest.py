"""Per-variable consistency checks, ranking, evidence and rename patches."""
from __future__ import annotations

import difflib
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import CollisionError, NoPatterns, RenameNotSupported
from .features import canonical_name, strip_self_features, tokenize_name
from .frontend import ast as A
from .frontend.lexer import KEYWORDS
from .model import NameLabel, predict, unlearn
from .similarity import ConfidenceScore, confidence


@dataclass
class Consistent:
    target: A.VarDecl
    label: NameLabel
    score: float


@dataclass
class EvidenceSnippet:
    key: str
    weight: float
    var: str                # supporting VarDecl id
    name: str
    loc: A.SourceLoc
    first_line: int
    lines: list

    def to_json(self):
        return {'pattern': self.key, 'weight': self.weight, 'var': self.var, 'name': self.name,
                'path': self.loc.path, 'line': self.loc.line, 'col': self.loc.col,
                'first_line': self.first_line, 'lines': self.lines}


@dataclass
class Suggestion:
    target: A.VarDecl
    original: NameLabel
    proposed: NameLabel
    confidence: ConfidenceScore
    score: float                                    # Naive Bayes log score of the proposal
    evidence: list = field(default_factory=list)
    rank: Optional[int] = None
    supports: dict = field(default_factory=dict)    # pattern key -> supporting feature keys

    @property
    def new_name(self):
        return recase(self.proposed, self.target.name)


def location_key(decl):
    return (decl.loc.path, decl.loc.line, decl.loc.col, decl.name)


def check_variable(v: A.VarDecl, model, ctx):
    """Consistent or Suggestion for ``v``; raises NoPatterns when there is no evidence.

    ``ctx`` is a pipeline.Analysis (observations, per-key features, pattern
    index, config).
    """
    obs = ctx.observations.get(v.id)
    if obs is None or not obs.features:
        raise NoPatterns(f'{v.name}: no usage patterns')
    m = unlearn(model, obs)
    query = strip_self_features(sorted(obs.features), v)
    known = [f for f in query if m.feature_count(f) > 0]
    if not known or m.total == 0:
        raise NoPatterns(f'{v.name}: no usage evidence shared with other variables')
    (top, score), = predict(m, known, k=1)
    own = canonical_name(v.name)
    if top.canonical == own:
        return Consistent(v, top, score)

    contributing, supports = [], {}
    tf = ctx.index.tf.get(v.id, {})
    for key, feats in sorted(ctx.key_features[v.id].items()):
        kept = strip_self_features(feats, v)
        sup = [f for f in kept if m.count(f.key, top.canonical) > 0]
        if sup:
            dist = min(f.dist for f in sup)
            contributing.append((key, tf[key], max(dist, 1)))
            supports[key] = sorted(f.key for f in sup)
    conf = confidence(contributing, ctx.index, ctx.config.confidence_dist_sign)
    return Suggestion(v, NameLabel(own, v.name), top, conf, score, supports=supports)


def rank_suggestions(suggestions, top_k: int = 10) -> list:
    """All suggestions, best first; the first ``top_k`` get ranks 1..top_k."""
    out = sorted(suggestions, key=lambda s: (-s.confidence.value, location_key(s.target)))
    for i, s in enumerate(out):
        s.rank = i + 1 if i < top_k else None
    return out


def gather_evidence(s: Suggestion, ctx, n: int = 3) -> Suggestion:
    """Attach up to ``n`` source snippets of variables already named as proposed."""
    s.evidence = []
    if n <= 0:
        return s
    want = s.proposed.canonical
    named = [d for d in ctx.variables if d.id != s.target.id and canonical_name(d.name) == want]
    seen = set()
    for term in s.confidence.terms:
        holders = [d for d in named if term.key in ctx.index.tf.get(d.id, {})]
        if not holders:
            sup = set(s.supports.get(term.key, ()))
            scored = [(len(sup & set(ctx.features.get(d.id, {}))), d) for d in named]
            scored = [(c, d) for c, d in scored if c > 0]
            scored.sort(key=lambda cd: (-cd[0], location_key(cd[1])))
            holders = [d for _, d in scored]
        else:
            holders.sort(key=location_key)
        for d in holders:
            where = (d.loc.path, d.loc.line)
            if where in seen:
                continue
            seen.add(where)
            unit = ctx.unit_of(d)
            first, lines = unit.snippet(d.loc) if unit is not None else (d.loc.line, [])
            s.evidence.append(EvidenceSnippet(term.key, term.value, d.id, d.name, d.loc, first, lines))
            break
        if len(s.evidence) >= n:
            break
    return s


# renaming

def naming_style(name):
    core = name.strip('_')
    if not core:
        return 'camel'
    if '_' in core:
        return 'upper_snake' if core.upper() == core else 'snake'
    if core.upper() == core and len(core) > 1 and any(c.isalpha() for c in core):
        return 'upper_snake'
    if core[0].isupper():
        return 'pascal'
    return 'camel'


def recase(label, original: str) -> str:
    """Spell a label's tokens in the naming convention of ``original``."""
    if isinstance(label, NameLabel):
        toks = label.canonical.split(' ')
        fallback = label.display
    else:
        toks = str(label).split(' ')
        fallback = str(label)
    toks = [t for t in toks if t]
    if not toks:
        return fallback
    style = naming_style(original)
    lead = original[:len(original) - len(original.lstrip('_'))]
    if style == 'snake':
        out = '_'.join(toks)
    elif style == 'upper_snake':
        out = '_'.join(t.upper() for t in toks)
    elif style == 'pascal':
        out = ''.join(t[:1].upper() + t[1:] for t in toks)
    else:
        out = toks[0] + ''.join(t[:1].upper() + t[1:] for t in toks[1:])
    if style in ('camel', 'pascal'):
        # keep digit tokens apart from a following digit token
        if tokenize_name(out) != toks:
            out = '_'.join(toks) if style == 'camel' else '_'.join(t.capitalize() for t in toks)
    out = lead + out
    if out[0].isdigit():
        out = '_' + out
    return out


def _scope_method(decl, unit):
    for t in unit.types:
        for m in t.methods:
            if m.id == decl.owner:
                return t, m
    return None, None


def occurrences(decl, unit):
    """Byte spans of the declaration and every use bound to it."""
    spans = {(decl.loc.start, decl.loc.end)}
    roots = []
    if decl.kind == A.FIELD:
        roots = [m for t in unit.types for m in t.methods]
        roots += [f for t in unit.types for f in t.fields if f.init is not None]
    else:
        _, m = _scope_method(decl, unit)
        if m is not None:
            roots = [m]
    for r in roots:
        for n in r.walk():
            if isinstance(n, (A.Name, A.FieldAccess)) and n.decl is decl:
                if isinstance(n, A.FieldAccess):
                    # span of the member name only: the last len(name) bytes
                    end = n.loc.end
                    spans.add((end - len(n.name.encode('utf-8')), end))
                else:
                    spans.add((n.loc.start, n.loc.end))
    return sorted(spans)


def _collision(decl, unit, new, types=None):
    if new in KEYWORDS or not re.fullmatch(r'[A-Za-z_$][A-Za-z0-9_$]*', new):
        return True
    t, m = _scope_method(decl, unit)
    if decl.kind == A.FIELD:
        t = next((x for x in unit.types if any(f is decl for f in x.fields)), None)
        if t is None:
            return True
        if any(f.name == new for f in t.fields):
            return True
        scopes = t.methods
    else:
        if m is None:
            return True
        if any(f.name == new for x in unit.types if x.name == m.owner for f in x.fields):
            return True
        if types is not None and types.lookup_field(m.owner, new) is not None:
            return True
        scopes = [m]
    for sm in scopes:
        for d in sm.params + sm.locals():
            if d.name == new and d is not decl:
                return True
        if sm.body is not None:
            for n in sm.body.walk():
                if isinstance(n, A.Name) and n.id == new:
                    return True
    return False


def emit_patch(s: Suggestion, unit: A.SourceUnit, allow_fields=False, types=None) -> str:
    """Unified diff renaming the target everywhere it is in scope."""
    d = s.target
    if d.kind == A.FIELD and not allow_fields:
        raise RenameNotSupported(f'{d.name}: renaming fields is disabled')
    new = s.new_name
    if new == d.name:
        raise RenameNotSupported(f'{d.name}: proposed spelling is identical')
    if _collision(d, unit, new, types):
        raise CollisionError(new, d.loc)
    raw = unit.raw_text.encode('utf-8')
    out, pos = [], 0
    for a, b in occurrences(d, unit):
        if raw[a:b].decode('utf-8') != d.name:
            raise RenameNotSupported(f'{d.name}: occurrence at byte {a} does not match')
        out.append(raw[pos:a])
        out.append(new.encode('utf-8'))
        pos = b
    out.append(raw[pos:])
    new_text = b''.join(out).decode('utf-8')
    return unified_diff(unit.raw_text, new_text, unit.path)


def unified_diff(old, new, path):
    a = old.splitlines(keepends=True)
    b = new.splitlines(keepends=True)
    lines = []
    for line in difflib.unified_diff(a, b, fromfile='a/' + path, tofile='b/' + path):
        if not line.endswith('\n'):
            line += '\n\\ No newline at end of file\n'
        lines.append(line)
    return ''.join(lines)


def patch_filename(i, s: Suggestion):
    base = re.sub(r'[^A-Za-z0-9_.-]', '_', s.target.loc.path.replace('\\', '/').split('/')[-1])
    return f'{i:03d}-{base}-{s.target.loc.line}-{s.target.name}-{s.new_name}.patch'
