"""Report assembly: verdicts, ranked suggestions, score buckets, method stats."""
from __future__ import annotations

import json
import math

from .errors import NoPatterns
from .features import tokenize_name
from .frontend import ast as A
from .suggest import Suggestion, check_variable, gather_evidence, rank_suggestions

SCHEMA = 'nameflow-report/1'
DECILES = 10


def _where(d):
    return {'var': d.id, 'name': d.name, 'kind': d.kind, 'path': d.loc.path,
            'line': d.loc.line, 'col': d.loc.col}


def run_checks(analysis):
    """(verdict rows, ranked suggestions) for every variable of the analysis."""
    cfg = analysis.config
    verdicts, suggestions = [], []
    for v in analysis.variables:
        row = _where(v)
        try:
            r = check_variable(v, analysis.model, analysis)
        except NoPatterns as e:
            row.update(verdict='unanalyzable', reason=str(e))
        else:
            if isinstance(r, Suggestion):
                row.update(verdict='suggestion', predicted=r.proposed.canonical, score=r.score)
                suggestions.append(r)
            else:
                row.update(verdict='consistent', predicted=r.label.canonical, score=r.score)
        verdicts.append(row)
    ranked = rank_suggestions(suggestions, cfg.top_k)
    for s in ranked:
        if s.rank is not None:
            gather_evidence(s, analysis, cfg.evidence_n)
    return verdicts, ranked


def suggestion_json(s: Suggestion):
    out = {'rank': s.rank}
    out.update(_where(s.target))
    out.update({
        'original': s.original.display,
        'proposed': s.proposed.canonical,
        'new_name': s.new_name,
        'confidence': s.confidence.value,
        'score': s.score,
        'patterns': [{'key': t.key, 'tf': t.tf, 'idf': t.idf, 'dist': t.dist, 'weight': t.value}
                     for t in s.confidence.terms],
        'evidence': [e.to_json() for e in s.evidence],
    })
    return out


def score_dist(values, buckets=DECILES):
    """Counts per confidence decile (relative to the largest score) plus total.

    Bucket k holds scores in ((k-1)/10 * max, k/10 * max]; zero scores land in
    the first bucket.
    """
    values = list(values)
    counts = [0] * buckets
    top = max(values, default=0.0)
    for v in values:
        if top <= 0:
            k = 1
        else:
            k = math.ceil(round(buckets * v / top, 9))
            k = min(max(k, 1), buckets)
        counts[k - 1] += 1
    return {'buckets': [{'decile': i + 1, 'count': c} for i, c in enumerate(counts)],
            'total': len(values), 'max': top}


def build_report(analysis, failed=(), inputs=()):
    verdicts, ranked = run_checks(analysis)
    summary = {
        'files': len(analysis.units),
        'failed_files': len(failed),
        'variables': len(verdicts),
        'consistent': sum(1 for r in verdicts if r['verdict'] == 'consistent'),
        'suggestions': len(ranked),
        'unanalyzable': sum(1 for r in verdicts if r['verdict'] == 'unanalyzable'),
    }
    report = {
        'schema': SCHEMA,
        'config': analysis.config.to_json(),
        'inputs': list(inputs),
        'summary': summary,
        'verdicts': verdicts,
        'suggestions': [suggestion_json(s) for s in ranked],
        'score_distribution': score_dist(s.confidence.value for s in ranked),
        'diagnostics': [d.to_json() for d in sorted(
            analysis.diagnostics, key=lambda d: (d.loc.path, d.loc.line, d.loc.col, d.code, d.message))],
    }
    return report, ranked


# method-name statistics

def _used_names(m: A.MethodDecl):
    names = set()
    if m.body is None:
        return names
    for n in m.body.walk():
        if isinstance(n, (A.Name, A.FieldAccess)) and n.decl is not None:
            names.add(n.decl.name)
    return names


def method_stats(units):
    """Methods whose name shares a token with a variable used in the body."""
    rows = []
    for u in units:
        for t in u.types:
            for m in t.methods:
                mt = set(tokenize_name(m.name))
                used = sorted(_used_names(m))
                shared = sorted(mt & {tok for n in used for tok in tokenize_name(n)})
                rows.append({'method': m.id, 'path': m.loc.path, 'line': m.loc.line,
                             'related': bool(shared), 'shared_tokens': shared, 'variables': used})
    related = sum(1 for r in rows if r['related'])
    return {'related': related, 'unrelated': len(rows) - related, 'methods': rows}


def report_schema():
    """The published JSON schema for ``build_report`` output."""
    from importlib.resources import files
    return json.loads(files('nameflow').joinpath('schemas/report.schema.json').read_text('utf-8'))
