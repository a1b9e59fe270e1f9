"""End-to-end analysis: sources -> graphs -> patterns -> model -> verdicts."""
from __future__ import annotations

import os
from collections import Counter

from .config import RunConfig
from .errors import NameflowError
from .features import canonical_name, encode_pattern, type_feature
from .frontend import ast as A
from .frontend.interchange import parse_interchange
from .frontend.parser import parse_source
from .interproc import build_program
from .model import Observation, learn
from .patterns import collect_all, variable_order
from .similarity import PatternIndex

SOURCE_SUFFIXES = ('.java',)
INTERCHANGE_SUFFIXES = ('.ufg-ast.json', '.json')


def expand_paths(paths):
    """Files named directly, plus source and interchange files under directories."""
    out = []
    for p in paths:
        if os.path.isdir(p):
            found = []
            for root, dirs, files in os.walk(p):
                dirs.sort()
                for f in files:
                    if f.endswith(SOURCE_SUFFIXES) or f.endswith('.ufg-ast.json'):
                        found.append(os.path.join(root, f))
            out.extend(sorted(found))
        else:
            out.append(p)
    return out


def load_file(path) -> A.SourceUnit:
    """Parse one file; raises OSError or a NameflowError."""
    with open(path, encoding='utf-8') as fp:
        text = fp.read()
    if path.endswith(INTERCHANGE_SUFFIXES):
        return parse_interchange(text)
    return parse_source(text, path)


def load_units(paths):
    """(units, diagnostics, failed paths).  Bad files are reported, not fatal."""
    units, diags, failed = [], [], []
    for path in expand_paths(paths):
        try:
            units.append(load_file(path))
        except (OSError, UnicodeDecodeError) as e:
            failed.append(path)
            diags.append(A.Diagnostic('io-error', f'{path}: {e}', A.SourceLoc(path, 0, 0, 0, 0)))
        except NameflowError as e:
            failed.append(path)
            loc = getattr(e, 'loc', None) or A.SourceLoc(path, 0, 0, 0, 0)
            code = {'SourceSyntaxError': 'syntax-error', 'UnsupportedConstruct': 'unsupported',
                    'SchemaError': 'schema-error'}.get(type(e).__name__, 'error')
            diags.append(A.Diagnostic(code, str(e), loc))
    return units, diags, failed


class Analysis:
    """Everything computed for one corpus under one configuration."""

    def __init__(self, units, config: RunConfig | None = None, diagnostics=()):
        self.config = cfg = config or RunConfig()
        self.units = list(units)
        self.unit_by_path = {u.path: u for u in self.units}
        self.pg = build_program(self.units, cfg.max_virtuals)
        self.diagnostics = list(diagnostics) + list(self.pg.diagnostics)
        self.patterns = collect_all(self.pg, cfg.traversal(), self.diagnostics)
        self.variables = sorted(self.pg.decls.values(), key=variable_order)
        self.decls = self.pg.decls
        self.index = PatternIndex({v.id: Counter(p.key for p in self.patterns[v.id])
                                   for v in self.variables})
        self._key_features = {}
        self.features = {}          # var id -> {feature key: min dist}
        self.key_features = {}      # var id -> {pattern key: [Feature]}
        self.observations = {}
        for v in self.variables:
            self._encode(v)
        self.model = learn([self.observations[v.id] for v in self.variables
                            if self.observations[v.id].features], cfg.smoothing)

    def _encode(self, v):
        cfg = self.config
        per_key = {}
        for p in self.patterns[v.id]:
            k = p.key
            if k not in per_key:
                fs = self._key_features.get(k)
                if fs is None:
                    fs = self._key_features[k] = encode_pattern(p, cfg.name_features)
                per_key[k] = fs
        feats = {}
        for fs in per_key.values():
            for f in fs:
                if f.key not in feats or f.dist < feats[f.key]:
                    feats[f.key] = f.dist
        if cfg.type_features and feats:
            t = type_feature(v.declared_type)
            if t is not None:
                feats[t.key] = t.dist
        self.features[v.id] = feats
        self.key_features[v.id] = per_key
        self.observations[v.id] = Observation(v.id, canonical_name(v.name), v.name,
                                              frozenset(feats))

    def unit_of(self, decl):
        return self.unit_by_path.get(decl.loc.path)


def analyze_paths(paths, config: RunConfig | None = None):
    units, diags, failed = load_units(paths)
    return Analysis(units, config, diags), failed
