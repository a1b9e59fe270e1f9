"""Multinomial Naive Bayes over name labels, with exact unlearning.

Each observation is one variable: its canonical name label and the set of
features its usage patterns produce (a feature counts once per variable).
The model keeps

  count(f, l)   observations labelled l that have feature f
  count(l)      observations labelled l
  ftotal(l)     sum over f of count(f, l)
  total         number of observations

and scores a query feature set Q as

  log(count(l) / total) + sum over f in Q of log((count(f, l) + a) / (ftotal(l) + a * V))

where V is the number of features with a non-zero count and ``a`` the
smoothing constant.  Query features outside the vocabulary are skipped.
Labels with no observations are not candidates.

``unlearn`` returns a view of the model with one observation subtracted; the
learned tables are shared, never copied or mutated.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import EmptyModel, UnderflowError

SCHEMA = 'ufg-nb/1'
TIE_DIGITS = 9      # scores equal to this many decimals count as tied


@dataclass(frozen=True)
class NameLabel:
    canonical: str
    display: str


@dataclass(frozen=True)
class Observation:
    var: str                # VarDecl id (informational)
    label: str              # canonical name
    display: str            # spelling as written
    features: frozenset


class _Tables:
    """The learned counts plus lazily built array views for fast scoring."""

    def __init__(self):
        self.fl = {}            # feature -> {label: count}
        self.lc = Counter()     # label -> count
        self.ft = Counter()     # label -> feature total
        self.fsum = Counter()   # feature -> count over all labels
        self.disp = {}          # label -> Counter(spelling)
        self.total = 0
        self._arrays = None

    def add(self, obs: Observation, sign=1):
        self.lc[obs.label] += sign
        self.ft[obs.label] += sign * len(obs.features)
        self.disp.setdefault(obs.label, Counter())[obs.display] += sign
        self.total += sign
        for f in obs.features:
            row = self.fl.setdefault(f, {})
            row[obs.label] = row.get(obs.label, 0) + sign
            self.fsum[f] += sign

    def arrays(self):
        if self._arrays is None:
            labels = sorted(self.lc)
            index = {l: i for i, l in enumerate(labels)}
            lc = np.array([self.lc[l] for l in labels], dtype=np.float64)
            ft = np.array([self.ft[l] for l in labels], dtype=np.float64)
            post = {}
            for f, row in self.fl.items():
                items = sorted((index[l], c) for l, c in row.items() if c > 0)
                post[f] = (np.array([i for i, _ in items], dtype=np.int64),
                           np.array([c for _, c in items], dtype=np.float64))
            vocab = sum(1 for v in self.fsum.values() if v > 0)
            self._arrays = (labels, index, lc, ft, post, vocab)
        return self._arrays


class NameModel:
    """Read-only count tables, optionally with observations subtracted."""

    def __init__(self, tables=None, removed=(), smoothing=1.0):
        self._t = tables if tables is not None else _Tables()
        self._removed = tuple(removed)
        self.smoothing = smoothing

    # counts

    def _minus(self, pred):
        return sum(1 for o in self._removed if pred(o))

    def count(self, feature, label):
        base = self._t.fl.get(feature, {}).get(label, 0)
        return base - self._minus(lambda o: o.label == label and feature in o.features)

    def label_count(self, label):
        return self._t.lc.get(label, 0) - self._minus(lambda o: o.label == label)

    def feature_total(self, label):
        """Sum of count(f, label) over all features."""
        return self._t.ft.get(label, 0) - sum(
            len(o.features) for o in self._removed if o.label == label)

    def feature_count(self, feature):
        """Observations (any label) that have ``feature``."""
        return self._t.fsum.get(feature, 0) - self._minus(lambda o: feature in o.features)

    @property
    def total(self):
        return self._t.total - len(self._removed)

    @property
    def vocab_size(self):
        gone = set()
        for o in self._removed:
            for f in o.features:
                if self.feature_count(f) <= 0:
                    gone.add(f)
        return self._t.arrays()[5] - len(gone)

    def labels(self):
        return sorted(l for l in self._t.lc if self.label_count(l) > 0)

    def display(self, label):
        c = Counter(self._t.disp.get(label, {}))
        for o in self._removed:
            if o.label == label:
                c[o.display] -= 1
        live = [(n, s) for s, n in c.items() if n > 0]
        if not live:
            return label
        return min(live, key=lambda ns: (-ns[0], ns[1]))[1]

    def features(self):
        return sorted(f for f in self._t.fl if self.feature_count(f) > 0)

    def snapshot(self):
        """Plain-data view of every count, for equality checks and saving."""
        entries = []
        for f in sorted(self._t.fl):
            for l in sorted(self._t.fl[f]):
                c = self.count(f, l)
                if c:
                    entries.append((f, l, c))
        labels = {l: self.label_count(l) for l in sorted(self._t.lc) if self.label_count(l)}
        return {'total': self.total, 'labels': labels, 'entries': entries}

    def __eq__(self, other):
        return isinstance(other, NameModel) and self.snapshot() == other.snapshot()

    __hash__ = None


def learn(observations, smoothing=1.0) -> NameModel:
    t = _Tables()
    for o in observations:
        t.add(o)
    return NameModel(t, smoothing=smoothing)


def unlearn(m: NameModel, obs: Observation) -> NameModel:
    """``m`` without ``obs``.  ``m`` itself is left untouched."""
    out = NameModel(m._t, m._removed + (obs,), m.smoothing)
    if out.label_count(obs.label) < 0 or any(out.count(f, obs.label) < 0 for f in obs.features):
        raise UnderflowError(f'observation {obs.var or obs.label!r} is not in the model')
    return out


def predict(m: NameModel, features, k: int = 10, smoothing=None) -> list:
    """Top-k (NameLabel, log score) pairs, best first, ties by canonical label."""
    if m.total <= 0:
        raise EmptyModel('model has no observations')
    a = m.smoothing if smoothing is None else smoothing
    labels, index, lc0, ft0, post, vocab0 = m._t.arrays()
    lc, ft = lc0.copy(), ft0.copy()
    removed_fl = Counter()
    gone = set()
    fsum_removed = Counter()
    for o in m._removed:
        i = index[o.label]
        lc[i] -= 1
        ft[i] -= len(o.features)
        for f in o.features:
            removed_fl[f, i] += 1
            fsum_removed[f] += 1
    for f, r in fsum_removed.items():
        if m._t.fsum.get(f, 0) - r <= 0:
            gone.add(f)
    vocab = vocab0 - len(gone)
    query = sorted({f for f in features if m._t.fsum.get(f, 0) > 0 and f not in gone})
    in_query = set(query)
    n = len(query)
    log_a = math.log(a)
    live = lc > 0
    with np.errstate(divide='ignore'):
        score = np.log(lc / m.total) - n * np.log(ft + a * vocab) + n * log_a
    for f in query:
        idx, cnt = post[f]
        if len(idx):
            score[idx] += np.log(cnt + a) - log_a
    for (f, i), r in removed_fl.items():
        if f in in_query:
            c = m._t.fl[f].get(labels[i], 0)
            old = math.log(c + a) - log_a if c > 0 else 0.0
            new = math.log(c - r + a) - log_a if c - r > 0 else 0.0
            score[i] += new - old
    ranked = sorted((i for i in range(len(labels)) if live[i]),
                    key=lambda i: (-round(float(score[i]), TIE_DIGITS), labels[i]))
    return [(NameLabel(labels[i], m.display(labels[i])), float(score[i])) for i in ranked[:k]]


# persistence

def save(m: NameModel, fp):
    snap = m.snapshot()
    doc = {'schema': SCHEMA, 'smoothing': m.smoothing, 'total': snap['total'],
           'labels': [{'label': l, 'count': c,
                       'display': dict(sorted(_live_display(m, l).items()))}
                      for l, c in snap['labels'].items()],
           'entries': [list(e) for e in snap['entries']]}
    json.dump(doc, fp, sort_keys=True, indent=1)


def _live_display(m, label):
    c = Counter(m._t.disp.get(label, {}))
    for o in m._removed:
        if o.label == label:
            c[o.display] -= 1
    return {s: n for s, n in c.items() if n > 0}


def load(fp) -> NameModel:
    doc = json.load(fp)
    if doc.get('schema') != SCHEMA:
        raise ValueError(f'not a {SCHEMA} model file')
    t = _Tables()
    for row in doc['labels']:
        t.lc[row['label']] = row['count']
        t.disp[row['label']] = Counter(row.get('display', {}))
    for f, l, c in doc['entries']:
        t.fl.setdefault(f, {})[l] = c
        t.ft[l] += c
        t.fsum[f] += c
    t.total = doc['total']
    return NameModel(t, smoothing=doc.get('smoothing', 1.0))
