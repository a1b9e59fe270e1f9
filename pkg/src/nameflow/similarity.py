"""TF-IDF weighting of usage patterns, cosine similarity, confidence scores.

TF(key) is the number of distinct paths of a variable that produce the
pattern key; IDF(key) = ln(N / df(key)) with N the number of variables in
the corpus and df the number of variables having the key (floored at 1).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from scipy import sparse

DIST_NEG, DIST_LITERAL = 'neg', 'literal'


class PatternIndex:
    """Per-variable pattern-key frequencies over a corpus."""

    def __init__(self, tf_by_var: dict, n_vars: int | None = None):
        self.tf = {v: Counter(c) for v, c in tf_by_var.items()}
        self.n = len(self.tf) if n_vars is None else n_vars
        self.df = Counter()
        self.holders = {}
        for v in sorted(self.tf):
            for key in self.tf[v]:
                self.df[key] += 1
                self.holders.setdefault(key, []).append(v)

    @classmethod
    def from_patterns(cls, patterns_by_var: dict):
        return cls({v: Counter(p.key for p in ps) for v, ps in patterns_by_var.items()})

    def idf(self, key):
        if self.n <= 0:
            return 0.0
        return math.log(self.n / max(self.df.get(key, 0), 1))


@dataclass
class TfidfVector:
    weights: dict = field(default_factory=dict)     # pattern key -> TF * IDF, zeros omitted

    def norm(self):
        return math.sqrt(math.fsum(w * w for w in self.weights.values()))

    def __bool__(self):
        return bool(self.weights)


def tfidf_vector(var, index: PatternIndex) -> TfidfVector:
    out = {}
    for key, tf in sorted(index.tf.get(var, {}).items()):
        w = tf * index.idf(key)
        if w > 0:
            out[key] = w
    return TfidfVector(out)


def cosine_sim(a: TfidfVector, b: TfidfVector) -> float:
    """dot(a, b) / (|a| |b|), 0 when either vector is zero, clamped to [0, 1]."""
    if not a.weights or not b.weights:
        return 0.0
    # sum over shared keys in sorted order and multiply norms in a fixed
    # order so the result is bit-for-bit symmetric
    shared = sorted(a.weights.keys() & b.weights.keys())
    dot = math.fsum(a.weights[k] * b.weights[k] for k in shared)
    na, nb = sorted((a.norm(), b.norm()))
    if na == 0:
        return 0.0
    return min(1.0, max(0.0, dot / (na * nb)))


def similar_pairs(index: PatternIndex, threshold=0.90, order=None, block=2048) -> list:
    """Unordered variable pairs with similarity strictly above ``threshold``.

    Sorted by similarity descending, then by ``order`` (a key function on
    variable ids, default the ids themselves).  Uses a sparse matrix
    product over row blocks so memory stays bounded on large corpora.
    """
    order = order or (lambda v: v)
    vars_ = sorted(index.tf, key=order)
    vecs = [tfidf_vector(v, index) for v in vars_]
    keys = {}
    rows, cols, vals = [], [], []
    for i, vec in enumerate(vecs):
        nrm = vec.norm()
        for k, w in vec.weights.items():
            rows.append(i)
            cols.append(keys.setdefault(k, len(keys)))
            vals.append(w / nrm)
    if not vals:
        return []
    x = sparse.csr_matrix((vals, (rows, cols)), shape=(len(vars_), len(keys)))
    xt = x.T.tocsc()
    out = []
    for lo in range(0, len(vars_), block):
        prod = (x[lo:lo + block] @ xt).tocoo()
        for i, j, s in zip(prod.row, prod.col, prod.data):
            i = int(i) + lo
            j = int(j)
            if j > i and s > threshold:
                out.append((vars_[i], vars_[j], min(1.0, float(s))))
    out.sort(key=lambda t: (-t[2], order(t[0]), order(t[1])))
    return out


@dataclass
class ConfidenceTerm:
    key: str
    tf: int
    idf: float
    dist: int
    value: float


@dataclass
class ConfidenceScore:
    value: float = 0.0
    terms: list = field(default_factory=list)


def confidence(contributing, index: PatternIndex | None = None, sign=DIST_NEG) -> ConfidenceScore:
    """Sum of TF * IDF * exp(-dist) over contributing patterns.

    ``contributing`` holds (key, tf, dist) triples, or (key, tf, idf, dist)
    when no index is given.  ``sign='literal'`` uses exp(+dist).
    """
    s = -1.0 if sign == DIST_NEG else 1.0
    terms = []
    for item in contributing:
        if len(item) == 4:
            key, tf, idf, dist = item
        else:
            key, tf, dist = item
            idf = index.idf(key)
        terms.append(ConfidenceTerm(key, tf, idf, dist, tf * idf * math.exp(s * dist)))
    terms.sort(key=lambda t: (-t.value, t.key))
    return ConfidenceScore(math.fsum(t.value for t in terms), terms)

