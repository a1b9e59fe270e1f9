import math
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nameflow.similarity import (PatternIndex, TfidfVector, confidence, cosine_sim, similar_pairs,
                                 tfidf_vector)

weights = st.dictionaries(st.sampled_from([f'k{i}' for i in range(12)]),
                          st.floats(min_value=1e-6, max_value=1e6), max_size=12)


@given(weights, weights)
def test_cosine_symmetric_and_bounded(a, b):
    x, y = TfidfVector(a), TfidfVector(b)
    s = cosine_sim(x, y)
    assert s == cosine_sim(y, x)
    assert -1e-9 <= s <= 1 + 1e-9


@given(weights.filter(bool))
def test_cosine_identity(a):
    assert cosine_sim(TfidfVector(a), TfidfVector(dict(a))) == pytest.approx(1.0, abs=1e-9)


@given(weights, weights)
def test_cosine_disjoint_is_zero(a, b):
    b = {k + 'x': w for k, w in b.items()}
    assert cosine_sim(TfidfVector(a), TfidfVector(b)) == 0.0


def test_cosine_zero_vector():
    assert cosine_sim(TfidfVector({}), TfidfVector({'a': 1.0})) == 0.0


def test_tfidf_by_hand():
    idx = PatternIndex({'u': Counter({'p': 2, 'q': 1}), 'v': Counter({'p': 1}), 'w': Counter({'r': 3})})
    assert idx.df == {'p': 2, 'q': 1, 'r': 1}
    assert idx.idf('p') == pytest.approx(math.log(3 / 2))
    assert idx.idf('q') == pytest.approx(math.log(3))
    assert idx.idf('unseen') == pytest.approx(math.log(3))
    vec = tfidf_vector('u', idx)
    assert vec.weights == pytest.approx({'p': 2 * math.log(1.5), 'q': math.log(3)})


def test_key_held_by_everyone_has_no_weight():
    idx = PatternIndex({'u': Counter({'p': 1}), 'v': Counter({'p': 4})})
    assert tfidf_vector('u', idx).weights == {}


def test_confidence_formula():
    c = confidence([('a', 2, 1.5, 1), ('b', 1, 0.5, 3)])
    assert c.value == pytest.approx(2 * 1.5 * math.exp(-1) + 0.5 * math.exp(-3))
    assert [t.key for t in c.terms] == ['a', 'b']
    lit = confidence([('a', 2, 1.5, 1)], sign='literal')
    assert lit.value == pytest.approx(3 * math.e)


def test_confidence_reads_idf_from_index():
    idx = PatternIndex({'u': Counter({'p': 2}), 'v': Counter({'q': 1})})
    c = confidence([('p', 2, 1)], idx)
    assert c.value == pytest.approx(2 * math.log(2) * math.exp(-1))


def dense_pairs(index, threshold):
    vars_ = sorted(index.tf)
    keys = sorted({k for c in index.tf.values() for k in c})
    m = np.zeros((len(vars_), len(keys)))
    for i, v in enumerate(vars_):
        for j, k in enumerate(keys):
            m[i, j] = index.tf[v].get(k, 0) * index.idf(k)
    out = {}
    for i in range(len(vars_)):
        for j in range(i + 1, len(vars_)):
            na, nb = np.linalg.norm(m[i]), np.linalg.norm(m[j])
            if na and nb:
                s = float(m[i] @ m[j] / (na * nb))
                if s > threshold:
                    out[vars_[i], vars_[j]] = s
    return out


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), threshold=st.sampled_from([0.0, 0.3, 0.9]), block=st.integers(1, 7))
def test_similar_pairs_matches_dense_and_pairwise(seed, threshold, block):
    rng = random.Random(seed)
    tf = {f'v{i:02d}': Counter({f'k{rng.randrange(6)}': rng.randint(1, 3) for _ in range(rng.randint(0, 4))})
          for i in range(rng.randint(2, 25))}
    idx = PatternIndex(tf)
    got = similar_pairs(idx, threshold, block=block)
    want = dense_pairs(idx, threshold)
    # pairs within rounding distance of the threshold may fall either way
    near = {p for p, s in want.items() if abs(s - threshold) < 1e-9}
    assert {(a, b) for a, b, _ in got} - near == set(want) - near
    for a, b, s in got:
        assert s == pytest.approx(cosine_sim(tfidf_vector(a, idx), tfidf_vector(b, idx)), abs=1e-9)
    assert [s for *_, s in got] == sorted((s for *_, s in got), reverse=True)


def test_fig9_buf_pair(fig9_analysis):
    a = fig9_analysis
    bufs = [v.id for v in a.variables if v.name == 'buf']
    s = cosine_sim(tfidf_vector(bufs[0], a.index), tfidf_vector(bufs[1], a.index))
    assert s > 0.90
    pairs = similar_pairs(a.index, 0.90)
    assert (bufs[0], bufs[1]) in {(x, y) for x, y, _ in pairs}
    assert similar_pairs(a.index, 1.01) == []
