import json

import jsonschema
from hypothesis import given, strategies as st

from nameflow.config import RunConfig
from nameflow.frontend import parse_source, resolve_names
from nameflow.pipeline import analyze_paths
from nameflow.report import build_report, method_stats, report_schema, score_dist

from conftest import fixture_path, read_fixture


def test_score_dist_uniform():
    table = score_dist([i + 1 for i in range(10)])
    assert [b['count'] for b in table['buckets']] == [1] * 10
    assert table['total'] == 10


def test_score_dist_empty_and_zero():
    assert [b['count'] for b in score_dist([])['buckets']] == [0] * 10
    assert score_dist([0.0, 0.0])['buckets'][0]['count'] == 2


def test_score_dist_edges():
    # 0.1 * max lands in the first bucket, anything above it in the second
    t = score_dist([0.1, 0.1000001, 1.0])
    assert [b['count'] for b in t['buckets']][:2] == [1, 1]


@given(st.lists(st.floats(min_value=0, max_value=1e6, allow_nan=False), max_size=60))
def test_score_dist_conserves_count(values):
    t = score_dist(values)
    assert sum(b['count'] for b in t['buckets']) == t['total'] == len(values)


def _stats(text, path='S.java'):
    u = parse_source(text, path)
    resolve_names(u)
    return method_stats([u])


def test_stats_related_definition():
    st_ = _stats('class A { String name; String getName() { return name; } int run(int x) { return x; } }')
    rows = {r['method']: r for r in st_['methods']}
    assert rows['A.getName/0']['related'] and rows['A.getName/0']['shared_tokens'] == ['name']
    assert not rows['A.run/1']['related']
    assert (st_['related'], st_['unrelated']) == (1, 1)


def test_stats_fig9_hand_count():
    # getName uses fp, line, i; show uses name; getField and getColumn use fp, buf:
    # no method name shares a token with a variable it uses
    st_ = _stats(read_fixture('fig9.java'), 'fig9.java')
    assert (st_['related'], st_['unrelated']) == (0, 4)


def test_report_validates_and_is_deterministic():
    path = fixture_path('corpus')
    a1, f1 = analyze_paths([path], RunConfig())
    r1, _ = build_report(a1, f1, [path])
    a2, f2 = analyze_paths([path], RunConfig())
    r2, _ = build_report(a2, f2, [path])
    jsonschema.validate(r1, report_schema())
    assert json.dumps(r1) == json.dumps(r2)
    assert r1['config'] == RunConfig().to_json()
    dist = r1['score_distribution']
    assert sum(b['count'] for b in dist['buckets']) == dist['total'] == len(r1['suggestions'])


def test_report_on_fig9(fig9_analysis):
    r, ranked = build_report(fig9_analysis, [], ['fig9.java'])
    jsonschema.validate(r, report_schema())
    top = r['suggestions'][0]
    assert (top['name'], top['new_name'], top['rank']) == ('line', 'buf', 1)
    v = {(x['name'], x['line']): x['verdict'] for x in r['verdicts']}
    assert v['buf', 12] == v['buf', 16] == 'consistent'
