import re

import pytest
from hypothesis import given, strategies as st

from nameflow.features import (NO_NAME, Feature, canonical_name, encode_pattern, render_label,
                               strip_self_features, tokenize_name, type_feature)
from nameflow.patterns import BACKWARD, FORWARD, Step, UsagePattern, collect_patterns

from conftest import decl_named, program


@pytest.mark.parametrize('name,tokens', [
    ('outputBufferName', ['output', 'buffer', 'name']),
    ('x', ['x']),
    ('pkg_name2', ['pkg', 'name', '2']),
    ('HTTPServer', ['http', 'server']),
    ('getHTTPResponseCode', ['get', 'http', 'response', 'code']),
    ('MAX_VALUE', ['max', 'value']),
    ('_private', ['private']),
    ('utf8Str', ['utf', '8', 'str']),
    ('i18n', ['i', '18', 'n']),
])
def test_tokenize(name, tokens):
    assert tokenize_name(name) == tokens


@given(st.from_regex(r'[A-Za-z_$][A-Za-z0-9_$]{0,20}', fullmatch=True))
def test_tokenize_is_lossless(name):
    letters = re.sub(r'[^A-Za-z0-9]', '', name).lower()
    assert ''.join(tokenize_name(name)) == letters
    assert all(t == t.lower() and t for t in tokenize_name(name))


def test_canonical_name_merges_spellings():
    assert canonical_name('outputBuffer') == canonical_name('output_buffer') == 'output buffer'


def test_render_label():
    assert [render_label(x) for x in ['', '#return', '#arg1', 'cond', 'cond:true', 'cond:false', 'L']] == \
        ['', '', 'arg1', '?', 'true', 'false', 'L']


def fw(*steps):
    return UsagePattern('v', FORWARD, tuple(Step(*s) for s in steps))


def keys_of(p, **kw):
    return {f.key for f in encode_pattern(p, **kw)}


def test_pair_features_follow_the_value():
    p = fw(('this', 'indexOf()', 'Call', 1), ('#arg1', 'substring()', 'Call', 2),
           ('#return', 'name', 'VarRef', 3), ('L', '+', 'BinOp', 4), ('#arg0', 'println()', 'Call', 5))
    ks = keys_of(p)
    assert {'indexOf():arg1:substring()', 'substring():name', 'name:L:+', '+:arg0:println()'} <= ks
    assert {'substring():TOK=name', 'TOK=name:L:+', '@:this:indexOf()'} <= ks


def test_multi_token_names_expand():
    p = fw(('', 'outputBuffer', 'VarRef', 1))
    assert keys_of(p) >= {'@:TOK=output', '@:TOK=buffer'}
    assert '@:outputbuffer' not in keys_of(p)
    assert keys_of(p, name_features=False) == {'@:' + NO_NAME}


def test_backward_pairs_point_at_origin():
    p = UsagePattern('v', BACKWARD, (Step('#return', 'readLine()', 'Call', 1), Step('this', 'fp', 'FieldRef', 2)))
    assert keys_of(p) >= {'readLine():@', 'fp:this:readLine()', 'TOK=fp:this:readLine()'}


def test_distance_is_step_index():
    p = fw(('L', '+', 'BinOp', 1), ('', 'return', 'Return', 2))
    d = {f.key: f.dist for f in encode_pattern(p)}
    assert d['@:L:+'] == 1 and d['+:return'] == 2


# one test per attribute category

def _feats(src, var, **cfg):
    pg = program(src)
    out = set()
    for p in collect_patterns(pg, decl_named(pg, var)):
        out |= {f.key for f in encode_pattern(p, **cfg)}
    return out


def test_category_constant():
    assert '@CONST' in _feats('void f() { int k = 10; g(k); }', 'k')


def test_category_loop():
    assert '@LOOP' in _feats('void f(int n) { int s = 0; while (n > 0) { s = s + n; } }', 's')


def test_category_branch_condition():
    assert '@COND' in _feats('void f(boolean ok, int a) { if (ok) { a = 1; } g(a); }', 'ok')


def test_category_array_index():
    assert '@INDEX' in _feats('int f(int[] xs, int idx) { return xs[idx]; }', 'idx')


def test_category_object_instance():
    assert '@OBJ' in _feats('int f(String s) { return s.length(); }', 's')


def test_category_operator():
    assert '@OP=*' in _feats('int f(int w) { return w * 2; }', 'w')


def test_category_argument():
    assert '@ARG=put():arg1' in _feats('void f(Map m, int val) { m.put(1, val); }', 'val')


def test_category_type():
    assert type_feature('String') == Feature('@TYPE=String', 0)
    assert type_feature('') is None
    p = fw(('L', '+', 'BinOp', 1))
    assert '@TYPE=int' in keys_of(p, type_name='int')


def test_category_assigned_name():
    ks = _feats('void f(int raw) { int totalCount = raw; g(totalCount); }', 'raw')
    assert {'@ASSIGN=total', '@ASSIGN=count'} <= ks
    assert not any(k.startswith('@ASSIGN') for k in _feats(
        'void f(int raw) { int totalCount = raw; g(totalCount); }', 'raw', name_features=False))


# self-exclusion

def test_strip_examples():
    assert strip_self_features(['substring():line'], 'line') == []
    assert strip_self_features(['+:arg0:println()'], 'line') == ['+:arg0:println()']
    assert strip_self_features(['@:TOK=buffer', '@:TOK=ring'], 'outputBuffer') == ['@:TOK=ring']
    assert strip_self_features(['@ASSIGN=line'], 'line') == []
    # the uppercase TOK marker never matches a variable called tok
    assert strip_self_features(['@:TOK=x'], 'tok') == ['@:TOK=x']


words = st.from_regex(r'[a-z]{1,5}', fullmatch=True)


@given(name=st.lists(words, min_size=1, max_size=3),
       keys=st.lists(st.lists(st.one_of(words, st.sampled_from(['TOK=', '@', '()', ':', '+', 'L'])),
                              min_size=1, max_size=6).map(''.join), max_size=20))
def test_strip_is_sound(name, keys):
    ident = name[0] + ''.join(w.capitalize() for w in name[1:])
    toks = set(tokenize_name(ident)) | {ident.lower()}
    kept = strip_self_features(keys, ident)
    for k in kept:
        assert not (set(re.split(r'[^A-Za-z0-9_]+', k)) & toks)
    assert [k for k in keys if k in kept] == kept
