import json

import pytest
from hypothesis import given, settings, strategies as st

from nameflow.errors import SchemaError, SourceSyntaxError, UnsupportedConstruct
from nameflow.frontend import ast as A
from nameflow.frontend import parse_interchange, parse_source, resolve_names, to_interchange
from nameflow.frontend.lexer import KEYWORDS, tokenize
from nameflow.interproc import build_program
from nameflow.ufg import build_method_graph, graph_to_records

from conftest import fixture_path, read_fixture

FIG3 = read_fixture('figs', 'fig3.java')


def test_fig3_shape():
    u = parse_source(FIG3, 'fig3.java')
    resolve_names(u)
    (t,) = u.types
    assert t.implicit and t.name == 'fig3'
    (m,) = t.methods
    assert [p.name for p in m.params] == ['a', 'b', 'c']
    assert [d.name for d in m.locals()] == ['x', 'y']
    assert len(m.body.body) == 3


def test_class_members_and_inheritance():
    u = parse_source('class A extends B { int n; String s = "x"; void go(int k) { n = k; } }', 'A.java')
    (t,) = u.types
    assert (t.name, t.superclass) == ('A', 'B')
    assert [f.name for f in t.fields] == ['n', 's']
    assert t.methods[0].id == 'A.go/1'


def test_package_and_imports_are_skipped():
    u = parse_source('package a.b;\nimport java.util.List;\nclass A { }', 'A.java')
    assert [t.name for t in u.types] == ['A']


def test_untyped_params():
    u = parse_source('f(a, b) { return a + b; }', 'u.java')
    m = u.types[0].methods[0]
    assert [(p.name, p.declared_type) for p in m.params] == [('a', ''), ('b', '')]


@pytest.mark.parametrize('src', [
    'void f() { Runnable r = () -> g(); }',
    'void f() { try { g(); } catch (E e) { } }',
    'void f() { switch (x) { } }',
    'interface I { }',
])
def test_unsupported_constructs(src):
    with pytest.raises(UnsupportedConstruct):
        parse_source(src, 'u.java')


@pytest.mark.parametrize('src', ['void f( {', 'class A { void f() { x = ; } }', 'void f() { return 1 }'])
def test_syntax_errors_carry_location(src):
    with pytest.raises(SourceSyntaxError) as ei:
        parse_source(src, 'bad.java')
    assert ei.value.loc.path == 'bad.java'
    assert ei.value.loc.line >= 1


def test_var_loc_points_at_identifier():
    text = 'class A { int count; void f(String label) { int total = 0; } }'
    u = parse_source(text, 'A.java')
    resolve_names(u)
    raw = text.encode()
    for d in u.variables():
        assert raw[d.loc.start:d.loc.end].decode() == d.name


def test_resolution_scopes():
    text = '''class A {
  int v;
  void f(int p) {
    int v = p;
    { int w = v; }
    g(v, w);
    this.v = 3;
  }
}'''
    u = parse_source(text, 'A.java')
    resolve_names(u)
    m = u.types[0].methods[0]
    names = [n for n in m.body.walk() if isinstance(n, A.Name)]
    by = {}
    for n in names:
        by.setdefault(n.id, []).append(n.decl)
    local_v = m.locals()[0]
    assert all(d is local_v for d in by['v'])
    assert by['w'] == [None]                        # out of scope after the block
    assert any(d.code == 'unresolved' and 'w' in d.message for d in u.diagnostics)
    fa = [n for n in m.body.walk() if isinstance(n, A.FieldAccess)][0]
    assert fa.decl is u.types[0].fields[0]


def test_assignment_declares_implicit_local():
    u = parse_source('void f() { total = 1; total = total + 2; }', 'u.java')
    resolve_names(u)
    m = u.types[0].methods[0]
    (d,) = m.locals()
    assert d.implicit and d.name == 'total'
    uses = [n.decl for n in m.body.walk() if isinstance(n, A.Name)]
    assert uses == [d, d, d]


# interchange

def test_interchange_matches_parser():
    from_parser = parse_source(FIG3, 'fig3.java')
    with open(fixture_path('fig3.ufg-ast.json')) as fp:
        from_json = parse_interchange(fp.read())
    assert from_json == from_parser


def test_interchange_graph_matches_parser_graph():
    with open(fixture_path('fig3.ufg-ast.json')) as fp:
        a = parse_interchange(fp.read())
    b = parse_source(FIG3, 'fig3.java')
    ga = build_program([a]).ufgs['fig3.f/3']
    gb = build_program([b]).ufgs['fig3.f/3']
    strip = lambda recs: [{k: v for k, v in r.items() if k != 'loc'} for r in recs]
    assert strip(graph_to_records(ga)) == strip(graph_to_records(gb))


def test_interchange_round_trip():
    text = read_fixture('fig9.java')
    u = parse_source(text, 'fig9.java')
    doc = to_interchange(u)
    back = parse_interchange(json.dumps(doc))
    assert back == u
    assert back.raw_text == text
    assert to_interchange(back) == doc


def test_interchange_missing_field_is_named():
    with open(fixture_path('fig3.ufg-ast.json')) as fp:
        doc = json.load(fp)
    del doc['types'][0]['methods'][0]['body']['body'][1]['expr']['value']
    with pytest.raises(SchemaError) as ei:
        parse_interchange(doc)
    assert ei.value.field == 'types[0].methods[0].body.body[1].expr.value'


def test_interchange_ill_typed_and_unknown():
    with pytest.raises(SchemaError):
        parse_interchange({'path': 'x', 'types': [{'kind': 'class', 'name': 3, 'fields': [], 'methods': []}]})
    with pytest.raises(SchemaError):
        parse_interchange({'path': 'x', 'types': [{'kind': 'klass'}]})
    with pytest.raises(SchemaError):
        parse_interchange('{not json')
    with pytest.raises(SchemaError):
        parse_interchange({'schema': 'ufg-ast/9', 'path': 'x', 'types': []})


def test_interchange_lambda_is_unsupported():
    doc = {'path': 'x.java', 'types': [{'kind': 'class', 'name': 'X', 'fields': [], 'methods': [
        {'kind': 'method', 'name': 'f', 'params': [], 'body': {'kind': 'block', 'body': [
            {'kind': 'expr', 'expr': {'kind': 'lambda', 'loc': {'line': 4, 'col': 2, 'span': [9, 20]}}}]}}]}]}
    with pytest.raises(UnsupportedConstruct) as ei:
        parse_interchange(doc)
    assert ei.value.loc.line == 4


# locations are sound for arbitrary identifier layouts

idents = st.from_regex(r'[a-z][a-zA-Z0-9]{0,6}', fullmatch=True).filter(lambda s: s not in KEYWORDS)


@settings(max_examples=150, deadline=None)
@given(names=st.lists(idents, min_size=1, max_size=5, unique=True),
       pad=st.lists(st.sampled_from([' ', '  ', '\n', '\t', ' /* c */ ', ' // c\n']), min_size=8, max_size=8),
       unicode_comment=st.booleans())
def test_decl_and_use_locations_slice_to_their_names(names, pad, unicode_comment):
    head = '// ünïcødé\n' if unicode_comment else ''
    body = ''.join(f'{pad[i % 8]}int{pad[(i + 1) % 8] or " "}{n} = {i};' for i, n in enumerate(names))
    uses = ' + '.join(names)
    text = f'{head}void f() {{{body}{pad[3]}return {uses};}}'
    u = parse_source(text, 'p.java')
    resolve_names(u)
    raw = text.encode('utf-8')
    m = u.types[0].methods[0]
    for d in m.locals():
        assert raw[d.loc.start:d.loc.end].decode('utf-8') == d.name
        line = text.splitlines()[d.loc.line - 1]
        assert line[d.loc.col - 1:].startswith(d.name)
    for n in m.body.walk():
        if isinstance(n, A.Name):
            assert raw[n.loc.start:n.loc.end].decode('utf-8') == n.id


def test_tokenize_reports_unterminated_string():
    with pytest.raises(SourceSyntaxError):
        tokenize('void f() { s = "abc; }', 'u.java')


def test_every_method_lowers():
    u = parse_source(read_fixture('fig9.java'), 'fig9.java')
    resolve_names(u)
    for m in u.methods():
        assert build_method_graph(m).nodes
