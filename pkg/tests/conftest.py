import os

import pytest

from nameflow.config import RunConfig
from nameflow.frontend import parse_source
from nameflow.interproc import build_program
from nameflow.pipeline import Analysis

HERE = os.path.dirname(__file__)
FIXTURES = os.path.join(HERE, 'fixtures')


def fixture_path(*parts):
    return os.path.join(FIXTURES, *parts)


def read_fixture(*parts):
    with open(fixture_path(*parts), encoding='utf-8') as fp:
        return fp.read()


def parse(text, path='T.java'):
    return parse_source(text, path)


def program(*sources, max_virtuals=5):
    """ProgramGraph over (path, text) pairs or a single source text."""
    if len(sources) == 1 and isinstance(sources[0], str):
        sources = [('T.java', sources[0])]
    return build_program([parse_source(t, p) for p, t in sources], max_virtuals)


def analysis(*sources, **cfg):
    if len(sources) == 1 and isinstance(sources[0], str):
        sources = [('T.java', sources[0])]
    units = [parse_source(t, p) for p, t in sources]
    return Analysis(units, RunConfig(**cfg))


def decl_named(pg_or_analysis, name, nth=0):
    decls = sorted((d for d in pg_or_analysis.decls.values() if d.name == name),
                   key=lambda d: (d.loc.path, d.loc.line, d.loc.col))
    return decls[nth]


@pytest.fixture
def fig9_analysis():
    return Analysis([parse_source(read_fixture('fig9.java'), 'fig9.java')], RunConfig())


# one line per acceptance criterion at the end of the run

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != 'call' and not (report.when == 'setup' and report.failed):
        return
    for mark in ('criterion',):
        crit = dict(report.user_properties).get(mark)
        if crit is not None:
            ok = report.passed
            _CRITERIA[crit] = _CRITERIA.get(crit, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section('acceptance criteria')
    for crit in sorted(_CRITERIA):
        terminalreporter.write_line(f'criterion {crit}: {"PASS" if _CRITERIA[crit] else "FAIL"}')
