"""Command-line interface.

    nameflow check src/ --top-k 10 --out report.json
    nameflow graph Fig3.java --out graphs/
    nameflow patterns src/
    nameflow similar src/ --sim-threshold 0.9
    nameflow stats projA/ projB/
    nameflow score-dist report.json
    nameflow patch src/ --out patches/

Exit status: 0 clean, 1 suggestions were reported (``--exit-zero`` turns
this into 0), 2 fatal error (unreadable input, syntax error for ``graph``,
nothing could be analysed).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .config import RunConfig
from .errors import CollisionError, NameflowError, RenameNotSupported
from .frontend.resolve import TypeTable, resolve_names
from .interproc import build_program
from .patterns import dump_records
from .pipeline import Analysis, load_units
from .report import build_report, method_stats, score_dist
from .similarity import similar_pairs
from .suggest import emit_patch, patch_filename
from .ufg import graph_to_records

EXIT_OK, EXIT_FOUND, EXIT_FATAL = 0, 1, 2


def _config_flags(p):
    g = p.add_argument_group('analysis options')
    g.add_argument('--max-virtuals', type=int, help='callees followed per call site (default 5)')
    g.add_argument('--max-pattern-length', type=int, help='nodes per usage pattern (default 5)')
    g.add_argument('--no-interproc', dest='interproc', action='store_const', const=False,
                   help='stop patterns at calls to known methods')
    g.add_argument('--no-name-features', dest='name_features', action='store_const', const=False,
                   help='drop variable-name tokens from features')
    g.add_argument('--no-type-features', dest='type_features', action='store_const', const=False,
                   help='drop the declared-type feature')
    g.add_argument('--top-k', type=int, help='suggestions to rank (default 10)')
    g.add_argument('--evidence-n', type=int, help='evidence snippets per suggestion (default 3)')
    g.add_argument('--sim-threshold', type=float, help='pair similarity threshold (default 0.90)')
    g.add_argument('--dist-sign', dest='confidence_dist_sign', choices=['neg', 'literal'],
                   help='confidence distance term exp(-dist) (neg) or exp(+dist) (literal)')
    g.add_argument('--smoothing', type=float, help='additive smoothing constant (default 1.0)')
    g.add_argument('--max-patterns', dest='max_patterns_per_variable', type=int,
                   help='pattern cap per variable (default 10000)')
    g.add_argument('--rename-fields', dest='rename_fields', action='store_const', const=True,
                   help='allow patches that rename fields')


def _out_flags(p, pretty=True):
    p.add_argument('--out', help='output file (or directory for graph/patch)')
    if pretty:
        p.add_argument('--pretty', action='store_true', help='human-readable output')
    p.add_argument('--exit-zero', action='store_true', help='exit 0 even when findings exist')


def build_parser():
    ap = argparse.ArgumentParser(prog='nameflow', description=__doc__.split('\n')[0])
    ap.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = ap.add_subparsers(dest='command', required=True)

    for name, help_ in [('graph', 'write one use-flow graph file per method'),
                        ('patterns', 'dump usage patterns per variable'),
                        ('check', 'report inconsistent variable names'),
                        ('similar', 'list variable pairs with similar usage'),
                        ('patch', 'write rename patches for the top suggestions')]:
        p = sub.add_parser(name, help=help_)
        p.add_argument('paths', nargs='+')
        _config_flags(p)
        _out_flags(p)

    p = sub.add_parser('stats', help='count methods whose names relate to the variables they use')
    p.add_argument('paths', nargs='+', help='one project per path')
    _out_flags(p)

    p = sub.add_parser('score-dist', help='confidence deciles of a check report')
    p.add_argument('report')
    _out_flags(p)
    return ap


def config_from_args(args) -> RunConfig:
    keys = ['max_virtuals', 'max_pattern_length', 'interproc', 'name_features', 'type_features',
            'top_k', 'evidence_n', 'sim_threshold', 'confidence_dist_sign', 'smoothing',
            'max_patterns_per_variable', 'rename_fields']
    return RunConfig.from_env(**{k: getattr(args, k, None) for k in keys})


class _Output:

    def __init__(self, path):
        self.path = path

    def write(self, text):
        if self.path:
            with open(self.path, 'w', encoding='utf-8') as fp:
                fp.write(text)
        else:
            sys.stdout.write(text)


def _json(obj, pretty=False):
    return json.dumps(obj, indent=2 if pretty else None, ensure_ascii=False) + '\n'


def _warn(diags):
    for d in diags:
        if d.code in ('io-error', 'syntax-error', 'unsupported', 'schema-error', 'error'):
            print(f'nameflow: {d.message}', file=sys.stderr)


def cmd_graph(args, cfg):
    units, diags, failed = load_units(args.paths)
    _warn(diags)
    if failed:
        return EXIT_FATAL
    pg = build_program(units, cfg.max_virtuals)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for mid, g in sorted(pg.ufgs.items()):
            fname = mid.replace('/', '_').replace(os.sep, '_') + '.ufg.jsonl'
            with open(os.path.join(args.out, fname), 'w', encoding='utf-8') as fp:
                for r in graph_to_records(g):
                    fp.write(json.dumps(r, sort_keys=True) + '\n')
        with open(os.path.join(args.out, 'bindings.jsonl'), 'w', encoding='utf-8') as fp:
            for r in pg.bindings_records():
                fp.write(json.dumps(r, sort_keys=True) + '\n')
    else:
        lines = [json.dumps(r, sort_keys=True) for mid, g in sorted(pg.ufgs.items())
                 for r in graph_to_records(g)]
        sys.stdout.write(''.join(line + '\n' for line in lines))
    return EXIT_OK


def _analysis(args, cfg):
    units, diags, failed = load_units(args.paths)
    _warn(diags)
    if not units and failed:
        return None, failed
    return Analysis(units, cfg, diags), failed


def cmd_patterns(args, cfg):
    a, failed = _analysis(args, cfg)
    if a is None:
        return EXIT_FATAL
    recs = [r for v in a.variables for r in dump_records(a.patterns[v.id])]
    _Output(args.out).write(''.join(json.dumps(r) + '\n' for r in recs))
    return EXIT_OK


def cmd_check(args, cfg):
    a, failed = _analysis(args, cfg)
    if a is None:
        return EXIT_FATAL
    report, ranked = build_report(a, failed, args.paths)
    if args.pretty:
        _Output(args.out).write(render_check(report))
    else:
        _Output(args.out).write(_json(report))
    if ranked and not args.exit_zero:
        return EXIT_FOUND
    return EXIT_OK


def render_check(report):
    lines = []
    s = report['summary']
    lines.append(f"{s['variables']} variables: {s['consistent']} consistent, "
                 f"{s['suggestions']} suggestions, {s['unanalyzable']} unanalyzable")
    for sug in report['suggestions']:
        if sug['rank'] is None:
            break
        lines.append(f"#{sug['rank']:<3} {sug['path']}:{sug['line']}:{sug['col']}  "
                     f"{sug['original']} -> {sug['new_name']}  (confidence {sug['confidence']:.3f})")
        for e in sug['evidence']:
            lines.append(f"       evidence {e['path']}:{e['line']} {e['name']}")
            for i, text in enumerate(e['lines']):
                lines.append(f"         {e['first_line'] + i:5d} | {text}")
    return '\n'.join(lines) + '\n'


def cmd_similar(args, cfg):
    a, failed = _analysis(args, cfg)
    if a is None:
        return EXIT_FATAL
    order = {v.id: i for i, v in enumerate(a.variables)}
    pairs = similar_pairs(a.index, cfg.sim_threshold, order=lambda v: order[v])

    def where(vid):
        d = a.decls[vid]
        return {'var': vid, 'name': d.name, 'path': d.loc.path, 'line': d.loc.line, 'col': d.loc.col}

    recs = [{'a': where(x), 'b': where(y), 'sim': s} for x, y, s in pairs]
    if args.pretty:
        text = ''.join(f"{r['sim']:.4f}  {r['a']['path']}:{r['a']['line']} {r['a']['name']}  "
                       f"{r['b']['path']}:{r['b']['line']} {r['b']['name']}\n" for r in recs)
    else:
        text = ''.join(json.dumps(r) + '\n' for r in recs)
    _Output(args.out).write(text)
    return EXIT_OK


def cmd_stats(args, cfg=None):
    projects = []
    fatal = False
    for path in args.paths:
        units, diags, failed = load_units([path])
        _warn(diags)
        fatal = fatal or (bool(failed) and not units)
        types = TypeTable([t for u in units for t in u.types])
        for u in units:
            resolve_names(u, types)
        st = method_stats(units)
        projects.append({'project': path, 'related': st['related'], 'unrelated': st['unrelated'],
                         'methods': st['methods']})
    doc = {'projects': projects,
           'related': sum(p['related'] for p in projects),
           'unrelated': sum(p['unrelated'] for p in projects)}
    if args.pretty:
        text = ''.join(f"{p['project']}: related {p['related']}, unrelated {p['unrelated']}\n"
                       for p in projects)
    else:
        text = _json(doc)
    _Output(args.out).write(text)
    return EXIT_FATAL if fatal else EXIT_OK


def cmd_score_dist(args, cfg=None):
    try:
        with open(args.report, encoding='utf-8') as fp:
            report = json.load(fp)
    except (OSError, json.JSONDecodeError) as e:
        print(f'nameflow: {args.report}: {e}', file=sys.stderr)
        return EXIT_FATAL
    table = score_dist(s['confidence'] for s in report.get('suggestions', []))
    if args.pretty:
        text = ''.join(f"{b['decile'] * 10:3d}%  {b['count']}\n" for b in table['buckets'])
        text += f"total {table['total']}\n"
    else:
        text = _json(table)
    _Output(args.out).write(text)
    return EXIT_OK


def cmd_patch(args, cfg):
    a, failed = _analysis(args, cfg)
    if a is None:
        return EXIT_FATAL
    _, ranked = build_report(a, failed, args.paths)
    outdir = args.out or 'patches'
    os.makedirs(outdir, exist_ok=True)
    written = []
    types = TypeTable([t for u in a.units for t in u.types])
    for s in ranked:
        if s.rank is None:
            break
        unit = a.unit_of(s.target)
        try:
            diff = emit_patch(s, unit, allow_fields=cfg.rename_fields, types=types)
        except (CollisionError, RenameNotSupported) as e:
            print(f'nameflow: skipped {s.target.name} at {s.target.loc.path}:{s.target.loc.line}: {e}',
                  file=sys.stderr)
            continue
        name = os.path.join(outdir, patch_filename(s.rank, s))
        with open(name, 'w', encoding='utf-8') as fp:
            fp.write(diff)
        written.append(name)
    sys.stdout.write(''.join(w + '\n' for w in written))
    if written and not args.exit_zero:
        return EXIT_FOUND
    return EXIT_OK


COMMANDS = {'graph': cmd_graph, 'patterns': cmd_patterns, 'check': cmd_check,
            'similar': cmd_similar, 'stats': cmd_stats, 'score-dist': cmd_score_dist,
            'patch': cmd_patch}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (OSError, ValueError) as e:
        print(f'nameflow: bad configuration: {e}', file=sys.stderr)
        return EXIT_FATAL
    try:
        return COMMANDS[args.command](args, cfg)
    except OSError as e:
        print(f'nameflow: {e}', file=sys.stderr)
        return EXIT_FATAL
    except NameflowError as e:
        print(f'nameflow: {e}', file=sys.stderr)
        return EXIT_FATAL


if __name__ == '__main__':
    sys.exit(main())
