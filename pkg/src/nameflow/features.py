"""Feature encoding of usage patterns, and identifier tokenization.

A pattern becomes one feature per adjacent node pair, written
``descA:label:descB`` in the direction the value flows (``descA:descB`` when
the edge carries no label worth keeping).  The variable the pattern starts
from appears as ``@``.  Variable nodes are spelled through their name tokens
(``TOK=buffer``), so ``outputBuffer`` and ``ringBuffer`` share evidence.

Attribute features describe the origin value itself and are upper-case so
they never collide with a lower-case name token:

  @CONST        the value comes from a constant
  @LOOP         the value passes through a loop (Begin/End)
  @COND         the value feeds a branch or loop condition
  @INDEX        the value is used as an array index
  @OBJ          the value is used as a receiver (``value.m()``, ``value.f``)
  @OP=<op>      the operator the value is applied to
  @ARG=<f()>:argK  the call argument position the value is passed to
  @TYPE=<type>  the declared type of the variable
  @ASSIGN=<tok> a token of another variable the value is assigned to
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .patterns import BACKWARD, FORWARD, UsagePattern
from .ufg import BEGIN, BINOP, CALL, CONST, END, UNOP, VAR_KINDS, arg_index

ORIGIN = '@'
NO_NAME = '<VAR>'

_WORD_RE = re.compile(r'[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|\d+|[^\W\d_A-Za-z]+')


def tokenize_name(name: str) -> list:
    """Split an identifier into lowercase word tokens.

    >>> tokenize_name('outputBufferName')
    ['output', 'buffer', 'name']
    >>> tokenize_name('HTTPServer2')
    ['http', 'server', '2']
    """
    return [t.lower() for t in _WORD_RE.findall(name)]


def canonical_name(name: str) -> str:
    """Label identity for a name: its tokens joined by single spaces."""
    toks = tokenize_name(name)
    return ' '.join(toks) if toks else name.lower()


@dataclass(frozen=True)
class Feature:
    key: str
    dist: int = 0       # step index (1-based) of the farthest node the feature uses


def render_label(label: str) -> str:
    if label in ('', '#return'):
        return ''
    k = arg_index(label)
    if k is not None:
        return f'arg{k}'
    return {'cond': '?', 'cond:true': 'true', 'cond:false': 'false'}.get(label, label)


def _descs(step, name_features):
    """Spellings of one step's node for pair features."""
    if step.kind not in VAR_KINDS:
        return [step.desc]
    if not name_features:
        return [NO_NAME]
    toks = tokenize_name(step.desc)
    out = ['TOK=' + t for t in toks]
    if len(toks) == 1:
        out.append(toks[0])
    return out or [step.desc.lower()]


def _pair(a, label, b):
    lab = render_label(label)
    return f'{a}:{lab}:{b}' if lab else f'{a}:{b}'


def encode_pattern(p: UsagePattern, name_features=True, type_name=None) -> list:
    """Features of one pattern, in step order, without duplicates."""
    out = []
    seen = set()

    def add(key, dist):
        if key not in seen:
            seen.add(key)
            out.append(Feature(key, dist))

    prev = [ORIGIN]
    for i, s in enumerate(p.steps, 1):
        cur = _descs(s, name_features)
        for a in prev:
            for b in cur:
                if p.direction == FORWARD:
                    add(_pair(a, s.label, b), i)
                else:
                    add(_pair(b, s.label, a), i)
        prev = cur

    first = p.steps[0]
    if p.direction == BACKWARD and first.kind == CONST:
        add('@CONST', 1)
    if p.direction == FORWARD:
        if first.label == '[]':
            add('@INDEX', 1)
        if first.label == 'this':
            add('@OBJ', 1)
        if first.kind in (BINOP, UNOP):
            add('@OP=' + first.desc, 1)
        k = arg_index(first.label)
        if k is not None and first.kind == CALL:
            add(f'@ARG={first.desc}:arg{k}', 1)
        if name_features:
            for i, s in enumerate(p.steps, 1):
                if s.kind in VAR_KINDS:
                    for t in tokenize_name(s.desc):
                        add('@ASSIGN=' + t, i)
    for i, s in enumerate(p.steps, 1):
        if s.kind in (BEGIN, END):
            add('@LOOP', i)
            break
    for i, s in enumerate(p.steps, 1):
        if s.label == 'cond':
            add('@COND', i)
            break
    if type_name:
        add('@TYPE=' + type_name, 0)
    return out


def type_feature(declared_type):
    return Feature('@TYPE=' + declared_type, 0) if declared_type else None


_SPLIT_RE = re.compile(r'[^A-Za-z0-9_]+')


def _key_tokens(key):
    return set(t for t in _SPLIT_RE.split(key) if t)


def strip_self_features(features, target) -> list:
    """Drop every feature that mentions a token of the target's own name.

    ``target`` is a VarDecl or a plain name.  A feature is dropped when any
    of its non-alphanumeric-delimited pieces equals one of the name's
    lowercase tokens.
    """
    name = target if isinstance(target, str) else target.name
    toks = set(tokenize_name(name)) | {name.lower()}
    out = []
    for f in features:
        key = f.key if isinstance(f, Feature) else f
        if _key_tokens(key) & toks:
            continue
        out.append(f)
    return out


__all__ = ['Feature', 'tokenize_name', 'canonical_name', 'encode_pattern', 'strip_self_features',
           'render_label', 'type_feature', 'ORIGIN', 'NO_NAME']
