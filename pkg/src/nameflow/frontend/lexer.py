"""Tokenizer for the Java-like subset."""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import SourceSyntaxError
from .ast import SourceLoc

KEYWORDS = {
    'class', 'extends', 'implements', 'interface', 'enum',
    'if', 'else', 'while', 'do', 'for', 'return', 'break', 'continue',
    'this', 'super', 'true', 'false', 'null', 'new',
    'public', 'private', 'protected', 'static', 'final', 'abstract',
    'synchronized', 'native', 'transient', 'volatile', 'strictfp',
    'void', 'int', 'boolean', 'char', 'byte', 'short', 'long', 'float', 'double',
    'try', 'catch', 'finally', 'throw', 'throws', 'switch', 'case', 'default',
    'instanceof', 'import', 'package', 'assert', 'goto', 'const',
}

PRIMITIVES = {'void', 'int', 'boolean', 'char', 'byte', 'short', 'long', 'float', 'double'}
MODIFIERS = {'public', 'private', 'protected', 'static', 'final', 'abstract',
             'synchronized', 'native', 'transient', 'volatile', 'strictfp'}

_OPS = sorted([
    '>>>=', '<<=', '>>=', '>>>', '==', '!=', '<=', '>=', '&&', '||', '++', '--',
    '+=', '-=', '*=', '/=', '%=', '&=', '|=', '^=', '->', '<<', '>>', '::', '...',
    '+', '-', '*', '/', '%', '=', '<', '>', '!', '~', '?', ':', ';', ',', '.',
    '(', ')', '{', '}', '[', ']', '&', '|', '^', '@',
], key=len, reverse=True)

_TOKEN_RE = re.compile(r'''
    (?P<ws>[ \t\r\f\n]+)
  | (?P<lcomment>//[^\n]*)
  | (?P<bcomment>/\*.*?\*/)
  | (?P<float>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?[fFdD]?|\d+[eE][+-]?\d+[fFdD]?|\d+[fFdD])
  | (?P<int>0[xX][0-9a-fA-F_]+[lL]?|\d[\d_]*[lL]?)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)+')
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<op>''' + '|'.join(re.escape(o) for o in _OPS) + r''')
''', re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str      # ident, keyword, int, float, string, char, op, eof
    text: str
    loc: SourceLoc

    def __repr__(self):
        return f'<{self.kind} {self.text!r} {self.loc.line}:{self.loc.col}>'


def tokenize(text: str, path: str = '<string>') -> list[Token]:
    tokens = []
    pos = 0
    line, col = 1, 1
    bpos = 0       # byte offset of pos
    n = len(text)
    ascii_only = text.isascii()
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            loc = SourceLoc(path, line, col, bpos, bpos + 1)
            raise SourceSyntaxError(f'unexpected character {text[pos]!r}', loc)
        kind = m.lastgroup
        s = m.group()
        blen = len(s) if ascii_only else len(s.encode('utf-8'))
        if kind not in ('ws', 'lcomment', 'bcomment'):
            if kind == 'ident' and s in KEYWORDS:
                kind = 'keyword'
            tokens.append(Token(kind, s, SourceLoc(path, line, col, bpos, bpos + blen)))
        nl = s.count('\n')
        if nl:
            line += nl
            col = len(s) - s.rfind('\n')
        else:
            col += len(s)
        pos = m.end()
        bpos += blen
    tokens.append(Token('eof', '', SourceLoc(path, line, col, bpos, bpos)))
    return tokens
