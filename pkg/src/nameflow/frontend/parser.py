"""Recursive-descent parser for the Java-like input subset.

Accepted: classes with single inheritance (or bare top-level members, which
are wrapped in an implicit class named after the file), fields, methods with
typed or untyped parameters, local declarations, assignments (plain and
compound), ``++``/``--``, if/else, while, do-while, for, return, break,
continue, calls ``m(args)`` and ``recv.m(args)``, field access, array index,
the binary operators ``+ - * / % == != < <= > >= && ||`` and unary ``- ! +``,
and int/float/string/char/bool/null literals.

Anything else that is recognisably Java raises UnsupportedConstruct.
"""
from __future__ import annotations

import os
import re

from ..errors import SourceSyntaxError, UnsupportedConstruct
from . import ast as A
from .lexer import MODIFIERS, PRIMITIVES, Token, tokenize

ASSIGN_OPS = {'=', '+=', '-=', '*=', '/=', '%='}
UNSUPPORTED_ASSIGN_OPS = {'&=', '|=', '^=', '<<=', '>>=', '>>>='}

_UNSUPPORTED_STMT = {
    'try': 'exceptions', 'throw': 'exceptions', 'catch': 'exceptions',
    'finally': 'exceptions', 'switch': 'switch', 'case': 'switch',
    'default': 'switch', 'synchronized': 'synchronized', 'assert': 'assert',
    'class': 'local class', 'interface': 'local class', 'enum': 'enum',
    'goto': 'goto', 'const': 'const',
}


def implicit_type_name(path):
    stem = os.path.splitext(os.path.basename(path))[0] or 'Unit'
    stem = re.sub(r'\W', '_', stem)
    if stem[0].isdigit():
        stem = '_' + stem
    return stem


class Parser:

    def __init__(self, text, path):
        self.text = text
        self.path = path
        self.tokens = tokenize(text, path)
        self.pos = 0
        self.prev = self.tokens[0]

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k=1) -> Token:
        i = min(self.pos + k, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, text, k=0):
        t = self.peek(k) if k else self.tok
        return t.kind in ('op', 'keyword') and t.text == text

    def at_kind(self, kind, k=0):
        t = self.peek(k) if k else self.tok
        return t.kind == kind

    def advance(self) -> Token:
        t = self.tok
        if t.kind != 'eof':
            self.pos += 1
        self.prev = t
        return t

    def accept(self, text):
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text) -> Token:
        if not self.at(text):
            self.error(f'expected {text!r}, got {self.tok.text or "end of input"!r}')
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != 'ident':
            if self.tok.kind == 'keyword' and self.tok.text in _UNSUPPORTED_STMT:
                self.unsupported(_UNSUPPORTED_STMT[self.tok.text])
            self.error(f'expected identifier, got {self.tok.text or "end of input"!r}')
        return self.advance()

    def error(self, message, tok=None):
        raise SourceSyntaxError(message, (tok or self.tok).loc)

    def unsupported(self, construct, tok=None):
        raise UnsupportedConstruct(construct, (tok or self.tok).loc)

    def span(self, first: Token) -> A.SourceLoc:
        last = self.prev
        return A.SourceLoc(self.path, first.loc.line, first.loc.col,
                           first.loc.start, max(first.loc.end, last.loc.end))

    # compilation unit

    def parse_unit(self) -> A.SourceUnit:
        types = []
        loose_fields, loose_methods = [], []
        loose_first = None
        if self.at('package'):
            self.skip_through(';')
        while self.at('import'):
            self.skip_through(';')
        while not self.at_kind('eof'):
            if self.at(';'):
                self.advance()
                continue
            first = self.tok
            mods = self.modifiers()
            if self.at('class'):
                types.append(self.class_decl(first, mods))
            elif self.at('interface') or self.at('enum'):
                self.unsupported(self.tok.text)
            else:
                if loose_first is None:
                    loose_first = first
                self.member(first, mods, loose_fields, loose_methods)
        if loose_fields or loose_methods:
            t = A.TypeDecl(implicit_type_name(self.path), None, loose_fields, loose_methods,
                           loc=loose_first.loc, implicit=True)
            self.finish_type(t)
            types.insert(0, t)
        return A.SourceUnit(self.path, types, raw_text=self.text)

    def skip_through(self, text):
        while not self.at(text):
            if self.at_kind('eof'):
                self.error(f'expected {text!r}')
            self.advance()
        self.advance()

    def modifiers(self):
        mods = []
        while True:
            if self.at('@') and not self.at('interface', 1):
                self.unsupported('annotation')
            if self.tok.kind == 'keyword' and self.tok.text in MODIFIERS:
                mods.append(self.advance().text)
            else:
                return tuple(mods)

    def class_decl(self, first, mods):
        self.expect('class')
        name = self.expect_ident()
        if self.at('<'):
            self.unsupported('generics')
        superclass = None
        if self.accept('extends'):
            superclass = self.qualified_name()
            if self.at('<'):
                self.unsupported('generics')
        if self.at('implements'):
            self.unsupported('interfaces')
        self.expect('{')
        fields, methods = [], []
        while not self.accept('}'):
            if self.at_kind('eof'):
                self.error("expected '}'")
            if self.accept(';'):
                continue
            mfirst = self.tok
            mmods = self.modifiers()
            if self.at('class') or self.at('interface') or self.at('enum'):
                self.unsupported('nested class')
            if self.at('{'):
                self.unsupported('initializer block')
            self.member(mfirst, mmods, fields, methods)
        t = A.TypeDecl(name.text, superclass, fields, methods, loc=name.loc, modifiers=mods)
        self.finish_type(t)
        return t

    def finish_type(self, t):
        seen = set()
        for m in t.methods:
            m.owner = t.name
            key = (m.name, m.arity)
            if key in seen:
                raise UnsupportedConstruct(f'same-arity overload of {m.name}', m.loc)
            seen.add(key)
        for f in t.fields:
            f.owner = t.name

    def member(self, first, mods, fields, methods):
        if self.at('<'):
            self.unsupported('generics')
        if self.tok.kind == 'ident' and self.at('(', 1):
            # untyped method or constructor: name(params)
            name = self.advance()
            methods.append(self.method_rest(first, mods, '', name))
            return
        type_name = self.type_ref()
        name = self.expect_ident()
        if self.at('('):
            methods.append(self.method_rest(first, mods, type_name, name))
            return
        fields.extend(self.declarators(type_name, name, A.FIELD, mods))
        self.expect(';')

    def method_rest(self, first, mods, return_type, name):
        self.expect('(')
        params = []
        if not self.at(')'):
            while True:
                params.append(self.param())
                if not self.accept(','):
                    break
        self.expect(')')
        if self.at('throws'):
            self.unsupported('exceptions')
        body = None
        if not self.accept(';'):
            body = self.block()
        return A.MethodDecl(name.text, params, return_type, body, loc=name.loc, modifiers=mods)

    def param(self):
        mods = []
        while self.at('final'):
            mods.append(self.advance().text)
        if self.at('@'):
            self.unsupported('annotation')
        if self.tok.kind == 'ident' and (self.at(',', 1) or self.at(')', 1)):
            name = self.advance()
            return A.VarDecl(name.text, '', A.PARAM, loc=name.loc, modifiers=tuple(mods))
        type_name = self.type_ref()
        if self.at('...'):
            self.unsupported('varargs')
        name = self.expect_ident()
        if self.at('['):
            self.unsupported('C-style array declarator')
        return A.VarDecl(name.text, type_name, A.PARAM, loc=name.loc, modifiers=tuple(mods))

    def qualified_name(self):
        parts = [self.expect_ident().text]
        while self.at('.') and self.peek().kind == 'ident':
            self.advance()
            parts.append(self.advance().text)
        return '.'.join(parts)

    def type_ref(self):
        if self.tok.kind == 'keyword' and self.tok.text in PRIMITIVES:
            name = self.advance().text
        elif self.tok.kind == 'ident':
            name = self.qualified_name()
        else:
            if self.tok.kind == 'keyword' and self.tok.text in _UNSUPPORTED_STMT:
                self.unsupported(_UNSUPPORTED_STMT[self.tok.text])
            self.error(f'expected type, got {self.tok.text or "end of input"!r}')
        if self.at('<'):
            self.unsupported('generics')
        while self.at('[') and self.at(']', 1):
            self.advance()
            self.advance()
            name += '[]'
        return name

    def declarators(self, type_name, name, kind, mods):
        decls = []
        while True:
            if self.at('['):
                self.unsupported('C-style array declarator')
            init = None
            if self.accept('='):
                if self.at('{'):
                    self.unsupported('array initializer')
                init = self.expression()
            decls.append(A.VarDecl(name.text, type_name, kind, loc=name.loc, init=init,
                                   modifiers=tuple(mods)))
            if not self.accept(','):
                return decls
            name = self.expect_ident()

    # statements

    def block(self):
        first = self.expect('{')
        body = []
        while not self.accept('}'):
            if self.at_kind('eof'):
                self.error("expected '}'")
            body.append(self.statement())
        return A.Block(body, loc=self.span(first))

    def statement(self):
        t = self.tok
        if t.kind == 'keyword':
            kw = t.text
            if kw in _UNSUPPORTED_STMT:
                self.unsupported(_UNSUPPORTED_STMT[kw])
            if kw == 'if':
                self.advance()
                self.expect('(')
                cond = self.expression()
                self.expect(')')
                then = self.statement()
                orelse = self.statement() if self.accept('else') else None
                return A.If(cond, then, orelse, loc=self.span(t))
            if kw == 'while':
                self.advance()
                self.expect('(')
                cond = self.expression()
                self.expect(')')
                body = self.statement()
                return A.While(cond, body, loc=self.span(t))
            if kw == 'do':
                self.advance()
                body = self.statement()
                self.expect('while')
                self.expect('(')
                cond = self.expression()
                self.expect(')')
                self.expect(';')
                return A.DoWhile(body, cond, loc=self.span(t))
            if kw == 'for':
                return self.for_statement()
            if kw == 'return':
                self.advance()
                value = None if self.at(';') else self.expression()
                self.expect(';')
                return A.Return(value, loc=self.span(t))
            if kw in ('break', 'continue'):
                self.advance()
                if self.tok.kind == 'ident':
                    self.unsupported('labeled ' + kw)
                self.expect(';')
                return (A.Break if kw == 'break' else A.Continue)(loc=self.span(t))
            if kw == 'final' or kw in PRIMITIVES:
                return self.local_var()
        if t.kind == 'op':
            if t.text == ';':
                self.advance()
                return A.Empty(loc=t.loc)
            if t.text == '{':
                return self.block()
        if t.kind == 'ident':
            if self.at(':', 1):
                self.unsupported('labeled statement')
            if self.is_decl_start():
                return self.local_var()
        expr = self.expression()
        if not isinstance(expr, (A.Assign, A.Call, A.IncDec)):
            self.error('not a statement', t)
        self.expect(';')
        return A.ExprStmt(expr, loc=self.span(t))

    def is_decl_start(self):
        j = self.pos
        toks = self.tokens
        if toks[j].kind != 'ident':
            return False
        j += 1
        while toks[j].text == '.' and toks[j + 1].kind == 'ident':
            j += 2
        if toks[j].kind == 'op' and toks[j].text == '<':
            # `Foo<Bar> x` cannot be an expression statement
            self.unsupported('generics', toks[j])
        while toks[j].text == '[' and toks[j + 1].text == ']':
            j += 2
        return toks[j].kind == 'ident'

    def local_var(self):
        first = self.tok
        mods = []
        while self.at('final'):
            mods.append(self.advance().text)
        type_name = self.type_ref()
        name = self.expect_ident()
        decls = self.declarators(type_name, name, A.LOCAL, mods)
        self.expect(';')
        return A.LocalVar(decls, loc=self.span(first))

    def for_statement(self):
        first = self.expect('for')
        self.expect('(')
        init = []
        if not self.at(';'):
            if self.at('final') or (self.tok.kind == 'keyword' and self.tok.text in PRIMITIVES) \
                    or (self.tok.kind == 'ident' and self.is_decl_start()):
                vfirst = self.tok
                mods = []
                while self.at('final'):
                    mods.append(self.advance().text)
                type_name = self.type_ref()
                name = self.expect_ident()
                if self.at(':'):
                    self.unsupported('enhanced for')
                decls = self.declarators(type_name, name, A.LOCAL, mods)
                init.append(A.LocalVar(decls, loc=self.span(vfirst)))
            else:
                while True:
                    efirst = self.tok
                    init.append(A.ExprStmt(self.statement_expression(), loc=self.span(efirst)))
                    if not self.accept(','):
                        break
        self.expect(';')
        cond = None if self.at(';') else self.expression()
        self.expect(';')
        update = []
        if not self.at(')'):
            while True:
                update.append(self.statement_expression())
                if not self.accept(','):
                    break
        self.expect(')')
        body = self.statement()
        return A.For(init, cond, update, body, loc=self.span(first))

    def statement_expression(self):
        t = self.tok
        e = self.expression()
        if not isinstance(e, (A.Assign, A.Call, A.IncDec)):
            self.error('not a statement', t)
        return e

    # expressions

    def expression(self):
        return self.assignment()

    def assignment(self):
        first = self.tok
        lhs = self.conditional()
        if self.tok.kind == 'op':
            op = self.tok.text
            if op in UNSUPPORTED_ASSIGN_OPS:
                self.unsupported('bitwise operator')
            if op in ASSIGN_OPS:
                if not isinstance(lhs, (A.Name, A.FieldAccess, A.Index)):
                    self.error('invalid assignment target')
                self.advance()
                rhs = self.assignment()
                return A.Assign(lhs, op, rhs, loc=self.span(first))
        return lhs

    def conditional(self):
        e = self.binary(0)
        if self.at('?'):
            self.unsupported('conditional expression')
        return e

    _LEVELS = [
        ('||',),
        ('&&',),
        ('==', '!='),
        ('<', '<=', '>', '>='),
        ('+', '-'),
        ('*', '/', '%'),
    ]
    _UNSUPPORTED_BINOPS = {'|': 'bitwise operator', '&': 'bitwise operator',
                           '^': 'bitwise operator', '<<': 'shift operator',
                           '>>': 'shift operator', '>>>': 'shift operator',
                           'instanceof': 'instanceof', '->': 'lambda',
                           '::': 'method reference'}

    def binary(self, level):
        if level == len(self._LEVELS):
            return self.unary()
        first = self.tok
        left = self.binary(level + 1)
        ops = self._LEVELS[level]
        while True:
            t = self.tok
            if t.kind in ('op', 'keyword') and t.text in self._UNSUPPORTED_BINOPS:
                self.unsupported(self._UNSUPPORTED_BINOPS[t.text])
            if t.kind == 'op' and t.text in ops:
                self.advance()
                right = self.binary(level + 1)
                left = A.Binary(t.text, left, right, loc=self.span(first))
            else:
                return left

    def unary(self):
        t = self.tok
        if t.kind == 'op':
            if t.text in ('-', '!', '+'):
                self.advance()
                operand = self.unary()
                return A.Unary(t.text, operand, loc=self.span(t))
            if t.text in ('++', '--'):
                self.advance()
                target = self.unary()
                if not isinstance(target, (A.Name, A.FieldAccess, A.Index)):
                    self.error('invalid increment target', t)
                return A.IncDec(t.text, target, True, loc=self.span(t))
            if t.text == '~':
                self.unsupported('bitwise operator')
            if t.text == '(' and self.is_cast():
                self.unsupported('cast')
        return self.postfix()

    def is_cast(self):
        j = self.pos + 1
        toks = self.tokens
        if toks[j].kind == 'keyword' and toks[j].text in PRIMITIVES:
            return True
        if toks[j].kind != 'ident':
            return False
        j += 1
        while toks[j].text == '.' and toks[j + 1].kind == 'ident':
            j += 2
        while toks[j].text == '[' and toks[j + 1].text == ']':
            j += 2
        if toks[j].text != ')':
            return False
        nxt = toks[j + 1]
        return nxt.kind in ('ident', 'int', 'float', 'string', 'char') or \
            (nxt.kind == 'keyword' and nxt.text in ('this', 'true', 'false', 'null', 'new')) or \
            (nxt.kind == 'op' and nxt.text in ('(', '!', '~'))

    def postfix(self):
        first = self.tok
        e = self.primary()
        while True:
            if self.at('.'):
                self.advance()
                if self.tok.kind != 'ident':
                    self.unsupported('qualified ' + (self.tok.text or 'expression'))
                name = self.advance()
                if self.at('('):
                    args = self.arguments()
                    e = A.Call(e, name.text, args, loc=self.span(first))
                else:
                    e = A.FieldAccess(e, name.text, loc=self.span(first))
            elif self.at('['):
                self.advance()
                idx = self.expression()
                self.expect(']')
                e = A.Index(e, idx, loc=self.span(first))
            elif self.at('::'):
                self.unsupported('method reference')
            else:
                break
        if self.tok.kind == 'op' and self.tok.text in ('++', '--'):
            if not isinstance(e, (A.Name, A.FieldAccess, A.Index)):
                self.error('invalid increment target')
            op = self.advance().text
            e = A.IncDec(op, e, False, loc=self.span(first))
        return e

    def arguments(self):
        self.expect('(')
        args = []
        if not self.at(')'):
            while True:
                args.append(self.expression())
                if not self.accept(','):
                    break
        self.expect(')')
        return args

    def primary(self):
        t = self.tok
        if t.kind in ('int', 'float', 'string', 'char'):
            self.advance()
            return A.Literal(t.kind, t.text, loc=t.loc)
        if t.kind == 'keyword':
            if t.text in ('true', 'false'):
                self.advance()
                return A.Literal('bool', t.text, loc=t.loc)
            if t.text == 'null':
                self.advance()
                return A.Literal('null', t.text, loc=t.loc)
            if t.text == 'this':
                self.advance()
                if self.at('('):
                    self.unsupported('constructor chaining')
                return A.This(loc=t.loc)
            if t.text == 'new':
                self.unsupported('object creation')
            if t.text == 'super':
                self.unsupported('super')
            if t.text in PRIMITIVES:
                self.unsupported('class literal')
            self.error(f'unexpected {t.text!r}')
        if t.kind == 'ident':
            self.advance()
            if self.at('->'):
                self.unsupported('lambda')
            if self.at('('):
                args = self.arguments()
                return A.Call(None, t.text, args, loc=self.span(t))
            return A.Name(t.text, loc=t.loc)
        if t.kind == 'op' and t.text == '(':
            if self.is_lambda_params():
                self.unsupported('lambda')
            self.advance()
            e = self.expression()
            self.expect(')')
            return e
        if t.kind == 'op' and t.text == '@':
            self.unsupported('annotation')
        self.error(f'unexpected {t.text or "end of input"!r}')

    def is_lambda_params(self):
        depth = 0
        j = self.pos
        toks = self.tokens
        while toks[j].kind != 'eof':
            if toks[j].text == '(':
                depth += 1
            elif toks[j].text == ')':
                depth -= 1
                if depth == 0:
                    return toks[j + 1].text == '->'
            j += 1
        return False


def parse_source(text: str, path: str = '<string>') -> A.SourceUnit:
    """Parse source text into a SourceUnit (not yet scope-resolved)."""
    return Parser(text, path).parse_unit()
