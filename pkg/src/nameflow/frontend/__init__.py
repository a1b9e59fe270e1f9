from .ast import SourceLoc, SourceUnit, TypeDecl, MethodDecl, VarDecl, Diagnostic
from .parser import parse_source
from .resolve import TypeTable, resolve_names
from .interchange import parse_interchange, to_interchange

__all__ = ['SourceLoc', 'SourceUnit', 'TypeDecl', 'MethodDecl', 'VarDecl', 'Diagnostic',
           'parse_source', 'parse_interchange', 'to_interchange', 'resolve_names', 'TypeTable']
