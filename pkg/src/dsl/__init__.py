"""
The .fib text format

Modules:
- parser: lark grammar, AST builder and reference resolution
- printer: canonical printing, inverse to parse up to source spans
- loader: sealing a parsed document into core structures
"""
from .loader import Workspace, load
from .parser import parse, resolve
from .printer import print_document

__all__ = ["Workspace", "load", "parse", "resolve", "print_document"]
