"""S-expression printing and parsing for formula ASTs."""

from __future__ import annotations

import re

from .ast import (
    Add, And, BAtom, CharLit, DenAtom, DivP, Eq, Exists, FAtom, Forall, IntsAtom, Le, Lit, Mul,
    Not, Or, Param, Pow, SDivP, SqAtom, Var,
)


class SexprError(ValueError):
    def __init__(self, msg, pos=None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} at position {pos}")


_BINARY = {Eq: "=", DivP: "divp", SDivP: "sdivp", Le: "<="}
_NARY = {Add: "+", Mul: "*", And: "and", Or: "or"}


def to_sexpr(node):
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Lit):
        return str(node.value)
    if isinstance(node, Param):
        return "@" + node.name
    if type(node) in _NARY:
        return "(" + " ".join([_NARY[type(node)]] + [to_sexpr(a) for a in node.args]) + ")"
    if type(node) in _BINARY:
        return f"({_BINARY[type(node)]} {to_sexpr(node.lhs)} {to_sexpr(node.rhs)})"
    if isinstance(node, Pow):
        return f"(^ {to_sexpr(node.base)} {node.exp})"
    if isinstance(node, FAtom):
        return f"(F {to_sexpr(node.arg)})"
    if isinstance(node, SqAtom):
        return f"(Sq {to_sexpr(node.arg)})"
    if isinstance(node, BAtom):
        return f"(B {node.l} {to_sexpr(node.arg)})"
    if isinstance(node, DenAtom):
        return f"(Den {to_sexpr(node.x)} {to_sexpr(node.y)})"
    if isinstance(node, IntsAtom):
        return f"(Ints {node.l} {to_sexpr(node.arg)} {to_sexpr(node.u)})"
    if isinstance(node, CharLit):
        return f"({'char=' if node.zero else 'char!='} {node.p})"
    if isinstance(node, Not):
        return f"(not {to_sexpr(node.arg)})"
    if isinstance(node, (Exists, Forall)):
        head = "exists" if isinstance(node, Exists) else "forall"
        return f"({head} ({' '.join(node.vars)}) {to_sexpr(node.body)})"
    raise TypeError(f"cannot print {node!r}")


pretty_print = to_sexpr

_TOK = re.compile(r"\s*(\(|\)|[^\s()]+)")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_INT = re.compile(r"-?\d+\Z")


def _read(text):
    """Text -> nested lists of (token, position) pairs."""
    stack = [[]]
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m:
            raise SexprError("unexpected character", pos)
        tok, start = m.group(1), m.start(1)
        if tok == "(":
            stack.append([])
            stack[-1].append(start)  # remember opening position
        elif tok == ")":
            if len(stack) == 1:
                raise SexprError("unbalanced ')'", start)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append((tok, start))
        pos = m.end()
    if len(stack) != 1:
        raise SexprError("unbalanced '('", len(text))
    top = stack[0]
    if len(top) != 1:
        raise SexprError("expected exactly one expression", 0)
    return top[0]


def _pos(x):
    return x[0] if isinstance(x, list) else x[1]


def _atom(x, what="token"):
    if isinstance(x, list):
        raise SexprError(f"expected {what}", x[0])
    return x[0]


def _int(x):
    tok = _atom(x, "integer")
    if not _INT.match(tok):
        raise SexprError(f"expected integer, got {tok!r}", x[1])
    return int(tok)


def _build(x):
    if not isinstance(x, list):
        tok, pos = x
        if _INT.match(tok):
            return Lit(int(tok))
        if tok.startswith("@") and _NAME.match(tok[1:]):
            return Param(tok[1:])
        if _NAME.match(tok):
            return Var(tok)
        raise SexprError(f"bad token {tok!r}", pos)
    start, items = x[0], x[1:]
    if not items:
        raise SexprError("empty list", start)
    head = _atom(items[0], "operator")
    args = items[1:]

    def arity(n):
        if len(args) != n:
            raise SexprError(f"{head!r} takes {n} arguments", start)

    for cls, name in _NARY.items():
        if head == name:
            return cls(tuple(_build(a) for a in args))
    for cls, name in _BINARY.items():
        if head == name:
            arity(2)
            return cls(_build(args[0]), _build(args[1]))
    if head == "^":
        arity(2)
        return Pow(_build(args[0]), _int(args[1]))
    if head == "F":
        arity(1)
        return FAtom(_build(args[0]))
    if head == "Sq":
        arity(1)
        return SqAtom(_build(args[0]))
    if head == "B":
        arity(2)
        return BAtom(_int(args[0]), _build(args[1]))
    if head == "Den":
        arity(2)
        return DenAtom(_build(args[0]), _build(args[1]))
    if head == "Ints":
        arity(3)
        return IntsAtom(_int(args[0]), _build(args[1]), _build(args[2]))
    if head in ("char=", "char!="):
        arity(1)
        return CharLit(_int(args[0]), head == "char=")
    if head == "not":
        arity(1)
        return Not(_build(args[0]))
    if head in ("exists", "forall"):
        arity(2)
        if not isinstance(args[0], list):
            raise SexprError("expected variable list", _pos(args[0]))
        names = []
        for v in args[0][1:]:
            name = _atom(v, "variable")
            if not _NAME.match(name):
                raise SexprError(f"bad variable {name!r}", v[1])
            names.append(name)
        cls = Exists if head == "exists" else Forall
        return cls(tuple(names), _build(args[1]))
    raise SexprError(f"unknown operator {head!r}", _pos(items[0]))


def parse_sexpr(text):
    return _build(_read(text))
