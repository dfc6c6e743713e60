"""Concrete syntax and bounded evaluation for positive existential sentences of (N; 0, 1, +, |_p, <=).

Grammar::

    sentence := 'E' var '.' sentence | disj
    disj     := conj ('|' conj)*
    conj     := atom ('&' atom)*
    atom     := term ('=' | '<=' | 'divp' | 'sdivp') term | '(' sentence ')'
    term     := summand ('+' summand)*
    summand  := '0' | '1' | var

``a divp b`` means one of a, b is p^s times the other; ``a sdivp b`` abbreviates
``a divp b & a <= b``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .ast import (
    Add, And, DivP, Eq, Exists, Le, Lit, Or, SDivP, Var, is_positive_existential, walk,
)

TRUE = "true"
FALSE_AT_BOUND = "false-at-bound"

KEYWORDS = {"E", "divp", "sdivp"}


class ParseError(ValueError):
    def __init__(self, msg, pos):
        self.pos = pos
        super().__init__(f"{msg} at position {pos}")


_TOKEN = re.compile(r"\s*(<=|[.|&=+()]|[A-Za-z_][A-Za-z0-9_]*|\d+)")


def _tokenize(text):
    out, pos = [], 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    out.append((None, end))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.scope = []

    def peek(self):
        return self.toks[self.i]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}", pos)
        self.i += 1
        return tok, pos

    def sentence(self):
        tok, pos = self.peek()
        if tok == "E":
            self.take()
            name, npos = self.take()
            if name is None or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in KEYWORDS:
                raise ParseError(f"expected variable name, got {name!r}", npos)
            self.take(".")
            self.scope.append(name)
            body = self.sentence()
            self.scope.pop()
            return Exists((name,), body)
        return self.disj()

    def disj(self):
        parts = [self.conj()]
        while self.peek()[0] == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.atom()]
        while self.peek()[0] == "&":
            self.take()
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def atom(self):
        tok, pos = self.peek()
        if tok == "(":
            self.take()
            s = self.sentence()
            self.take(")")
            return s
        if tok == "E":
            return self.sentence()
        lhs = self.term()
        op, opos = self.take()
        rhs = self.term()
        if op == "=":
            return Eq(lhs, rhs)
        if op == "<=":
            return Le(lhs, rhs)
        if op == "divp":
            return DivP(lhs, rhs)
        if op == "sdivp":
            return SDivP(lhs, rhs)
        raise ParseError(f"expected '=', '<=', 'divp' or 'sdivp', got {op!r}", opos)

    def term(self):
        parts = [self.summand()]
        while self.peek()[0] == "+":
            self.take()
            parts.append(self.summand())
        return parts[0] if len(parts) == 1 else Add(tuple(parts))

    def summand(self):
        tok, pos = self.take()
        if tok in ("0", "1"):
            return Lit(int(tok))
        if tok is None:
            raise ParseError("unexpected end of input", pos)
        if re.fullmatch(r"\d+", tok):
            raise ParseError(f"only the constants 0 and 1 are allowed, got {tok}", pos)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) and tok not in KEYWORDS:
            if tok not in self.scope:
                raise ParseError(f"unbound variable {tok!r}", pos)
            return Var(tok)
        raise ParseError(f"unexpected {tok!r}", pos)


def parse_arith(text):
    p = _Parser(text)
    s = p.sentence()
    tok, pos = p.peek()
    if tok is not None:
        raise ParseError(f"unexpected {tok!r}", pos)
    return s


def format_arith(node):
    """Infix text accepted by parse_arith."""
    if isinstance(node, Lit):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Add):
        return " + ".join(format_arith(a) for a in node.args)
    if isinstance(node, Eq):
        return f"{format_arith(node.lhs)} = {format_arith(node.rhs)}"
    if isinstance(node, Le):
        return f"{format_arith(node.lhs)} <= {format_arith(node.rhs)}"
    if isinstance(node, DivP):
        return f"{format_arith(node.lhs)} divp {format_arith(node.rhs)}"
    if isinstance(node, SDivP):
        return f"{format_arith(node.lhs)} sdivp {format_arith(node.rhs)}"
    if isinstance(node, And):
        return " & ".join(_wrap(a, (Or, Exists)) for a in node.args)
    if isinstance(node, Or):
        return " | ".join(_wrap(a, (Exists,)) for a in node.args)
    if isinstance(node, Exists):
        return "".join(f"E {v}. " for v in node.vars) + format_arith(node.body)
    raise TypeError(f"not an arithmetic node: {node!r}")


def _wrap(node, kinds):
    s = format_arith(node)
    return f"({s})" if isinstance(node, kinds) else s


def check_arith(node):
    """Raise ValueError unless node is a closed positive existential arithmetic sentence."""
    if not is_positive_existential(node):
        raise ValueError("sentence must be positive existential")
    allowed = (Lit, Var, Add, Eq, Le, DivP, SDivP, And, Or, Exists)
    for n in walk(node):
        if not isinstance(n, allowed):
            raise ValueError(f"{type(n).__name__} is not part of the arithmetic language")
        if isinstance(n, Lit) and n.value not in (0, 1):
            raise ValueError("only the constants 0 and 1 are allowed")


def derive_strict_div(node):
    """Replace every a sdivp b by (a divp b & a <= b)."""
    if isinstance(node, SDivP):
        return And((DivP(node.lhs, node.rhs), Le(node.lhs, node.rhs)))
    if isinstance(node, (And, Or)):
        return type(node)(tuple(derive_strict_div(a) for a in node.args))
    if isinstance(node, Exists):
        return Exists(node.vars, derive_strict_div(node.body))
    return node


# ---------------------------------------------------------------------------
# evaluation in N
# ---------------------------------------------------------------------------


def divides_p(a, b, p):
    """a |_p b: b = p^s a or a = p^s b for some s >= 0."""
    if a == b:
        return True
    lo, hi = min(a, b), max(a, b)
    if lo == 0:
        return False
    if hi % lo:
        return False
    r = hi // lo
    while r % p == 0:
        r //= p
    return r == 1


def _term(node, env):
    if isinstance(node, Lit):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Add):
        return sum(_term(a, env) for a in node.args)
    raise TypeError(f"bad term {node!r}")


@dataclass
class ArithResult:
    verdict: str
    witnesses: dict = field(default_factory=dict)

    def to_dict(self):
        return {"result": self.verdict, "witnesses": self.witnesses}


def _solve(node, env, bound, p):
    """Yield satisfying extensions of env."""
    if isinstance(node, Eq):
        if _term(node.lhs, env) == _term(node.rhs, env):
            yield env
    elif isinstance(node, Le):
        if _term(node.lhs, env) <= _term(node.rhs, env):
            yield env
    elif isinstance(node, DivP):
        if divides_p(_term(node.lhs, env), _term(node.rhs, env), p):
            yield env
    elif isinstance(node, SDivP):
        a, b = _term(node.lhs, env), _term(node.rhs, env)
        if divides_p(a, b, p) and a <= b:
            yield env
    elif isinstance(node, And):
        yield from _solve_all(list(node.args), env, bound, p)
    elif isinstance(node, Or):
        for a in node.args:
            yield from _solve(a, env, bound, p)
    elif isinstance(node, Exists):
        for values in itertools.product(range(bound + 1), repeat=len(node.vars)):
            yield from _solve(node.body, {**env, **dict(zip(node.vars, values))}, bound, p)
    else:
        raise TypeError(f"cannot evaluate {node!r}")


def _solve_all(goals, env, bound, p):
    if not goals:
        yield env
        return
    for e in _solve(goals[0], env, bound, p):
        yield from _solve_all(goals[1:], e, bound, p)


def eval_arith(s, bound, p):
    """Search witnesses in [0, bound]; TRUE is definitive, FALSE_AT_BOUND is not."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    if isinstance(s, str):
        s = parse_arith(s)
    check_arith(s)
    for env in _solve(s, {}, bound, p):
        return ArithResult(TRUE, dict(env))
    return ArithResult(FALSE_AT_BOUND)


__all__ = [
    "ArithResult", "FALSE_AT_BOUND", "ParseError", "TRUE", "check_arith", "derive_strict_div",
    "divides_p", "eval_arith", "format_arith", "parse_arith",
]
