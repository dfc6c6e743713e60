"""Formula ASTs shared by the arithmetic language (N; 0, 1, +, |_p, <=) and the ring language.

Both languages use the same node classes. Arithmetic sentences are the
fragment whose terms are sums of ``Lit(0)``, ``Lit(1)`` and variables and whose
atoms are ``Eq``, ``DivP``, ``Le`` (and the macro ``SDivP``).
"""

from __future__ import annotations

from dataclasses import dataclass


class Node:
    __slots__ = ()


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Lit(Node):
    """Integer literal, read in the prime field of the ambient structure."""

    value: int


@dataclass(frozen=True)
class Param(Node):
    """The distinguished generator t of F_q(t)."""

    name: str = "t"


@dataclass(frozen=True)
class Add(Node):
    args: tuple


@dataclass(frozen=True)
class Mul(Node):
    args: tuple


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exp: int


TERMS = (Var, Lit, Param, Add, Mul, Pow)


# -- atoms -------------------------------------------------------------------


@dataclass(frozen=True)
class Eq(Node):
    lhs: Node
    rhs: Node


@dataclass(frozen=True)
class FAtom(Node):
    """F(x): x is not a constant."""

    arg: Node


@dataclass(frozen=True)
class BAtom(Node):
    """B_l(x): x is l-behaved."""

    l: int
    arg: Node


@dataclass(frozen=True)
class DenAtom(Node):
    """Den_p(x, y): x = y^(p^s) for some integer s."""

    x: Node
    y: Node


@dataclass(frozen=True)
class IntsAtom(Node):
    """x lies in Ints_l(z_b(u), u)."""

    l: int
    arg: Node
    u: Node


@dataclass(frozen=True)
class SqAtom(Node):
    """x is a square."""

    arg: Node


@dataclass(frozen=True)
class CharLit(Node):
    """p = 0 (zero=True) or p != 0 (zero=False) in the ambient field."""

    p: int
    zero: bool


@dataclass(frozen=True)
class DivP(Node):
    """a |_p b in N."""

    lhs: Node
    rhs: Node


@dataclass(frozen=True)
class SDivP(Node):
    """a |^p b in N, shorthand for a |_p b and a <= b."""

    lhs: Node
    rhs: Node


@dataclass(frozen=True)
class Le(Node):
    lhs: Node
    rhs: Node


# -- connectives -------------------------------------------------------------


@dataclass(frozen=True)
class Not(Node):
    arg: Node


@dataclass(frozen=True)
class And(Node):
    args: tuple


@dataclass(frozen=True)
class Or(Node):
    args: tuple


@dataclass(frozen=True)
class Exists(Node):
    vars: tuple
    body: Node


@dataclass(frozen=True)
class Forall(Node):
    vars: tuple
    body: Node


ARITH_ATOMS = (Eq, DivP, SDivP, Le)
RING_ATOMS = (Eq, FAtom, BAtom, DenAtom, IntsAtom, SqAtom, CharLit)


def conj(*parts):
    flat = []
    for p in parts:
        flat.extend(p.args if isinstance(p, And) else (p,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts):
    flat = []
    for p in parts:
        flat.extend(p.args if isinstance(p, Or) else (p,))
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def add(*args):
    return args[0] if len(args) == 1 else Add(tuple(args))


def mul(*args):
    return args[0] if len(args) == 1 else Mul(tuple(args))


def children(node):
    if isinstance(node, (Add, Mul, And, Or)):
        return node.args
    if isinstance(node, Pow):
        return (node.base,)
    if isinstance(node, (Eq, DivP, SDivP, Le)):
        return (node.lhs, node.rhs)
    if isinstance(node, (FAtom, SqAtom, Not)):
        return (node.arg,)
    if isinstance(node, BAtom):
        return (node.arg,)
    if isinstance(node, IntsAtom):
        return (node.arg, node.u)
    if isinstance(node, DenAtom):
        return (node.x, node.y)
    if isinstance(node, (Exists, Forall)):
        return (node.body,)
    return ()


def walk(node):
    yield node
    for c in children(node):
        yield from walk(c)


def free_vars(node, bound=frozenset()):
    if isinstance(node, Var):
        return set() if node.name in bound else {node.name}
    if isinstance(node, (Exists, Forall)):
        return free_vars(node.body, bound | set(node.vars))
    out = set()
    for c in children(node):
        out |= free_vars(c, bound)
    return out


def count_quantified(node):
    """Total number of variables bound by existential quantifiers."""
    return sum(len(n.vars) for n in walk(node) if isinstance(n, Exists))


def rename(node, mapping):
    """Rename free variables according to ``mapping`` (name -> Node)."""
    if isinstance(node, Var):
        return mapping.get(node.name, node)
    if isinstance(node, (Lit, Param, CharLit)):
        return node
    if isinstance(node, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k not in node.vars}
        return type(node)(node.vars, rename(node.body, inner))
    if isinstance(node, (Add, Mul, And, Or)):
        return type(node)(tuple(rename(a, mapping) for a in node.args))
    if isinstance(node, Pow):
        return Pow(rename(node.base, mapping), node.exp)
    if isinstance(node, (Eq, DivP, SDivP, Le)):
        return type(node)(rename(node.lhs, mapping), rename(node.rhs, mapping))
    if isinstance(node, (FAtom, SqAtom, Not)):
        return type(node)(rename(node.arg, mapping))
    if isinstance(node, BAtom):
        return BAtom(node.l, rename(node.arg, mapping))
    if isinstance(node, IntsAtom):
        return IntsAtom(node.l, rename(node.arg, mapping), rename(node.u, mapping))
    if isinstance(node, DenAtom):
        return DenAtom(rename(node.x, mapping), rename(node.y, mapping))
    raise TypeError(f"unknown node {node!r}")


def is_positive_existential(node):
    return not any(isinstance(n, (Not, Forall)) for n in walk(node))
