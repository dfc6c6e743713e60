"""Compile arithmetic sentences into existential ring-language formulas over F_q(t).

Each natural-number variable a becomes a field variable z_a standing for an
element of order a at the behaved factor of a parameter u: 0 is sent to 1, 1 to
u, and sums to products. Atoms become:

* ``s = t``      ->  P(s) = P(t)
* ``s <= t``     ->  exists r (r * P(s) = P(t) and Ints(r))
* ``s divp t``   ->  exists y, r1, r2 (Den(y, P(s)) and r1 * P(t) = y and Ints(r1)
                                        and r2 * y = P(t) and Ints(r2))

where P(.) is the product image of a term. Every z_a is also required to lie in
Ints and to be invertible, which pins its order to a natural number.
"""

from __future__ import annotations

import itertools

from ..power import build_phi
from .arith import check_arith, derive_strict_div
from .ast import (
    Add, And, BAtom, DenAtom, DivP, Eq, Exists, Forall, IntsAtom, Le, Lit, Mul, Not, Or, Param, Pow,
    Var, conj, disj, rename, walk,
)

MODES = ("abstract", "expand-denp")
POLICIES = ("free-u", "quantified-Bl", "fixed-t")


class TranslationError(ValueError):
    pass


class _Fresh:
    def __init__(self, taken):
        self.taken = set(taken)
        self.counter = itertools.count(1)

    def __call__(self, stem):
        while True:
            name = f"{stem}_{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _image(term, U, names):
    """Product image of a sum of 0, 1 and variables."""
    factors = []
    for s in term.args if isinstance(term, Add) else (term,):
        if isinstance(s, Lit):
            if s.value == 1:
                factors.append(U)
        elif isinstance(s, Var):
            factors.append(Var(names[s.name]))
        else:
            raise TranslationError(f"unexpected summand {s!r}")
    if not factors:
        return Lit(1)
    return factors[0] if len(factors) == 1 else Mul(tuple(factors))


def translate(s, mode="abstract", g=0, policy="fixed-t", l=2):
    if mode not in MODES:
        raise TranslationError(f"unknown mode {mode!r}")
    if policy not in POLICIES:
        raise TranslationError(f"unknown parameter policy {policy!r}")
    try:
        check_arith(s)
    except ValueError as exc:
        raise TranslationError(str(exc)) from exc
    s = derive_strict_div(s)
    U = Param("t") if policy == "fixed-t" else Var("u")
    names_in_use = {n.name for n in walk(s) if isinstance(n, Var)}
    names_in_use |= {v for n in walk(s) if isinstance(n, Exists) for v in n.vars}
    fresh = _Fresh(names_in_use | {"u"})
    phi = build_phi(g, "uniform") if mode == "expand-denp" else None

    def den(x, y):
        if phi is None:
            return DenAtom(x, y)
        return _instantiate(phi, {"x": x, "y": y}, fresh)

    def go(node, names):
        if isinstance(node, Exists):
            inner = dict(names)
            bound, guards = [], []
            for v in node.vars:
                z, inv = fresh("z_" + v), fresh("i_" + v)
                inner[v] = z
                bound += [z, inv]
                guards += [IntsAtom(l, Var(z), U), Eq(Mul((Var(z), Var(inv))), Lit(1))]
            return Exists(tuple(bound), conj(*guards, go(node.body, inner)))
        if isinstance(node, And):
            return conj(*(go(a, names) for a in node.args))
        if isinstance(node, Or):
            return disj(*(go(a, names) for a in node.args))
        if isinstance(node, Eq):
            return Eq(_image(node.lhs, U, names), _image(node.rhs, U, names))
        if isinstance(node, Le):
            r = fresh("r")
            return Exists((r,), conj(Eq(Mul((Var(r), _image(node.lhs, U, names))), _image(node.rhs, U, names)),
                                     IntsAtom(l, Var(r), U)))
        if isinstance(node, DivP):
            y, r1, r2 = fresh("y"), fresh("r"), fresh("r")
            ps, pt = _image(node.lhs, U, names), _image(node.rhs, U, names)
            return Exists((y, r1, r2), conj(
                den(Var(y), ps),
                Eq(Mul((Var(r1), pt)), Var(y)),
                IntsAtom(l, Var(r1), U),
                Eq(Mul((Var(r2), Var(y))), pt),
                IntsAtom(l, Var(r2), U),
            ))
        raise TranslationError(f"cannot translate {node!r}")

    body = go(s, {})
    if policy == "quantified-Bl":
        return Exists(("u",), conj(BAtom(l, Var("u")), body))
    return body


def _instantiate(phi, mapping, fresh):
    """Copy phi with its bound variables renamed apart, then substitute its free variables."""
    return rename(_freshen(phi, fresh), mapping)


def _freshen(node, fresh):
    if isinstance(node, (Exists, Forall)):
        new = {v: fresh(v) for v in node.vars}
        body = rename(node.body, {v: Var(n) for v, n in new.items()})
        return type(node)(tuple(new[v] for v in node.vars), _freshen(body, fresh))
    if isinstance(node, (And, Or)):
        return type(node)(tuple(_freshen(a, fresh) for a in node.args))
    if isinstance(node, Not):
        return Not(_freshen(node.arg, fresh))
    return node


def forall_guard(body, l=2, x="x"):
    """Wrap a translated body as: forall x (psi_C(x) or body[u := x / (x^2 + 1)]).

    psi_C(x) is spelled out as exists a, b, c, d ((a, b, c, d) != 0 and
    a^2 - alpha b^2 = x (c^2 - alpha d^2)) with alpha left as the free symbol
    ``alpha``. The result is for display only; the evaluator rejects Forall.
    """
    X = Var(x)
    a, b, c, d = (Var(n) for n in ("a", "b", "c", "d"))
    alpha = Var("alpha")
    nonzero = disj(*(Not(Eq(v, Lit(0))) for v in (a, b, c, d)))
    norm_eq = Eq(Add((Pow(a, 2), Mul((Lit(-1), alpha, Pow(b, 2))))),
                 Mul((X, Add((Pow(c, 2), Mul((Lit(-1), alpha, Pow(d, 2))))))))
    psi = Exists(("a", "b", "c", "d"), conj(nonzero, norm_eq))
    w = Var("w")
    # u := x/(x^2+1) is introduced through an auxiliary w with w (x^2 + 1) = x
    inner = Exists(("w",), conj(Eq(Mul((w, Add((Pow(X, 2), Lit(1))))), X), rename(body, {"u": w})))
    return Forall((x,), disj(psi, inner))
