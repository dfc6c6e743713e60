"""p-power towers (the Denef relation), squares in F_q(t), and the square-test criterion for p-powers."""

from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import isprime, primerange

from .funcfield import RationalFunction, evaluate_poly_at
from .galois import Poly, count_monic_irreducibles, enumerate_monic_irreducibles, field, squarefree_decomposition
from .logic.ast import And, CharLit, Eq, Exists, FAtom, Lit, Mul, Not, Or, Pow, Var, add, conj, disj, mul


# ---------------------------------------------------------------------------
# ground truth
# ---------------------------------------------------------------------------


def _frob_pow(w, s):
    for _ in range(s):
        w = w.frobenius()
    return w


def _pth_root_rf(w):
    if not (w.num.is_pth_power() and w.den.is_pth_power()):
        return None
    return RationalFunction._raw(w.num.pth_root(), w.den.pth_root())


def den_p(f, h):
    """Return s with f = h^(p^s), or None.

    For nonconstant h the exponent is unique. For constants in F_{p^n} the
    least such s in range(n) is returned.
    """
    if f.is_zero() or h.is_zero():
        raise ValueError("den_p needs nonzero arguments")
    F = f.F
    if f.is_constant() or h.is_constant():
        if not (f.is_constant() and h.is_constant()):
            return None
        a, b = f.constant_value(), h.constant_value()
        for s in range(F.n):
            if F.pow(b, F.p**s) == a:
                return s
        return None
    hf, hh = f.height, h.height
    p = F.p
    if hf >= hh:
        ratio, r = divmod(hf, hh)
        if r:
            return None
        s = _log_exact(ratio, p)
        if s is None:
            return None
        return s if _frob_pow(h, s) == f else None
    ratio, r = divmod(hh, hf)
    if r:
        return None
    s = _log_exact(ratio, p)
    if s is None:
        return None
    # f = h^(p^-s): go down the tower by taking exact p-th roots of h
    cur = h
    for _ in range(s):
        cur = _pth_root_rf(cur)
        if cur is None:
            return None
    return -s if cur == f else None


def _log_exact(n, p):
    s = 0
    while n % p == 0:
        n //= p
        s += 1
    return s if n == 1 else None


# ---------------------------------------------------------------------------
# squares
# ---------------------------------------------------------------------------


def _square_part(f):
    """For a nonzero polynomial, return (root, ok): ok iff f/lc(f) is a square, root its monic sqrt."""
    F = f.F
    root = Poly.constant(F, 1)
    for g, m in squarefree_decomposition(f):
        if m % 2:
            return None, False
        root = root * g ** (m // 2)
    return root, True


def square_root(w):
    """A z with z^2 = w, or None."""
    if w.is_zero():
        return w
    F = w.F
    rn, ok = _square_part(w.num)
    if not ok:
        return None
    rd, ok = _square_part(w.den)
    if not ok:
        return None
    c = F.sqrt(w.num.lc)
    if c is None:
        return None
    return RationalFunction(rn.scale(c), rd)


def is_square(w):
    return square_root(w) is not None


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


def m_of(g, d, p):
    """ceil((4g + 12 + 8 * sum_{i=1}^{ceil((d-1)/2)} p^i) / d)."""
    top = -(-(d - 1) // 2)
    total = 4 * g + 12 + 8 * sum(p**i for i in range(1, top + 1))
    return -(-total // d)


def footnote_bound_ok(g, d, p):
    """Exact test of d >= 2 log(12 + sqrt(8g + 168)) / log p, i.e. p^d >= (12 + sqrt(8g+168))^2."""
    r = 8 * g + 168
    lhs = p**d - 144 - r  # p^d - (144 + r) >= 24 sqrt(r)
    return lhs >= 0 and lhs * lhs >= 576 * r


def footnote_bound(g, p):
    return 2 * math.log(12 + math.sqrt(8 * g + 168)) / math.log(p)


@dataclass(frozen=True)
class PastenParams:
    g: int
    p: int
    d: int
    M: int
    F_list: tuple  # monic irreducible Poly over F_p, all of degree d

    def to_dict(self):
        return {"g": self.g, "p": self.p, "d": self.d, "M": self.M,
                "F_list": [str(f).replace("t", "X") for f in self.F_list]}


def choose_params(g, p):
    if g < 0:
        raise ValueError("genus must be >= 0")
    if p == 2 or not isprime(p):
        raise ValueError("p must be an odd prime")
    Fp = field(p)
    if p > 4 * g + 12:
        M = 4 * g + 12
        X = Poly.t(Fp)
        return PastenParams(g, p, 1, M, tuple(X - i for i in range(1, M + 1)))
    d = 1
    while not (footnote_bound_ok(g, d, p) and count_monic_irreducibles(p, d) > m_of(g, d, p)):
        d += 1
    M = m_of(g, d, p)
    F_list = []
    for f in enumerate_monic_irreducibles(Fp, d):
        F_list.append(f)
        if len(F_list) == M:
            break
    return PastenParams(g, p, d, M, tuple(F_list))


def pasten_criterion(f, h, params, detail=False):
    """True iff F_i(f) F_i(h) is a square for every F_i in params.F_list."""
    if f.is_constant() or h.is_constant():
        raise ValueError("the criterion applies to nonconstant f, h")
    if f.F.p != params.p:
        raise ValueError("characteristic does not match params.p")
    F = f.F
    failures = []
    for i, Fi in enumerate(params.F_list, start=1):
        lifted = Poly(F, Fi.c)  # prime-field encodings are shared by every F_{p^n}
        prod = evaluate_poly_at(lifted, f) * evaluate_poly_at(lifted, h)
        if not is_square(prod):
            if not detail:
                return False
            failures.append(i)
    return (not failures, failures) if detail else True


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


def _lift_term(Fi, x):
    """The term sum c_j x^j with integer literal coefficients; X - i becomes x + (-i)."""
    if Fi.deg == 1:
        return add(x, Lit(-((-Fi.c[0]) % Fi.F.p)))
    parts = []
    for j in range(len(Fi.c) - 1, -1, -1):
        c = Fi.c[j]
        if not c:
            continue
        if j == 0:
            parts.append(Lit(c))
            continue
        mono = x if j == 1 else Pow(x, j)
        parts.append(mono if c == 1 else mul(Lit(c), mono))
    return add(*parts)


def _square_conjunction(F_list, x, y, zname):
    z = Var(zname)
    return And(tuple(Exists((zname,), Eq(Mul((_lift_term(Fi, x), _lift_term(Fi, y))), Pow(z, 2)))
                     for Fi in F_list))


def phi_gp(g, p, x=Var("x"), y=Var("y"), zname="z"):
    """The conjunction over i of: exists z (F_i(x) F_i(y) = z^2)."""
    return _square_conjunction(choose_params(g, p).F_list, x, y, zname)


def phi_large(g, x=Var("x"), y=Var("y"), zname="z"):
    """phi_{g,p} for any p > 4g+12: the F_i are X - i, i = 1..4g+12, so the formula does not depend on p."""
    z = Var(zname)
    return And(tuple(Exists((zname,), Eq(Mul((add(x, Lit(-i)), add(y, Lit(-i)))), Pow(z, 2)))
                     for i in range(1, 4 * g + 13)))


def _small_primes(g):
    return list(primerange(2, 4 * g + 13))


def chi_g(g, x=Var("x"), y=Var("y")):
    """[phi_g and all p != 0 for p <= 4g+12] or [some odd p <= 4g+12 with p = 0 and phi_{g,p}]."""
    guard = [CharLit(q, False) for q in _small_primes(g)]
    first = conj(phi_large(g, x, y), *guard)
    # phi_{g,p} with p <= 4g+12 is only defined for odd p
    cases = [conj(CharLit(q, True), phi_gp(g, q, x, y)) for q in _small_primes(g) if q != 2]
    return disj(first, *cases) if cases else first


def build_phi(g, p):
    """phi_{g,p}(x, y) for a fixed odd prime p, or the uniform phi_g(x, y) for p == "uniform"."""
    if p != "uniform":
        return phi_gp(g, p)
    x, y, u, v = Var("x"), Var("y"), Var("u"), Var("v")
    nonconst = conj(FAtom(x), FAtom(y), chi_g(g, x, y))
    const_case = conj(
        Not(FAtom(x)),
        Not(FAtom(y)),
        Exists(("u", "v"), conj(FAtom(u), FAtom(v), chi_g(g, u, v), chi_g(g, Mul((u, x)), Mul((v, y))))),
    )
    return Or((nonconst, const_case))


__all__ = [
    "PastenParams", "build_phi", "chi_g", "choose_params", "den_p", "footnote_bound", "footnote_bound_ok",
    "is_square", "m_of", "pasten_criterion", "phi_gp", "phi_large", "square_root",
]
