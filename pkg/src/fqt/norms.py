"""Norms from constant-field extensions F_{q^l}(t)/F_q(t).

Two kinds of degree-l extension of the constant field are supported:
Kummer (adjoin a root of X^l - a, needs l | q - 1) and Artin-Schreier
(adjoin a root of X^p - X - a). Elements of the extension are written in
coordinates (x_0, ..., x_{l-1}) with respect to the power basis of the root.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from .behaved import is_l_behaved
from .funcfield import RationalFunction, cached_factor, principal_divisor
from .galois import Poly, field, is_irreducible, iter_polys, nonsquare_constant
from .power import square_root

KUMMER = "kummer"
ARTIN_SCHREIER = "artin-schreier"


class HypothesisError(ValueError):
    """Raised when an operation is called outside the hypotheses it relies on."""


@dataclass(frozen=True)
class ExtensionSpec:
    F: object  # GF of the base constant field
    kind: str
    a: int  # int encoding in F
    degree: int

    def __post_init__(self):
        F, l = self.F, self.degree
        if self.kind == KUMMER:
            if not isprime(l) or l == F.p:
                raise HypothesisError("Kummer degree must be a prime different from p")
            if (F.q - 1) % l:
                raise HypothesisError(f"F_{F.q} has no primitive {l}-th root of unity")
        elif self.kind == ARTIN_SCHREIER:
            if l != F.p:
                raise HypothesisError("Artin-Schreier extensions have degree p")
        else:
            raise ValueError(f"unknown extension kind {self.kind!r}")
        if not is_irreducible(self.defining_poly):
            raise HypothesisError(f"{self.defining_poly} is reducible over F_{F.q}")

    @property
    def defining_poly(self):
        F = self.F
        if self.kind == KUMMER:
            return Poly.monomial(F, self.degree) - Poly.constant(F, self.a)
        return Poly.monomial(F, F.p) - Poly.t(F) - Poly.constant(F, self.a)

    def describe(self):
        eq = str(self.defining_poly).replace("t", "X")
        return {"kind": self.kind, "degree": self.degree, "a": self.F.format_element(self.a),
                "defining_poly": eq, "field": self.F.spec_string()}


def kummer(F, l, a=None):
    """Kummer data X^l - a; by default a is the least element making it irreducible."""
    if a is None:
        if l == 2 and F.p != 2:
            a = nonsquare_constant(F).value
        else:
            a = next((c for c in range(1, F.q) if _irreducible_kummer(F, l, c)), None)
            if a is None:
                raise HypothesisError(f"X^{l} - a is reducible for every a in {F.spec_string()}")
    return ExtensionSpec(F, KUMMER, a, l)


def _irreducible_kummer(F, l, c):
    try:
        return is_irreducible(Poly.monomial(F, l) - Poly.constant(F, c))
    except ValueError:
        return False


def artin_schreier(F, a=None):
    if a is None:
        a = next(c for c in range(1, F.q)
                 if is_irreducible(Poly.monomial(F, F.p) - Poly.t(F) - Poly.constant(F, c)))
    return ExtensionSpec(F, ARTIN_SCHREIER, a, F.p)


def default_extension(F, l):
    """The extension of degree l used by the norm/behavedness comparison: Artin-Schreier if l = p, else Kummer."""
    if l == F.p:
        return artin_schreier(F)
    return kummer(F, l)


# ---------------------------------------------------------------------------
# norm forms
# ---------------------------------------------------------------------------


def _primitive_root_of_unity(F, l):
    for z in range(2, F.q):
        if F.pow(z, l) == 1 and all(F.pow(z, k) != 1 for k in range(1, l)):
            return z
    raise HypothesisError("no primitive root of unity")  # pragma: no cover


@dataclass(frozen=True)
class NormForm:
    spec: ExtensionSpec
    terms: tuple  # ((exponent tuple, coefficient int), ...) sorted by exponent

    @property
    def total_degree(self):
        return max(sum(e) for e, _ in self.terms)

    def evaluate(self, xs):
        """P at rational-function (or other ring element) coordinates."""
        F = self.spec.F
        acc = None
        for exps, c in self.terms:
            term = RationalFunction.constant(F, c)
            for x, e in zip(xs, exps):
                if e:
                    term = term * x**e
            acc = term if acc is None else acc + term
        return acc

    def evaluate_const(self, xs):
        F = self.spec.F
        acc = 0
        for exps, c in self.terms:
            v = c
            for x, e in zip(xs, exps):
                v = F.mul(v, F.pow(x, e))
            acc = F.add(acc, v)
        return acc

    def __str__(self):
        F = self.spec.F
        parts = []
        for exps, c in self.terms:
            mono = "*".join(f"a{i}" if e == 1 else f"a{i}^{e}" for i, e in enumerate(exps) if e)
            cs = F.format_element(c)
            parts.append(mono if cs == "1" else f"{cs}*{mono}")
        return " + ".join(parts)


def _conjugate_forms(spec):
    """Coordinates (in the alpha power basis) of sigma_j(alpha^i) for each conjugate j."""
    F, l = spec.F, spec.degree
    g = spec.defining_poly
    alpha = Poly.t(F)
    if spec.kind == KUMMER:
        xi = _primitive_root_of_unity(F, l)
        roots = [alpha.scale(F.pow(xi, j)) for j in range(l)]
    else:
        roots = [alpha + Poly.constant(F, F.from_int(j)) for j in range(l)]
    return [[(r**i) % g for i in range(l)] for r in roots]


@functools.lru_cache(maxsize=None)
def build_norm_form(spec):
    """Expand prod_j (sum_i a_i sigma_j(alpha)^i) as a polynomial in a_0..a_{l-1}."""
    F, l = spec.F, spec.degree
    g = spec.defining_poly
    one = Poly.constant(F, 1)
    product = {(0,) * l: one}
    for basis in _conjugate_forms(spec):
        nxt = {}
        for exps, coeff in product.items():
            for i, b in enumerate(basis):
                if b.is_zero():
                    continue
                e = list(exps)
                e[i] += 1
                e = tuple(e)
                val = (coeff * b) % g
                nxt[e] = (nxt[e] + val) % g if e in nxt else val
        product = nxt
    terms = []
    for exps, coeff in sorted(product.items(), reverse=True):
        if coeff.is_zero():
            continue
        if coeff.deg > 0:
            raise AssertionError("norm form has a coefficient outside the base field")
        terms.append((exps, coeff.c[0]))
    return NormForm(spec, tuple(terms))


def norm_of(xs, spec):
    if len(xs) != spec.degree:
        raise ValueError(f"expected {spec.degree} coordinates")
    return build_norm_form(spec).evaluate(xs)


def ext_mul(xs, ys, spec):
    """Multiply two elements given by coordinates, reducing alpha^l by the defining polynomial."""
    F, l = spec.F, spec.degree
    zero = RationalFunction.constant(F, 0)
    prod = [zero] * (2 * l - 1)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            prod[i + j] = prod[i + j] + x * y
    g = spec.defining_poly.c  # monic, length l + 1
    for k in range(2 * l - 2, l - 1, -1):
        top = prod[k]
        if top.is_zero():
            continue
        prod[k] = zero
        # alpha^k = alpha^(k-l) * alpha^l = -alpha^(k-l) * sum_{i<l} g_i alpha^i
        for i in range(l):
            if g[i]:
                prod[k - l + i] = prod[k - l + i] - top * g[i]
    return prod[:l]


# ---------------------------------------------------------------------------
# the norm decision
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormDecision:
    u: RationalFunction
    spec: ExtensionSpec
    value: bool
    trace: tuple  # ({"place", "degree", "v", "status", "ok"}, ...)

    def to_dict(self):
        return {"u": str(self.u), "extension": self.spec.describe(), "is_norm": self.value,
                "trace": list(self.trace)}


def norm_decision(u, spec):
    """Local rule: at every place whose degree is prime to l the valuation must be divisible by l."""
    if u.is_zero():
        raise ValueError("is_norm needs u != 0")
    l = spec.degree
    rows = []
    for P, v in principal_divisor(u):
        inert = P.degree % l != 0
        ok = (v % l == 0) if inert else True
        rows.append({"place": str(P), "degree": P.degree, "v": v,
                     "status": "inert" if inert else "split", "ok": ok})
    if u.is_constant():
        rows.append({"place": "constant", "degree": 0, "v": 0, "status": "unit", "ok": True})
    return NormDecision(u, spec, all(r["ok"] for r in rows), tuple(rows))


def is_norm(u, spec):
    return norm_decision(u, spec).value


# ---------------------------------------------------------------------------
# witness search
# ---------------------------------------------------------------------------


def _poly_coeff_table(F, bound, width):
    """Coefficient rows (length ``width``) of every polynomial of degree <= bound, in key order."""
    q = F.q
    n = q ** (bound + 1)
    idx = np.arange(n, dtype=np.int64)
    table = np.zeros((n, width), dtype=np.int64)
    for i in range(bound + 1):
        table[:, i] = (idx // q**i) % q
    return table


@functools.lru_cache(maxsize=8)
def _kummer2_table(p, a, bound):
    """For X0^2 - a X1^2 over F_p with deg X_i <= bound: map value key -> least pair index X1*N + X0."""
    F = field(p)
    N = p ** (bound + 1)
    width = 2 * bound + 1
    coeffs = _poly_coeff_table(F, bound, bound + 1)
    # squares of all polynomials, as coefficient rows
    sq = np.zeros((N, width), dtype=np.int64)
    for i in range(bound + 1):
        for j in range(bound + 1):
            sq[:, i + j] += coeffs[:, i] * coeffs[:, j]
    sq %= p
    weights = np.array([p**i for i in range(width)], dtype=np.int64)
    best = np.full(p**width, -1, dtype=np.int64)
    neg_a_sq = (-a * sq) % p
    chunk = max(1, 2_000_000 // N)
    # rows are X1 (most significant), columns X0
    for start in range(0, N, chunk):
        stop = min(N, start + chunk)
        vals = (neg_a_sq[start:stop, None, :] + sq[None, :, :]) % p
        keys = (vals @ weights).ravel()
        uniq, first = np.unique(keys, return_index=True)
        pair = first + start * N
        fresh = best[uniq] < 0
        best[uniq[fresh]] = pair[fresh]
    return best


def _monic_upto(F, bound):
    for e in range(bound + 1):
        for k in range(F.q**e, 2 * F.q**e):
            yield Poly.from_key(F, k)


def norm_witness_search(u, spec, degree_bound, max_candidates=5_000_000):
    """First x = (X_0, ..., X_{l-1})/D with norm u, deg X_i <= bound, D monic, deg D <= bound.

    Denominators are tried in key order; for each D the coordinate tuples in
    lexicographic key order with the last coordinate most significant. Returns a tuple of RationalFunction or None (which
    only means "nothing within the bound").
    """
    raw = search_norm_numerators(u, spec, degree_bound, max_candidates)
    if raw is None:
        return None
    xs, D = raw
    return tuple(RationalFunction(X, D) for X in xs)


def search_norm_numerators(u, spec, degree_bound, max_candidates=5_000_000):
    """Like norm_witness_search but returns ((X_0, ..., X_{l-1}), D) with the common denominator kept."""
    F, l = spec.F, spec.degree
    if u.is_zero():
        return tuple(Poly(F) for _ in range(l)), Poly.constant(F, 1)
    use_table = spec.kind == KUMMER and l == 2 and F.n == 1
    table = _kummer2_table(F.p, spec.a, degree_bound) if use_table else None
    N = F.q ** (degree_bound + 1)
    form = build_norm_form(spec)
    for D in _monic_upto(F, degree_bound):
        T = u * RationalFunction(D**l)
        if not T.is_polynomial():
            continue
        T = T.num
        if T.deg % l or T.deg // l > degree_bound:
            continue
        if table is not None:
            pair = table[T.key] if T.key < len(table) else -1
            if pair < 0:
                continue
            xs = (Poly.from_key(F, int(pair) % N), Poly.from_key(F, int(pair) // N))
        else:
            xs = _generic_search(form, T, F, l, T.deg // l, max_candidates)
            if xs is None:
                continue
        if norm_of(tuple(RationalFunction(X, D) for X in xs), spec) != u:
            raise AssertionError("witness search produced a wrong witness")
        return xs, D
    return None


def _generic_search(form, T, F, l, deg, max_candidates):
    polys = list(iter_polys(F, deg))
    if len(polys) ** l > max_candidates:
        raise ValueError("witness search space too large; lower the degree bound")
    target = RationalFunction(T)
    for rev in itertools.product(polys, repeat=l):
        xs = rev[::-1]
        if form.evaluate([RationalFunction(x) for x in xs]) == target:
            return xs
    return None


# ---------------------------------------------------------------------------
# comparison with behavedness
# ---------------------------------------------------------------------------


def check_extension_hypothesis(F, l):
    if not (l == F.p or (F.p - 1) % l == 0):
        raise HypothesisError(f"need l | p - 1 or l = p (got p={F.p}, l={l})")


def behaved_norm_check(u, l, spec=None):
    """Compare "u is not l-behaved" with "u is a norm"; they should be complementary opposites.

    Returns a dict with both verdicts and a per-place valuation trace.
    """
    if isinstance(u, Poly):
        u = RationalFunction(u)
    F = u.F
    check_extension_hypothesis(F, l)
    spec = spec or default_extension(F, l)
    if spec.degree != l:
        raise HypothesisError("extension degree differs from l")
    behaved = is_l_behaved(u, l)
    norm = norm_decision(u, spec)
    reason = {str(P): r for P, _, r in behaved.excluded}
    for P, _ in behaved.witnesses:
        reason[str(P)] = "witness"
    trace = []
    for row in norm.trace:
        r = dict(row)
        r["behaved_role"] = reason.get(row["place"], "not_a_zero")
        trace.append(r)
    return {
        "u": str(u),
        "l": l,
        "extension": spec.describe(),
        "is_behaved": behaved.is_behaved,
        "is_norm": norm.value,
        "consistent": behaved.is_behaved != norm.value,
        "trace": trace,
    }


# ---------------------------------------------------------------------------
# sums of two squares and psi_C
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoSquares:
    f: Poly
    value: bool
    witness: tuple | None  # (a, b) with a^2 + b^2 = f
    rule: tuple  # per-factor rows

    def to_dict(self):
        return {"f": str(self.f), "decision": self.value,
                "witness": None if self.witness is None else [str(w) for w in self.witness],
                "rule": list(self.rule)}


def _two_squares_const(F, c):
    r = F.sqrt(c)
    if r is not None:
        return Poly.constant(F, r), Poly(F)
    for x in range(F.q):
        r = F.sub(c, F.mul(x, x))
        y = F.sqrt(r)
        if y is not None:
            return Poly.constant(F, x), Poly.constant(F, y)
    raise AssertionError("every element of a finite field is a sum of two squares")  # pragma: no cover


def _two_squares_irreducible(P):
    F = P.F
    half = P.deg // 2
    for b in iter_polys(F, half):
        r = square_root(RationalFunction(P - b * b))
        if r is not None and r.is_polynomial() and r.num.deg <= half:
            return r.num, b
    raise AssertionError(f"no two-square representation of {P} found")


def _compose(x, y):
    (a, b), (c, d) = x, y
    return a * c - b * d, a * d + b * c


def two_squares(f):
    """Decide f = a^2 + b^2 over F_q[t] for q = p^n, p = 3 mod 4, n odd; witness by composition."""
    F = f.F
    if F.p % 4 != 3 or F.n % 2 == 0:
        raise HypothesisError("needs p = 3 mod 4 and an odd extension degree")
    if f.is_zero():
        return TwoSquares(f, True, (f, f), ())
    fac = cached_factor(f)
    rows = []
    ok = True
    for P, m in fac.factors:
        need_even = P.deg % 2 == 1
        good = not need_even or m % 2 == 0
        rows.append({"factor": str(P), "degree": P.deg, "mult": m, "odd_degree": need_even, "ok": good})
        ok = ok and good
    if not ok:
        return TwoSquares(f, False, None, tuple(rows))
    acc = _two_squares_const(F, fac.unit.value)
    for P, m in fac.factors:
        if P.deg % 2:
            acc = _compose(acc, (P ** (m // 2), Poly(F)))
            # P^m = (P^(m/2))^2 + 0^2
            continue
        rep = _two_squares_irreducible(P)
        for _ in range(m):
            acc = _compose(acc, rep)
    a, b = acc
    if a * a + b * b != f:
        raise AssertionError("two-squares composition failed")
    return TwoSquares(f, True, (a, b), tuple(rows))


@dataclass(frozen=True)
class PsiC:
    u: RationalFunction
    alpha: int
    value: bool
    witness: tuple | None  # (a, b, c, d)
    trace: tuple

    def to_dict(self):
        return {"u": str(self.u), "alpha": self.alpha, "decision": self.value,
                "witness": None if self.witness is None else [str(w) for w in self.witness],
                "trace": list(self.trace)}


def psi_c(u, witness_bound=None):
    """Is there (a,b,c,d) != 0 with a^2 - alpha b^2 = u (c^2 - alpha d^2), alpha the least nonsquare?"""
    F = u.F
    alpha = nonsquare_constant(F).value
    spec = kummer(F, 2, alpha)
    zero = RationalFunction.constant(F, 0)
    one = RationalFunction.constant(F, 1)
    if u.is_zero():
        return PsiC(u, alpha, True, (zero, zero, one, zero), ())
    dec = norm_decision(u, spec)
    witness = None
    if dec.value and witness_bound is not None:
        raw = search_norm_numerators(u, spec, witness_bound)
        if raw is not None:
            (X0, X1), D = raw
            witness = (RationalFunction(X0), RationalFunction(X1), RationalFunction(D), zero)
    return PsiC(u, alpha, dec.value, witness, dec.trace)
