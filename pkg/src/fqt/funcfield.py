"""The rational function field F_q(t): fractions, places, valuations, divisors, Mobius maps."""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass

from .galois import GF, FqElement, Poly, _ExprParser, factor, format_poly, gcd, is_irreducible, parse_poly


class InfiniteValuation(ValueError):
    """Raised when asking for the valuation of zero, which is +infinity."""


@functools.lru_cache(maxsize=1 << 16)
def cached_factor(f):
    return factor(f)


class RationalFunction:
    """A reduced fraction num/den with den monic; zero is 0/1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RationalFunction) and den is None:
            self.num, self.den = num.num, num.den
            return
        if den is None:
            den = Poly.constant(num.F, 1)
        if den.F is not num.F:
            raise ValueError("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.constant(num.F, 1)
            return
        g = gcd(num, den)
        if g.deg > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        inv = num.F.inv(den.lc)
        self.num, self.den = num.scale(inv), den.scale(inv)

    @classmethod
    def _raw(cls, num, den):
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def constant(cls, F, a):
        return cls._raw(Poly.constant(F, a), Poly.constant(F, 1))

    @classmethod
    def t(cls, F):
        return cls._raw(Poly.t(F), Poly.constant(F, 1))

    @property
    def F(self) -> GF:
        return self.num.F

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.deg < 1 and self.den.deg < 1

    def is_polynomial(self):
        return self.den.deg == 0

    @property
    def height(self):
        """max(deg num, deg den); 0 for constants including zero."""
        return max(self.num.deg, self.den.deg, 0)

    @property
    def key(self):
        return (self.height, self.num.key, self.den.key)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.lc

    def __eq__(self, o):
        if isinstance(o, RationalFunction):
            return self.num == o.num and self.den == o.den
        if isinstance(o, (Poly, int, FqElement)):
            return self == self._coerce(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({format_rf(self)!r}, {self.F.spec_string()})"

    def __str__(self):
        return format_rf(self)

    def __reduce__(self):
        return (RationalFunction._raw, (self.num, self.den))

    def _coerce(self, o):
        if isinstance(o, RationalFunction):
            if o.F is not self.F:
                raise ValueError("rational functions over different fields")
            return o
        if isinstance(o, Poly):
            return RationalFunction._raw(o, Poly.constant(o.F, 1))
        if isinstance(o, FqElement):
            return RationalFunction.constant(self.F, o.value)
        if isinstance(o, int):
            return RationalFunction.constant(self.F, self.F.from_int(o))
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return RationalFunction.constant(self.F, 0)
        # cross-cancel first so the products stay reduced
        g1, g2 = gcd(self.num, o.den), gcd(o.num, self.den)
        num = self.num.exact_div(g1) * o.num.exact_div(g2)
        den = self.den.exact_div(g2) * o.den.exact_div(g1)
        return RationalFunction(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction._raw(self.num**e, self.den**e)

    def frobenius(self):
        return RationalFunction._raw(self.num.frobenius(), self.den.frobenius())


def rf_normalize(num, den):
    return RationalFunction(num, den)


def format_rf(w, var="t"):
    num = format_poly(w.num, var)
    if w.den.deg == 0:
        return num
    den = format_poly(w.den, var)
    if len(w.num.c) > 1 and sum(1 for v in w.num.c if v) > 1:
        num = f"({num})"
    if sum(1 for v in w.den.c if v) > 1 or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"


def parse_rf(text, F, var="t"):
    """Parse e.g. ``"t^6/(t^6+2)"``; a bare polynomial is accepted."""
    names = {var: RationalFunction.t(F)}
    if F.n > 1:
        names["x"] = RationalFunction.constant(F, F.p)
    return _ExprParser(text, lambda k: RationalFunction.constant(F, F.from_int(k)), names, True).parse()


def as_rf(F, value):
    """Coerce a string, Poly, int or RationalFunction to a RationalFunction over F."""
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, str):
        return parse_rf(value, F)
    if isinstance(value, Poly):
        return RationalFunction(value)
    if isinstance(value, int):
        return RationalFunction.constant(F, F.from_int(value))
    raise TypeError(f"cannot interpret {value!r} as a rational function")


# ---------------------------------------------------------------------------
# places and divisors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A finite place (monic irreducible ``poly``) or the infinite place (``poly is None``)."""

    poly: Poly | None = None

    @property
    def is_infinite(self):
        return self.poly is None

    @property
    def degree(self):
        return 1 if self.poly is None else self.poly.deg

    @property
    def sort_key(self):
        if self.poly is None:
            return (1, 0, 0)
        return (0, self.poly.deg, self.poly.key)

    def __lt__(self, o):
        return self.sort_key < o.sort_key

    def __str__(self):
        return "INF" if self.poly is None else format_poly(self.poly)


INF = Place(None)


def finite_place(pi):
    if pi.deg < 1 or not pi.is_monic() or not is_irreducible(pi):
        raise ValueError("a finite place needs a monic irreducible polynomial")
    return Place(pi)


def parse_place(text, F):
    if text.strip().upper() == "INF":
        return INF
    return finite_place(parse_poly(text, F))


def _poly_mult(f, pi):
    m = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return m
        f, m = q, m + 1


def valuation(w, P):
    if w.is_zero():
        raise InfiniteValuation("the valuation of 0 is +infinity")
    if P.poly is None:
        return w.den.deg - w.num.deg
    return _poly_mult(w.num, P.poly) - _poly_mult(w.den, P.poly)


class Divisor:
    """Finite formal sum of places; zero multiplicities are dropped."""

    __slots__ = ("items",)

    def __init__(self, mults=()):
        acc = {}
        pairs = mults.items() if isinstance(mults, dict) else mults
        for P, m in pairs:
            acc[P] = acc.get(P, 0) + m
        self.items = tuple(sorted(((P, m) for P, m in acc.items() if m), key=lambda pm: pm[0].sort_key))

    def __eq__(self, o):
        return isinstance(o, Divisor) and self.items == o.items

    def __hash__(self):
        return hash(self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __bool__(self):
        return bool(self.items)

    def __getitem__(self, P):
        for Q, m in self.items:
            if Q == P:
                return m
        return 0

    def __add__(self, o):
        return Divisor(list(self.items) + list(o.items))

    def __neg__(self):
        return Divisor([(P, -m) for P, m in self.items])

    def __sub__(self, o):
        return self + (-o)

    @property
    def degree(self):
        return sum(P.degree * m for P, m in self.items)

    @property
    def support(self):
        return [P for P, _ in self.items]

    def to_list(self):
        return [{"place": str(P), "mult": m} for P, m in self.items]

    def to_json(self):
        return json.dumps(self.to_list())

    def __repr__(self):
        body = ", ".join(f"{P}: {m}" for P, m in self.items)
        return "{" + body + "}"


def principal_divisor(w):
    """div(w) over all places, infinity included."""
    if w.is_zero():
        raise InfiniteValuation("zero has no divisor")
    mults = {}
    for f, sign in ((w.num, 1), (w.den, -1)):
        if f.deg >= 1:
            for pi, m in cached_factor(f).factors:
                mults[Place(pi)] = mults.get(Place(pi), 0) + sign * m
    mults[INF] = w.den.deg - w.num.deg
    return Divisor(mults)


def zero_divisor(u):
    return Divisor([(P, m) for P, m in principal_divisor(u) if m > 0])


def pole_divisor(u):
    return Divisor([(P, -m) for P, m in principal_divisor(u) if m < 0])


def field_index(u):
    """[F_q(t) : F_q(u)] = max(deg num, deg den)."""
    if u.is_constant():
        raise ValueError("field index is undefined for constants")
    return u.height


# ---------------------------------------------------------------------------
# Mobius maps and substitution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b)/(c x + d) with entries given as int encodings in F."""

    F: GF
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("Mobius map with zero determinant")

    @property
    def det(self):
        F = self.F
        return F.sub(F.mul(self.a, self.d), F.mul(self.b, self.c))

    @classmethod
    def identity(cls, F):
        return cls(F, 1, 0, 0, 1)

    def compose(self, other):
        """The map x -> self(other(x)), i.e. the matrix product self * other."""
        F = self.F
        ad, mu = F.add, F.mul
        return MobiusMap(
            F,
            ad(mu(self.a, other.a), mu(self.b, other.c)),
            ad(mu(self.a, other.b), mu(self.b, other.d)),
            ad(mu(self.c, other.a), mu(self.d, other.c)),
            ad(mu(self.c, other.b), mu(self.d, other.d)),
        )

    def inverse(self):
        F = self.F
        return MobiusMap(F, self.d, F.neg(self.b), F.neg(self.c), self.a)

    def as_function(self):
        return apply_mobius(self, RationalFunction.t(self.F))

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)


def apply_mobius(m, u):
    F = u.F
    den = u * m.c + RationalFunction.constant(F, m.d)
    if den.is_zero():
        raise ZeroDivisionError("c*u + d vanishes")
    return (u * m.a + RationalFunction.constant(F, m.b)) / den


def _homogenize(f, A, B, k):
    """sum_i f_i A^i B^(k-i)."""
    F = f.F
    acc = Poly(F)
    powA = [Poly.constant(F, 1)]
    for _ in range(len(f.c)):
        powA.append(powA[-1] * A)
    for i, v in enumerate(f.c):
        if v:
            acc = acc + (powA[i] * B ** (k - i)).scale(v)
    return acc


def substitute(u, s):
    """u(s) as a reduced fraction; s must be nonconstant."""
    if s.is_constant():
        raise ValueError("substitution needs a nonconstant inner function")
    k = max(u.num.deg, u.den.deg, 0)
    A, B = s.num, s.den
    return RationalFunction(_homogenize(u.num, A, B, k), _homogenize(u.den, A, B, k))


def evaluate_poly_at(f, s):
    """f(s) for a polynomial f and rational function s."""
    k = max(f.deg, 0)
    return RationalFunction(_homogenize(f, s.num, s.den, k), s.den**k)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def enumerate_rational_functions(F, height, min_height=0):
    """All reduced fractions with max(deg num, deg den) <= height.

    Order: by height, then numerator key, then denominator key. Zero comes first.
    """
    q = F.q
    one = Poly.constant(F, 1)
    for h in range(min_height, height + 1):
        # monic polynomials of degree e have keys q^e .. 2q^e - 1
        dens = [Poly.from_key(F, k) for e in range(h + 1) for k in range(q**e, 2 * q**e)]
        for nk in range(q ** (h + 1)):
            num = Poly.from_key(F, nk)
            if num.is_zero():
                if h == 0:
                    yield RationalFunction._raw(num, one)
                continue
            top = num.deg == h
            for den in dens:
                if not top and den.deg != h:
                    continue
                if den.deg > 0 and num.deg > 0 and gcd(num, den).deg > 0:
                    continue
                yield RationalFunction._raw(num, den)
