"""Finite fields F_{p^n} and dense univariate polynomials over them.

Field elements are stored as plain ints in ``range(q)``: the base-``p`` digits
of an int are the coordinates of the element in the power basis of a root
``x`` of the field modulus (lowest digit = constant coordinate). For ``n = 1``
this is simply the residue mod ``p``.

Polynomials are immutable and keep their coefficients as a tuple of such ints,
lowest degree first, with no trailing zeros. The zero polynomial has degree
``NEG_INF``.
"""

from __future__ import annotations

import functools
import math
import random
import re
from dataclasses import dataclass

from sympy import divisors, isprime, primefactors
from sympy.functions.combinatorial.numbers import mobius

NEG_INF = -math.inf  # degree of the zero polynomial


class GF:
    """The field F_{p^n} realised as F_p[x]/(modulus).

    Use :func:`field` to obtain instances; they are cached so that two
    requests for the same ``(p, n)`` return the same object.
    """

    __slots__ = ("p", "n", "q", "modulus", "_exp", "_log", "_digits", "_sqrt_z")

    def __init__(self, p, n=1):
        if not isprime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.n = n
        self.q = p**n
        self._exp = self._log = self._digits = None
        self._sqrt_z = None
        if n == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = _least_irreducible(p, n)
            self._build_tables()

    def __reduce__(self):
        return (field, (self.p, self.n))

    def __repr__(self):
        return f"GF({self.spec_string()})"

    def spec_string(self):
        return str(self.p) if self.n == 1 else f"{self.p}^{self.n}"

    # -- tables for F_{p^n}, n > 1 ------------------------------------------

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        self._digits = [tuple((e // p**i) % p for i in range(n)) for e in range(q)]
        mod = self.modulus

        def times_x(d):
            # multiply coordinate vector by x and reduce by the monic modulus
            top = d[-1]
            shifted = (0,) + d[:-1]
            return tuple((shifted[i] - top * mod[i]) % p for i in range(n))

        def enc(d):
            return sum(c * p**i for i, c in enumerate(d))

        def mul_slow(a, b):
            da, db = self._digits[a], self._digits[b]
            acc = [0] * n
            cur = da
            for coeff in db:
                if coeff:
                    acc = [(acc[i] + coeff * cur[i]) % p for i in range(n)]
                cur = times_x(cur)
            return enc(acc)

        order = q - 1
        pf = primefactors(order)
        for g in range(2, q):
            if any(_pow_slow(mul_slow, g, order // r) == 1 for r in pf):
                continue
            exp = [1] * (2 * order)
            for i in range(1, 2 * order):
                exp[i] = mul_slow(exp[i - 1], g)
            log = [0] * q
            for i in range(order):
                log[exp[i]] = i
            self._exp, self._log = exp, log
            return
        raise AssertionError("no primitive element found")  # pragma: no cover

    # -- element arithmetic on int encodings ---------------------------------

    def add(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        p, da, db = self.p, self._digits[a], self._digits[b]
        return sum(((x + y) % p) * p**i for i, (x, y) in enumerate(zip(da, db)))

    def neg(self, a):
        if self.n == 1:
            return -a % self.p
        p = self.p
        return sum((-x % p) * p**i for i, x in enumerate(self._digits[a]))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if self.n == 1:
            if e < 0:
                a, e = self.inv(a), -e
            return pow(a, e, self.p)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero in a finite field")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, k):
        """Image of the integer ``k`` in the prime subfield."""
        return k % self.p

    def elements(self):
        return range(self.q)

    def is_square(self, a):
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a):
        """A square root of ``a`` (Tonelli-Shanks), or None if there is none."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if not self.is_square(a):
            return None
        s, m = 0, self.q - 1
        while m % 2 == 0:
            s, m = s + 1, m // 2
        if self._sqrt_z is None:
            self._sqrt_z = next(z for z in range(2, self.q) if not self.is_square(z))
        c = self.pow(self._sqrt_z, m)
        x = self.pow(a, (m + 1) // 2)
        b = self.pow(a, m)
        while b != 1:
            i, b2 = 0, b
            while b2 != 1:
                b2 = self.mul(b2, b2)
                i += 1
            for _ in range(s - i - 1):
                c = self.mul(c, c)
            x = self.mul(x, c)
            c = self.mul(c, c)
            b = self.mul(b, c)
            s = i
        return min(x, self.neg(x))

    def pth_root(self, a):
        """Inverse of the Frobenius a -> a^p."""
        return self.pow(a, self.p ** (self.n - 1))

    def kth_roots(self, a, k):
        return [y for y in range(self.q) if self.pow(y, k) == a]

    def format_element(self, a):
        if self.n == 1:
            return str(a)
        d = self._digits[a]
        terms = []
        for i in range(self.n - 1, -1, -1):
            c = d[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def element(self, value):
        return FqElement(self, value)


def _pow_slow(mul, a, e):
    r = 1
    while e:
        if e & 1:
            r = mul(r, a)
        a = mul(a, a)
        e >>= 1
    return r


@functools.lru_cache(maxsize=None)
def field(p, n=1):
    """The cached field F_{p^n}."""
    return GF(p, n)


def parse_field_spec(text):
    """Parse ``"p"`` or ``"p^n"``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"bad field spec {text!r}")
    return field(int(m.group(1)), int(m.group(2) or 1))


def _least_irreducible(p, n):
    F = field(p)
    for body in range(p**n):
        coeffs = tuple((body // p**i) % p for i in range(n)) + (1,)
        if is_irreducible(Poly(F, coeffs)):
            return coeffs
    raise AssertionError("unreachable")  # pragma: no cover


@dataclass(frozen=True)
class FqElement:
    """A field element together with its field; a thin wrapper over the int encoding."""

    F: GF
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.F.q:
            raise ValueError(f"{self.value} is not an element encoding of {self.F!r}")

    @property
    def coeffs(self):
        p = self.F.p
        return tuple((self.value // p**i) % p for i in range(self.F.n))

    def _other(self, o):
        if isinstance(o, FqElement):
            if o.F is not self.F:
                raise ValueError("elements of different fields")
            return o.value
        if isinstance(o, int):
            return self.F.from_int(o)
        return NotImplemented

    def __add__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FqElement(self.F, self.F.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FqElement(self.F, self.F.sub(self.value, v))

    def __rsub__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FqElement(self.F, self.F.sub(v, self.value))

    def __mul__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FqElement(self.F, self.F.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FqElement(self.F, self.F.div(self.value, v))

    def __neg__(self):
        return FqElement(self.F, self.F.neg(self.value))

    def __pow__(self, e):
        return FqElement(self.F, self.F.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.F.format_element(self.value)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def _trim(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


class Poly:
    """Dense univariate polynomial over a :class:`GF`, immutable."""

    __slots__ = ("F", "c")

    def __init__(self, F, coeffs=()):
        self.F = F
        if F.n == 1:
            self.c = _trim([int(v) % F.p for v in coeffs])
        else:
            vals = [v.value if isinstance(v, FqElement) else int(v) for v in coeffs]
            if any(not 0 <= v < F.q for v in vals):
                raise ValueError("coefficient is not an element encoding")
            self.c = _trim(vals)

    @classmethod
    def _raw(cls, F, c):
        obj = cls.__new__(cls)
        obj.F = F
        obj.c = c
        return obj

    @classmethod
    def constant(cls, F, a):
        return cls._raw(F, (a,) if a else ())

    @classmethod
    def monomial(cls, F, k, a=1):
        if not a:
            return cls._raw(F, ())
        return cls._raw(F, (0,) * k + (a,))

    @classmethod
    def t(cls, F):
        return cls._raw(F, (0, 1))

    # -- basic properties ----------------------------------------------------

    @property
    def deg(self):
        return len(self.c) - 1 if self.c else NEG_INF

    @property
    def lc(self):
        return self.c[-1] if self.c else 0

    def is_zero(self):
        return not self.c

    def is_constant(self):
        return len(self.c) <= 1

    def is_monic(self):
        return bool(self.c) and self.c[-1] == 1

    def coeff(self, i):
        """Coefficient of t^i as an :class:`FqElement`."""
        v = self.c[i] if 0 <= i < len(self.c) else 0
        return FqElement(self.F, v)

    @property
    def key(self):
        """Integer sort key: orders by degree, then coefficients from the top down."""
        q = self.F.q
        k = 0
        for v in reversed(self.c):
            k = k * q + v
        return k

    @classmethod
    def from_key(cls, F, key):
        c = []
        while key:
            key, r = divmod(key, F.q)
            c.append(r)
        return cls._raw(F, tuple(c))

    def __eq__(self, o):
        return isinstance(o, Poly) and self.F is o.F and self.c == o.c

    def __hash__(self):
        return hash((self.F.p, self.F.n, self.c))

    def __lt__(self, o):
        return self.key < o.key

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, {self.F.spec_string()})"

    def __str__(self):
        return format_poly(self)

    def __reduce__(self):
        return (Poly._raw, (self.F, self.c))

    # -- ring operations -----------------------------------------------------

    def _coerce(self, o):
        if isinstance(o, Poly):
            if o.F is not self.F:
                raise ValueError("polynomials over different fields")
            return o
        if isinstance(o, FqElement):
            return Poly.constant(self.F, o.value)
        if isinstance(o, int):
            return Poly.constant(self.F, self.F.from_int(o))
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        F = self.F
        if F.n == 1:
            p = F.p
            r = [(x + y) % p for x, y in zip(a, b)] + list(a[len(b):])
        else:
            r = [F.add(x, y) for x, y in zip(a, b)] + list(a[len(b):])
        return Poly._raw(F, _trim(r))

    __radd__ = __add__

    def __neg__(self):
        F = self.F
        return Poly._raw(F, tuple(F.neg(x) for x in self.c))

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
        return Poly._raw(self.F, _mul(self.F, self.c, o.c))

    __rmul__ = __mul__

    def scale(self, a):
        if not a:
            return Poly._raw(self.F, ())
        F = self.F
        if F.n == 1:
            p = F.p
            return Poly._raw(F, tuple(x * a % p for x in self.c))
        return Poly._raw(F, tuple(F.mul(x, a) for x in self.c))

    def __divmod__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        q, r = _divmod(self.F, self.c, o.c)
        return Poly._raw(self.F, q), Poly._raw(self.F, r)

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return divmod(self, o)[1]

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.F, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, o):
        q, r = divmod(self, o)
        if r.c:
            raise ValueError(f"{o} does not divide {self}")
        return q

    def monic(self):
        if not self.c:
            return self
        return self.scale(self.F.inv(self.c[-1]))

    def derivative(self):
        F = self.F
        return Poly._raw(F, _trim([F.mul(F.from_int(i), v) for i, v in enumerate(self.c)][1:]))

    def __call__(self, x):
        """Evaluate at a field element (int encoding), by Horner."""
        F = self.F
        acc = 0
        for v in reversed(self.c):
            acc = F.add(F.mul(acc, x), v)
        return acc

    def compose(self, g):
        acc = Poly._raw(self.F, ())
        for v in reversed(self.c):
            acc = acc * g + Poly.constant(self.F, v)
        return acc

    def frobenius(self):
        """Apply x -> x^p to the coefficients and t -> t^p; equals self**p."""
        F, p = self.F, self.F.p
        if not self.c:
            return self
        r = [0] * ((len(self.c) - 1) * p + 1)
        for i, v in enumerate(self.c):
            r[i * p] = F.pow(v, p) if F.n > 1 else v
        return Poly._raw(F, tuple(r))

    def is_pth_power(self):
        p = self.F.p
        return all(not v for i, v in enumerate(self.c) if i % p)

    def pth_root(self):
        """Exact p-th root; raises ValueError if self is not a p-th power."""
        if not self.is_pth_power():
            raise ValueError(f"{self} is not a p-th power")
        F, p = self.F, self.F.p
        return Poly._raw(F, tuple(F.pth_root(v) for v in self.c[::p]))

    def powmod(self, e, m):
        result = Poly.constant(self.F, 1) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            e >>= 1
            if e:
                base = (base * base) % m
        return result


def _mul(F, a, b):
    if not a or not b:
        return ()
    if F.n == 1:
        p = F.p
        r = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] += x * y
        return _trim([v % p for v in r])
    r = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    r[i + j] = add(r[i + j], mul(x, y))
    return _trim(r)


def _divmod(F, a, b):
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), a
    r = list(a)
    inv = F.inv(b[-1])
    qlen = len(a) - db
    q = [0] * qlen
    if F.n == 1:
        p = F.p
        for k in range(qlen - 1, -1, -1):
            coef = r[k + db] * inv % p
            q[k] = coef
            if coef:
                for j in range(db + 1):
                    r[k + j] = (r[k + j] - coef * b[j]) % p
    else:
        for k in range(qlen - 1, -1, -1):
            coef = F.mul(r[k + db], inv)
            q[k] = coef
            if coef:
                for j in range(db + 1):
                    r[k + j] = F.sub(r[k + j], F.mul(coef, b[j]))
    return _trim(q), _trim(r[:db])


def gcd(a, b):
    """Monic gcd; gcd(0, 0) = 0."""
    while b.c:
        a, b = b, a % b
    return a.monic()


def xgcd(a, b):
    """Return (g, s, t) with g = s*a + t*b monic (or zero)."""
    F = a.F
    r0, r1 = a, b
    s0, s1 = Poly.constant(F, 1), Poly._raw(F, ())
    t0, t1 = Poly._raw(F, ()), Poly.constant(F, 1)
    while r1.c:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.c:
        return r0, s0, t0
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, msg, pos=None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} at position {pos}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        val = m.group(m.lastindex)
        out.append((kind, "^" if val == "**" else val, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _ExprParser:
    """Recursive descent over + - * / ^ ( ) with implicit multiplication.

    ``const(k)`` maps integers, ``names`` maps identifiers, and division is
    only accepted when ``allow_div`` is set.
    """

    def __init__(self, text, const, names, allow_div):
        self.toks = _tokenize(text)
        self.i = 0
        self.const = const
        self.names = names
        self.allow_div = allow_div

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self):
        v = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return v

    def expr(self):
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        v = self.term()
        if sign < 0:
            v = -v
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.power()
        while True:
            kind, val, pos = self.peek()
            if val == "*":
                self.take()
                v = v * self.power()
            elif val == "/":
                if not self.allow_div:
                    raise ParseError("division not allowed here", pos)
                self.take()
                v = v / self.power()
            elif kind in ("num", "name") or val == "(":
                v = v * self.power()
            else:
                return v

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", pos)
            base = base ** int(val)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.const(int(val))
        if kind == "name":
            if val not in self.names:
                raise ParseError(f"unknown symbol {val!r}", pos)
            return self.names[val]
        if val == "(":
            v = self.expr()
            if self.take()[1] != ")":
                raise ParseError("missing ')'", pos)
            return v
        if val == "-":
            return -self.power()
        raise ParseError(f"unexpected {val!r}", pos)


def parse_poly(text, F, var="t"):
    """Parse e.g. ``"t^6+2"`` or ``"2t^2 - t + 1"``; ``x`` denotes the field generator."""
    names = {var: Poly.t(F)}
    if F.n > 1:
        names["x"] = Poly.constant(F, F.p)
    return _ExprParser(text, lambda k: Poly.constant(F, F.from_int(k)), names, False).parse()


def format_poly(f, var="t"):
    if not f.c:
        return "0"
    F = f.F
    parts = []
    for i in range(len(f.c) - 1, -1, -1):
        v = f.c[i]
        if not v:
            continue
        cs = F.format_element(v)
        if i > 0 and "+" in cs:
            cs = f"({cs})"
        if i == 0:
            parts.append(cs)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        parts.append(mono if v == 1 else f"{cs}*{mono}")
    return "+".join(parts)


# ---------------------------------------------------------------------------
# irreducibility and factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    unit: FqElement
    factors: tuple  # ((Poly, multiplicity), ...) sorted by key

    def expand(self):
        F = self.unit.F
        r = Poly.constant(F, self.unit.value)
        for f, m in self.factors:
            r = r * f**m
        return r

    def __str__(self):
        body = " * ".join(f"({f})^{m}" if m > 1 else f"({f})" for f, m in self.factors)
        return f"{self.unit} * {body}" if body else str(self.unit)


def is_irreducible(f):
    """Rabin's test. Raises ValueError on constant input."""
    if f.deg < 1:
        raise ValueError("irreducibility is undefined for constants")
    n = f.deg
    if n == 1:
        return True
    f = f.monic()
    F = f.F
    q = F.q
    t = Poly.t(F)
    if F.n == 1 and f.c[0] == 0:
        return False
    frob = [t]  # frob[k] = t^(q^k) mod f
    for _ in range(n):
        frob.append(frob[-1].powmod(q, f))
    if frob[n] != t % f:
        return False
    for r in primefactors(n):
        if gcd(f, frob[n // r] - t).deg > 0:
            return False
    return True


def squarefree_decomposition(f):
    """Return [(g, m), ...] with f/lc(f) = prod g^m, g monic squarefree, pairwise coprime."""
    if not f.c:
        raise ValueError("squarefree decomposition of zero")
    f = f.monic()
    if f.deg < 1:
        return []
    p = f.F.p
    out = []
    d = f.derivative()
    if d.c:
        c = gcd(f, d)
        w = f.exact_div(c)
        i = 1
        while w.deg > 0:
            y = gcd(w, c)
            z = w.exact_div(y)
            if z.deg > 0:
                out.append((z, i))
            i += 1
            w = y
            c = c.exact_div(y)
        if c.deg > 0:
            out.extend((g, m * p) for g, m in squarefree_decomposition(c.pth_root()))
    else:
        out.extend((g, m * p) for g, m in squarefree_decomposition(f.pth_root()))
    return out


def _distinct_degree(f):
    F = f.F
    t = Poly.t(F)
    out = []
    h = t % f
    d = 0
    while f.deg >= 2 * (d + 1):
        d += 1
        h = h.powmod(F.q, f)
        g = gcd(f, h - t)
        if g.deg > 0:
            out.append((g, d))
            f = f.exact_div(g)
            h = h % f
    if f.deg > 0:
        out.append((f, f.deg))
    return out


def _equal_degree(f, d, rng):
    if f.deg == d:
        return [f]
    F = f.F
    q = F.q
    while True:
        a = Poly(F, [rng.randrange(q) for _ in range(f.deg)])
        if a.deg < 1:
            continue
        if F.p == 2:
            b = a % f
            acc = b
            for _ in range(F.n * d - 1):
                b = (b * b) % f
                acc = acc + b
        else:
            acc = a.powmod((q**d - 1) // 2, f) - 1
        g = gcd(f, acc)
        if 0 < g.deg < f.deg:
            return _equal_degree(g, d, rng) + _equal_degree(f.exact_div(g), d, rng)


def factor(f):
    """Factor into unit * prod(monic irreducible ^ mult), canonically ordered."""
    if not f.c:
        raise ValueError("cannot factor the zero polynomial")
    F = f.F
    unit = FqElement(F, f.lc)
    # seed from the input so the splitting path is reproducible
    rng = random.Random(f"{F.p}^{F.n}:{f.c}")
    mult = {}
    for g, m in squarefree_decomposition(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng):
                mult[irr] = mult.get(irr, 0) + m
    factors = tuple(sorted(mult.items(), key=lambda fm: fm[0].key))
    return Factorization(unit, factors)


def iter_polys(F, max_deg):
    """All polynomials of degree <= max_deg (zero included) in key order."""
    for k in range(F.q ** (max_deg + 1)):
        yield Poly.from_key(F, k)


def iter_monic(F, d):
    """Monic polynomials of degree exactly d in key order."""
    base = F.q**d
    for k in range(base):
        yield Poly.from_key(F, base + k)


@functools.lru_cache(maxsize=None)
def _monic_irreducibles(F, d):
    if d == 1:
        return tuple(iter_monic(F, 1))
    reducible = set()
    for e in range(1, d // 2 + 1):
        for g in _monic_irreducibles(F, e):
            for h in iter_monic(F, d - e):
                reducible.add(_mul(F, g.c, h.c))
    return tuple(f for f in iter_monic(F, d) if f.c not in reducible)


def enumerate_monic_irreducibles(F, d):
    """Yield every monic irreducible of degree d over F exactly once, in key order."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    yield from _monic_irreducibles(F, d)


def count_monic_irreducibles(q, d):
    """Gauss's necklace formula (1/d) sum_{e | d} mu(d/e) q^e."""
    return sum(int(mobius(d // e)) * q**e for e in divisors(d)) // d


def nonsquare_constant(F):
    """The least (by encoding) nonsquare of F_q; q must be odd."""
    if F.p == 2:
        raise ValueError("every element of a field of characteristic 2 is a square")
    return FqElement(F, next(a for a in range(1, F.q) if not F.is_square(a)))
