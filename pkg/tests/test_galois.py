import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fqt.galois import (
    NEG_INF, Poly, count_monic_irreducibles, enumerate_monic_irreducibles, factor, field, format_poly, gcd,
    is_irreducible, iter_monic, nonsquare_constant, parse_field_spec, parse_poly, squarefree_decomposition, xgcd,
)

F3, F5, F7 = field(3), field(5), field(7)


def P(text, F=F3):
    return parse_poly(text, F)


def polys(F, max_deg=6):
    return st.lists(st.integers(0, F.q - 1), max_size=max_deg + 1).map(lambda c: Poly(F, c))


# ---------------------------------------------------------------------------
# fields


def test_prime_field_arithmetic():
    assert F7.mul(3, 5) == 1
    assert F7.inv(3) == 5
    assert F7.pow(3, 6) == 1
    assert F7.neg(2) == 5


def test_extension_field_modulus_is_least_irreducible():
    F9 = field(3, 2)
    assert F9.q == 9
    assert format_poly(Poly(field(3), F9.modulus)) == "t^2+1"
    # x^2 = -1
    x = 3  # the generator: base-3 digits (0, 1)
    assert F9.mul(x, x) == F9.from_int(2)


def test_extension_field_is_a_field():
    F9 = field(3, 2)
    for a in range(1, 9):
        assert F9.mul(a, F9.inv(a)) == 1
    for a, b in itertools.product(range(9), repeat=2):
        assert F9.mul(a, b) == F9.mul(b, a)


def test_parse_field_spec():
    assert parse_field_spec("13").q == 13
    assert parse_field_spec("3^2").q == 9
    with pytest.raises(ValueError):
        parse_field_spec("9")
    with pytest.raises(ValueError):
        parse_field_spec("x")


def test_nonsquare_constant():
    assert nonsquare_constant(F3).value == 2
    assert nonsquare_constant(field(7)).value == 3
    F9 = field(3, 2)
    squares = {F9.mul(a, a) for a in range(9)}
    ns = nonsquare_constant(F9).value
    assert ns not in squares
    assert ns == min(a for a in range(9) if a not in squares)
    with pytest.raises(ValueError):
        nonsquare_constant(field(2))


def test_sqrt_roundtrip():
    for F in (F3, F5, F7, field(3, 2), field(2, 3)):
        for a in range(F.q):
            r = F.sqrt(a)
            if r is None:
                assert not F.is_square(a)
            else:
                assert F.mul(r, r) == a


# ---------------------------------------------------------------------------
# polynomial arithmetic


def test_spec_arithmetic_examples():
    assert gcd(P("t^2+2t+1"), P("t+1")) == P("t+1")
    assert P("t+1") ** 3 == P("t^3+1")
    assert divmod(P("t^3+1"), P("t+1")) == (P("t^2+2t+1"), Poly(F3))


def test_zero_degree_sentinel():
    assert Poly(F3).deg == NEG_INF
    assert Poly(F3, [0, 0]).is_zero()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        divmod(P("t"), Poly(F3))


def test_parse_and_format():
    assert format_poly(P("2t^2 - t + 1")) == "2*t^2+2*t+1"
    assert format_poly(P("t^6+2")) == "t^6+2"
    assert P("(t+1)^2") == P("t^2+2*t+1")
    F9 = field(3, 2)
    f = parse_poly("x*t + 1", F9)
    assert f.deg == 1


@given(polys(F5), polys(F5), polys(F5))
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly(F5)


@given(polys(F7), polys(F7, 4).filter(lambda b: not b.is_zero()))
def test_divmod_contract(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.deg < b.deg


@given(polys(F5, 5), polys(F5, 5))
def test_gcd_bezout(a, b):
    g, s, t = xgcd(a, b)
    assert g == gcd(a, b)
    assert s * a + t * b == g
    if not g.is_zero():
        assert g.is_monic()
        assert (a % g).is_zero() and (b % g).is_zero()


@given(polys(F3, 6))
def test_format_parse_roundtrip(f):
    assert parse_poly(format_poly(f), F3) == f


@given(polys(F5, 6))
def test_frobenius_identity(f):
    # f^p equals the coefficientwise p-th power composed with t -> t^p
    expected = Poly(F5, [c for i, c in enumerate(f.c) for c in ([c] + [0] * 4)])
    assert f ** 5 == expected == f.frobenius()


# ---------------------------------------------------------------------------
# irreducibility and factorization


def test_is_irreducible_examples():
    assert is_irreducible(P("t^2+1"))
    assert not is_irreducible(P("t^2+1", F5))
    assert is_irreducible(P("t"))
    with pytest.raises(ValueError):
        is_irreducible(Poly.constant(F3, 2))


def test_factor_examples():
    fac = factor(P("t^6+2"))
    assert fac.unit.value == 1
    assert list(fac.factors) == [(P("t+1"), 3), (P("t+2"), 3)]
    fac = factor(P("t", F5))
    assert list(fac.factors) == [(P("t", F5), 1)]
    fac = factor(P("2t^2+2"))
    assert fac.unit.value == 2
    assert list(fac.factors) == [(P("t^2+1"), 1)]
    with pytest.raises(ValueError):
        factor(Poly(F3))


def test_factor_is_deterministic():
    f = P("t^12+t^7+2t^3+1", F7)
    assert factor(f) == factor(P("t^12+t^7+2t^3+1", F7))


@settings(max_examples=60, deadline=None)
@given(polys(F7, 10).filter(lambda f: not f.is_zero()))
def test_factor_reassembles(f):
    fac = factor(f)
    assert fac.expand() == f
    for g, m in fac.factors:
        assert g.is_monic() and m >= 1
        assert g.deg == 0 or is_irreducible(g)
    assert len({g for g, _ in fac.factors}) == len(fac.factors)


def test_factor_over_extension_fields():
    for F in (field(3, 2), field(2, 3), field(5, 2)):
        f = Poly(F, [1, 2 % F.q, 0, 1, 0, 0, 1])
        fac = factor(f)
        assert fac.expand() == f
        assert all(is_irreducible(g) for g, _ in fac.factors)


def test_factor_large_degree_char_two():
    F2 = field(2)
    f = (P("t^3+t+1", F2) ** 2) * P("t^2+t+1", F2) * P("t", F2) ** 4
    fac = factor(f)
    assert list(fac.factors) == sorted([(P("t", F2), 4), (P("t^2+t+1", F2), 1), (P("t^3+t+1", F2), 2)],
                                       key=lambda e: e[0].key)


def test_squarefree_decomposition_product():
    f = P("t^2", F3) * P("t+1") ** 3 * P("t^2+1") ** 4
    acc = Poly.constant(F3, 1)
    for g, m in squarefree_decomposition(f):
        acc = acc * g**m
    assert acc == f.monic()


def test_enumerate_irreducibles_examples():
    assert list(enumerate_monic_irreducibles(F3, 1)) == [P("t"), P("t+1"), P("t+2")]
    assert len(list(enumerate_monic_irreducibles(F3, 2))) == 3
    F2 = field(2)
    assert set(enumerate_monic_irreducibles(F2, 3)) == {P("t^3+t+1", F2), P("t^3+t^2+1", F2)}


@pytest.mark.parametrize("q", [2, 3, 5])
def test_necklace_counts(q):
    F = field(q)
    for d in range(1, 7 if q < 5 else 5):
        irr = list(enumerate_monic_irreducibles(F, d))
        assert len(irr) == count_monic_irreducibles(q, d)
        assert len(set(irr)) == len(irr)


def test_necklace_counts_large_degree():
    assert count_monic_irreducibles(5, 6) == (5**6 - 5**3 - 5**2 + 5) // 6


def test_irreducible_enumeration_matches_brute_force():
    brute = [f for f in iter_monic(F3, 3) if all(f(a) != 0 for a in range(3))]
    assert list(enumerate_monic_irreducibles(F3, 3)) == brute
