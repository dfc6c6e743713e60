import json

import pytest
from hypothesis import given, settings, strategies as st

from fqt.funcfield import (
    INF, Divisor, InfiniteValuation, MobiusMap, RationalFunction, apply_mobius, enumerate_rational_functions,
    field_index, finite_place, format_rf, parse_place, parse_rf, pole_divisor, principal_divisor, rf_normalize,
    substitute, valuation, zero_divisor,
)
from fqt.galois import Poly, field, parse_poly

F3, F5 = field(3), field(5)


def R(text, F=F3):
    return parse_rf(text, F)


def place(text, F=F3):
    return parse_place(text, F)


def rfs(F, height=3, nonzero=True):
    coeffs = st.lists(st.integers(0, F.q - 1), min_size=1, max_size=height + 1)
    den = st.lists(st.integers(0, F.q - 1), max_size=height).map(lambda c: Poly(F, c + [1]))
    out = st.builds(lambda n, d: RationalFunction(Poly(F, n), d), coeffs, den)
    return out.filter(lambda w: not w.is_zero()) if nonzero else out


def mobius(F):
    return st.tuples(*[st.integers(0, F.q - 1)] * 4).filter(
        lambda e: F.sub(F.mul(e[0], e[3]), F.mul(e[1], e[2]))).map(lambda e: MobiusMap(F, *e))


def test_normalize_examples():
    assert rf_normalize(parse_poly("t^2-1", F3), parse_poly("t-1", F3)) == R("t+1")
    assert rf_normalize(parse_poly("2t", F3), parse_poly("2", F3)) == R("t")
    w = rf_normalize(parse_poly("t^6", F3), parse_poly("t^6+2", F3))
    assert format_rf(w) == "t^6/(t^6+2)"
    assert rf_normalize(w.num, w.den) == w
    with pytest.raises(ZeroDivisionError):
        rf_normalize(parse_poly("t", F3), Poly(F3))


def test_zero_is_zero_over_one():
    z = R("0")
    assert z.is_zero() and z.den == Poly.constant(F3, 1)


def test_valuation_examples():
    assert valuation(R("t"), INF) == -1
    assert valuation(R("t^6/(t^6+2)"), place("t")) == 6
    assert valuation(R("(t^6+2)/t^6"), place("t+1")) == 3
    with pytest.raises(InfiniteValuation):
        valuation(R("0"), INF)


def test_divisor_examples():
    u = R("t^6/(t^6+2)")
    assert zero_divisor(R("t")) == Divisor([(place("t"), 1)])
    assert zero_divisor(u) == Divisor([(place("t"), 6)])
    assert pole_divisor(u) == Divisor([(place("t+1"), 3), (place("t+2"), 3)])
    assert zero_divisor(R("1/t")) == Divisor([(INF, 1)])
    assert zero_divisor(R("2")) == Divisor()


def test_divisor_json():
    d = principal_divisor(R("(t+1)^3/t^2"))
    assert json.loads(d.to_json()) == [{"place": "t", "mult": -2}, {"place": "t+1", "mult": 3},
                                       {"place": "INF", "mult": -1}]


def test_place_order_finite_before_infinite():
    places = sorted([INF, place("t^2+1"), place("t+2"), place("t")])
    assert [str(P) for P in places] == ["t", "t+2", "t^2+1", "INF"]
    assert INF.degree == 1 and place("t^2+1").degree == 2


def test_finite_place_needs_monic_irreducible():
    with pytest.raises(ValueError):
        finite_place(parse_poly("t^2+2", F3))


def test_field_index_examples():
    assert field_index(R("t^6/(t^6+2)")) == 6
    assert field_index(R("t")) == 1
    assert field_index(R("(t^8+1)/(t^8+t^4+1)", field(13))) == 8
    with pytest.raises(ValueError):
        field_index(R("2"))


def test_mobius_examples():
    u = R("t^6/(t^6+2)")
    assert apply_mobius(MobiusMap.identity(F3), u) == u
    assert apply_mobius(MobiusMap(F3, 0, 1, 1, 0), R("t")) == R("1/t")
    assert format_rf(apply_mobius(MobiusMap(F3, 1, 1, 0, 1), u)) == "(2*t^6+2)/(t^6+2)"
    with pytest.raises(ValueError):
        MobiusMap(F3, 1, 1, 1, 1)
    with pytest.raises(ZeroDivisionError):
        apply_mobius(MobiusMap(F3, 0, 1, 1, 0), R("0"))


def test_substitute_examples():
    assert substitute(R("t^2"), R("t+1")) == R("t^2+2t+1")
    assert substitute(R("t"), R("1/t")) == R("1/t")
    assert substitute(R("t^2+1", F5), R("t^3", F5)) == R("t^6+1", F5)
    with pytest.raises(ValueError):
        substitute(R("t"), R("1"))


def test_enumeration_counts_and_order():
    ws = list(enumerate_rational_functions(F3, 1))
    # 0 and 2 nonzero constants, plus (a t + b)/(t + c) and (a t + b) reduced
    assert len(ws) == 27 and len(set(ws)) == 27
    assert [w.key for w in ws] == sorted(w.key for w in ws)
    assert ws[0].is_zero()


@settings(max_examples=150)
@given(rfs(F3))
def test_product_formula_f3(w):
    assert sum(v * P.degree for P, v in principal_divisor(w)) == 0


@settings(max_examples=150)
@given(rfs(F5))
def test_product_formula_f5(w):
    assert principal_divisor(w).degree == 0


@given(rfs(F5))
def test_zero_and_pole_degree_is_index(w):
    if w.is_constant():
        return
    assert zero_divisor(w).degree == pole_divisor(w).degree == field_index(w)


@given(rfs(F3), rfs(F3))
def test_valuation_homomorphism(a, b):
    for P in set(principal_divisor(a).support) | set(principal_divisor(b).support) | {INF}:
        assert valuation(a * b, P) == valuation(a, P) + valuation(b, P)
        s = a + b
        if not s.is_zero():
            assert valuation(s, P) >= min(valuation(a, P), valuation(b, P))


@given(rfs(F3, 3), mobius(F3))
def test_mobius_inverse_f3(u, m):
    if u.is_constant():
        return
    assert apply_mobius(m.inverse(), apply_mobius(m, u)) == u


@given(rfs(F5, 3), mobius(F5), mobius(F5))
def test_mobius_composition_is_matrix_product(u, m1, m2):
    if u.is_constant():
        return
    assert apply_mobius(m1.compose(m2), u) == apply_mobius(m1, apply_mobius(m2, u))


@given(rfs(F3, 3, nonzero=False))
def test_format_parse_roundtrip(w):
    assert parse_rf(format_rf(w), F3) == w


def test_rational_function_arithmetic():
    a, b = R("1/t"), R("t/(t+1)")
    assert a * b == R("1/(t+1)")
    assert a + b == R("(t^2+t+1)/(t^2+t)")
    assert (a / b) * b == a
    assert a ** -2 == R("t^2")
    with pytest.raises(ZeroDivisionError):
        a / R("0")
