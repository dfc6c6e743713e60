import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from fqt.funcfield import RationalFunction, enumerate_rational_functions, parse_rf
from fqt.galois import count_monic_irreducibles, field, is_irreducible
from fqt.logic.ast import CharLit, Exists, FAtom, Not, Or, walk, count_quantified
from fqt.logic.evaluate import EvalBudget, eval_ring
from fqt.power import (
    build_phi, choose_params, den_p, footnote_bound, footnote_bound_ok, is_square, m_of, pasten_criterion, phi_gp,
    square_root,
)
from fqt.suites import count_square_atoms, random_rf

F3, F13 = field(3), field(13)


def R(text, F=F3):
    return parse_rf(text, F)


def test_den_p_examples():
    assert den_p(R("t^9"), R("t")) == 2
    assert den_p(R("t^3+1"), R("t+1")) == 1
    assert den_p(R("t^2"), R("t")) is None
    assert den_p(R("t"), R("t^9")) == -2
    assert den_p(R("t+1"), R("t^3+1")) == -1
    with pytest.raises(ValueError):
        den_p(R("0"), R("t"))


def test_den_p_constants():
    F9 = field(3, 2)
    x = RationalFunction.constant(F9, 3)
    assert den_p(x, x) == 0
    assert den_p(x ** 3, x) == 1
    assert den_p(R("2"), R("t")) is None


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000), st.integers(-2, 2))
def test_den_p_symmetry(seed, s):
    h = random_rf(F3, 2, random.Random(seed))
    f = h
    for _ in range(abs(s)):
        f = f.frobenius()
    a, b = (f, h) if s >= 0 else (h, f)
    assert den_p(a, b) == s
    assert den_p(b, a) == -s


def test_is_square_examples():
    assert square_root(R("t^2+2t+1")) in (R("t+1"), R("2t+2"))
    assert not is_square(R("t"))
    assert not is_square(R("2(t+1)^2"))
    assert is_square(R("0"))


@pytest.mark.parametrize("p", [3, 5])
def test_is_square_exhaustive(p):
    F = field(p)
    ws = list(enumerate_rational_functions(F, 2))
    squares = {w * w for w in ws}
    for w in ws:
        assert is_square(w) == (w in squares)
        if is_square(w):
            z = square_root(w)
            assert z * z == w


def test_m_of_examples():
    assert m_of(0, 1, 13) == 12
    assert m_of(2, 1, 101) == 20
    # the sum runs to ceil((d-1)/2) = 1 for d = 3
    assert m_of(0, 3, 3) == math.ceil((12 + 8 * 3) / 3)
    assert m_of(0, 4, 3) == math.ceil((12 + 8 * (3 + 9)) / 4)


@pytest.mark.parametrize("g,d,p", [(0, 1, 13), (0, 6, 3), (5, 2, 31), (1, 3, 7), (0, 4, 5)])
def test_footnote_bound_exact_matches_float(g, d, p):
    fl = d >= footnote_bound(g, p)
    assert footnote_bound_ok(g, d, p) == fl


def test_choose_params_examples():
    prm = choose_params(0, 13)
    assert (prm.d, prm.M) == (1, 12)
    assert prm.to_dict()["F_list"][0] == "X+12"  # X - 1
    assert [(-f.c[0]) % 13 for f in prm.F_list] == list(range(1, 13))
    prm = choose_params(1, 101)
    assert (prm.d, prm.M) == (1, 16)


@pytest.mark.parametrize("g,p", [(0, 3), (0, 5), (0, 7), (0, 11), (1, 3), (5, 31)])
def test_choose_params_small_p(g, p):
    prm = choose_params(g, p)
    d = prm.d
    assert footnote_bound_ok(g, d, p)
    assert count_monic_irreducibles(p, d) > prm.M == m_of(g, d, p)
    assert len(set(prm.F_list)) == prm.M
    assert all(f.deg == d and f.is_monic() and is_irreducible(f) for f in prm.F_list)
    for e in range(1, d):
        assert not (footnote_bound_ok(g, e, p) and count_monic_irreducibles(p, e) > m_of(g, e, p))


def test_choose_params_rejects_bad_p():
    for p in (2, 9):
        with pytest.raises(ValueError):
            choose_params(0, p)


def test_pasten_examples():
    prm = choose_params(0, 13)
    t = R("t", F13)
    assert pasten_criterion(t, t, prm)
    assert not pasten_criterion(t, R("t+1", F13), prm)
    rng = random.Random(1)
    for _ in range(50):
        h = random_rf(F13, 3, rng)
        assert pasten_criterion(h.frobenius(), h, prm)
    with pytest.raises(ValueError):
        pasten_criterion(R("1", F13), t, prm)


def test_pasten_over_extension_field():
    F = field(3, 2)
    prm = choose_params(0, 3)
    h = RationalFunction(R("t", F).num * 3 + R("1", F).num) / R("t+1", F)
    assert pasten_criterion(h.frobenius(), h, prm)
    assert not pasten_criterion(h, R("t", F), prm)


def test_phi_structure():
    phi = build_phi(0, 13)
    assert count_square_atoms(phi) == 12
    assert count_quantified(phi) == 12
    assert count_quantified(phi_gp(1, 101)) == 16
    uni = build_phi(0, "uniform")
    assert isinstance(uni, Or) and len(uni.args) == 2
    guards = {n.p for n in walk(uni.args[0]) if isinstance(n, CharLit) and not n.zero}
    assert guards == {2, 3, 5, 7, 11}
    const_case = uni.args[1]
    assert any(isinstance(n, Not) and isinstance(n.arg, FAtom) for n in walk(const_case))
    assert any(isinstance(n, Exists) and n.vars == ("u", "v") for n in walk(const_case))


def test_phi_semantics_against_den_p():
    phi = build_phi(0, 13)
    rng = random.Random(5)
    for i in range(12):
        f = random_rf(F13, 2, rng)
        h = f if i % 3 == 0 else (f.frobenius() if i % 3 == 1 else random_rf(F13, 2, rng))
        if h.height > 6:
            h = f
        res = eval_ring(phi, None, 2, EvalBudget(6, F13), env={"x": f, "y": h})
        if res.verdict == "true":
            assert den_p(f, h) is not None
        elif den_p(f, h) is not None:
            # squares of height <= 6 always exist for these pairs, so the search is conclusive
            pytest.fail(f"missed witness for {f}, {h}")
