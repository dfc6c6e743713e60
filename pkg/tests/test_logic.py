import pytest
from hypothesis import given, settings, strategies as st

from fqt.funcfield import parse_rf
from fqt.galois import field
from fqt.logic.arith import (
    FALSE_AT_BOUND, TRUE, ParseError, derive_strict_div, divides_p, eval_arith, format_arith, parse_arith,
)
from fqt.logic.ast import (
    Add, And, BAtom, CharLit, DenAtom, DivP, Eq, Exists, FAtom, Forall, IntsAtom, Le, Lit, Mul, Not, Or,
    Param, Pow, SDivP, SqAtom, Var, is_positive_existential, walk,
)
from fqt.logic.evaluate import EvalBudget, EvalError, eval_ring
from fqt.logic.sexpr import SexprError, parse_sexpr, to_sexpr
from fqt.logic.translate import TranslationError, forall_guard, translate

F3, F5 = field(3), field(5)
T = parse_rf("t", F3)


def budget(d, F=F3, steps=None):
    return EvalBudget(d, F, steps)


# -- parsing -----------------------------------------------------------------


def test_parse_examples():
    s = parse_arith("E x. x + x = 1 + 1")
    assert s == Exists(("x",), Eq(Add((Var("x"), Var("x"))), Add((Lit(1), Lit(1)))))
    s = parse_arith("E x. E y. x divp y & x <= y")
    atoms = {type(n) for n in walk(s)}
    assert DivP in atoms and Le in atoms


@pytest.mark.parametrize("text", ["x = 1", "E x. x = y", "E x. x = ", "E x x = 1", "E x. x = 2", "E x. x * x = 1"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_arith(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_arith("E x. x = = 1")
    assert exc.value.pos == 9


def test_format_round_trip():
    for text in ["E x. x + x = 1 + 1", "E a. E b. (a divp b | a <= b) & a = 1", "1 + 1 = 1 + 1"]:
        s = parse_arith(text)
        assert parse_arith(format_arith(s)) == s


# -- derived atom ------------------------------------------------------------


def test_derive_strict_div():
    x, y = Var("x"), Var("y")
    assert derive_strict_div(SDivP(x, y)) == And((DivP(x, y), Le(x, y)))
    s = parse_arith("E x. E y. x sdivp y")
    d = derive_strict_div(s)
    assert d.vars == s.vars and isinstance(d.body, Exists)
    assert d.body.body == And((DivP(x, y), Le(x, y)))
    plain = parse_arith("E x. x = 1")
    assert derive_strict_div(plain) == plain


# -- evaluation in N ---------------------------------------------------------


def test_eval_arith_examples():
    r = eval_arith("E x. x + 1 = 1 + 1", 5, 3)
    assert r.verdict == TRUE and r.witnesses == {"x": 1}
    assert eval_arith("E x. E y. x divp y & x = 1 & y = 1 + 1 + 1", 5, 3).verdict == TRUE
    assert eval_arith("E x. x + x = 1", 10, 3).verdict == FALSE_AT_BOUND
    with pytest.raises(ValueError):
        eval_arith("E x. x = 1", -1, 3)


def test_divides_p():
    assert divides_p(1, 9, 3) and divides_p(9, 1, 3) and divides_p(0, 0, 3)
    assert not divides_p(1, 6, 3) and not divides_p(0, 3, 3)
    assert divides_p(2, 50, 5) and not divides_p(2, 50, 3)


@given(st.integers(0, 6), st.integers(0, 6))
def test_eval_arith_monotone_in_bound(k, extra):
    text = "E x. " + " + ".join(["x"] * 2) + " = " + " + ".join(["1"] * max(k, 1))
    lo = eval_arith(text, k, 3).verdict
    hi = eval_arith(text, k + extra, 3).verdict
    assert not (lo == TRUE and hi != TRUE)


# -- S-expressions -----------------------------------------------------------


def test_sexpr_example():
    node = Eq(Var("z_a"), Mul((Var("z_b"), Var("z_c"))))
    assert to_sexpr(node) == "(= z_a (* z_b z_c))"


def test_sexpr_errors():
    for bad in ["(= a", "(foo a b)", "(= a b) extra", ")", "(Ints x a b)"]:
        with pytest.raises(SexprError):
            parse_sexpr(bad)


names = st.sampled_from(["a", "b", "x", "z_1", "u"])
terms = st.recursive(
    st.one_of(names.map(Var), st.integers(-5, 30).map(Lit), st.just(Param("t"))),
    lambda sub: st.one_of(
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: Add(tuple(xs))),
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: Mul(tuple(xs))),
        st.tuples(sub, st.integers(2, 9)).map(lambda a: Pow(*a)),
    ),
    max_leaves=6,
)
primes = st.sampled_from([2, 3, 5, 13])
atoms = st.one_of(
    st.builds(Eq, terms, terms),
    st.builds(FAtom, terms),
    st.builds(BAtom, primes, terms),
    st.builds(DenAtom, terms, terms),
    st.builds(IntsAtom, primes, terms, terms),
    st.builds(SqAtom, terms),
    st.builds(CharLit, primes, st.booleans()),
    st.builds(DivP, terms, terms),
    st.builds(SDivP, terms, terms),
    st.builds(Le, terms, terms),
)
formulas = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: And(tuple(xs))),
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: Or(tuple(xs))),
        st.builds(Exists, st.lists(names, min_size=1, max_size=2, unique=True).map(tuple), sub),
        st.builds(Forall, st.lists(names, min_size=1, max_size=2, unique=True).map(tuple), sub),
    ),
    max_leaves=5,
)


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_sexpr_round_trip(phi):
    assert parse_sexpr(to_sexpr(phi)) == phi


# -- translation -------------------------------------------------------------


def test_translate_addition_is_product():
    phi = translate(parse_arith("E a. E b. E c. a = b + c"))
    text = to_sexpr(phi)
    assert "(= z_a_1 (* z_b_3 z_c_5))" in text
    assert text.count("(Ints 2 ") == 3
    assert is_positive_existential(phi)


def test_translate_le_orientation():
    text = to_sexpr(translate(parse_arith("E a. E b. a <= b")))
    # r * z_a = z_b with r in Ints: ord(z_b) - ord(z_a) >= 0
    assert "(= (* r_5 z_a_1) z_b_3)" in text and "(Ints 2 r_5 @t)" in text


def test_translate_divp_shape():
    text = to_sexpr(translate(parse_arith("E a. E b. a divp b")))
    assert "(Den y_5 z_a_1)" in text
    assert "(= (* r_6 z_b_3) y_5)" in text and "(= (* r_7 y_5) z_b_3)" in text


def test_translate_constants():
    text = to_sexpr(translate(parse_arith("1 + 1 = 1 + 0")))
    assert text == "(= (* @t @t) @t)"


def test_translate_policies():
    s = parse_arith("E a. a = 1")
    assert "@t" in to_sexpr(translate(s, policy="fixed-t"))
    free = translate(s, policy="free-u")
    assert "@t" not in to_sexpr(free) and " u)" in to_sexpr(free)
    q = translate(s, policy="quantified-Bl")
    assert isinstance(q, Exists) and q.vars == ("u",)
    assert to_sexpr(q).startswith("(exists (u) (and (B 2 u)")


def test_translate_deterministic_and_renames_apart():
    s = parse_arith("E z_a_1. E u. z_a_1 = u")
    a, b = to_sexpr(translate(s)), to_sexpr(translate(s))
    assert a == b
    assert "z_z_a_1_" in a


def test_translate_expand_mode_has_no_den_atoms():
    phi = translate(parse_arith("E a. E b. a divp b"), mode="expand-denp")
    assert not any(isinstance(n, DenAtom) for n in walk(phi))
    assert any(isinstance(n, CharLit) for n in walk(phi))


def test_translate_errors():
    with pytest.raises(TranslationError):
        translate(parse_arith("E a. a = 1"), mode="nope")
    with pytest.raises(TranslationError):
        translate(Not(Eq(Lit(1), Lit(1))))
    with pytest.raises(TranslationError):
        translate(Exists(("a",), Eq(Var("a"), Lit(2))))


def test_forall_guard_is_display_only():
    body = translate(parse_arith("E a. a = 1"), policy="free-u")
    g = forall_guard(body)
    assert isinstance(g, Forall)
    assert parse_sexpr(to_sexpr(g)) == g
    with pytest.raises(EvalError):
        eval_ring(g, None, 2, budget(1))


# -- ring evaluation ---------------------------------------------------------


def test_eval_ring_atoms():
    u2 = Mul((Var("u"), Var("u")))
    assert eval_ring(IntsAtom(2, u2, Var("u")), T, 2, budget(2)).verdict == TRUE
    assert eval_ring(FAtom(Lit(1)), T, 2, budget(2)).verdict == FALSE_AT_BOUND
    assert eval_ring(FAtom(Param("t")), T, 2, budget(0)).verdict == TRUE
    assert eval_ring(SqAtom(Pow(Param("t"), 2)), T, 2, budget(0)).verdict == TRUE
    assert eval_ring(SqAtom(Param("t")), T, 2, budget(0)).verdict == FALSE_AT_BOUND
    assert eval_ring(CharLit(3, True), T, 2, budget(0)).verdict == TRUE
    assert eval_ring(CharLit(3, False), T, 2, budget(0)).verdict == FALSE_AT_BOUND
    assert eval_ring(DenAtom(Pow(Param("t"), 9), Param("t")), T, 2, budget(0)).verdict == TRUE


def test_eval_ring_existential_witness():
    phi = Exists(("x",), Eq(Mul((Var("x"), Var("x"))), Add((Pow(Param("t"), 2), Lit(1), Mul((Lit(2), Param("t")))))))
    r = eval_ring(phi, None, 2, budget(1))
    assert r.verdict == TRUE and r.witnesses["x"] in ("t + 1", "2t + 2", "t+1", "2t+2")


def test_eval_ring_unbound_variable():
    with pytest.raises(EvalError):
        eval_ring(Eq(Var("y"), Lit(1)), T, 2, budget(1))


def test_eval_ring_true_sentence_at_t():
    s = parse_arith("E a. a + a = 1 + 1")
    r = eval_ring(translate(s), T, 2, budget(4))
    assert r.verdict == TRUE


def test_eval_ring_false_sentence():
    s = parse_arith("E a. a + a = 1")
    assert eval_ring(translate(s), T, 2, budget(4)).verdict == FALSE_AT_BOUND


def test_eval_ring_monotone_in_degree_bound():
    phi = Exists(("x",), Eq(Mul((Var("x"), Var("x"), Var("x"))), Pow(Param("t"), 6)))
    seen_true = False
    for d in range(4):
        v = eval_ring(phi, T, 2, budget(d)).verdict
        if seen_true:
            assert v == TRUE
        seen_true |= v == TRUE
    assert seen_true


def test_eval_ring_step_limit():
    x = Var("x")
    phi = Exists(("x",), And((FAtom(x), SqAtom(Add((x, Param("t")))), SqAtom(Add((x, Lit(1)))), SqAtom(x))))
    capped = eval_ring(phi, T, 2, budget(2, steps=5))
    assert capped.verdict == FALSE_AT_BOUND and capped.exhausted
    full = eval_ring(phi, T, 2, budget(2))
    assert full.verdict == FALSE_AT_BOUND and not full.exhausted and full.steps > 5
