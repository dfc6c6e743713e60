"""l-behavedness of elements of F_q(t), the behaved factor z_b(u), and valuation tools built on it."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field

from .funcfield import Divisor, InfiniteValuation, RationalFunction, principal_divisor, valuation

MULT_DIV_L = "mult_div_l"
DEGREE_DIV_L = "degree_div_l"


class NotBehaved(ValueError):
    """Raised by operations that need an l-behaved parameter u."""


@dataclass(frozen=True)
class BehavedReport:
    u: RationalFunction
    l: int
    is_behaved: bool
    witnesses: tuple  # ((Place, k_P), ...)
    excluded: tuple  # ((Place, v, reason), ...)
    note: str = ""

    def to_dict(self):
        d = {
            "u": str(self.u),
            "l": self.l,
            "is_behaved": self.is_behaved,
            "witnesses": [{"place": str(P), "k": k, "degree": P.degree} for P, k in self.witnesses],
            "excluded": [{"place": str(P), "v": v, "degree": P.degree, "reason": r} for P, v, r in self.excluded],
        }
        if self.note:
            d["note"] = self.note
        return d


@functools.lru_cache(maxsize=1 << 14)
def is_l_behaved(u, l):
    """Check every zero of u (the infinite place included) for v % l != 0 and deg % l != 0."""
    if u.is_constant():
        return BehavedReport(u, l, False, (), (), note="constant: empty zero divisor")
    witnesses, excluded = [], []
    for P, v in principal_divisor(u):
        if v <= 0:
            continue
        if v % l == 0:
            excluded.append((P, v, MULT_DIV_L))
        elif P.degree % l == 0:
            excluded.append((P, v, DEGREE_DIV_L))
        else:
            witnesses.append((P, v))
    return BehavedReport(u, l, bool(witnesses), tuple(witnesses), tuple(excluded))


def behaved_factor(u, l):
    return Divisor(is_l_behaved(u, l).witnesses)


def _require_behaved(u, l):
    rep = is_l_behaved(u, l)
    if not rep.is_behaved:
        raise NotBehaved(f"{u} is not {l}-behaved")
    return rep.witnesses


def round_order(v, k):
    """floor(v/k) for v >= 0, ceil(v/k) for v < 0."""
    return v // k if v >= 0 else -((-v) // k)


def ord_rounded(w, P, k):
    if k < 1:
        raise ValueError("k must be >= 1")
    return round_order(valuation(w, P), k)


def ints_member(w, u, l):
    """Valuation-only membership: ord_rounded(w, P, k_P) >= 0 at every place of z_b(u)."""
    zb = _require_behaved(u, l)
    if w.is_zero():
        return True
    return all(ord_rounded(w, P, k) >= 0 for P, k in zb)


def ord_at_zb(w, u, l):
    """The unique s with w/u^s and u^s/w both in Ints, or None if there is no unique one."""
    zb = _require_behaved(u, l)
    if w.is_zero():
        raise InfiniteValuation("ord_at_zb of zero")
    P0, k0 = zb[0]
    v0 = valuation(w, P0)
    candidates = sorted({v0 // k0, -((-v0) // k0)})
    found = [s for s in candidates if ints_member(w / u**s, u, l) and ints_member(u**s / w, u, l)]
    return found[0] if len(found) == 1 else None


def compute_h_w(w, u, l):
    if u.is_zero():
        raise ZeroDivisionError("h_w needs u != 0")
    return w**l / u + (u**l).inverse()


@dataclass
class HwRow:
    place: object
    k: int
    case: str  # "neg" when ord_rounded(w) < 0, else "nonneg"
    v_w: object  # None for w = 0
    v_h: int
    ord_h: int
    passed: bool
    unrounded_passed: bool

    def to_dict(self):
        return {
            "place": str(self.place),
            "k": self.k,
            "case": self.case,
            "v_w": self.v_w,
            "v_h": self.v_h,
            "ord_h": self.ord_h,
            "passed": self.passed,
            "unrounded_passed": self.unrounded_passed,
        }


@dataclass
class HwReport:
    w: RationalFunction
    u: RationalFunction
    l: int
    h_w: RationalFunction
    rows: list = dc_field(default_factory=list)

    @property
    def violations(self):
        return [r for r in self.rows if not r.passed]

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {"w": str(self.w), "u": str(self.u), "l": self.l, "h_w": str(self.h_w),
                "rows": [r.to_dict() for r in self.rows], "ok": self.ok}


def check_hw_identities(w, u, l):
    """Check the valuation of h_w at each place of z_b(u) against the case split on ord_rounded(w).

    If ord_rounded(w) < 0 the rounded order of h_w must be negative and not divisible by l;
    otherwise it must be divisible by l. Each row also records the unrounded
    statement ord_P(h_w) = l*ord_P(w) - k (not divisible by l) for the first case.
    """
    zb = _require_behaved(u, l)
    h = compute_h_w(w, u, l)
    rep = HwReport(w, u, l, h)
    for P, k in zb:
        if w.is_zero():
            v_w, case = None, "nonneg"
        else:
            v_w = valuation(w, P)
            case = "neg" if round_order(v_w, k) < 0 else "nonneg"
        if h.is_zero():
            rep.rows.append(HwRow(P, k, case, v_w, None, None, False, False))
            continue
        v_h = valuation(h, P)
        o = round_order(v_h, k)
        if case == "neg":
            passed = o < 0 and o % l != 0
            unrounded = v_h == l * v_w - k and v_h % l != 0
        else:
            passed = o % l == 0
            unrounded = passed
        rep.rows.append(HwRow(P, k, case, v_w, v_h, o, passed, unrounded))
    return rep
