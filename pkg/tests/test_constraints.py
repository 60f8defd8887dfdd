from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings

from cfrkit.constraints import (FALSE, TRUE, Atom, Conj, ParseError, entails, equivalent,
                                hull, is_sat, parse_atom, parse_conj, parse_expr, prime,
                                project, remove_redundant, rename, tighten, unprime,
                                var_bound, widen)
from oracles import grid, mask
from strategies import VARS, conjs

PTS = grid(VARS, 6)


def sols(f):
    return mask(f, VARS, PTS)


# ---------------------------------------------------------------- parsing

def test_parse_and_normalise():
    a = parse_atom("2*x + 4 >= 2*y")
    assert a == Atom.make({"x": 1, "y": -1}, 2, ">=")
    assert parse_atom("x < y") == Atom.make({"y": 1, "x": -1}, 0, ">")
    assert parse_atom("x' = x - 1") == Atom.make({"x'": 1, "x": -1}, 1, "=")
    assert parse_expr("3*x - 2 + y") == ({"x": 3, "y": 1}, -2)


def test_parse_conj_and_errors():
    f = parse_conj("x > 0, y <= z")
    assert len(f) == 2
    assert parse_conj("true").is_true
    for bad in ["x >", "x >> 1", "x + * y >= 0", "x y >= 0"]:
        with pytest.raises(ParseError):
            parse_conj(bad)


def test_roundtrip_str():
    f = parse_conj("x > 0, y' = y + 1, 2*z <= x")
    assert parse_conj(str(f)) == f


def test_prime_unprime():
    assert prime("x") == "x'" and unprime("x'") == "x"


# ---------------------------------------------------------------- decisions

def test_is_sat_rational_not_integer():
    f = parse_conj("2*x = 1")
    assert is_sat(f)
    assert not is_sat(tighten(f))
    assert not is_sat(parse_conj("x > 0, 0 > x"))
    assert is_sat(TRUE) and not is_sat(FALSE)


def test_entails_examples():
    assert entails(parse_conj("x > -1, y >= z"), parse_conj("y >= z"))
    assert not entails(parse_conj("x > -1, y >= z"), parse_conj("x > 0"))
    assert entails(parse_conj("x >= 1"), parse_conj("x > 0"))
    assert not entails(parse_conj("x > 0"), parse_conj("x >= 1"))
    assert entails(tighten(parse_conj("x > 0")), parse_conj("x >= 1"))
    assert entails(FALSE, parse_conj("x > 5"))


def test_project_examples():
    f = parse_conj("x' = x + 1, x >= 0")
    p = project(f, ["x'"])
    assert equivalent(p, parse_conj("x' >= 1"))
    assert project(parse_conj("x > y, y > x"), ["x"]) == FALSE or not is_sat(
        project(parse_conj("x > y, y > x"), ["x"]))


def test_var_bound():
    f = parse_conj("x > 0, 2*x <= 7")
    assert var_bound(f, "x", "upper") == Fraction(7, 2)
    assert var_bound(f, "x", "lower") == 0
    assert var_bound(parse_conj("x > 0"), "x", "upper") is None
    with pytest.raises(ValueError):
        var_bound(FALSE, "x", "upper")


def test_rename_injective():
    f = parse_conj("x > y")
    assert rename(f, {"x": "z"}) == parse_conj("z > y")
    with pytest.raises(ValueError):
        rename(f, {"x": "w", "y": "w"})


def test_hull_and_widen_examples():
    h = hull(parse_conj("x = 0"), parse_conj("x = 2"))
    assert equivalent(h, parse_conj("x >= 0, x <= 2"))
    w = widen(parse_conj("x >= 0, x <= 1"), parse_conj("x >= 0, x <= 2"))
    assert equivalent(w, parse_conj("x >= 0"))


def test_tighten_examples():
    assert equivalent(tighten(parse_conj("2*x > 1")), parse_conj("x >= 1"))
    assert equivalent(tighten(parse_conj("x > 0, y < 3")), parse_conj("x >= 1, y <= 2"))


# ---------------------------------------------------------------- properties

@settings(max_examples=200, deadline=None)
@given(conjs())
def test_is_sat_sound_wrt_grid(f):
    if sols(f).any():
        assert is_sat(f)
    if not is_sat(f):
        assert not sols(f).any()


@settings(max_examples=200, deadline=None)
@given(conjs(), conjs(max_size=2))
def test_entails_sound_wrt_grid(f, g):
    if entails(f, g):
        assert not (sols(f) & ~sols(g)).any()


@settings(max_examples=150, deadline=None)
@given(conjs())
def test_project_sound_and_entailed(f):
    p = project(f, ["x", "y"])
    assert entails(f, p)
    m = sols(f)
    # every integer solution of f satisfies the projection
    assert mask(p, VARS, PTS)[m].all()


@settings(max_examples=100, deadline=None)
@given(conjs(), conjs())
def test_hull_upper_bound(f, g):
    h = hull(f, g)
    assert entails(f, h) and entails(g, h)


@settings(max_examples=100, deadline=None)
@given(conjs(), conjs())
def test_widen_upper_bound(f, g):
    assume(is_sat(f) and is_sat(g))
    g2 = hull(f, g)
    w = widen(f, g2)
    assert entails(f, w) and entails(g2, w)


@settings(max_examples=150, deadline=None)
@given(conjs())
def test_tighten_integer_equivalent(f):
    t = tighten(f)
    assert entails(t, f)
    assert (sols(t) == sols(f)).all()


@settings(max_examples=150, deadline=None)
@given(conjs())
def test_remove_redundant_equivalent(f):
    r = remove_redundant(f)
    if is_sat(f):
        assert equivalent(f, r)
        assert len(r) <= len(f)
    else:
        assert not is_sat(r)
