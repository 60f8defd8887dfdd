"""Hypothesis strategies for constraints."""
from hypothesis import strategies as st

from cfrkit.constraints import Atom, Conj

VARS = ("x", "y", "z")
RELS = (">=", ">", "=", "<=", "<")


@st.composite
def atoms(draw, vars_=VARS, coef=5, rels=RELS):
    coeffs = draw(st.fixed_dictionaries({v: st.integers(-coef, coef) for v in vars_}))
    if not any(coeffs.values()):
        coeffs[draw(st.sampled_from(vars_))] = draw(st.sampled_from([-1, 1]))
    const = draw(st.integers(-coef, coef))
    rel = draw(st.sampled_from(rels))
    return Atom.make(coeffs, const, rel)


@st.composite
def conjs(draw, vars_=VARS, coef=5, min_size=1, max_size=4, rels=RELS):
    items = draw(st.lists(atoms(vars_, coef, rels), min_size=min_size, max_size=max_size))
    return Conj.of(items)
