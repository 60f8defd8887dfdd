import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfrkit.chc import chc_to_its, its_to_chc, loop_heads
from cfrkit.constraints import TRUE, entails, parse_conj
from cfrkit.gen import random_its
from cfrkit.interp import TraceLimit, cost_multiset, strip_version, trace_set
from cfrkit.its import COST_VAR, instrument_cost
from cfrkit.pe import (PeConfig, PeOptions, Version, abstract_ctx, pe_pipeline, pe_run,
                       unfold)
from helpers import isomorphic, load, nontrivial_sccs, scc_shape
from strategies import conjs

PSI = tuple(parse_conj(s) for s in ["x > 0", "y < z", "y >= z"])


def test_alpha_examples():
    assert abstract_ctx(parse_conj("x > 0"), PSI) == parse_conj("x > 0")
    assert abstract_ctx(parse_conj("x > -1, y >= z"), PSI) == parse_conj("y >= z")


@settings(max_examples=100, deadline=None)
@given(conjs(), st.lists(conjs(max_size=2), max_size=4))
def test_alpha_sound_idempotent(ctx, props):
    a = abstract_ctx(ctx, props, integer=False)
    assert entails(ctx, a)
    assert abstract_ctx(a, props, integer=False) == a


@settings(max_examples=100, deadline=None)
@given(conjs(), conjs(max_size=2), st.lists(conjs(max_size=2), max_size=4))
def test_alpha_monotone(c1, extra, props):
    c2 = c1 & extra  # c2 |= c1
    assert entails(abstract_ctx(c2, props, integer=False), abstract_ctx(c1, props, integer=False))


def test_unfold_examples():
    p = its_to_chc(load("phases1"))
    heads = loop_heads(p)
    cl = unfold(Version("n2", parse_conj("x > 0")), p, heads)
    assert len(cl) == 2 and all(c.call == "n1" for c in cl)
    assert unfold(Version("n3", parse_conj("x <= 0")), p, heads) == []


def test_ex2_iterations():
    p = its_to_chc(load("phases1"))
    r = pe_run(p, PeConfig(props={"n1": PSI}))
    got = [[(v.tag, v.ctx) for v in it] for it in r.iterations]
    want = [[("n1__3", "true")],
            [("n2__2", "x > 0"), ("n3__2", "x <= 0")],
            [("n1__2", "x > 0"), ("n1__1", "y >= z")],
            [("n2__1", "x > 0, y >= z"), ("n3__1", "x <= 0, y >= z")],
            []]
    assert len(got) == len(want)
    for g, w in zip(got, want):
        assert [t for t, _ in g] == [t for t, _ in w]
        for (_, c), (_, cw) in zip(g, w):
            c2 = parse_conj(cw)
            assert entails(c, c2) and entails(c2, c)
    assert len(r.program.clauses) == 9
    assert r.program.entry == "n0"
    assert isomorphic(chc_to_its(r.program), load("phases1_pe"))


def test_version_bound():
    rng = np.random.default_rng(5)
    for _ in range(30):
        t = random_its(rng, n_nodes=4)
        p = its_to_chc(t)
        props = {q: tuple(parse_conj(s) for s in ["x > 0", "y >= x"]) for q in loop_heads(p)}
        r = pe_run(p, PeConfig(props=props))
        for q in loop_heads(p):
            assert sum(1 for v in r.versions.values() if v.pred == q) <= 4


def test_empty_props_collapse():
    t = load("phases1")
    out = pe_pipeline(t, PeOptions(heuristics=()))
    # one version per loop head: same graph modulo renaming
    assert isomorphic(out, t, formulas=False)


def test_node_subset_empty_is_identity():
    t = load("search")
    out = pe_pipeline(t, PeOptions(heuristics=("c", "cv"), nodes=()))
    assert isomorphic(out, t, formulas=False)


def test_randomwalk_cv_dh_two_z_sccs():
    out = pe_pipeline(load("randomwalk"), PeOptions(heuristics=("cv", "dh"), invariants="both"))
    parts = nontrivial_sccs(out)
    assert len(parts) == 2
    dec = parse_conj("z' = z - 1")
    for s in parts:
        assert any(entails(e.formula, dec) for e in s.edges)


def test_pe_config_validation():
    with pytest.raises(ValueError):
        PeConfig(unfold_limit=0)
    with pytest.raises(ValueError):
        PeOptions(invariants="sometimes")


def _bisim(t, opts, depth, box, window, limit):
    tc = instrument_cost(t)
    p = pe_pipeline(tc, opts)
    obs = {strip_version(n) for n in p.nodes} & set(tc.nodes)
    a = trace_set(tc, depth, box, window, COST_VAR, observe=obs, limit=limit)
    b = trace_set(p, depth, box, window, COST_VAR, observe=obs, limit=limit)
    exits = {n for n in tc.nodes if not tc.out_edges(n)}
    ca = cost_multiset(tc, depth, COST_VAR, box, window, exits)
    cb = cost_multiset(p, depth, COST_VAR, box, window, exits)
    return a == b and ca == cb


def test_bisimulation_spec_scale_sample():
    """Larger programs and boxes (up to 4 variables, 5 nodes, coefficients in
    [-3, 3], initial box [-5, 5]) on a small deterministic sample; depth 4."""
    rng = np.random.default_rng(2024)
    heur = [("dh", "c"), ("c", "cv"), ("h", "hv")]
    done = 0
    while done < 6:
        n_vars = int(rng.integers(2, 5))
        box = 5 if n_vars <= 2 else (2 if n_vars == 3 else 1)
        t = random_its(rng, n_vars=n_vars, n_nodes=5, coef=3, box=box, havoc_p=0.1)
        try:
            assert _bisim(t, PeOptions(heuristics=heur[done % 3]), 4, box, box, 200000)
        except TraceLimit:
            continue
        done += 1
