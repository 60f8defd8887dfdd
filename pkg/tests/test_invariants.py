import numpy as np

from cfrkit.constraints import FALSE, TRUE, entails, is_sat, parse_conj, tighten
from cfrkit.gen import random_its
from cfrkit.interp import BoxInterpreter
from cfrkit.invariants import annotate, compute_invariants, post, prune_unreachable
from cfrkit.its import Its
from helpers import load


def test_phases1_exit_invariant():
    inv = compute_invariants(load("phases1"))
    assert entails(inv["n3"], parse_conj("x <= 0"))
    assert inv["n0"].is_true


def test_counting_loop_stabilises_with_thresholds():
    t = Its.build(("x",), "n0", [
        ("n0", "n1", parse_conj("x' = 0")),
        ("n1", "n1", parse_conj("x < 10, x' = x + 1")),
        ("n1", "n2", parse_conj("x >= 10, x' = x")),
    ])
    inv = compute_invariants(t)
    # rational invariants; compare over the integers
    assert entails(tighten(inv["n1"]), parse_conj("x >= 0, x <= 10"))
    assert entails(tighten(inv["n2"]), parse_conj("x = 10"))


def test_unreachable_nodes_are_false_and_pruned():
    t = Its.build(("x",), "n0", [
        ("n0", "n1", parse_conj("x' = 0")),
        ("n1", "n2", parse_conj("x > 0, x' = x")),
        ("n2", "n3", parse_conj("x' = x")),
    ])
    inv = compute_invariants(t)
    assert not is_sat(inv["n2"]) and not is_sat(inv["n3"])
    pruned = prune_unreachable(t, inv)
    assert set(pruned.nodes) == {"n0", "n1"}
    assert [(e.src, e.dst) for e in pruned.edges] == [("n0", "n1")]


def test_post_image():
    assert post(parse_conj("x >= 0"), parse_conj("x' = x + 1"), ("x",)) == parse_conj("x >= 1")
    assert post(parse_conj("x >= 0"), parse_conj("x < 0, x' = x"), ("x",)) == FALSE


def test_annotate_conjoins_source_invariant():
    t = load("phases1")
    a = annotate(t, {"n2": parse_conj("x > 0")})
    for e in a.edges:
        if e.src == "n2":
            assert entails(e.formula, parse_conj("x > 0"))


def test_invariants_sound_on_random_programs():
    """Every concretely reachable state (box interpreter, 6 steps) satisfies
    the computed invariant of its node."""
    rng = np.random.default_rng(17)
    for _ in range(40):
        t = random_its(rng, n_nodes=4)
        inv = compute_invariants(t)
        it = BoxInterpreter(t, box=2)
        frontier = {(t.entry, tuple(int(v) for v in s)) for s in it.initial_states()}
        for _ in range(6):
            nxt = set()
            for node, s in frontier:
                assert inv[node].holds(dict(zip(t.vars, s))), (node, s, str(inv[node]))
                for _, dst, s2 in it.step(node, s):
                    nxt.add((dst, s2))
            frontier = nxt
