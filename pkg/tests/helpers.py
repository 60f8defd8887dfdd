"""Shared helpers for the test suite."""
from __future__ import annotations

from collections import Counter
from pathlib import Path

import networkx as nx

from cfrkit.constraints import entails, tighten
from cfrkit.its import Its, parse_its, sccs

ROOT = Path(__file__).resolve().parent.parent
PROGRAMS = ROOT / "programs"
GOLDEN = Path(__file__).resolve().parent / "golden"


def load(name: str) -> Its:
    path = PROGRAMS / f"{name}.its"
    if not path.exists():
        path = GOLDEN / f"{name}.its"
    return parse_its(path.read_text())


def int_equivalent(f, g) -> bool:
    """Solution equivalence over the integers (both sides tightened)."""
    a, b = tighten(f), tighten(g)
    return entails(a, b) and entails(b, a)


def _graph(t: Its) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    for n in t.nodes:
        g.add_node(n, entry=(n == t.entry))
    for e in t.edges:
        g.add_edge(e.src, e.dst, formula=e.formula)
    return g


def _edges_match(d1: dict, d2: dict) -> bool:
    f1 = [d["formula"] for d in d1.values()]
    f2 = [d["formula"] for d in d2.values()]
    if len(f1) != len(f2):
        return False
    used = set()
    for f in f1:
        hit = next((j for j, h in enumerate(f2) if j not in used and int_equivalent(f, h)), None)
        if hit is None:
            return False
        used.add(hit)
    return True


def isomorphic(a: Its, b: Its, formulas: bool = True) -> bool:
    """Graph isomorphism fixing the entry; optionally edge formulas must be
    solution-equivalent (integer semantics)."""
    if a.vars != b.vars and formulas:
        return False
    gm = nx.algorithms.isomorphism.MultiDiGraphMatcher(
        _graph(a), _graph(b),
        node_match=lambda x, y: x["entry"] == y["entry"],
        edge_match=_edges_match if formulas else None)
    return gm.is_isomorphic()


def nontrivial_sccs(t: Its) -> list:
    return [s for s in sccs(t) if not s.trivial]


def scc_shape(t: Its) -> Counter:
    """Multiset of (#nodes, #edges) of the nontrivial SCCs."""
    return Counter((len(s.nodes), len(s.edges)) for s in nontrivial_sccs(t))
