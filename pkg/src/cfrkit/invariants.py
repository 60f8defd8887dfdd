"""Polyhedral forward invariants, edge annotation and unreachable-node pruning."""
from __future__ import annotations

from collections import deque
from dataclasses import replace

from .chc import its_to_chc, loop_heads
from .constraints import (FALSE, TRUE, Conj, entails, hull, is_sat, prime,
                          project, remove_redundant, rename, tighten, widen)
from .its import Its, reachable_from

__all__ = ["compute_invariants", "annotate", "prune_unreachable", "post",
           "WIDEN_DELAY"]

WIDEN_DELAY = 3


def post(inv: Conj, formula: Conj, vars_) -> Conj:
    """Image of ``inv`` under an edge formula, over the unprimed variables.

    States are integers, so the transition is tightened before projection and
    the image after it (both steps keep every integer solution).
    """
    f = tighten(inv & formula)
    if not is_sat(f):
        return FALSE
    primed = [prime(v) for v in vars_]
    img = tighten(rename(project(f, primed), {prime(v): v for v in vars_}))
    return img if is_sat(img) else FALSE


def _join(a: Conj, b: Conj) -> Conj:
    if not is_sat(a):
        return b
    if not is_sat(b):
        return a
    return hull(a, b)


def _thresholds(t: Its) -> dict:
    """Per node: atoms of incoming-edge postconditions and outgoing guards."""
    out = {n: [] for n in t.nodes}
    for e in t.edges:
        if is_sat(e.formula):
            out[e.src].extend(project(e.formula, t.vars).atoms)
            out[e.dst].extend(post(TRUE, e.formula, t.vars).atoms)
    return {n: list(dict.fromkeys(atoms)) for n, atoms in out.items()}


def compute_invariants(t: Its, entry_ctx: Conj = TRUE, delay: int = WIDEN_DELAY) -> dict:
    """Node map of convex invariants; unreachable nodes map to ``false``."""
    inv = {n: FALSE for n in t.nodes}
    inv[t.entry] = entry_ctx
    heads = loop_heads(its_to_chc(t))
    thresholds = _thresholds(t)
    updates = {n: 0 for n in t.nodes}
    out_edges = {n: t.out_edges(n) for n in t.nodes}
    work = deque([t.entry])
    queued = {t.entry}
    while work:
        n = work.popleft()
        queued.discard(n)
        if not is_sat(inv[n]):
            continue
        for e in out_edges[n]:
            new = post(inv[n], e.formula, t.vars)
            if not is_sat(new) or entails(new, inv[e.dst]):
                continue
            old = inv[e.dst]
            joined = _join(old, new)
            updates[e.dst] += 1
            if e.dst in heads and updates[e.dst] > delay and is_sat(old):
                widened = widen(old, joined)
                keep = [a for a in thresholds[e.dst]
                        if entails(old, Conj.of([a])) and entails(joined, Conj.of([a]))]
                joined = widened & Conj.of(keep)
            inv[e.dst] = remove_redundant(joined)
            if e.dst not in queued:
                work.append(e.dst)
                queued.add(e.dst)

    # one descending (narrowing) pass, computed simultaneously from the post-fixpoint
    narrowed = {}
    for n in t.nodes:
        if n == t.entry:
            narrowed[n] = inv[n]
            continue
        acc = FALSE
        for e in t.in_edges(n):
            acc = _join(acc, post(inv[e.src], e.formula, t.vars))
        narrowed[n] = remove_redundant(acc) if is_sat(acc) else FALSE
    return narrowed


def annotate(t: Its, m: dict) -> Its:
    """Conjoin each edge formula with the invariant of its source node."""
    edges = []
    for e in t.edges:
        inv = m.get(e.src, TRUE)
        if inv.is_true:
            edges.append(e)
        else:
            f = e.formula & inv
            edges.append(replace(e, formula=remove_redundant(f) if is_sat(f) else FALSE))
    return replace(t, edges=tuple(edges))


def prune_unreachable(t: Its, m: dict) -> Its:
    """Drop nodes with unsatisfiable invariants, dead edges and graph-unreachable nodes."""
    dead = {n for n in t.nodes if n != t.entry and not is_sat(m.get(n, TRUE))}
    edges = [e for e in t.edges
             if e.src not in dead and e.dst not in dead
             and is_sat(m.get(e.src, TRUE) & e.formula)]
    pruned = replace(t, edges=tuple(edges), nodes=tuple(n for n in t.nodes if n not in dead))
    live = reachable_from(pruned, [t.entry])
    return replace(pruned,
                   edges=tuple(e for e in pruned.edges if e.src in live),
                   nodes=tuple(n for n in pruned.nodes if n in live))
