"""Property inference for loop-head predicates.

A property map sends a predicate name to a tuple of conjunctions over the
program variables; ``true`` is never stored and entries are deduplicated up to
mutual entailment.
"""
from __future__ import annotations

import math
import re
from typing import Iterable, Optional

from .chc import ChcProgram, Clause, loop_heads
from .constraints import (Atom, Conj, ParseError, entails, hull, is_sat,
                          parse_conj, prime, project, rename, tighten,
                          var_bound)

__all__ = ["props_h", "props_hv", "props_c", "props_cv", "props_dh", "answers",
           "merge", "parse_user_props", "infer_properties", "dedup",
           "HEURISTICS", "ANSWER_CAP"]

HEURISTICS = ("h", "hv", "c", "cv", "dh")
ANSWER_CAP = 16


def dedup(props: Iterable[Conj]) -> tuple:
    """Drop ``true`` and anything equivalent to an earlier entry."""
    out = []
    for p in props:
        if p.is_true:
            continue
        if any(entails(p, q) and entails(q, p) for q in out):
            continue
        out.append(p)
    return tuple(out)


def _unprime_map(vars_):
    return {prime(v): v for v in vars_}


def props_h(p: ChcProgram, q: str) -> tuple:
    """Outgoing conditions: each defining clause projected onto the arguments."""
    return dedup(project(c.constraint, p.vars) for c in p.defining(q)
                 if is_sat(c.constraint))


def props_c(p: ChcProgram, q: str) -> tuple:
    """Incoming conditions: each calling clause projected onto the call arguments."""
    primed = [prime(v) for v in p.vars]
    out = []
    for c in p.calling(q):
        if is_sat(c.constraint):
            out.append(rename(project(c.constraint, primed), _unprime_map(p.vars)))
    return dedup(out)


def _bounds(f: Conj, targets, rename_to) -> list:
    """Integer bounds ``v <= c`` / ``v >= c`` entailed by ``f`` for each target."""
    g = tighten(f)
    if not is_sat(g):
        return []
    out = []
    for v, name in zip(targets, rename_to):
        hi = var_bound(g, v, "upper")
        if hi is not None:
            out.append(Conj.of([Atom.make({name: 1}, -math.floor(hi), "<=")]))
        lo = var_bound(g, v, "lower")
        if lo is not None:
            out.append(Conj.of([Atom.make({name: 1}, -math.ceil(lo), ">=")]))
    return out


def props_hv(p: ChcProgram, q: str) -> tuple:
    out = []
    for c in p.defining(q):
        out.extend(_bounds(c.constraint, p.vars, p.vars))
    return dedup(out)


def props_cv(p: ChcProgram, q: str) -> tuple:
    out = []
    for c in p.calling(q):
        out.extend(_bounds(c.constraint, [prime(v) for v in p.vars], p.vars))
    return dedup(out)


def _cap(items: list, cap: int) -> list:
    while len(items) > cap:
        best = None
        for i in range(len(items)):
            si = set(items[i].atoms)
            for j in range(i + 1, len(items)):
                d = len(si ^ set(items[j].atoms))
                if best is None or d < best[0]:
                    best = (d, i, j)
        _, i, j = best
        merged = hull(items[i], items[j])
        items = [x for k, x in enumerate(items) if k not in (i, j)] + [merged]
        items = list(dedup(items)) if all(not x.is_true for x in items) else items
    return items


def answers(p: ChcProgram, cap: int = ANSWER_CAP) -> dict:
    """Bottom-up answers of ``p`` after cutting every call to a loop head.

    Returns a map from predicate to a list of answer constraints over the
    arguments.  Raises ``RuntimeError`` if recursion survives the cut.
    """
    heads = loop_heads(p)
    clauses = [Clause(c.head, c.constraint, None if c.call in heads else c.call, c.label)
               for c in p.clauses]
    defs = {q: [] for q in p.preds}
    for c in clauses:
        defs[c.head].append(c)
    primed = {v: prime(v) for v in p.vars}
    memo: dict = {}
    active = set()

    def solve(q):
        if q in memo:
            return memo[q]
        if q in active:
            raise RuntimeError(f"recursion through {q} after removing back edges")
        active.add(q)
        out = []
        for c in defs[q]:
            if c.call is None:
                envs = [c.constraint]
            else:
                envs = [c.constraint & rename(psi, primed) for psi in solve(c.call)]
            for env in envs:
                if is_sat(env):
                    out.append(project(env, p.vars))
        active.discard(q)
        res = _cap(_dedup_keep_true(out), cap)
        memo[q] = res
        return res

    for q in p.preds:
        solve(q)
    return memo


def _dedup_keep_true(items):
    out = []
    for p in items:
        if any(entails(p, q) and entails(q, p) for q in out):
            continue
        out.append(p)
    return out


def props_dh(p: ChcProgram, cap: int = ANSWER_CAP) -> dict:
    """Loop-head properties from the answers of the back-edge-free program.

    Each answer is split into its atoms.
    """
    ans = answers(p, cap)
    out = {}
    for q in loop_heads(p):
        atoms = []
        for a in ans.get(q, []):
            atoms.extend(Conj.of([atom]) for atom in a.atoms)
        out[q] = dedup(atoms)
    return out


def merge(maps: Iterable[dict]) -> dict:
    out: dict = {}
    for m in maps:
        for q, props in m.items():
            out[q] = dedup(tuple(out.get(q, ())) + tuple(props))
    return out


_BLOCK = re.compile(r"props\s+([A-Za-z_][A-Za-z0-9_]*)\s*\{([^}]*)\}", re.S)


def parse_user_props(text: str, known: Optional[Iterable[str]] = None) -> dict:
    """Parse ``props NODE { conj ; conj ; ... }`` blocks."""
    text = re.sub(r"#[^\n]*", "", text)
    known = set(known) if known is not None else None
    out: dict = {}
    pos = 0
    for m in _BLOCK.finditer(text):
        if text[pos:m.start()].strip():
            raise ParseError(f"unexpected text {text[pos:m.start()].strip()[:20]!r}")
        pos = m.end()
        node = m.group(1)
        if known is not None and node not in known:
            raise ValueError(f"unknown node {node!r} in property file")
        conjs = [parse_conj(part) for part in m.group(2).split(";") if part.strip()]
        out[node] = dedup(tuple(out.get(node, ())) + tuple(conjs))
    if text[pos:].strip():
        raise ParseError(f"unexpected text {text[pos:].strip()[:20]!r}")
    return out


def infer_properties(p: ChcProgram, heuristics: Iterable[str],
                     nodes: Optional[Iterable[str]] = None,
                     user: Optional[dict] = None) -> dict:
    """Properties for every loop head (restricted to ``nodes`` when given)."""
    heads = [q for q in p.preds if q in loop_heads(p)]
    if nodes is not None:
        allowed = set(nodes)
        heads = [q for q in heads if q in allowed]
    heuristics = list(heuristics)
    for h in heuristics:
        if h not in HEURISTICS:
            raise ValueError(f"unknown property heuristic {h!r}")
    dh = props_dh(p) if "dh" in heuristics else {}
    single = {"h": props_h, "hv": props_hv, "c": props_c, "cv": props_cv}
    out = {}
    for q in heads:
        props = []
        for h in heuristics:
            if h == "dh":
                props.extend(dh.get(q, ()))
            else:
                props.extend(single[h](p, q))
        out[q] = dedup(props)
    if user:
        for q, props in user.items():
            if nodes is None or q in set(nodes):
                out[q] = dedup(tuple(out.get(q, ())) + tuple(props))
    return out
