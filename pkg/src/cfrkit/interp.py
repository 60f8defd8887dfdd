"""Concrete bounded interpreter for ITSs, used as a test oracle.

Initial states range over the integer box ``[-box, box]^n``.  Successor
values of a primed variable fixed by an equality ``c*v' + (unprimed) = 0``
with ``c = +-1`` are computed directly; every other primed variable is
enumerated over ``[-window, window]``, which is complete whenever such
variables are bounded by the edge formula within the window (the random
generator in :mod:`cfrkit.gen` guarantees this).
"""
from __future__ import annotations

import itertools
from collections import Counter
from typing import Callable, Iterable, Optional

import numpy as np

from ._kernels import REL_EQ, REL_GE, REL_GT, satisfied_mask
from .constraints import prime
from .its import Its

__all__ = ["TraceLimit", "EdgeKernel", "BoxInterpreter", "trace_set", "cost_multiset", "strip_version"]

_REL = {">=": REL_GE, ">": REL_GT, "=": REL_EQ}


class TraceLimit(RuntimeError):
    """Raised when a bounded exploration exceeds its trace budget."""


def strip_version(name: str) -> str:
    """Original node of a PE version name (``n1__3`` -> ``n1``)."""
    while "__" in name.lstrip("_"):
        head, tail = name.rsplit("__", 1)
        if not tail.isdigit():
            break
        name = head
    return name


class EdgeKernel:
    """Vectorised successor computation for one edge formula."""

    def __init__(self, formula, vars_: tuple, window: int):
        n = len(vars_)
        idx = {v: i for i, v in enumerate(vars_)}
        pidx = {prime(v): i for i, v in enumerate(vars_)}
        atoms = list(formula.atoms)
        self.direct = {}   # primed index -> (coef vector over vars, const, divisor sign)
        for a in atoms:
            if a.rel != "=":
                continue
            primed = [(v, c) for v, c in a.coeffs if v in pidx]
            if len(primed) != 1 or abs(primed[0][1]) != 1:
                continue
            j = pidx[primed[0][0]]
            if j in self.direct:
                continue
            sign = primed[0][1]
            row = np.zeros(n, dtype=np.int64)
            for v, c in a.coeffs:
                if v in idx:
                    row[idx[v]] = -c * sign
            self.direct[j] = (row, -a.const * sign)
        self.free = [j for j in range(n) if j not in self.direct]
        self.n = n
        self.ax = np.zeros((len(atoms), n), dtype=np.int64)
        self.ap = np.zeros((len(atoms), n), dtype=np.int64)
        self.b = np.array([a.const for a in atoms], dtype=np.int64)
        self.rel = np.array([_REL[a.rel] for a in atoms], dtype=np.int64)
        for r, a in enumerate(atoms):
            for v, c in a.coeffs:
                if v in idx:
                    self.ax[r, idx[v]] = c
                else:
                    self.ap[r, pidx[v]] = c
        rng = range(-window, window + 1)
        cands = np.zeros((len(rng) ** len(self.free), n), dtype=np.int64)
        for k, combo in enumerate(itertools.product(rng, repeat=len(self.free))):
            for j, val in zip(self.free, combo):
                cands[k, j] = val
        self.cands = cands

    def successors(self, states: np.ndarray) -> list:
        """For each row of ``states`` the array of successor states."""
        k = states.shape[0]
        det = np.zeros((k, self.n), dtype=np.int64)
        for j, (row, const) in self.direct.items():
            det[:, j] = states @ row + const
        lx = states @ self.ax.T + det @ self.ap.T + self.b
        lp = self.cands @ self.ap.T
        mask = satisfied_mask(lx, lp, self.rel)
        out = []
        for i in range(k):
            sel = self.cands[mask[i]]
            out.append(sel + det[i])
        return out


class BoxInterpreter:
    def __init__(self, t: Its, box: int = 1, window: Optional[int] = None):
        self.t = t
        self.box = box
        self.window = box if window is None else window
        vars_ = tuple(t.vars)
        self.out = {n: [] for n in t.nodes}
        for e in t.edges:
            self.out[e.src].append((e, EdgeKernel(e.formula, vars_, self.window)))
        self._cache = {}

    def initial_states(self, fixed: Optional[dict] = None) -> np.ndarray:
        fixed = fixed or {}
        rng = range(-self.box, self.box + 1)
        free = [v for v in self.t.vars if v not in fixed]
        rows = []
        for combo in itertools.product(rng, repeat=len(free)):
            env = dict(zip(free, combo), **fixed)
            rows.append([env[v] for v in self.t.vars])
        return np.array(rows, dtype=np.int64).reshape(-1, len(self.t.vars))

    def step(self, node: str, state: tuple) -> list:
        """``[(edge, dst, successor state tuple), ...]`` (memoised)."""
        key = (node, state)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        arr = np.array([state], dtype=np.int64)
        res = []
        for e, kern in self.out[node]:
            for s in kern.successors(arr)[0].tolist():
                res.append((e, e.dst, tuple(s)))
        self._cache[key] = res
        return res


def trace_set(t: Its, depth: int, box: int = 1, window: Optional[int] = None,
              cost_var: Optional[str] = None, label: Callable = strip_version,
              observe: Optional[Iterable[str]] = None, limit: Optional[int] = None) -> set:
    """All observed trace prefixes of bounded length.

    A trace is a tuple of ``(label(node), state)`` for the visited nodes whose
    label is in ``observe`` (all nodes when ``None``).  Runs are bounded by
    ``depth`` steps, or by ``cost <= depth`` when ``cost_var`` is given (the
    cost variable then starts at 0).  ``TraceLimit`` is raised when more than
    ``limit`` traces are produced.
    """
    it = BoxInterpreter(t, box, window)
    observe = None if observe is None else set(observe)
    ci = t.vars.index(cost_var) if cost_var else None
    init = it.initial_states({cost_var: 0} if cost_var else None)
    out = set()

    def obs(node, state, trace):
        lab = label(node)
        if observe is None or lab in observe:
            trace = trace + ((lab, state),)
            out.add(trace)
            if limit is not None and len(out) > limit:
                raise TraceLimit(f"more than {limit} traces")
        return trace

    frontier = []
    for row in init:
        s = tuple(int(x) for x in row)
        frontier.append((t.entry, s, obs(t.entry, s, ()), 0))
    while frontier:
        nxt = []
        for node, s, trace, steps in frontier:
            for _, dst, s2 in it.step(node, s):
                used = s2[ci] if ci is not None else steps + 1
                if used > depth:
                    continue
                nxt.append((dst, s2, obs(dst, s2, trace), steps + 1))
        frontier = nxt
    return out


def cost_multiset(t: Its, depth: int, cost_var: str, box: int = 1,
                  window: Optional[int] = None, exits: Optional[Iterable[str]] = None,
                  label: Callable = strip_version) -> Counter:
    """Multiset of ``(exit label, final cost)`` over the distinct bounded runs
    that reach an exit.

    ``exits`` is a set of labels (default: the nodes of ``t`` without
    outgoing edges); pass the exits of the original program when comparing
    it with a refined one, since refinement may leave dead versions without
    outgoing edges.
    Runs are identified by initial state, exit label and final state, so the
    count does not depend on intermediate nodes removed by inlining.
    """
    it = BoxInterpreter(t, box, window)
    ci = t.vars.index(cost_var)
    exits = {n for n in t.nodes if not it.out[n]} if exits is None else set(exits)
    runs = set()
    frontier = set()
    for row in it.initial_states({cost_var: 0}):
        s = tuple(int(x) for x in row)
        frontier.add((t.entry, s, s))
    while frontier:
        nxt = set()
        for node, s, init in frontier:
            for _, dst, s2 in it.step(node, s):
                if s2[ci] > depth:
                    continue
                lab = label(dst)
                if lab in exits:
                    runs.add((init, lab, s2))
                nxt.add((dst, s2, init))
        frontier = nxt
    return Counter((lab, s[ci]) for _, lab, s in runs)
