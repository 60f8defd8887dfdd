"""Linear constrained Horn clauses and their correspondence with ITSs.

All predicates of a program share the argument tuple ``vars``: a clause
``q(x) <- phi, r(x')`` stores ``phi`` over ``vars`` and their primed copies and
the call by predicate name only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .constraints import Conj, prime
from .its import Edge, Its

__all__ = ["Clause", "ChcProgram", "its_to_chc", "chc_to_its", "loop_heads",
           "call_graph", "dump_chc", "SINK"]

SINK = "__sink"


@dataclass(frozen=True)
class Clause:
    head: str
    constraint: Conj
    call: Optional[str] = None
    label: str = ""


@dataclass(frozen=True)
class ChcProgram:
    vars: tuple
    clauses: tuple
    entry: str
    preds: tuple = ()

    def __post_init__(self):
        seen = [self.entry]
        for p in self.preds:
            if p not in seen:
                seen.append(p)
        for c in self.clauses:
            for p in (c.head, c.call):
                if p is not None and p not in seen:
                    seen.append(p)
        object.__setattr__(self, "preds", tuple(seen))

    def defining(self, pred: str) -> list:
        return [c for c in self.clauses if c.head == pred]

    def calling(self, pred: str) -> list:
        return [c for c in self.clauses if c.call == pred]


def its_to_chc(t: Its) -> ChcProgram:
    clauses = tuple(Clause(e.src, e.formula, e.dst, e.name) for e in t.edges)
    return ChcProgram(tuple(t.vars), clauses, t.entry, tuple(t.nodes))


def call_graph(p: ChcProgram) -> dict:
    succ = {q: [] for q in p.preds}
    for c in p.clauses:
        if c.call is not None and c.call not in succ[c.head]:
            succ[c.head].append(c.call)
    return succ


def _reachable(p: ChcProgram) -> set:
    succ = call_graph(p)
    seen = {p.entry}
    todo = [p.entry]
    while todo:
        q = todo.pop()
        for r in succ[q]:
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def chc_to_its(p: ChcProgram, name: str = "its") -> Its:
    """One node per reachable predicate, one edge per clause.

    A clause without a call becomes an edge into a fresh sink node.
    """
    live = _reachable(p)
    edges = []
    for c in p.clauses:
        if c.head not in live:
            continue
        dst = c.call if c.call is not None else SINK
        edges.append(Edge(c.head, dst, c.constraint, f"t{len(edges)}"))
    nodes = tuple(q for q in p.preds if q in live)
    return Its(tuple(p.vars), p.entry, tuple(edges), name, nodes)


def loop_heads(p: ChcProgram) -> set:
    """Targets of back edges of a depth-first traversal from the entry.

    Successors are visited in clause declaration order; predicates not
    reachable from the entry are traversed afterwards in declaration order,
    so every cycle of the call graph contains a loop head.
    """
    succ = call_graph(p)
    heads = set()
    state = {}  # 1 = on stack, 2 = done
    for root in (p.entry,) + tuple(q for q in p.preds if q != p.entry):
        if root in state:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            q, it = stack[-1]
            for r in it:
                s = state.get(r)
                if s == 1:
                    heads.add(r)
                elif s is None:
                    state[r] = 1
                    stack.append((r, iter(succ[r])))
                    break
            else:
                state[q] = 2
                stack.pop()
    return heads


def _prolog_var(v: str) -> str:
    base = v.rstrip("'")
    name = base[:1].upper() + base[1:]
    return name + ("1" if v.endswith("'") else "")


def dump_chc(p: ChcProgram) -> str:
    """Prolog-flavoured rendering for debugging, e.g. ``qn1(X,Y) :- X>=1, qn2(X1,Y1).``"""
    args = ",".join(_prolog_var(v) for v in p.vars)
    cargs = ",".join(_prolog_var(prime(v)) for v in p.vars)
    lines = []
    for c in p.clauses:
        body = []
        for a in c.constraint.atoms:
            m = {v: _prolog_var(v) for v in a.vars}
            body.append(str(a.renamed(m)).replace(" ", ""))
        if c.call is not None:
            body.append(f"q{c.call}({cargs})")
        lines.append(f"q{c.head}({args}) :- {', '.join(body) or 'true'}.")
    return "\n".join(lines) + "\n"
