"""Integer transition systems: model, text format, DOT/JSON output, graph utilities."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable

from .constraints import Atom, Conj, ParseError, parse_atom, prime

__all__ = [
    "Edge", "Its", "SccPart", "ItsError", "COST_VAR",
    "parse_its", "emit_its", "emit_dot", "to_json",
    "sccs", "scc_partition", "remove_non_reaching", "remove_terminating", "instrument_cost",
    "reachable_from",
]

COST_VAR = "__cost"


class ItsError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    formula: Conj
    name: str = ""

    def __str__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"{label}{self.src} -> {self.dst} {{ {self.formula} }}"


@dataclass(frozen=True)
class Its:
    vars: tuple
    entry: str
    edges: tuple = ()
    name: str = "its"
    nodes: tuple = field(default=())

    def __post_init__(self):
        seen = [self.entry]
        for n in self.nodes:
            if n not in seen:
                seen.append(n)
        for e in self.edges:
            for n in (e.src, e.dst):
                if n not in seen:
                    seen.append(n)
        object.__setattr__(self, "nodes", tuple(seen))
        for e in self.edges:
            if e.dst == self.entry:
                raise ItsError(f"entry node {self.entry} has an incoming edge")
        allowed = set(self.vars) | {prime(v) for v in self.vars}
        for e in self.edges:
            extra = e.formula.vars - allowed
            if extra:
                raise ItsError(f"edge {e.src}->{e.dst} mentions undeclared {sorted(extra)}")

    @staticmethod
    def build(vars: Iterable[str], entry: str, edges: Iterable[tuple], name="its") -> "Its":
        """Convenience constructor; ``edges`` holds ``(src, dst, formula)`` triples.

        Edges are named ``t0, t1, ...`` in order.
        """
        es = tuple(Edge(s, d, f, f"t{i}") for i, (s, d, f) in enumerate(edges))
        return Its(tuple(vars), entry, es, name)

    def out_edges(self, n: str) -> list:
        return [e for e in self.edges if e.src == n]

    def in_edges(self, n: str) -> list:
        return [e for e in self.edges if e.dst == n]

    def successors(self) -> dict:
        succ = {n: [] for n in self.nodes}
        for e in self.edges:
            if e.dst not in succ[e.src]:
                succ[e.src].append(e.dst)
        return succ

    def with_edges(self, edges: Iterable[Edge], keep_nodes: Iterable[str] = ()) -> "Its":
        return replace(self, edges=tuple(edges), nodes=tuple(keep_nodes))


@dataclass(frozen=True)
class SccPart:
    nodes: tuple
    edges: tuple
    trivial: bool


# --------------------------------------------------------------------------
# text format

_LEX = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<punct>[{};,])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<other>.)
""", re.X)


def _lex(text: str):
    line, col = 1, 1
    toks = []
    for m in _LEX.finditer(text):
        kind = m.lastgroup
        s = m.group(0)
        if kind != "ws":
            toks.append((kind, s, line, col, m.start()))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
    return toks


def parse_its(text) -> Its:
    """Parse the ``its NAME { vars ...; entry N; edge A -> B { atoms }; ... }`` format."""
    if isinstance(text, bytes):
        text = text.decode()
    toks = _lex(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("eof", "", _eof_line(text), 1, len(text))

    def expect(value=None, kind=None):
        nonlocal pos
        tok = peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, got {tok[1] or 'end of input'!r}", tok[2], tok[3])
        pos += 1
        return tok

    expect("its")
    name = expect(kind="word")[1]
    expect("{")
    expect("vars")
    vars_ = []
    while peek()[0] == "word":
        vars_.append(expect(kind="word")[1])
    if not vars_:
        tok = peek()
        raise ParseError("expected at least one variable", tok[2], tok[3])
    if len(set(vars_)) != len(vars_):
        raise ParseError("duplicate variable", toks[pos - 1][2], toks[pos - 1][3])
    expect(";")
    expect("entry")
    entry = expect(kind="word")[1]
    expect(";")
    declared = set(vars_) | {prime(v) for v in vars_}
    edges = []
    while peek()[1] == "edge":
        expect("edge")
        src = expect(kind="word")[1]
        expect(kind="arrow")
        dtok = expect(kind="word")
        dst = dtok[1]
        if dst == entry:
            raise ParseError(f"edge into entry node {entry}", dtok[2], dtok[3])
        open_tok = expect("{")
        # atom text runs up to the matching '}'
        start = open_tok[4] + 1
        while peek()[1] != "}" and peek()[0] != "eof":
            pos += 1
        close_tok = expect("}")
        body = text[start:close_tok[4]]
        atoms = []
        offset = start
        for part in body.split(","):
            if part.strip():
                line, col = _position(text, offset + len(part) - len(part.lstrip()))
                try:
                    a = parse_atom(part)
                except ParseError as exc:
                    raise ParseError(str(exc).split(": ", 1)[1], line, col) from None
                bad = a.vars - declared
                if bad:
                    raise ParseError(f"undeclared variable {sorted(bad)[0]!r}", line, col)
                atoms.append(a)
            offset += len(part) + 1
        expect(";")
        edges.append((src, dst, Conj.of(atoms)))
    expect("}")
    if pos != len(toks):
        tok = peek()
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
    try:
        return Its.build(vars_, entry, edges, name)
    except ItsError as exc:
        raise ParseError(str(exc)) from None


def _eof_line(text):
    return text.count("\n") + 1


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def emit_its(t: Its) -> bytes:
    lines = [f"its {t.name} {{", f"  vars {' '.join(t.vars)} ;", f"  entry {t.entry} ;"]
    for e in t.edges:
        body = ", ".join(str(a) for a in e.formula.atoms)
        lines.append(f"  edge {e.src} -> {e.dst} {{ {body} }} ;" if body
                     else f"  edge {e.src} -> {e.dst} {{ }} ;")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def _dot_id(n: str) -> str:
    return '"' + n.replace('"', r'\"') + '"'


def emit_dot(t: Its) -> bytes:
    lines = [f"digraph {_dot_id(t.name)} {{"]
    for n in t.nodes:
        attrs = ' [style=filled, fillcolor=green]' if n == t.entry else ""
        lines.append(f"  {_dot_id(n)}{attrs};")
    for e in t.edges:
        label = str(e.formula).replace('"', r'\"')
        lines.append(f'  {_dot_id(e.src)} -> {_dot_id(e.dst)} [label="{label}"];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def to_json(t: Its) -> dict:
    return {
        "name": t.name,
        "vars": list(t.vars),
        "entry": t.entry,
        "nodes": list(t.nodes),
        "edges": [{"name": e.name, "src": e.src, "dst": e.dst,
                   "atoms": [str(a) for a in e.formula.atoms]} for e in t.edges],
    }


def dump_json(t: Its) -> bytes:
    return (json.dumps(to_json(t), indent=2) + "\n").encode()


# --------------------------------------------------------------------------
# graph utilities

def sccs(t: Its) -> list:
    """Tarjan's algorithm; components come out in reverse topological order."""
    return scc_partition(t.nodes, t.edges)


def scc_partition(nodes: Iterable[str], edges: Iterable[Edge]) -> list:
    """SCCs of an arbitrary node/edge collection, in reverse topological order."""
    nodes = tuple(nodes)
    edges = tuple(edges)
    succ = {n: [] for n in nodes}
    for e in edges:
        for n in (e.src, e.dst):
            if n not in succ:
                succ[n] = []
                nodes += (n,)
        if e.dst not in succ[e.src]:
            succ[e.src].append(e.dst)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        # iterative Tarjan to avoid recursion limits
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            children = succ[v]
            while i < len(children):
                w = children[i]
                i += 1
                if w not in index:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    order = {n: k for k, n in enumerate(nodes)}
    parts = []
    for comp in comps:
        members = tuple(sorted(comp, key=order.__getitem__))
        mset = set(members)
        inner = tuple(e for e in edges if e.src in mset and e.dst in mset)
        parts.append(SccPart(members, inner, trivial=not inner))
    return parts


def reachable_from(t: Its, start: Iterable[str], backwards: bool = False) -> set:
    adj = {n: set() for n in t.nodes}
    for e in t.edges:
        if backwards:
            adj[e.dst].add(e.src)
        else:
            adj[e.src].add(e.dst)
    seen = set(start)
    todo = list(seen)
    while todo:
        n = todo.pop()
        for m in adj.get(n, ()):
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return seen


def _restrict(t: Its, alive: set) -> Its:
    alive = set(alive) | {t.entry}
    edges = [e for e in t.edges if e.src in alive and e.dst in alive]
    nodes = [n for n in t.nodes if n in alive]
    return replace(t, edges=tuple(edges), nodes=tuple(nodes))


def remove_non_reaching(t: Its, keep: Iterable[str]) -> Its:
    """Drop nodes from which no node of ``keep`` is reachable (entry always stays)."""
    keep = set(keep) & set(t.nodes)
    return _restrict(t, reachable_from(t, keep, backwards=True))


def remove_terminating(t: Its, keep: Iterable[str]) -> Its:
    """Keep only the nodes in ``keep`` (plus the entry) and edges between them."""
    return _restrict(t, set(keep) & set(t.nodes))


def instrument_cost(t: Its, var: str = COST_VAR) -> Its:
    """Add a step counter that starts at 0 and grows by 1 on every edge."""
    if var in t.vars:
        raise ItsError(f"variable {var} already present")
    tick = Atom.make({prime(var): 1, var: -1}, -1, "=")
    start = Atom.make({var: 1}, 0, "=")
    edges = []
    for e in t.edges:
        extra = [tick, start] if e.src == t.entry else [tick]
        edges.append(replace(e, formula=Conj.of(e.formula.atoms + tuple(extra))))
    return replace(t, vars=t.vars + (var,), edges=tuple(edges))
