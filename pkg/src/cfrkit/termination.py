"""Ranking-function synthesis (Farkas), the per-SCC prover, the refinement-driven termination driver and MLRF splitting."""
from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .constraints import (Atom, Conj, TRUE, entails, hull, is_sat, parse_expr,
                          prime, tighten, unprime)
from .its import (Edge, Its, SccPart, remove_non_reaching, remove_terminating,
                  scc_partition, sccs)
from .lp import OPTIMAL, maximize

__all__ = ["AffineFn", "RankCertificate", "TerminReport", "TerminOptions",
           "synth_lrf", "synth_mlrf", "termin_scc", "check_certificate",
           "build_its", "termin_cfg", "termin", "mlrf_split", "report_json",
           "scc_vars", "SccResult", "FRESH_ENTRY"]

FRESH_ENTRY = "__start"


# --------------------------------------------------------------------------
# affine functions

@dataclass(frozen=True)
class AffineFn:
    coeffs: tuple = ()          # sorted (var, Fraction), zero coefficients dropped
    const: Fraction = Fraction(0)

    @staticmethod
    def make(coeffs: Optional[dict] = None, const=0) -> "AffineFn":
        items = tuple(sorted((v, Fraction(c)) for v, c in (coeffs or {}).items() if c))
        return AffineFn(items, Fraction(const))

    @staticmethod
    def parse(text: str) -> "AffineFn":
        coeffs, const = parse_expr(text)
        return AffineFn.make(coeffs, const)

    @property
    def terms(self) -> dict:
        return dict(self.coeffs)

    def __call__(self, env: dict) -> Fraction:
        return self.const + sum((c * env[v] for v, c in self.coeffs), Fraction(0))

    def primed(self) -> dict:
        return {prime(v): c for v, c in self.coeffs}

    def scaled(self, k) -> "AffineFn":
        return AffineFn.make({v: c * k for v, c in self.coeffs}, self.const * k)

    def is_zero(self) -> bool:
        return not self.coeffs and self.const == 0

    def __str__(self) -> str:
        parts = []
        for v, c in self.coeffs:
            mag = abs(c)
            term = v if mag == 1 else f"{mag}*{v}"
            parts.append(("- " if c < 0 else "+ ") + term)
        if self.const or not parts:
            parts.append(("- " if self.const < 0 else "+ ") + str(abs(self.const)))
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


ZERO = AffineFn()


def _ge_atom(terms: dict, const, bound=0) -> Atom:
    """Atom ``terms + const >= bound``."""
    return Atom.make(terms, Fraction(const) - bound, ">=")


def _decrease_atom(f: AffineFn, g: AffineFn, delta) -> Atom:
    """``f(x) - g(x') >= delta``."""
    terms = dict(f.terms)
    for v, c in g.primed().items():
        terms[v] = terms.get(v, 0) - c
    return _ge_atom(terms, f.const - g.const, delta)


@dataclass(frozen=True)
class RankCertificate:
    per_node: dict                 # node -> tuple of AffineFn
    kind: str                      # lrf | llrf | mlrf
    strict_edges: tuple = ()       # per component: frozenset of edge names

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "per_node": [{"node": n, "fns": [str(f) for f in fs]}
                             for n, fs in self.per_node.items()],
                "strict_edges": [sorted(s) for s in self.strict_edges]}


# --------------------------------------------------------------------------
# Farkas encoding

def scc_vars(edges: Iterable[Edge]) -> tuple:
    vs = set()
    for e in edges:
        vs |= {unprime(v) for v in e.formula.vars}
    return tuple(sorted(vs))


@lru_cache(maxsize=8192)
def _edge_system(formula: Conj):
    """Integer-tightened formula as (inequalities, substitution) or None if unsat.

    Equalities are solved for one variable each (primed variables first) and
    substituted away; inequalities are ``(coeffs, const)`` meaning ``>= 0``.
    """
    f = tighten(formula)
    if not is_sat(f):
        return None
    eqs, ineqs = [], []
    for a in f.atoms:
        row = ({v: Fraction(c) for v, c in a.coeffs}, Fraction(a.const))
        if a.rel == "=":
            eqs.append(row)
        else:  # tighten removes every strict atom
            ineqs.append(row)
    subst = {}

    def apply(row, v, expr):
        coeffs, const = row
        c = coeffs.get(v)
        if not c:
            return row
        coeffs = dict(coeffs)
        del coeffs[v]
        for u, r in expr[0].items():
            coeffs[u] = coeffs.get(u, 0) + c * r
            if coeffs[u] == 0:
                del coeffs[u]
        return coeffs, const + c * expr[1]

    while eqs:
        coeffs, const = eqs.pop(0)
        if not coeffs:
            if const != 0:
                return None
            continue
        cands = sorted(coeffs, key=lambda v: (not v.endswith("'"), v))
        v = cands[0]
        c = coeffs[v]
        expr = ({u: -r / c for u, r in coeffs.items() if u != v}, -const / c)
        eqs = [apply(r, v, expr) for r in eqs]
        ineqs = [apply(r, v, expr) for r in ineqs]
        subst = {u: apply(e, v, expr) for u, e in subst.items()}
        subst[v] = expr
    ineqs = [r for r in ineqs if r[0] or r[1] < 0]
    if any(not r[0] for r in ineqs):
        return None
    return tuple(ineqs), subst


class _Lp:
    """Sparse LP builder on top of :func:`cfrkit.lp.maximize`."""

    def __init__(self):
        self.cols = {}
        self.nonneg = []
        self.eq = []
        self.ub = []

    def var(self, key, nonneg=False):
        if key not in self.cols:
            self.cols[key] = len(self.cols)
            if nonneg:
                self.nonneg.append(self.cols[key])
        return key

    def fresh(self, nonneg=True):
        return self.var(("_aux", len(self.cols)), nonneg)

    def add_eq(self, expr: dict, rhs=0):
        self.eq.append((expr, Fraction(rhs)))

    def add_le(self, expr: dict, rhs=0):
        self.ub.append((expr, Fraction(rhs)))

    def entails(self, system, target: dict, target_const: dict):
        """Require ``formula |= sum target[v]*v + target_const >= 0``.

        ``target`` maps program variables to linear expressions over LP
        columns; ``target_const`` is a linear expression whose key ``None``
        holds a numeric constant.
        """
        ineqs, subst = system
        target = {v: dict(e) for v, e in target.items()}
        t0 = dict(target_const)
        for v, (coeffs, const) in subst.items():
            tv = target.pop(v, None)
            if not tv:
                continue
            for u, r in coeffs.items():
                acc = target.setdefault(u, {})
                for k, c in tv.items():
                    acc[k] = acc.get(k, 0) + c * r
            for k, c in tv.items():
                t0[k] = t0.get(k, 0) + c * const
        lams = [self.fresh() for _ in ineqs]
        prog_vars = set(target)
        for coeffs, _ in ineqs:
            prog_vars |= set(coeffs)
        for u in sorted(prog_vars):
            row = {k: c for k, c in target.get(u, {}).items() if c}
            for lam, (coeffs, _) in zip(lams, ineqs):
                if coeffs.get(u):
                    row[lam] = row.get(lam, 0) - coeffs[u]
            if row:
                self.add_eq(row, 0)
        row = {k: -c for k, c in t0.items() if k is not None and c}
        for lam, (_, const) in zip(lams, ineqs):
            if const:
                row[lam] = row.get(lam, 0) + const
        self.add_le(row, t0.get(None, 0))

    def solve(self, objective: Optional[dict] = None):
        n = len(self.cols)

        def dense(expr):
            row = [0] * n
            for k, c in expr.items():
                row[self.cols[k]] += c
            return row

        c = dense(objective or {})
        res = maximize(c, [dense(e) for e, _ in self.ub], [b for _, b in self.ub],
                       [dense(e) for e, _ in self.eq], [b for _, b in self.eq],
                       self.nonneg)
        if res.status != OPTIMAL:
            return None
        return {k: res.x[i] for k, i in self.cols.items()}


def _fn_expr(node, vars_, primed=False, sign=1):
    """Target pieces for ``sign * f_node`` over x (or x')."""
    target = {}
    for v in vars_:
        target[prime(v) if primed else v] = {("a", node, v): Fraction(sign)}
    return target, {("a", node, None): Fraction(sign)}


def _merge_targets(*pieces):
    target, const = {}, {}
    for t, c in pieces:
        for v, e in t.items():
            acc = target.setdefault(v, {})
            for k, x in e.items():
                acc[k] = acc.get(k, 0) + x
        for k, x in c.items():
            const[k] = const.get(k, 0) + x
    return target, const


def _add_fns(lp, nodes, vars_, depth=1, minimize=True, phase_keys=None):
    objective = {}
    if phase_keys is None:
        phase_keys = depth > 1
    for d in range(depth):
        for n in nodes:
            key = (n, d) if phase_keys else n
            for v in list(vars_) + [None]:
                col = lp.var(("a", key, v))
                if minimize and v is not None:
                    u = lp.fresh()
                    lp.add_le({col: 1, u: -1})
                    lp.add_le({col: -1, u: -1})
                    objective[u] = -1
    return objective


def _extract(sol, nodes, vars_, key=lambda n: n):
    out = {}
    for n in nodes:
        out[n] = AffineFn.make({v: sol[("a", key(n), v)] for v in vars_},
                               sol[("a", key(n), None)])
    return out


def _lrf_lp(edges, nodes, vars_, strict: set, bounded: set):
    lp = _Lp()
    objective = _add_fns(lp, nodes, vars_)
    for e in edges:
        system = _edge_system(e.formula)
        if system is None:
            continue
        delta = 1 if e in strict else 0
        t, c = _merge_targets(_fn_expr(e.src, vars_), _fn_expr(e.dst, vars_, True, -1))
        c[None] = c.get(None, 0) - delta
        lp.entails(system, t, c)
        if e in bounded:
            t, c = _fn_expr(e.src, vars_)
            lp.entails(system, t, c)
    sol = lp.solve(objective)
    return None if sol is None else _extract(sol, nodes, vars_)


def synth_lrf(s: SccPart, mode: str = "strict_all", vars_: Optional[tuple] = None):
    """Per-node affine ranking functions for the SCC ``s``.

    ``strict_all``: every edge decreases by at least 1 with ``f_src >= 0``.
    ``quasi``: every edge is non-increasing and an inclusion-maximal set of
    edges (chosen greedily in declaration order) decreases by at least 1 with
    ``f_src >= 0``.  Returns ``(fns, strict_edge_set)`` or ``None``.
    """
    if mode not in ("strict_all", "quasi"):
        raise ValueError(f"unknown mode {mode!r}")
    vars_ = tuple(vars_) if vars_ is not None else scc_vars(s.edges)
    edges = list(s.edges)
    live = [e for e in edges if _edge_system(e.formula) is not None]
    all_live = set(live)
    fns = _lrf_lp(edges, s.nodes, vars_, all_live, all_live)
    if fns is not None:
        return fns, frozenset(edges)
    if mode == "strict_all":
        return None
    strict = set()
    for e in live:
        trial = strict | {e}
        if _lrf_lp(edges, s.nodes, vars_, trial, trial) is not None:
            strict = trial
    if not strict:
        return None
    fns = _lrf_lp(edges, s.nodes, vars_, strict, strict)
    dead = {e for e in edges if e not in all_live}
    return fns, frozenset(strict | dead)


def synth_mlrf(s: SccPart, depth: int, vars_: Optional[tuple] = None):
    """Nested multiphase ranking function of the given depth, or ``None``.

    On every edge: ``f1(x) - f1(x') >= 1``, ``f_{i-1}(x) + f_i(x) - f_i(x') >= 1``
    for ``i >= 2``, and ``f_k(x) >= 0``.
    """
    vars_ = tuple(vars_) if vars_ is not None else scc_vars(s.edges)
    lp = _Lp()
    objective = _add_fns(lp, s.nodes, vars_, depth, phase_keys=True)
    for e in s.edges:
        system = _edge_system(e.formula)
        if system is None:
            continue
        for d in range(depth):
            pieces = [_fn_expr((e.src, d), vars_), _fn_expr((e.dst, d), vars_, True, -1)]
            if d > 0:
                pieces.append(_fn_expr((e.src, d - 1), vars_))
            t, c = _merge_targets(*pieces)
            c[None] = c.get(None, 0) - 1
            lp.entails(system, t, c)
        t, c = _fn_expr((e.src, depth - 1), vars_)
        lp.entails(system, t, c)
    sol = lp.solve(objective)
    if sol is None:
        return None
    return {n: tuple(_extract(sol, [n], vars_, key=lambda m, d=d: (m, d))[n]
                     for d in range(depth)) for n in s.nodes}


# --------------------------------------------------------------------------
# per-SCC prover and certificate checking

@dataclass(frozen=True)
class SccResult:
    failed: frozenset
    certificate: Optional[RankCertificate]


def _cyclic(nodes, edges) -> list:
    return [p for p in scc_partition(nodes, edges) if not p.trivial]


def termin_scc(s: SccPart, use_llrf: bool = True, vars_: Optional[tuple] = None) -> SccResult:
    if s.trivial:
        return SccResult(frozenset(), None)
    vars_ = tuple(vars_) if vars_ is not None else scc_vars(s.edges)
    if not use_llrf:
        # one affine function per node: strict (and bounded) on a set of edges
        # that breaks every cycle, non-increasing on the rest
        r = synth_lrf(s, "quasi", vars_)
        if r is None or _cyclic(s.nodes, [e for e in s.edges if e not in r[1]]):
            return SccResult(frozenset(s.edges), None)
        fns, strict = r
        cert = RankCertificate({n: (fns[n],) for n in s.nodes}, "lrf",
                               (frozenset(e.name for e in strict),))
        return SccResult(frozenset(), cert)
    remaining = list(s.edges)
    rounds, stricts = [], []
    while True:
        parts = _cyclic(s.nodes, remaining)
        if not parts:
            break
        round_fns = {n: ZERO for n in s.nodes}
        removed = set()
        for part in parts:
            r = synth_lrf(part, "quasi", vars_)
            if r is not None:
                round_fns.update(r[0])
                removed |= r[1]
        if not removed:
            failed = frozenset(e for p in parts for e in p.edges)
            return SccResult(failed, None)
        rounds.append(round_fns)
        stricts.append(frozenset(e.name for e in removed))
        remaining = [e for e in remaining if e not in removed]
    kind = "lrf" if len(rounds) == 1 else "llrf"
    cert = RankCertificate({n: tuple(r[n] for r in rounds) for n in s.nodes}, kind,
                           tuple(stricts))
    return SccResult(frozenset(), cert)


def _holds(formula: Conj, atom: Atom) -> bool:
    return entails(tighten(formula), Conj.of([atom]))


def _fn(c: RankCertificate, node, i) -> AffineFn:
    fs = c.per_node.get(node, ())
    return fs[i] if i < len(fs) else ZERO


def check_certificate(s: SccPart, c: RankCertificate) -> bool:
    """Independently re-verify every condition a certificate claims (integer semantics)."""
    if s.trivial:
        return True
    if c.kind == "mlrf":
        depth = max((len(v) for v in c.per_node.values()), default=0)
        if depth == 0:
            return False
        for e in s.edges:
            if not is_sat(tighten(e.formula)):
                continue
            for d in range(depth):
                f, g = _fn(c, e.src, d), _fn(c, e.dst, d)
                if d > 0:
                    prev = _fn(c, e.src, d - 1)
                    f = AffineFn.make({v: f.terms.get(v, 0) + prev.terms.get(v, 0)
                                       for v in set(f.terms) | set(prev.terms)},
                                      f.const + prev.const)
                    g = AffineFn.make(g.terms, g.const)
                if not _holds(e.formula, _decrease_atom(f, g, 1)):
                    return False
            last = _fn(c, e.src, depth - 1)
            if not _holds(e.formula, _ge_atom(last.terms, last.const)):
                return False
        return True
    names = {e.name for e in s.edges}
    remaining = list(s.edges)
    for i, strict in enumerate(c.strict_edges):
        if not strict <= names:
            return False
        parts = _cyclic(s.nodes, remaining)
        cyc = [e for p in parts for e in p.edges]
        if not cyc:
            break
        for e in cyc:
            f, g = _fn(c, e.src, i), _fn(c, e.dst, i)
            if e.name in strict:
                if not _holds(e.formula, _decrease_atom(f, g, 1)):
                    return False
                if not _holds(e.formula, _ge_atom(f.terms, f.const)):
                    return False
            elif not _holds(e.formula, _decrease_atom(f, g, 0)):
                return False
        remaining = [e for e in remaining if e.name not in strict]
    return not _cyclic(s.nodes, remaining)


# --------------------------------------------------------------------------
# Refinement-driven termination driver

@dataclass(frozen=True)
class TerminOptions:
    use_llrf: bool = True
    use_invariants: bool = True
    pe: object = None            # cfrkit.pe.PeOptions; default built lazily
    deadline: Optional[float] = None


@dataclass
class TerminReport:
    terminating: bool
    failed_edges: list
    certificates: list = field(default_factory=list)   # (SccPart, RankCertificate)
    cfr_trace: list = field(default_factory=list)
    its: Optional[Its] = None                           # last analysed program
    invariants: dict = field(default_factory=dict)      # node -> Conj for the last program
    analysed: list = field(default_factory=list)        # (Its, invariants) per analysed program


class AnalysisTimeout(RuntimeError):
    pass


def _pe_opts(opts: TerminOptions, nodes=None):
    from .pe import PeOptions
    base = opts.pe if opts.pe is not None else PeOptions(invariants="both")
    return replace(base, nodes=None if nodes is None else tuple(nodes))


def _check_deadline(opts):
    if opts.deadline is not None and time.monotonic() > opts.deadline:
        raise AnalysisTimeout("time budget exhausted")


def _annotated(t: Its, opts: TerminOptions):
    from .invariants import annotate, compute_invariants
    if not opts.use_invariants:
        return t, {}
    entry = _pe_opts(opts).entry_ctx
    inv = compute_invariants(t, entry)
    return annotate(t, inv), inv


def build_its(t: Its, failed: Iterable[Edge], inv: Optional[dict] = None) -> Its:
    """Sub-ITS of the failed edges plus a fresh entry.

    The fresh entry has an identity edge to every node of ``failed`` that is
    entered from outside it; with invariants, the edge also carries the
    post-image of the outside edges from their source invariants.
    """
    from .invariants import post
    failed = list(failed)
    if not failed:
        raise ValueError("build_its needs a nonempty edge set")
    fset = set(failed)
    nodes = []
    for e in failed:
        for n in (e.src, e.dst):
            if n not in nodes:
                nodes.append(n)
    entry = FRESH_ENTRY
    while entry in t.nodes:
        entry += "_"
    ident = [Atom.make({prime(v): 1, v: -1}, 0, "=") for v in t.vars]
    start = []
    for n in nodes:
        outside = [e for e in t.edges if e.dst == n and e not in fset]
        if n == t.entry:
            outside = [None]
        if not outside:
            continue
        ctx = TRUE
        if inv is not None and None not in outside:
            acc = None
            for e in outside:
                img = post(inv.get(e.src, TRUE), e.formula, t.vars)
                if not is_sat(img):
                    continue
                acc = img if acc is None else hull(acc, img)
            if acc is None:
                continue
            ctx = acc
        primed_ctx = [a.renamed({v: prime(v) for v in t.vars}) for a in ctx.atoms]
        start.append(Edge(entry, n, Conj.of(ident + primed_ctx), ""))
    edges = start + failed
    edges = [replace(e, name=f"t{i}") for i, e in enumerate(edges)]
    return Its(t.vars, entry, tuple(edges), t.name, tuple([entry] + nodes))


def _scc_certificate_holder(report, part, cert):
    report.certificates.append((part, cert))


def termin_cfg(t: Its, cfr_scc: int, opts: TerminOptions = TerminOptions(),
               report: Optional[TerminReport] = None) -> set:
    from .pe import pe_pipeline
    if cfr_scc < 0:
        raise ValueError("cfr_scc must be non-negative")
    if report is None:
        report = TerminReport(False, [])
    failed = set()
    queue = deque([(t, cfr_scc)])
    while queue:
        cur, budget = queue.popleft()
        _check_deadline(opts)
        cur, inv = _annotated(cur, opts)
        vars_ = tuple(cur.vars)
        for part in sccs(cur):
            if part.trivial:
                continue
            _check_deadline(opts)
            res = termin_scc(part, opts.use_llrf, vars_)
            if res.failed and budget > 0:
                sub = build_its(cur, res.failed, inv if opts.use_invariants else None)
                pe = _pe_opts(opts)
                refined = pe_pipeline(sub, pe)
                report.cfr_trace.append({"scheme": "cfr_scc", "nodes": list(part.nodes),
                                         "props": list(pe.heuristics)})
                queue.append((refined, budget - 1))
            elif res.failed:
                failed |= set(res.failed)
            else:
                report.certificates.append((part, res.certificate))
        report.its = cur
        report.invariants = inv
        report.analysed.append((cur, inv))
    return failed


def _origin(name: str, nodes: set) -> Optional[str]:
    while True:
        if name in nodes:
            return name
        if "__" not in name.lstrip("_"):
            return None
        name = name.rsplit("__", 1)[0]


def termin(t: Its, cfr_base: bool = False, cfr_after: int = 0, cfr_scc: int = 1,
           opts: TerminOptions = TerminOptions()) -> TerminReport:
    """Termination driver: prove each SCC, refining failing parts within the budgets."""
    from .pe import pe_pipeline
    if cfr_after < 0 or cfr_scc < 0:
        raise ValueError("budgets must be non-negative")
    report = TerminReport(False, [])
    if cfr_base:
        pe = _pe_opts(opts)
        t = pe_pipeline(t, pe)
        report.cfr_trace.append({"scheme": "cfr_base", "nodes": list(t.nodes),
                                 "props": list(pe.heuristics)})
    failed = termin_cfg(t, cfr_scc, opts, report)
    while failed and cfr_after > 0:
        _check_deadline(opts)
        present = set(t.nodes)
        n_set = []
        for e in failed:
            for n in (e.src, e.dst):
                o = _origin(n, present)
                if o is not None and o not in n_set:
                    n_set.append(o)
        t = remove_non_reaching(t, n_set)
        pe = _pe_opts(opts, n_set)
        t = pe_pipeline(t, pe)
        report.cfr_trace.append({"scheme": "cfr_after", "nodes": n_set,
                                 "props": list(pe.heuristics)})
        present = set(t.nodes)
        keep = [n for n in t.nodes if _origin(n, set(n_set)) is not None]
        t2 = remove_terminating(t, keep)
        cfr_after -= 1
        failed = termin_cfg(t2, cfr_scc, opts, report)
    report.terminating = not failed
    report.failed_edges = sorted(failed, key=lambda e: (e.src, e.dst, e.name))
    return report


def report_json(r: TerminReport) -> dict:
    return {
        "terminating": r.terminating,
        "failed_edges": [{"name": e.name, "src": e.src, "dst": e.dst,
                          "formula": str(e.formula)} for e in r.failed_edges],
        "certificates": [{"scc": list(p.nodes), **c.to_json()} for p, c in r.certificates],
        "cfr_trace": r.cfr_trace,
    }


def dump_report(r: TerminReport) -> bytes:
    return (json.dumps(report_json(r), indent=2) + "\n").encode()


# --------------------------------------------------------------------------
# multiphase splitting

def mlrf_split(t: Its, n: str, fns: list) -> Its:
    """Insert node ``n + 'a'`` in front of ``n`` with one edge per MLRF phase."""
    if n not in t.nodes:
        raise ValueError(f"unknown node {n!r}")
    if n == t.entry:
        raise ValueError("cannot split the entry node")
    if not fns:
        raise ValueError("need at least one function")
    na = n + "a"
    while na in t.nodes:
        na += "a"
    edges = [replace(e, dst=na) if e.dst == n else e for e in t.edges]
    ident = [Atom.make({prime(v): 1, v: -1}, 0, "=") for v in t.vars]
    negs = []
    for f in fns:
        guard = negs + [Atom.make(f.terms, f.const, ">=")]
        edges.append(Edge(na, n, Conj.of(guard + ident), ""))
        negs = negs + [Atom.make(f.terms, f.const, "<")]
    edges.append(Edge(na, n, Conj.of(negs + ident), ""))
    edges = [e if e.name else replace(e, name=f"t{i}") for i, e in enumerate(edges)]
    names = [e.name for e in edges]
    if len(set(names)) != len(names):
        edges = [replace(e, name=f"t{i}") for i, e in enumerate(edges)]
    order = list(t.nodes)
    order.insert(order.index(n), na)
    return Its(t.vars, t.entry, tuple(edges), t.name, tuple(order))
