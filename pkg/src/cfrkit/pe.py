"""Polyvariant partial evaluation of linear CHC programs with property-based abstraction."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .chc import ChcProgram, Clause, chc_to_its, its_to_chc, loop_heads
from .constraints import (TRUE, Conj, entails, is_sat, prime, project,
                          remove_redundant, rename, tighten)
from .its import Its
from .properties import infer_properties

__all__ = ["Version", "PeConfig", "PeResult", "PeOptions", "abstract_ctx", "unfold",
           "partial_evaluate", "pe_run", "pe_pipeline", "tighten_its"]


@dataclass(frozen=True)
class Version:
    pred: str
    ctx: Conj
    tag: str = ""

    def __str__(self) -> str:
        return f"<{self.pred}, {self.ctx}>"


@dataclass(frozen=True)
class PeConfig:
    props: dict = field(default_factory=dict)
    entry_ctx: Conj = TRUE
    unfold_limit: int = 50
    abstract_non_loop_heads: bool = False
    # "syntactic": inline callees with exactly one defining clause.
    # "semantic": inline when exactly one defining clause is satisfiable in context.
    determinism: str = "syntactic"
    integer_alpha: bool = True

    def __post_init__(self):
        if self.unfold_limit < 1:
            raise ValueError("unfold_limit must be positive")
        if self.determinism not in ("syntactic", "semantic"):
            raise ValueError(f"unknown determinism mode {self.determinism!r}")


@dataclass(frozen=True)
class PeResult:
    program: ChcProgram
    versions: dict          # tag -> Version
    iterations: list        # per iteration: list of newly discovered Versions


def abstract_ctx(ctx: Conj, props: Iterable[Conj], integer: bool = True) -> Conj:
    """Conjunction of the properties entailed by ``ctx``.

    With ``integer`` (the default) entailment is decided on the integer
    tightening of ``ctx``, i.e. it is sound for integer-valued states.
    """
    if integer:
        ctx = tighten(ctx)
    atoms = []
    for p in props:
        if entails(ctx, p):
            atoms.extend(p.atoms)
    return Conj.of(atoms)


def _compose(phi: Conj, psi: Conj, vars_) -> Conj:
    """``phi(x, x') ; psi(x', x'')`` projected back onto ``x`` and ``x'``."""
    mid = {prime(v): f"{v}__mid" for v in vars_}
    first = rename(phi, mid)
    second_map = {v: f"{v}__mid" for v in vars_}
    second = rename(psi, second_map)
    keep = list(vars_) + [prime(v) for v in vars_]
    return project(first & second, keep)


def unfold(v: Version, p: ChcProgram, heads: set, unfold_limit: int = 50,
           determinism: str = "syntactic") -> list:
    """Clauses of ``v.pred`` specialised to ``v.ctx`` with deterministic calls inlined."""
    out = []
    for c in p.defining(v.pred):
        phi = v.ctx & c.constraint
        if not is_sat(phi):
            continue
        call = c.call
        depth = 0
        dead = False
        while call is not None and call not in heads and depth < unfold_limit:
            cands = p.defining(call)
            if determinism == "semantic":
                cands = [d for d in cands if is_sat(_compose(phi, d.constraint, p.vars))]
            if len(cands) != 1:
                break
            d = cands[0]
            nxt = _compose(phi, d.constraint, p.vars)
            if not is_sat(nxt):
                dead = True
                break
            phi = nxt
            call = d.call
            depth += 1
        if not dead:
            out.append(Clause(v.pred, phi, call, c.label))
    return out


def _call_ctx(phi: Conj, vars_) -> Conj:
    primed = [prime(v) for v in vars_]
    return rename(project(phi, primed), {prime(v): v for v in vars_})


def pe_run(p: ChcProgram, cfg: PeConfig = PeConfig()) -> PeResult:
    heads = loop_heads(p)
    store: dict = {}   # pred -> list of Version (discovery order)
    order: list = []

    def admit(pred, ctx):
        for w in store.get(pred, []):
            if entails(ctx, w.ctx) and entails(w.ctx, ctx):
                return w, False
        w = Version(pred, ctx)
        store.setdefault(pred, []).append(w)
        order.append(w)
        return w, True

    seed, _ = admit(p.entry, cfg.entry_ctx)
    pending = [seed]
    iterations = []
    raw = []  # (version, clause with call target Version or None)
    while pending:
        new = []
        for v in pending:
            for c in unfold(v, p, heads, cfg.unfold_limit, cfg.determinism):
                target = None
                if c.call is not None:
                    ctx = _call_ctx(c.constraint, p.vars)
                    if c.call in heads or cfg.abstract_non_loop_heads:
                        ctx = abstract_ctx(ctx, cfg.props.get(c.call, ()), cfg.integer_alpha)
                    target, fresh = admit(c.call, ctx)
                    if fresh:
                        new.append(target)
                raw.append((v, c, target))
        iterations.append(new)
        pending = new

    # reverse discovery numbering per predicate; the entry keeps its name
    tags = {}
    for pred, vs in store.items():
        for i, w in enumerate(vs):
            tags[id(w)] = pred if pred == p.entry else f"{pred}__{len(vs) - i}"
    named = {id(w): replace(w, tag=tags[id(w)]) for w in order}
    clauses = []
    for v, c, target in raw:
        clauses.append(Clause(tags[id(v)], remove_redundant(c.constraint),
                              None if target is None else tags[id(target)], c.label))
    prog = ChcProgram(p.vars, tuple(clauses), p.entry,
                      tuple(tags[id(w)] for w in order))
    versions = {named[id(w)].tag: named[id(w)] for w in order}
    its_iters = [[named[id(w)] for w in it] for it in iterations]
    return PeResult(prog, versions, its_iters)


def partial_evaluate(p: ChcProgram, cfg: PeConfig = PeConfig()) -> ChcProgram:
    return pe_run(p, cfg).program


# --------------------------------------------------------------------------
# procedure PE on ITSs

INVARIANT_MODES = ("pre", "post", "both", "off")


@dataclass(frozen=True)
class PeOptions:
    heuristics: tuple = ("dh", "c")
    nodes: Optional[tuple] = None
    user_props: Optional[dict] = None
    invariants: str = "off"
    entry_ctx: Conj = TRUE
    unfold_limit: int = 50
    int_tighten: bool = False

    def __post_init__(self):
        if self.invariants not in INVARIANT_MODES:
            raise ValueError(f"invariants mode must be one of {INVARIANT_MODES}")


def tighten_its(t: Its) -> Its:
    return replace(t, edges=tuple(replace(e, formula=tighten(e.formula)) for e in t.edges))


def pe_pipeline(t: Its, opts: PeOptions = PeOptions()) -> Its:
    """Steps (1) to (7) of procedure PE."""
    from .invariants import annotate, compute_invariants, prune_unreachable

    if opts.nodes is not None and not opts.nodes:
        return t  # no abstraction point selected: nothing to refine
    if opts.int_tighten:
        t = tighten_its(t)
    if opts.invariants in ("pre", "both"):
        t = annotate(t, compute_invariants(t, opts.entry_ctx))
    p = its_to_chc(t)
    props = infer_properties(p, opts.heuristics, opts.nodes, opts.user_props)
    cfg = PeConfig(props=props, entry_ctx=opts.entry_ctx, unfold_limit=opts.unfold_limit)
    out = chc_to_its(partial_evaluate(p, cfg), name=t.name)
    if opts.int_tighten:
        out = tighten_its(out)
    if opts.invariants in ("post", "both"):
        out = prune_unreachable(out, compute_invariants(out, opts.entry_ctx))
    return out
