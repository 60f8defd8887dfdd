"""Command-line interface: ``cfrkit cfr|termin|split``.

Exit status: 0 success / terminating, 1 analysis completed but not proved
(including a time-out), 2 input error.
"""
from __future__ import annotations

import signal
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import click

from .constraints import TRUE, ParseError, parse_conj
from .its import ItsError, emit_dot, emit_its, parse_its, sccs
from .pe import INVARIANT_MODES, PeOptions, pe_pipeline
from .properties import HEURISTICS, parse_user_props
from .termination import (AffineFn, AnalysisTimeout, TerminOptions, dump_report,
                          mlrf_split, synth_mlrf, termin)

__all__ = ["main", "parse_props", "parse_mlrf"]

EXIT_OK, EXIT_NOT_PROVED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def parse_props(spec: str, nodes) -> tuple:
    """``"dh,c,user:path"`` -> (heuristics, user property map or None)."""
    heuristics, user = [], None
    for item in (s.strip() for s in spec.split(",")):
        if not item:
            continue
        if item.startswith("user:"):
            path = Path(item[len("user:"):])
            try:
                text = path.read_text()
            except OSError as exc:
                raise InputError(f"cannot read property file {path}: {exc}") from exc
            parsed = parse_user_props(text, nodes)
            user = parsed if user is None else {**user, **parsed}
        elif item in HEURISTICS:
            if item not in heuristics:
                heuristics.append(item)
        else:
            raise InputError(f"unknown property heuristic {item!r}")
    return tuple(heuristics), user


def parse_mlrf(spec: str) -> tuple:
    """``"n1: z; y; x"`` -> (node, [AffineFn, ...])."""
    if ":" not in spec:
        raise InputError("--mlrf expects 'node: f1; f2; ...'")
    node, rest = spec.split(":", 1)
    fns = [AffineFn.parse(part) for part in rest.split(";") if part.strip()]
    if not node.strip() or not fns:
        raise InputError("--mlrf expects a node and at least one function")
    return node.strip(), fns


@contextmanager
def _time_limit(seconds: Optional[float]):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def handler(signum, frame):
        raise AnalysisTimeout("time budget exhausted")

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _write(path: Optional[str], data: bytes):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _load(path: str):
    try:
        return parse_its(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _pe_options(t, props, invariants, entry_ctx, int_tighten) -> PeOptions:
    heuristics, user = parse_props(props, t.nodes)
    ctx = parse_conj(entry_ctx) if entry_ctx else TRUE
    return PeOptions(heuristics=heuristics, user_props=user, invariants=invariants,
                     entry_ctx=ctx, int_tighten=int_tighten)


def _run(fn):
    try:
        code = fn()
    except AnalysisTimeout as exc:
        click.echo(f"not proved: {exc}", err=True)
        code = EXIT_NOT_PROVED
    except (InputError, ParseError, ItsError, ValueError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        code = EXIT_INPUT
    sys.exit(code)


_common = [
    click.argument("input", type=click.Path(dir_okay=False)),
    click.option("--props", default="dh,c", show_default=True,
                 help="Comma list of h, hv, c, cv, dh, user:<path>."),
    click.option("--invariants", type=click.Choice(INVARIANT_MODES), default=None,
                 help="Invariant use in PE (default: off for cfr, both for termin)."),
    click.option("--entry-ctx", default="", help="Entry context, e.g. \"x >= 0, y = 1\"."),
    click.option("--out-its", default=None, help="Write the (refined) ITS here."),
    click.option("--out-dot", default=None, help="Write a DOT rendering here."),
    click.option("--out-json", default=None, help="Write the JSON report here."),
    click.option("--timeout", type=click.FloatRange(min=0), default=None,
                 help="Wall-clock budget in seconds."),
    click.option("--int-tighten", is_flag=True, help="Tighten edge formulas to integers."),
]


def common(f):
    for deco in reversed(_common):
        f = deco(f)
    return f


@click.group()
def main():
    """Control-flow refinement and termination analysis of ITS programs."""


@main.command()
@common
def cfr(input, props, invariants, entry_ctx, out_its, out_dot, out_json, timeout,
        int_tighten):
    """Refine INPUT by property-based partial evaluation."""
    def go():
        t = _load(input)
        opts = _pe_options(t, props, invariants or "off", entry_ctx, int_tighten)
        with _time_limit(timeout):
            out = pe_pipeline(t, opts) if t.edges else t
        _emit(out, out_its, out_dot, default_its=out_json is None)
        if out_json:
            from .its import dump_json
            _write(out_json, dump_json(out))
        return EXIT_OK
    _run(go)


def _emit(t, out_its, out_dot, default_its):
    if out_its or (default_its and not out_dot):
        _write(out_its, emit_its(t))
    if out_dot:
        _write(out_dot, emit_dot(t))


@main.command("termin")
@common
@click.option("--cfr-base", is_flag=True, help="Refine the whole program first.")
@click.option("--cfr-after", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--cfr-scc", type=click.IntRange(min=0), default=1, show_default=True)
@click.option("--llrf/--no-llrf", default=True, show_default=True,
              help="Allow lexicographic certificates (else LRFs only).")
def termin_cmd(input, props, invariants, entry_ctx, out_its, out_dot, out_json, timeout,
               int_tighten, cfr_base, cfr_after, cfr_scc, llrf):
    """Prove termination of INPUT; prints a JSON report."""
    def go():
        t = _load(input)
        pe = _pe_options(t, props, invariants or "both", entry_ctx, int_tighten)
        deadline = time.monotonic() + timeout if timeout else None
        opts = TerminOptions(use_llrf=llrf, pe=pe, deadline=deadline)
        with _time_limit(timeout):
            report = termin(t, cfr_base, cfr_after, cfr_scc, opts)
        _write(out_json, dump_report(report))
        if report.its is not None and (out_its or out_dot):
            _emit(report.its, out_its, out_dot, default_its=False)
        return EXIT_OK if report.terminating else EXIT_NOT_PROVED
    _run(go)


@main.command()
@common
@click.option("--mlrf", "mlrf", default=None,
              help="\"node: f1; f2; ...\"; synthesised per SCC when omitted.")
@click.option("--cfr-base", is_flag=True, help="Apply cfr after splitting.")
def split(input, props, invariants, entry_ctx, out_its, out_dot, out_json, timeout,
          int_tighten, mlrf, cfr_base):
    """Insert multiphase split nodes, then optionally refine."""
    def go():
        t = _load(input)
        with _time_limit(timeout):
            if mlrf:
                node, fns = parse_mlrf(mlrf)
                t2 = mlrf_split(t, node, fns)
            else:
                t2 = t
                for part in sccs(t):
                    if part.trivial:
                        continue
                    found = None
                    for depth in range(1, 5):
                        found = synth_mlrf(part, depth)
                        if found is not None:
                            break
                    if found is None or depth == 1:
                        continue
                    node = next(n for n in part.nodes if n != t2.entry)
                    t2 = mlrf_split(t2, node, list(found[node]))
            if cfr_base:
                opts = _pe_options(t2, props, invariants or "off", entry_ctx, int_tighten)
                t2 = pe_pipeline(t2, opts)
        _emit(t2, out_its, out_dot, default_its=True)
        if out_json:
            from .its import dump_json
            _write(out_json, dump_json(t2))
        return EXIT_OK
    _run(go)


if __name__ == "__main__":
    main()
