"""Random small ITSs for property and bisimulation tests.

At most one primed variable per edge is havocked.  Every primed variable is either an explicit function of the pre-state
(``x' = x + c``, ``x' = y``, ``x' = c``) or a havoc bounded by
``-box <= x' <= box``, so the box interpreter with ``window >= box`` is
complete on these programs.  ``CFRKIT_SEED`` fixes the default seed.
"""
from __future__ import annotations

import os
from typing import Optional

import numpy as np

from .constraints import Atom, Conj, prime
from .its import Its

__all__ = ["random_its", "default_rng"]


def default_rng(seed: Optional[int] = None) -> np.random.Generator:
    if seed is None:
        seed = int(os.environ.get("CFRKIT_SEED", "0"))
    return np.random.default_rng(seed)


def _guard(rng, vars_, coef) -> list:
    atoms = []
    for _ in range(int(rng.integers(0, 3))):
        coeffs = {v: int(rng.integers(-coef, coef + 1)) for v in vars_}
        if not any(coeffs.values()):
            coeffs[vars_[int(rng.integers(len(vars_)))]] = 1
        rel = (">=", ">", "=")[int(rng.choice(3, p=[0.45, 0.45, 0.1]))]
        atoms.append(Atom.make(coeffs, int(rng.integers(-coef, coef + 1)), rel))
    return atoms


def _update(rng, v, vars_, box, havoc_p) -> list:
    pv = prime(v)
    r = rng.random()
    if r < havoc_p:
        return [Atom.make({pv: 1}, box, ">="), Atom.make({pv: 1}, -box, "<=")]
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return [Atom.make({pv: 1, v: -1}, 0, "=")]
    if kind == 1:
        return [Atom.make({pv: 1, v: -1}, -int(rng.choice([-1, 1])), "=")]
    if kind == 2:
        other = vars_[int(rng.integers(len(vars_)))]
        if other == v:
            return [Atom.make({pv: 1, v: -1}, 0, "=")]
        return [Atom.make({pv: 1, other: -1}, 0, "=")]
    return [Atom.make({pv: 1}, -int(rng.integers(-1, 2)), "=")]


def random_its(rng: Optional[np.random.Generator] = None, n_vars: int = 2,
               n_nodes: int = 3, n_edges: Optional[int] = None, box: int = 1,
               havoc_p: float = 0.2, coef: int = 1, name: str = "rand") -> Its:
    """Entry ``n0`` with one identity edge to ``n1``, plus random edges among
    ``n1 .. n{n_nodes}``; guard coefficients and constants lie in
    ``[-coef, coef]``."""
    rng = rng if rng is not None else default_rng()
    vars_ = tuple("xyzwuv"[:n_vars])
    nodes = [f"n{i}" for i in range(1, n_nodes + 1)]
    if n_edges is None:
        n_edges = int(rng.integers(n_nodes, 2 * n_nodes + 1))
    ident = [Atom.make({prime(v): 1, v: -1}, 0, "=") for v in vars_]
    edges = [("n0", "n1", Conj.of(ident))]
    for _ in range(n_edges):
        src = nodes[int(rng.integers(len(nodes)))]
        dst = nodes[int(rng.integers(len(nodes)))]
        atoms = _guard(rng, vars_, coef)
        havoc = vars_[int(rng.integers(len(vars_)))] if rng.random() < havoc_p else None
        for v in vars_:
            atoms += _update(rng, v, vars_, box, 1.0 if v == havoc else 0.0)
        edges.append((src, dst, Conj.of(atoms)))
    return Its.build(vars_, "n0", edges, name)
