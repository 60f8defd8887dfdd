"""Linear constraints over integer variables, decided in exact rational arithmetic.

Variables are plain strings; a primed (post-state) variable carries a trailing
apostrophe, ``x'``.  An :class:`Atom` is ``sum(a_i * x_i) + const REL 0`` with
``REL`` one of ``>=``, ``>`` or ``=`` after normalisation (``<`` and ``<=`` are
flipped on construction).  A :class:`Conj` is a conjunction of atoms; the empty
conjunction is ``true``.

All decision procedures work over the rational relaxation.
"""
from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, maximize

__all__ = [
    "Atom", "Conj", "TRUE", "FALSE", "ParseError",
    "prime", "unprime", "is_primed",
    "parse_atom", "parse_conj", "parse_expr",
    "is_sat", "entails", "equivalent", "project", "rename", "var_bound",
    "hull", "widen", "tighten", "remove_redundant",
]

RELS = (">=", ">", "=")


def prime(v: str) -> str:
    return v + "'"


def unprime(v: str) -> str:
    return v[:-1] if v.endswith("'") else v


def is_primed(v: str) -> bool:
    return v.endswith("'")


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True)
class Atom:
    coeffs: tuple  # sorted ((var, int coefficient), ...), zero entries omitted
    const: int
    rel: str

    @staticmethod
    def make(coeffs: Mapping[str, object], const=0, rel: str = ">=") -> "Atom":
        """Build a normalised atom from ``coeffs . x + const REL 0``.

        Accepts any of ``> < >= <= =`` (``==`` too); coefficients may be
        rationals.  The result has integer, gcd-reduced coefficients.
        """
        items = {v: Fraction(c) for v, c in coeffs.items() if c}
        const = Fraction(const)
        if rel == "==":
            rel = "="
        if rel in ("<", "<="):
            items = {v: -c for v, c in items.items()}
            const = -const
            rel = ">" if rel == "<" else ">="
        if rel not in RELS:
            raise ValueError(f"unknown relation {rel!r}")
        den = 1
        for c in list(items.values()) + [const]:
            den = _lcm(den, c.denominator)
        ints = {v: int(c * den) for v, c in items.items()}
        k = int(const * den)
        g = 0
        for c in list(ints.values()) + [k]:
            g = math.gcd(g, c)
        if g > 1:
            ints = {v: c // g for v, c in ints.items()}
            k //= g
        if rel == "=" and ints:
            first = min(ints)
            if ints[first] < 0:
                ints = {v: -c for v, c in ints.items()}
                k = -k
        return Atom(tuple(sorted(ints.items())), k, rel)

    @property
    def vars(self) -> frozenset:
        return frozenset(v for v, _ in self.coeffs)

    def coeff(self, v: str) -> int:
        for name, c in self.coeffs:
            if name == v:
                return c
        return 0

    def value(self, env: Mapping[str, object]):
        return self.const + sum(c * env[v] for v, c in self.coeffs)

    def holds(self, env: Mapping[str, object]) -> bool:
        val = self.value(env)
        if self.rel == ">=":
            return val >= 0
        if self.rel == ">":
            return val > 0
        return val == 0

    def is_trivial(self) -> Optional[bool]:
        """True/False for variable-free atoms, None otherwise."""
        if self.coeffs:
            return None
        return self.holds({})

    def negated(self) -> "Atom":
        """Complement of an inequality (not defined for equalities)."""
        if self.rel == "=":
            raise ValueError("negation of an equality is a disjunction")
        neg = {v: -c for v, c in self.coeffs}
        return Atom.make(neg, -self.const, ">=" if self.rel == ">" else ">")

    def closure(self) -> "Atom":
        return Atom(self.coeffs, self.const, ">=") if self.rel == ">" else self

    def split(self) -> tuple:
        """An equality as two inequalities; inequalities unchanged."""
        if self.rel != "=":
            return (self,)
        neg = tuple((v, -c) for v, c in self.coeffs)
        return (Atom(self.coeffs, self.const, ">="), Atom(neg, -self.const, ">="))

    def renamed(self, m: Mapping[str, str]) -> "Atom":
        return Atom.make({m.get(v, v): c for v, c in self.coeffs}, self.const, self.rel)

    def __str__(self) -> str:
        coeffs, const = self.coeffs, self.const
        if self.rel == "=":
            # show updates as x' = ..., primed side on the left
            primed = [c for v, c in coeffs if is_primed(v)]
            if primed and primed[0] < 0:
                coeffs = tuple((v, -c) for v, c in coeffs)
                const = -const
        lhs = [(v, c) for v, c in coeffs if c > 0]
        rhs = [(v, -c) for v, c in coeffs if c < 0]
        k = -const

        def side(terms, konst):
            parts = []
            for v, c in terms:
                parts.append(v if c == 1 else f"{c}*{v}")
            out = " + ".join(parts)
            if konst > 0:
                out = f"{out} + {konst}" if out else str(konst)
            elif konst < 0:
                out = f"{out} - {-konst}" if out else f"-{-konst}"
            return out or "0"

        # move the constant to whichever side keeps it positive
        if k >= 0:
            left, right = side(lhs, 0), side(rhs, k)
        else:
            left, right = side(lhs, -k), side(rhs, 0)
        return f"{left} {self.rel} {right}"


FALSE_ATOM = Atom((), -1, ">=")


@dataclass(frozen=True)
class Conj:
    atoms: tuple = ()

    @staticmethod
    def of(atoms: Iterable[Atom]) -> "Conj":
        out = []
        seen = set()
        for a in atoms:
            t = a.is_trivial()
            if t is True:
                continue
            if t is False:
                return FALSE
            if a not in seen:
                seen.add(a)
                out.append(a)
        return Conj(tuple(out))

    def __and__(self, other: "Conj") -> "Conj":
        return Conj.of(self.atoms + other.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def vars(self) -> frozenset:
        out = set()
        for a in self.atoms:
            out |= a.vars
        return frozenset(out)

    @property
    def is_true(self) -> bool:
        return not self.atoms

    @property
    def is_false_syntactically(self) -> bool:
        return FALSE_ATOM in self.atoms

    def holds(self, env: Mapping[str, object]) -> bool:
        return all(a.holds(env) for a in self.atoms)

    def closure(self) -> "Conj":
        return Conj.of(a.closure() for a in self.atoms)

    def __str__(self) -> str:
        if not self.atoms:
            return "true"
        if self.is_false_syntactically:
            return "false"
        return ", ".join(str(a) for a in self.atoms)


TRUE = Conj(())
FALSE = Conj((FALSE_ATOM,))


# --------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*'?)|(<=|>=|==|[<>=+\-*]))")


def _tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", 1, pos + 1)
        out.append((m.group(0).strip(), pos + 1))
        pos = m.end()
    return out


def _parse_expr_tokens(toks, i):
    coeffs: dict = {}
    const = 0
    sign = 1
    if i < len(toks) and toks[i][0] in "+-":
        sign = -1 if toks[i][0] == "-" else 1
        i += 1
    while True:
        if i >= len(toks):
            raise ParseError("expected a term", 1, toks[-1][1] if toks else 1)
        tok, col = toks[i]
        if tok.isdigit():
            n = int(tok)
            if i + 1 < len(toks) and toks[i + 1][0] == "*":
                if i + 2 >= len(toks) or not re.match(r"[A-Za-z_]", toks[i + 2][0]):
                    raise ParseError("expected identifier after '*'", 1, col)
                v = toks[i + 2][0]
                coeffs[v] = coeffs.get(v, 0) + sign * n
                i += 3
            else:
                const += sign * n
                i += 1
        elif re.match(r"[A-Za-z_]", tok):
            coeffs[tok] = coeffs.get(tok, 0) + sign
            i += 1
        else:
            raise ParseError(f"unexpected token {tok!r}", 1, col)
        if i < len(toks) and toks[i][0] in ("+", "-"):
            sign = -1 if toks[i][0] == "-" else 1
            i += 1
            continue
        return coeffs, const, i


def parse_expr(text: str):
    """Parse a linear expression; returns ``(coeffs, const)``."""
    toks = _tokens(text)
    coeffs, const, i = _parse_expr_tokens(toks, 0)
    if i != len(toks):
        raise ParseError(f"trailing input {toks[i][0]!r}", 1, toks[i][1])
    return coeffs, const


def parse_atom(text: str) -> Atom:
    toks = _tokens(text)
    lhs, lc, i = _parse_expr_tokens(toks, 0)
    if i >= len(toks) or toks[i][0] not in ("<", ">", "<=", ">=", "=", "=="):
        col = toks[i][1] if i < len(toks) else len(text) + 1
        raise ParseError("expected a relation", 1, col)
    rel = toks[i][0]
    rhs, rc, j = _parse_expr_tokens(toks, i + 1)
    if j != len(toks):
        raise ParseError(f"trailing input {toks[j][0]!r}", 1, toks[j][1])
    coeffs = dict(lhs)
    for v, c in rhs.items():
        coeffs[v] = coeffs.get(v, 0) - c
    return Atom.make(coeffs, lc - rc, rel)


def parse_conj(text: str) -> Conj:
    text = text.strip()
    if not text or text == "true":
        return TRUE
    if text == "false":
        return FALSE
    return Conj.of(parse_atom(part) for part in text.split(","))


# --------------------------------------------------------------------------
# decision procedures

def _lp_rows(atoms, order):
    """Translate atoms into ``a_ub x <= b_ub`` / equality rows over ``order``."""
    idx = {v: k for k, v in enumerate(order)}
    n = len(order)
    ub, bub, eq, beq, strict = [], [], [], [], []
    for a in atoms:
        row = [0] * n
        for v, c in a.coeffs:
            row[idx[v]] = c
        if a.rel == "=":
            eq.append(row)
            beq.append(-a.const)
        else:
            ub.append([-c for c in row])
            bub.append(a.const)
            strict.append(a.rel == ">")
    return ub, bub, eq, beq, strict


@functools.lru_cache(maxsize=200_000)
def is_sat(f: Conj) -> bool:
    """Rational satisfiability of a conjunction."""
    if not f.atoms:
        return True
    if f.is_false_syntactically:
        return False
    order = sorted(f.vars)
    ub, bub, eq, beq, strict = _lp_rows(f.atoms, order)
    n = len(order)
    if not any(strict):
        res = maximize([0] * n, ub, bub, eq, beq)
        return res.status != INFEASIBLE
    # slack t: strict rows become  -a.x + t <= const,  0 <= t <= 1, maximise t
    ub2 = [row + [1 if s else 0] for row, s in zip(ub, strict)]
    ub2.append([0] * n + [1])
    bub2 = list(bub) + [1]
    eq2 = [row + [0] for row in eq]
    res = maximize([0] * n + [1], ub2, bub2, eq2, beq, nonneg=[n])
    return res.status == OPTIMAL and res.value > 0


def _entails_atom(f: Conj, a: Atom) -> bool:
    if a in f.atoms:
        return True
    if a.rel == "=":
        ge, le = a.split()
        return _entails_atom(f, ge) and _entails_atom(f, le)
    # cheap syntactic check: same direction, weaker constant
    for b in f.atoms:
        if b.coeffs == a.coeffs and b.rel != "=":
            if b.const < a.const or (b.const == a.const and (b.rel == ">" or a.rel == ">=")):
                return True
    return not is_sat(Conj.of(f.atoms + (a.negated(),)))


@functools.lru_cache(maxsize=200_000)
def entails(f: Conj, g: Conj) -> bool:
    """``f |= g`` over the rationals."""
    if not g.atoms:
        return True
    if not is_sat(f):
        return True
    return all(_entails_atom(f, a) for a in g.atoms)


def equivalent(f: Conj, g: Conj) -> bool:
    return entails(f, g) and entails(g, f)


def remove_redundant(f: Conj) -> Conj:
    """Drop atoms implied by the remaining ones (order-stable)."""
    if not is_sat(f):
        return FALSE
    atoms = list(_merge_parallel(f.atoms))
    i = 0
    while i < len(atoms):
        rest = Conj.of(atoms[:i] + atoms[i + 1:])
        if _entails_atom(rest, atoms[i]):
            del atoms[i]
        else:
            i += 1
    return _merge_equalities(Conj.of(atoms))


def _merge_parallel(atoms):
    """Keep the tightest of inequalities sharing a coefficient vector."""
    best = {}
    order = []
    for a in atoms:
        if a.rel == "=":
            key = ("=", a.coeffs, a.const)
        else:
            key = (">", a.coeffs)
        if key not in best:
            best[key] = a
            order.append(key)
        elif a.rel != "=":
            b = best[key]
            if a.const < b.const or (a.const == b.const and a.rel == ">"):
                best[key] = a
    return [best[k] for k in order]


def _merge_equalities(f: Conj) -> Conj:
    """Fuse opposite inequality pairs ``e >= 0, -e >= 0`` into ``e = 0``."""
    atoms = list(f.atoms)
    out = []
    used = set()
    for i, a in enumerate(atoms):
        if i in used:
            continue
        if a.rel == ">=":
            neg = tuple((v, -c) for v, c in a.coeffs)
            for j in range(i + 1, len(atoms)):
                b = atoms[j]
                if j not in used and b.rel == ">=" and b.coeffs == neg and b.const == -a.const:
                    used.add(j)
                    a = Atom.make(dict(a.coeffs), a.const, "=")
                    break
        out.append(a)
    return Conj.of(out)


def _as_row(a: Atom):
    return {v: Fraction(c) for v, c in a.coeffs}, Fraction(a.const), a.rel


def _row_atom(row) -> Atom:
    coeffs, const, rel = row
    return Atom.make(coeffs, const, rel)


def _eliminate_equalities(rows, elim):
    """Gaussian substitution of eliminable variables defined by equalities."""
    changed = True
    while changed:
        changed = False
        for k, (coeffs, const, rel) in enumerate(rows):
            if rel != "=":
                continue
            cands = [v for v in sorted(coeffs) if v in elim]
            if not cands:
                continue
            # prefer unit coefficients to keep numbers small
            v = min(cands, key=lambda u: (abs(coeffs[u]) != 1, u))
            a = coeffs[v]
            # v = -(rest + const)/a
            sub = {u: -c / a for u, c in coeffs.items() if u != v}
            subc = -const / a
            new = []
            for j, (c2, k2, r2) in enumerate(rows):
                if j == k:
                    continue
                b = c2.get(v)
                if b:
                    c3 = {u: c for u, c in c2.items() if u != v}
                    for u, c in sub.items():
                        c3[u] = c3.get(u, 0) + b * c
                    c3 = {u: c for u, c in c3.items() if c}
                    new.append((c3, k2 + b * subc, r2))
                else:
                    new.append((c2, k2, r2))
            rows = new
            elim = elim - {v}
            changed = True
            break
    return rows, elim


def _fm_step(rows, v):
    pos, neg, rest = [], [], []
    for r in rows:
        c = r[0].get(v, 0)
        if c > 0:
            pos.append(r)
        elif c < 0:
            neg.append(r)
        else:
            rest.append(r)
    for pc, pk, pr in pos:
        a = pc[v]
        for nc, nk, nr in neg:
            b = -nc[v]
            coeffs = {}
            for u, c in pc.items():
                coeffs[u] = coeffs.get(u, 0) + b * c
            for u, c in nc.items():
                coeffs[u] = coeffs.get(u, 0) + a * c
            coeffs = {u: c for u, c in coeffs.items() if c and u != v}
            rel = ">" if ">" in (pr, nr) else ">="
            rest.append((coeffs, b * pk + a * nk, rel))
    return rest


def _fm_cost(rows, v):
    p = sum(1 for r in rows if r[0].get(v, 0) > 0)
    n = sum(1 for r in rows if r[0].get(v, 0) < 0)
    return p * n - p - n


@functools.lru_cache(maxsize=50_000)
def _project_cached(f: Conj, keep: frozenset) -> Conj:
    if not is_sat(f):
        return FALSE
    elim = f.vars - keep
    if not elim:
        return remove_redundant(f)
    rows = [_as_row(a) for a in f.atoms]
    rows, elim = _eliminate_equalities(rows, elim)
    rows = [r for r in rows if r[2] != "=" or not (set(r[0]) & elim)]
    while elim:
        live = [v for v in sorted(elim) if any(v in r[0] for r in rows)]
        if not live:
            break
        v = min(live, key=lambda u: (_fm_cost(rows, u), u))
        rows = _fm_step(rows, v)
        elim = elim - {v}
        conj = Conj.of(_row_atom(r) for r in rows)
        if conj.is_false_syntactically:
            return FALSE
        conj = remove_redundant(conj)
        rows = [_as_row(a) for a in conj.atoms]
    return remove_redundant(Conj.of(_row_atom(r) for r in rows))


def project(f: Conj, keep: Iterable[str]) -> Conj:
    """Rational projection of ``f`` onto the variables ``keep``."""
    return _project_cached(f, frozenset(keep) & f.vars)


def rename(f: Conj, m: Mapping[str, str]) -> Conj:
    """Substitute variables according to ``m``; unmapped variables stay.

    ``m`` must be injective; a map sending two variables to the same name
    raises ``ValueError``.
    """
    used = {k: v for k, v in m.items() if k in f.vars}
    targets = list(used.values())
    if len(set(targets)) != len(targets):
        raise ValueError("rename map is not injective")
    return Conj.of(a.renamed(m) for a in f.atoms)


def var_bound(f: Conj, v: str, direction: str) -> Optional[Fraction]:
    """Tightest ``c`` with ``f |= v <= c`` (``upper``) or ``v >= c`` (``lower``).

    Returns ``None`` when unbounded in that direction.
    """
    if direction not in ("upper", "lower"):
        raise ValueError("direction must be 'upper' or 'lower'")
    if not is_sat(f):
        raise ValueError("bound of an unsatisfiable constraint")
    order = sorted(f.vars | {v})
    ub, bub, eq, beq, _ = _lp_rows(f.closure().atoms, order)
    sign = 1 if direction == "upper" else -1
    c = [sign if u == v else 0 for u in order]
    res = maximize(c, ub, bub, eq, beq)
    if res.status == UNBOUNDED:
        return None
    return sign * res.value


def hull(f: Conj, g: Conj) -> Conj:
    """Closed convex hull of two conjunctions, with strictness kept where sound."""
    if not is_sat(f):
        return remove_redundant(g) if is_sat(g) else FALSE
    if not is_sat(g):
        return remove_redundant(f)
    if entails(f, g):
        return remove_redundant(g)
    if entails(g, f):
        return remove_redundant(f)
    xs = sorted(f.vars | g.vars)
    lam = "__lam"
    y1 = {x: f"__h1_{x}" for x in xs}
    y2 = {x: f"__h2_{x}" for x in xs}
    atoms = []
    for src, ys, scale in ((f, y1, None), (g, y2, "1-")):
        for a in src.closure().atoms:
            coeffs = {ys[v]: c for v, c in a.coeffs}
            if scale is None:
                coeffs[lam] = coeffs.get(lam, 0) + a.const
                atoms.append(Atom.make(coeffs, 0, a.rel))
            else:
                coeffs[lam] = coeffs.get(lam, 0) - a.const
                atoms.append(Atom.make(coeffs, a.const, a.rel))
    for x in xs:
        atoms.append(Atom.make({x: 1, y1[x]: -1, y2[x]: -1}, 0, "="))
    atoms.append(Atom.make({lam: 1}, 0, ">="))
    atoms.append(Atom.make({lam: -1}, 1, ">="))
    closed = project(Conj.of(atoms), xs)
    out = []
    for a in closed.atoms:
        if a.rel == ">=":
            strict = Atom(a.coeffs, a.const, ">")
            if _entails_atom(f, strict) and _entails_atom(g, strict):
                a = strict
        out.append(a)
    return Conj.of(out)


def widen(f: Conj, g: Conj) -> Conj:
    """Standard polyhedral widening: the atoms of ``f`` that ``g`` entails."""
    if not is_sat(f):
        return g
    kept = []
    for a in f.atoms:
        for part in a.split():
            if _entails_atom(g, part):
                kept.append(part)
    return _merge_equalities(Conj.of(kept))


def tighten(f: Conj) -> Conj:
    """Integer tightening: strengthen atoms using integrality of variables.

    ``e > 0`` becomes ``e - 1 >= 0`` and constants are rounded after dividing
    by the gcd of the variable coefficients.
    """
    out = []
    for a in f.atoms:
        g = 0
        for _, c in a.coeffs:
            g = math.gcd(g, c)
        if g == 0:
            out.append(a)
            continue
        k = a.const
        if a.rel == "=":
            if k % g:
                return FALSE
            out.append(a)
            continue
        if a.rel == ">":
            k -= 1
        out.append(Atom.make({v: c // g for v, c in a.coeffs}, k // g, ">="))
    return Conj.of(out)
