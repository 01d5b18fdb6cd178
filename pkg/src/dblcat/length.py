"""The globularly generated piece gammaC, the length one test and canonical
decompositions.

Closures are worklists. Each reached square keeps a trace: ("gen",) for a
generator, ("v", top, bottom) or ("h", left, right) for the composite that
first produced it. Traces are stored in the order squares were reached, so
every operand appears before the square it builds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .doublecat import SubDoubleCategory
from .errors import BoundaryMismatch, MissingEntry, as_budget
from .report import Decision, ValidationReport


@dataclass
class GammaPiece:
    C: object
    trace: dict  # square -> how it was first reached

    @property
    def squares(self):
        return self.trace.keys()

    def __contains__(self, s):
        return s in self.trace

    def __len__(self):
        return len(self.trace)

    def sub(self, name=None):
        return SubDoubleCategory(self.C, square_keep=self.trace, name=name or f"gamma({self.C.name})")

    def replay(self):
        return replay_trace(self.C, self.trace)


def replay_trace(C, trace, generators=None):
    """Recompute every traced composite. Empty report iff all of them check out."""
    r = ValidationReport()
    done = set()
    for s, how in trace.items():
        if how[0] == "gen":
            if generators is not None and s not in generators:
                r.add("trace-bad-generator", s)
        else:
            op, x, y = how
            if x not in done or y not in done:
                r.add("trace-out-of-order", s)
            got = _try(C.vcomp if op == "v" else C.hcomp, x, y)
            if got != s:
                r.add("trace-mismatch", s, detail=op)
        done.add(s)
    return r


def _try(fn, *args):
    try:
        return fn(*args)
    except (MissingEntry, BoundaryMismatch, KeyError):
        return None


def generators(C):
    """Globular squares and unit squares, in sort order."""
    gens = list(C.globular_squares())
    seen = set(gens)
    for f in C.vertical.mors:
        u = C.unit_square(f)
        if u not in seen:
            seen.add(u)
            gens.append(u)
    return C.sorted_squares(gens)


def _close(C, seeds, ops, budget, trace=None):
    """Close `seeds` under the compositions in `ops`.

    Composites of two globular squares are globular, so when all globular
    squares are already present those pairs are skipped. When C knows how
    many squares it has, the search stops once it has reached them all.
    """
    trace = {} if trace is None else trace
    glob = {}
    idx = {k: {} for k in ("left", "right", "top", "bottom")}
    work = deque()
    missing = []

    def add(s, how):
        if s in trace and s in glob:
            return
        if s not in trace:
            trace[s] = how
        l, r, t, b = C.boundary(s)
        g = glob[s] = C.is_globular(s)
        for side, x in zip(("left", "right", "top", "bottom"), (l, r, t, b)):
            idx[side].setdefault(x, ([], []))[g].append(s)
        work.append(s)

    def comp(op, x, y):
        budget.spend()
        z = _try(C.vcomp if op == "v" else C.hcomp, x, y)
        if z is None:
            missing.append((op, x, y))
        elif z not in glob:
            add(z, (op, x, y))

    def partners(side, x, g):
        nonglob, globs = idx[side].get(x, ([], []))
        return list(nonglob) if g else nonglob + globs

    for s in list(trace):
        add(s, trace[s])
    for s in seeds:
        add(s, ("gen",))
    total = C.known_square_count()
    while work:
        if total is not None and len(trace) >= total:
            break
        s = work.popleft()
        l, r, t, b = C.boundary(s)
        g = glob[s]
        if "v" in ops:
            for u in partners("top", b, g):
                comp("v", s, u)
            for u in partners("bottom", t, g):
                comp("v", u, s)
        if "h" in ops:
            for u in partners("left", r, g):
                comp("h", s, u)
            for u in partners("right", l, g):
                comp("h", u, s)
    return trace, missing


def globularly_generated_piece(C, budget=None):
    budget = as_budget(budget, "globularly_generated_piece")
    trace, _ = _close(C, generators(C), ("v", "h"), budget)
    return GammaPiece(C, trace)


def is_length_one(C, budget=None, gamma=None):
    """True iff every square of gammaC is a vertical composite of horizontal
    composites of globular and unit squares.

    The decision carries the gamma piece and the trace of the vertical
    closure as `.gamma` and `.trace`; on False the witness is the least square of gammaC
    that is missed.
    """
    budget = as_budget(budget, "is_length_one")
    gens = generators(C)
    gamma = gamma or globularly_generated_piece(C, budget)
    htrace, _ = _close(C, gens, ("h",), budget)
    vtrace, _ = _close(C, [], ("v",), budget, trace=dict(htrace))
    info = {"generators": len(gens), "horizontal_closure": len(htrace), "vertical_closure": len(vtrace),
            "gamma": len(gamma)}
    missed = next((s for s in C.sorted_squares(gamma.squares) if s not in vtrace), None)
    d = Decision(missed is None, witness=missed, info=info)
    d.gamma, d.trace = gamma, vtrace
    return d


def canonical_decomposition(C, s):
    """The least (up, f, down) with s = up, then U(f), then down.

    up and down are globular. A globular square is its own decomposition
    (s, identity, vid(bottom)): the middle piece is then the vertical identity
    on the bottom 1-cell rather than a unit square.
    """
    V = C.vertical
    l, r, t, b = C.boundary(s)
    if C.is_globular(s):
        return s, l, C.vid(b)
    if l != r:
        return None
    a, c = V.source(l), V.target(l)
    ua, uc = C.hunit(a), C.hunit(c)
    U = C.unit_square(l)
    ups = C.sorted_squares(C.squares_with(V.identity(a), V.identity(a), t, ua))
    downs = C.sorted_squares(C.squares_with(V.identity(c), V.identity(c), uc, b))
    for up in ups:
        top = _try(C.vcomp, up, U)
        if top is None:
            continue
        for down in downs:
            if _try(C.vcomp, top, down) == s:
                return up, l, down
    return None


def all_squares_canonical(C, budget=None, gamma=None):
    budget = as_budget(budget, "all_squares_canonical")
    gamma = gamma or globularly_generated_piece(C, budget)
    for s in C.sorted_squares(gamma.squares):
        budget.spend()
        if canonical_decomposition(C, s) is None:
            return Decision(False, witness=s)
    return Decision(True)
