"""Cartesian and opcartesian squares, framed bicategories, and the
restrictions C*, C~ (fully faithful frames) and C^ (absolutely dense frames).

A square s with frames f, g is cartesian when every square Phi with frames
f h, g k and bottom(Phi) = bottom(s) factors as Phi = vcomp(Psi, s) for
exactly one Psi with frames h, k. Opcartesian is the dual, with Psi pasted
below s.

Double categories that provide `maximal_squares_with` (resp.
`minimal_squares_with`) and are locally posetal declare that the squares
with fixed frames and bottom have downward closed tops with a single
maximum (resp. upward closed bottoms with a single minimum). Then factors
are unique whenever they exist and existence only needs checking at the
extreme square, so the search visits one outer square per (h, k).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core_cat import is_isomorphism
from .doublecat import SubDoubleCategory
from .errors import BoundaryMismatch, MissingEntry, NotFramed, as_budget
from .report import Decision, ValidationReport


@dataclass
class CartesianCertificate:
    square: object
    holds: bool
    factors: dict = field(default_factory=dict)  # outer square -> its unique factor
    counterexample: tuple = None  # (outer square, list of factors found)
    dual: bool = False

    def __bool__(self):
        return self.holds

    def replay(self, C):
        """Re-compose every stored factorization; True iff all give the outer square."""
        for outer, psi in self.factors.items():
            got = C.vcomp(self.square, psi) if self.dual else C.vcomp(psi, self.square)
            if got != outer:
                return False
        return True


def _try(fn, *args):
    try:
        return fn(*args)
    except (MissingEntry, BoundaryMismatch):
        return None


def _ordered(V, mors):
    """Identities first: a failing factorization usually shows up there."""
    return sorted(mors, key=lambda f: (not V.is_identity(f), f))


def _fast(C, hook):
    return C.locally_posetal and callable(getattr(C, hook, None))


def is_cartesian(C, s, budget=None, exhaustive=False):
    budget = as_budget(budget, "is_cartesian")
    V = C.vertical
    l, r, t, b = C.boundary(s)
    fast = not exhaustive and _fast(C, "maximal_squares_with")
    cert = CartesianCertificate(s, True)
    for h in _ordered(V, V.into(V.source(l))):
        fh = V.compose(l, h)
        for k in _ordered(V, V.into(V.source(r))):
            gk = V.compose(r, k)
            outers = C.maximal_squares_with(fh, gk, b) if fast else C.squares_with(fh, gk, None, b)
            for phi in outers:
                budget.spend()
                found = [psi for psi in C.squares_with(h, k, C.top(phi), t) if _try(C.vcomp, psi, s) == phi]
                if len(found) != 1:
                    cert.holds = False
                    cert.counterexample = (phi, found)
                    return cert
                cert.factors[phi] = found[0]
    return cert


def is_opcartesian(C, s, budget=None, exhaustive=False):
    budget = as_budget(budget, "is_opcartesian")
    V = C.vertical
    l, r, t, b = C.boundary(s)
    fast = not exhaustive and _fast(C, "minimal_squares_with")
    cert = CartesianCertificate(s, True, dual=True)
    for h in _ordered(V, V.out_of(V.target(l))):
        hf = V.compose(h, l)
        for k in _ordered(V, V.out_of(V.target(r))):
            kg = V.compose(k, r)
            outers = C.minimal_squares_with(hf, kg, t) if fast else C.squares_with(hf, kg, t, None)
            for phi in outers:
                budget.spend()
                found = [psi for psi in C.squares_with(h, k, b, C.bottom(phi)) if _try(C.vcomp, s, psi) == phi]
                if len(found) != 1:
                    cert.holds = False
                    cert.counterexample = (phi, found)
                    return cert
                cert.factors[phi] = found[0]
    return cert


def niches(C):
    """All (left, right, bottom) with matching corners."""
    V = C.vertical
    for beta in C.horizontals():
        for l in V.into(C.hsource(beta)):
            for r in V.into(C.htarget(beta)):
                yield l, r, beta


def coniches(C):
    V = C.vertical
    for alpha in C.horizontals():
        for l in V.out_of(C.hsource(alpha)):
            for r in V.out_of(C.htarget(alpha)):
                yield l, r, alpha


def is_framed(C, budget=None):
    """Every niche needs a cartesian filler and every co-niche an opcartesian one.

    The report records the least-id cartesian (opcartesian) filler of each
    niche as a cleavage in `report.cleavage` (`report.opcleavage`) and says in
    `report.info` whether the cleavages are normal and split.
    """
    budget = as_budget(budget, "is_framed")
    V = C.vertical
    r = ValidationReport()
    cleavage, opcleavage = {}, {}
    for niche in niches(C):
        l, rr, beta = niche
        for x in _candidates(C, "maximal_squares_with", C.squares_with(l, rr, None, beta), l, rr, beta):
            if is_cartesian(C, x, budget):
                cleavage[niche] = x
                break
        else:
            r.add("niche-without-cartesian-filler", l, rr, beta)
    for coniche in coniches(C):
        l, rr, alpha = coniche
        for x in _candidates(C, "minimal_squares_with", C.squares_with(l, rr, alpha, None), l, rr, alpha):
            if is_opcartesian(C, x, budget):
                opcleavage[coniche] = x
                break
        else:
            r.add("coniche-without-opcartesian-filler", l, rr, alpha)
    r.info["niches"] = len(cleavage) + sum(1 for v in r.violations if v.law.startswith("niche"))
    r.info["coniches"] = len(opcleavage) + sum(1 for v in r.violations if v.law.startswith("coniche"))
    if r.ok:
        r.info["normal"] = all(
            cleavage[V.identity(C.hsource(b)), V.identity(C.htarget(b)), b] == C.vid(b) for b in C.horizontals())
        r.info["opnormal"] = all(
            opcleavage[V.identity(C.hsource(a)), V.identity(C.htarget(a)), a] == C.vid(a) for a in C.horizontals())
        r.info["split"] = _split(C, cleavage, budget, dual=False)
        r.info["opsplit"] = _split(C, opcleavage, budget, dual=True)
    r.cleavage = cleavage
    r.opcleavage = opcleavage
    return r


def _candidates(C, hook, squares, l, r, edge):
    """Fillers in id order, except that a posetal hook's extreme square goes first.

    In that case a (op)cartesian filler is the extreme square or nothing, so
    trying it first still finds the least-id filler.
    """
    ordered = C.sorted_squares(squares)
    if not _fast(C, hook):
        return ordered
    first = getattr(C, hook)(l, r, edge)
    return first + [x for x in ordered if x not in first]


def _split(C, cleave, budget, dual):
    """The chosen filler of a composite niche is the composite of chosen fillers."""
    V = C.vertical
    for (l2, r2, edge), x2 in cleave.items():
        inner = C.top(x2) if not dual else C.bottom(x2)
        if not dual:
            firsts = ((l, r) for l in V.into(V.source(l2)) for r in V.into(V.source(r2)))
        else:
            firsts = ((l, r) for l in V.out_of(V.target(l2)) for r in V.out_of(V.target(r2)))
        for l, r in firsts:
            budget.spend()
            x1 = cleave[l, r, inner]
            if not dual:
                if C.vcomp(x1, x2) != cleave[V.compose(l2, l), V.compose(r2, r), edge]:
                    return False
            else:
                if C.vcomp(x2, x1) != cleave[V.compose(l, l2), V.compose(r, r2), edge]:
                    return False
    return True


def is_fully_faithful_morphism(C, f, budget=None):
    return bool(is_cartesian(C, C.unit_square(f), budget))


def is_absolutely_dense_morphism(C, f, budget=None):
    return bool(is_opcartesian(C, C.unit_square(f), budget))


def _require_framed(C, budget, framed_report):
    rep = framed_report if framed_report is not None else is_framed(C, budget)
    if not rep.ok:
        v = rep.violations[0]
        raise NotFramed(f"{C.name} is not framed: {v.law}", witness=v.witness)
    return rep


def is_fully_faithful(C, budget=None, framed_report=None):
    _require_framed(C, budget, framed_report)
    for f in C.vertical.mors:
        if not is_fully_faithful_morphism(C, f, budget):
            return Decision(False, witness=f)
    return Decision(True)


def is_absolutely_dense(C, budget=None, framed_report=None):
    _require_framed(C, budget, framed_report)
    for f in C.vertical.mors:
        if not is_absolutely_dense_morphism(C, f, budget):
            return Decision(False, witness=f)
    return Decision(True)


def fully_faithful_morphisms(C, budget=None):
    return [f for f in C.vertical.mors if is_fully_faithful_morphism(C, f, budget)]


def absolutely_dense_morphisms(C, budget=None):
    return [f for f in C.vertical.mors if is_absolutely_dense_morphism(C, f, budget)]


def restrict_star(C):
    """Squares whose frames are both vertical isomorphisms."""
    V = C.vertical
    keep = [f for f in V.mors if is_isomorphism(V, f)[0]]
    return SubDoubleCategory(C, vertical_keep=keep, name=f"{C.name}*")


def restrict_tilde(C, budget=None, check_framed=True):
    """Squares whose frames are fully faithful (found by cartesian search)."""
    if check_framed:
        _require_framed(C, budget, None)
    return SubDoubleCategory(C, vertical_keep=fully_faithful_morphisms(C, budget), name=f"{C.name}~")


def restrict_hat(C, budget=None, check_framed=True):
    if check_framed:
        _require_framed(C, budget, None)
    return SubDoubleCategory(C, vertical_keep=absolutely_dense_morphisms(C, budget), name=f"{C.name}^")


def framed_functor_lands_in_tilde(F, D, C, budget=None):
    """True iff U(F f) is cartesian in C for every vertical f of D."""
    for f in D.vertical.mors:
        if not is_fully_faithful_morphism(C, F.vert(f), budget):
            return Decision(False, witness=f)
    return Decision(True)


def is_double_groupoid(C):
    """Every square has a vertical and a horizontal inverse."""
    V = C.vertical
    for s in C.squares():
        l, r, t, b = C.boundary(s)
        if not (is_isomorphism(V, l)[0] and is_isomorphism(V, r)[0]):
            return Decision(False, witness=s)
        vinv = [x for x in C.squares_with(top=b, bottom=t)
                if _try(C.vcomp, s, x) == C.vid(t) and _try(C.vcomp, x, s) == C.vid(b)]
        hinv = [x for x in C.squares_with(left=r, right=l)
                if _try(C.hcomp, s, x) == C.unit_square(l) and _try(C.hcomp, x, s) == C.unit_square(r)]
        if not vinv or not hinv:
            return Decision(False, witness=s)
    return Decision(True)
