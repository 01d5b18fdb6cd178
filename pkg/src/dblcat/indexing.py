"""pi2-indexings and opindexings on decorated 2-categories.

For f: a -> b an opindexing gives Phi_f: pi2(b) -> pi2(a) (slide up along f),
an indexing gives Phi_f: pi2(a) -> pi2(b) (slide down).

C induces an opindexing Phi when, for every f: a -> b and phi in pi2(C, b),

    vcomp(U(f), phi) == vcomp(Phi_f(phi), U(f))

and an indexing when, for phi in pi2(C, a),

    vcomp(phi, U(f)) == vcomp(U(f), Phi_f(phi)).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core_cat import is_monoid_hom
from .errors import (BaseMismatch, BoundaryMismatch, DirectionMismatch, MissingEntry,
                     NoFactorization, NonUniqueFactorization)
from .pi2 import pi2_monoid
from .report import ValidationReport
from .twocat import decorated_equal, decorated_horizontalization

OPINDEXING = "opindexing"
INDEXING = "indexing"


@dataclass
class Pi2Indexing:
    direction: str
    base: object  # DecoratedTwoCategory
    monoids: dict  # object -> Pi2Monoid
    homs: dict  # vertical morphism -> tuple of element ids

    def __post_init__(self):
        if self.direction not in (OPINDEXING, INDEXING):
            raise ValueError(f"unknown direction {self.direction!r}")
        self.homs = {f: tuple(t) for f, t in self.homs.items()}

    def domain_object(self, f):
        s, t = self.base.Bstar.mor[f]
        return t if self.direction == OPINDEXING else s

    def codomain_object(self, f):
        s, t = self.base.Bstar.mor[f]
        return s if self.direction == OPINDEXING else t

    def apply_square(self, f, s):
        """Phi_f on a square of pi2, returning a square."""
        dom = self.monoids[self.domain_object(f)]
        if s not in dom.index:
            raise DirectionMismatch(f"{s!r} is not in pi2 at object {dom.base}", witness=(f, s))
        cod = self.monoids[self.codomain_object(f)]
        return cod.embedding[self.homs[f][dom.index[s]]]


def apply(Phi, f, x, obj=None):
    """Phi_f(x) on element ids. `obj` optionally names the object x lives at."""
    a = Phi.domain_object(f)
    if obj is not None and obj != a:
        raise DirectionMismatch(
            f"element at object {obj} but Phi_{f} of a {Phi.direction} starts at {a}", witness=(f, x, obj))
    if not 0 <= x < Phi.monoids[a].size:
        raise DirectionMismatch(f"element {x} is not in pi2 at object {a}", witness=(f, x))
    return Phi.homs[f][x]


def validate_indexing(Phi):
    r = ValidationReport()
    D = Phi.base
    cat = D.Bstar
    for a in cat.objects:
        m = Phi.monoids.get(a)
        if m is None:
            r.add("monoid-missing", a)
            continue
        try:
            actual = pi2_monoid(D.B, a)
        except Exception as e:  # an inconsistent base is itself a finding
            r.add("pi2-not-computable", a, detail=str(e))
            continue
        if tuple(actual.embedding) != tuple(m.embedding) or actual.presentation != m.presentation:
            r.add("monoid-is-not-pi2", a)
    if not r.ok:
        return r
    for f in cat.mors:
        t = Phi.homs.get(f)
        dom = Phi.monoids[Phi.domain_object(f)].presentation
        cod = Phi.monoids[Phi.codomain_object(f)].presentation
        if t is None or len(t) != dom.size or any(not 0 <= y < cod.size for y in t):
            r.add("hom-table-shape", f)
            continue
        if not is_monoid_hom(t, dom, cod):
            r.add("homomorphism", f)
    if not r.ok:
        return r
    for a in cat.objects:
        t = Phi.homs[cat.identity(a)]
        if t != tuple(range(len(t))):
            r.add("identity", a)
    for g, f in cat.composable_pairs():
        gf = cat.compose(g, f)
        if Phi.direction == OPINDEXING:
            # Phi_{g f} = Phi_f . Phi_g
            for x in range(Phi.monoids[cat.target(g)].size):
                if Phi.homs[gf][x] != Phi.homs[f][Phi.homs[g][x]]:
                    r.add("functoriality", g, f, x)
        else:
            # Phi_{g f} = Phi_g . Phi_f
            for x in range(Phi.monoids[cat.source(f)].size):
                if Phi.homs[gf][x] != Phi.homs[g][Phi.homs[f][x]]:
                    r.add("functoriality", g, f, x)
    return r


def _base_matches(C, base, budget=None):
    # H*C is base itself when C came from base, or when C is a crossed product
    # over base (its globular squares and their composites are base's cells)
    if base.source_dc is C or getattr(C, "base", None) is base:
        return ValidationReport()
    return decorated_equal(decorated_horizontalization(C), base, budget=budget)


def _try(fn, *args):
    try:
        return fn(*args)
    except (MissingEntry, BoundaryMismatch):
        return None


def check_induces(C, Phi, budget=None):
    base_report = _base_matches(C, Phi.base, budget)
    if not base_report.ok:
        raise BaseMismatch("H*C differs from the base of the indexing",
                           witness=tuple(v.law for v in base_report.violations[:3]))
    r = ValidationReport()
    V = C.vertical
    for f in V.mors:
        U = C.unit_square(f)
        dom = Phi.monoids[Phi.domain_object(f)]
        for phi in dom.embedding:
            slid = Phi.apply_square(f, phi)
            if Phi.direction == OPINDEXING:
                lhs, rhs = _try(C.vcomp, U, phi), _try(C.vcomp, slid, U)
            else:
                lhs, rhs = _try(C.vcomp, phi, U), _try(C.vcomp, U, slid)
            if lhs is None or lhs != rhs:
                r.add("induces", f, phi)
    return r


def _induce(C, direction, budget=None):
    base = decorated_horizontalization(C)
    V = C.vertical
    monoids = {a: pi2_monoid(base.B, a) for a in V.objects}
    homs = {}
    for f in V.mors:
        a, b = V.mor[f]
        U = C.unit_square(f)
        if direction == OPINDEXING:
            dom, cod = monoids[b], monoids[a]
        else:
            dom, cod = monoids[a], monoids[b]
        table = []
        for phi in dom.embedding:
            if direction == OPINDEXING:
                target = C.vcomp(U, phi)
                found = [psi for psi in cod.embedding if _try(C.vcomp, psi, U) == target]
            else:
                target = C.vcomp(phi, U)
                found = [psi for psi in cod.embedding if _try(C.vcomp, U, psi) == target]
            if not found:
                raise NoFactorization(f"no slide of {phi!r} along {V.label(f)}", witness=(f, phi))
            if len(found) > 1:
                raise NonUniqueFactorization(f"{len(found)} slides of {phi!r} along {V.label(f)}",
                                             witness=(f, phi, tuple(found)))
            table.append(cod.index[found[0]])
        homs[f] = table
    return Pi2Indexing(direction, base, monoids, homs)


def induce_opindexing(C, check_framed=False):
    """The opindexing a fully faithful C induces, found by exhaustive search.

    Each Phi_f(phi) is the unique psi in pi2(C, a) with
    vcomp(U(f), phi) == vcomp(psi, U(f)).
    """
    if check_framed:
        from .framed import is_fully_faithful
        is_fully_faithful(C)
    return _induce(C, OPINDEXING)


def induce_indexing(C, check_framed=False):
    """Mirror of induce_opindexing: the unique psi in pi2(C, b) with
    vcomp(phi, U(f)) == vcomp(U(f), psi)."""
    if check_framed:
        from .framed import is_absolutely_dense
        is_absolutely_dense(C)
    return _induce(C, INDEXING)


def check_indexing_morphism(F, Phi_dom, Phi_cod):
    """Empty iff F(Phi_f(phi)) == Phi'_{F f}(F phi) for every f and phi."""
    r = ValidationReport()
    V = F.dom.vertical
    for f in V.mors:
        dom = Phi_dom.monoids[Phi_dom.domain_object(f)]
        Ff = F.vert(f)
        for phi in dom.embedding:
            try:
                lhs = F.square(Phi_dom.apply_square(f, phi))
                rhs = Phi_cod.apply_square(Ff, F.square(phi))
            except DirectionMismatch:
                r.add("indexing-morphism-direction", f, phi)
                continue
            if lhs != rhs:
                r.add("indexing-morphism", f, phi)
    return r


def indexing_from_tables(base, direction, homs):
    """Assemble an indexing on `base` from per-morphism element tables."""
    monoids = {a: pi2_monoid(base.B, a) for a in base.Bstar.objects}
    return Pi2Indexing(direction, base, monoids, homs)


def trivial_indexing(base, direction=OPINDEXING):
    """Every Phi_f sends everything to the unit (the only choice when pi2 is trivial)."""
    monoids = {a: pi2_monoid(base.B, a) for a in base.Bstar.objects}
    homs = {}
    for f in base.Bstar.mors:
        s, t = base.Bstar.mor[f]
        dom, cod = (monoids[t], monoids[s]) if direction == OPINDEXING else (monoids[s], monoids[t])
        homs[f] = [cod.presentation.unit] * dom.size
    return Pi2Indexing(direction, base, monoids, homs)
