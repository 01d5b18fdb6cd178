"""The crossed product B x_Phi B* of a decorated 2-category with a
pi2-(op)indexing, and the evaluation functor into a double category that
induces Phi.

A square is either a 2-cell of B (globular) or a `Triple(down, f, up)` with
f: a -> b a non-identity morphism of B*, up: alpha => 1_a and
down: 1_b => beta. The triple has both frames f, top alpha and bottom beta,
and stands for the composite up, then U(f), then down.

Triples over the same f are identified by the nu-relation. For an
opindexing, (d, f, u) ~ (d', f, u') when some nu in pi2(b) has

    d == vcomp(nu, d')   and   u' == vcomp(u, Phi_f(nu))

and for an indexing, with nu in pi2(a),

    u == vcomp(u', nu)   and   d' == vcomp(Phi_f(nu), d).

Equality of squares is the equivalence relation this generates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from scipy.cluster.hierarchy import DisjointSet

from .doublecat import DoubleCategory, DoubleFunctorTable, materialize, validate_double_functor
from .errors import (BaseMismatch, BoundaryMismatch, IllFormedComposite, MissingEntry, NotInducing,
                     as_budget)
from .indexing import OPINDEXING, check_induces
from .report import Decision, ValidationReport
from .twocat import decorated_equal, decorated_horizontalization


@dataclass(frozen=True)
class Triple:
    down: object
    f: int
    up: object

    def to_plain(self):
        return {"down": _plain_cell(self.down), "f": self.f, "up": _plain_cell(self.up)}


def _plain_cell(c):
    return list(c) if isinstance(c, tuple) else c


def is_triple(s):
    return isinstance(s, Triple)


def cp_boundary(base, s):
    B, V = base.B, base.Bstar
    if is_triple(s):
        return s.f, s.f, B.cell_source(s.up), B.cell_target(s.down)
    h, k = B.cell_source(s), B.cell_target(s)
    return V.identity(B.src1(h)), V.identity(B.tgt1(h)), h, k


def _normalize(base, down, f, up):
    if base.Bstar.is_identity(f):
        return base.B.vcomp2(up, down)
    return Triple(down, f, up)


def make_triple(base, down, f, up):
    """Check the shape of (down, f, up) and return the square it denotes."""
    B, V = base.B, base.Bstar
    a, b = V.source(f), V.target(f)
    if B.cell_target(up) != B.unit1(a):
        raise BoundaryMismatch("up cell must end at the unit 1-cell of the source", witness=(up, f))
    if B.cell_source(down) != B.unit1(b):
        raise BoundaryMismatch("down cell must start at the unit 1-cell of the target", witness=(down, f))
    return _normalize(base, down, f, up)


def _nu_candidates(Phi, f):
    obj = Phi.base.Bstar.target(f) if Phi.direction == OPINDEXING else Phi.base.Bstar.source(f)
    return Phi.monoids[obj].embedding


def cp_equal(base, Phi, s, t):
    """One step of the nu-relation from s to t, with the nu found as witness."""
    if cp_boundary(base, s) != cp_boundary(base, t):
        raise BoundaryMismatch("squares have different boundaries", witness=(s, t))
    if not is_triple(s):
        return Decision(s == t)
    if not is_triple(t):
        return Decision(False)
    B, f = base.B, s.f
    for nu in _nu_candidates(Phi, f):
        slid = Phi.apply_square(f, nu)
        if Phi.direction == OPINDEXING:
            ok = s.down == _v(B, nu, t.down) and t.up == _v(B, s.up, slid)
        else:
            ok = s.up == _v(B, t.up, nu) and t.down == _v(B, slid, s.down)
        if ok:
            return Decision(True, witness=nu)
    return Decision(False)


def _v(B, x, y):
    try:
        return B.vcomp2(x, y)
    except (MissingEntry, BoundaryMismatch, KeyError):
        return None


def cp_hcomp(base, Phi, left, right, check=True):
    if check and cp_boundary(base, left)[1] != cp_boundary(base, right)[0]:
        raise BoundaryMismatch("frames do not match", witness=(left, right))
    B = base.B
    if not is_triple(left):
        return B.hcomp2(left, right)
    return Triple(B.hcomp2(left.down, right.down), left.f, B.hcomp2(left.up, right.up))


def cp_vcomp(base, Phi, top, bottom, check=True):
    """Stack `top` on `bottom`.

    For two triples (d, f, u) over (d', g, u') the middle cell
    m = vcomp(d, u') lies in pi2 at the object between f and g. An
    opindexing slides it up along f, an indexing slides it down along g:

        opindexing:  (d', g f, vcomp(u, Phi_f(m)))
        indexing:    (vcomp(Phi_g(m), d'), g f, u)
    """
    if check and cp_boundary(base, top)[3] != cp_boundary(base, bottom)[2]:
        raise BoundaryMismatch("bottom of top square differs from top of bottom square", witness=(top, bottom))
    B, V = base.B, base.Bstar
    if not is_triple(top) and not is_triple(bottom):
        return B.vcomp2(top, bottom)
    if not is_triple(top):
        return Triple(bottom.down, bottom.f, B.vcomp2(top, bottom.up))
    if not is_triple(bottom):
        return Triple(B.vcomp2(top.down, bottom), top.f, top.up)
    f, g = top.f, bottom.f
    m = B.vcomp2(top.down, bottom.up)
    gf = V.compose(g, f)
    if Phi.direction == OPINDEXING:
        return _normalize(base, bottom.down, gf, B.vcomp2(top.up, Phi.apply_square(f, m)))
    return _normalize(base, B.vcomp2(Phi.apply_square(g, m), bottom.down), gf, top.up)


def cp_unit_square(base, f):
    B, V = base.B, base.Bstar
    a, b = V.source(f), V.target(f)
    return _normalize(base, B.id2(B.unit1(b)), f, B.id2(B.unit1(a)))


def _ups_downs(base, f):
    B, V = base.B, base.Bstar
    key = B.cell_sort_key
    ups = sorted(B.cells_between(target=B.unit1(V.source(f))), key=key)
    downs = sorted(B.cells_between(source=B.unit1(V.target(f))), key=key)
    return ups, downs


def triples_over(base, f):
    ups, downs = _ups_downs(base, f)
    return [Triple(d, f, u) for d in downs for u in ups]


def _one_step_edges(base, Phi, f, ups, downs, budget):
    """Every pair (s, t) with s related to t in one nu-step."""
    B = base.B
    V = base.Bstar
    edges = []
    if Phi.direction == OPINDEXING:
        slide_into = Phi.monoids[V.source(f)].embedding
        inverse = {}
        for x in ups:
            for m in slide_into:
                y = _v(B, x, m)
                if y is not None:
                    inverse.setdefault((y, m), []).append(x)
        for nu in _nu_candidates(Phi, f):
            slid = Phi.apply_square(f, nu)
            for d in downs:
                d2 = _v(B, nu, d)
                for u in ups:
                    budget.spend()
                    for x in inverse.get((u, slid), ()):
                        edges.append((Triple(d2, f, x), Triple(d, f, u)))
    else:
        slide_into = Phi.monoids[V.target(f)].embedding
        inverse = {}
        for x in downs:
            for m in slide_into:
                y = _v(B, m, x)
                if y is not None:
                    inverse.setdefault((y, m), []).append(x)
        for nu in _nu_candidates(Phi, f):
            slid = Phi.apply_square(f, nu)
            for u in ups:
                u2 = _v(B, u, nu)
                for d in downs:
                    budget.spend()
                    for x in inverse.get((d, slid), ()):
                        edges.append((Triple(x, f, u2), Triple(d, f, u)))
    return edges


class CrossedProductDouble(DoubleCategory):
    """B x_Phi B* computed on demand. Nonglobular squares are class representatives."""

    def __init__(self, base, Phi, budget=None, name=None):
        budget = as_budget(budget, "build_crossed_product")
        self.base, self.Phi = base, Phi
        self.B = base.B
        self.vertical = base.Bstar
        self.name = name or "crossed product"
        key = self.B.cell_sort_key
        self._tkey = lambda t: (key(t.down), t.f, key(t.up))
        self.rep_of = {}
        self.classes = {}
        one_step = True
        for f in self.vertical.mors:
            if self.vertical.is_identity(f):
                continue
            ups, downs = _ups_downs(base, f)
            triples = [Triple(d, f, u) for d in downs for u in ups]
            budget.spend(len(triples))
            ds = DisjointSet(triples)
            edges = _one_step_edges(base, Phi, f, ups, downs, budget)
            for s, t in edges:
                ds.merge(s, t)
            total = 0
            for subset in ds.subsets():
                members = tuple(sorted(subset, key=self._tkey))
                self.classes[members[0]] = members
                for t in members:
                    self.rep_of[t] = members[0]
                total += len(members) ** 2
            if len(set(edges)) != total:
                one_step = False
        self.one_step_is_closure = one_step
        self._cells = list(self.B.cells())
        self._cellset = set(self._cells)
        self._bnd = {}
        self.locally_posetal = self._boundaries_unique()

    def _boundaries_unique(self):
        seen = set()
        for s in self.squares():
            bnd = self.boundary(s)
            if bnd in seen:
                return False
            seen.add(bnd)
        return True

    def canonical(self, s):
        return self.rep_of[s] if is_triple(s) else s

    def horizontals(self):
        return self.B.one_cells()

    def hsource(self, h):
        return self.B.src1(h)

    def htarget(self, h):
        return self.B.tgt1(h)

    def hunit(self, a):
        return self.B.unit1(a)

    def hcompose(self, left, right):
        return self.B.comp1(left, right)

    def squares(self):
        return self._cells + sorted(self.classes, key=self._tkey)

    def boundary(self, s):
        bnd = self._bnd.get(s)
        if bnd is None:
            bnd = self._bnd[s] = cp_boundary(self.base, s)
        return bnd

    def known_square_count(self):
        return len(self._cells) + len(self.classes)

    def has_square(self, s):
        if is_triple(s):
            return s in self.classes
        try:
            return s in self._cellset
        except TypeError:
            return False

    def square_sort_key(self, s):
        if is_triple(s):
            return (1, self._tkey(s))
        return (0, self.B.cell_sort_key(s))

    # the public vcomp and hcomp have already compared boundaries

    def _vcomp(self, top, bottom):
        return self.canonical(cp_vcomp(self.base, self.Phi, top, bottom, check=False))

    def _hcomp(self, left, right):
        return self.canonical(cp_hcomp(self.base, self.Phi, left, right, check=False))

    def unit_square(self, f):
        return self.canonical(cp_unit_square(self.base, f))

    def vid(self, h):
        return self.B.id2(h)

    def slabel(self, s):
        if is_triple(s):
            return f"({s.down}, {self.vertical.label(s.f)}, {s.up})"
        return str(s)


@dataclass
class CrossedProductDC:
    base: object
    Phi: object
    dc: CrossedProductDouble
    classes: dict
    rep_of: dict
    one_step_is_closure: bool
    _table: object = field(default=None, repr=False)

    def materialized(self, budget=None):
        """The tabulated double category and the map from squares to table ids."""
        if self._table is None:
            self._table = materialize(self.dc, budget, name=self.dc.name)
        return self._table


def build_crossed_product(base, Phi, budget=None, name=None):
    if Phi.base is not base and Phi.base.Bstar != base.Bstar:
        raise BaseMismatch("the indexing lives on a different decoration")
    dc = CrossedProductDouble(base, Phi, budget, name)
    return CrossedProductDC(base, Phi, dc, dc.classes, dc.rep_of, dc.one_step_is_closure)


def horizontalization_matches(q, budget=None):
    """Empty iff H* of the crossed product is the base on the nose."""
    return decorated_equal(decorated_horizontalization(q.dc), q.base, budget=budget)


def check_classes(q):
    """The classes partition the triples and every one-step pair lies in one class."""
    r = ValidationReport()
    base, Phi = q.base, q.Phi
    V = base.Bstar
    for f in V.mors:
        if V.is_identity(f):
            continue
        for t in triples_over(base, f):
            rep = q.rep_of.get(t)
            if rep is None:
                r.add("triple-without-class", t)
            elif t not in q.classes[rep]:
                r.add("class-table-inconsistent", t)
            elif not cp_equal(base, Phi, t, t):
                r.add("nu-relation-not-reflexive", t)
    seen = set()
    for rep, members in q.classes.items():
        if q.rep_of[rep] != rep:
            r.add("representative-not-own-class", rep)
        if seen.intersection(members):
            r.add("classes-overlap", rep)
        seen.update(members)
        if rep != min(members, key=q.dc._tkey):
            r.add("representative-not-least", rep)
    r.info["one_step_is_closure"] = q.one_step_is_closure
    return r


def check_well_defined(q, budget=None):
    """Both compositions give the same class for every choice of members."""
    budget = as_budget(budget, "check_well_defined")
    r = ValidationReport()
    C, base, Phi = q.dc, q.base, q.Phi

    def members(s):
        return q.classes[s] if is_triple(s) else (s,)

    def attempt(fn, *args):
        try:
            return C.canonical(fn(*args))
        except (MissingEntry, BoundaryMismatch):
            return None

    # A pair of one-member classes has one choice of members and nothing to
    # compare, so a one-member square only meets the larger classes.
    big_top, big_left = {}, {}
    for rep, ms in q.classes.items():
        if len(ms) > 1:
            _, _, t, _ = C.boundary(rep)
            big_top.setdefault(t, []).append(rep)
            big_left.setdefault(rep.f, []).append(rep)
    compared = 0
    for s in C.squares():
        l, rr, t, b = C.boundary(s)
        xs = members(s)
        for which, comp, raw, others in (
                ("vcomp", C.vcomp, cp_vcomp, C.squares_with(top=b) if len(xs) > 1 else big_top.get(b, ())),
                ("hcomp", C.hcomp, cp_hcomp, C.squares_with(left=rr) if len(xs) > 1 else big_left.get(rr, ()))):
            for u in others:
                want = attempt(comp, s, u)
                for x in xs:
                    for y in members(u):
                        budget.spend()
                        compared += 1
                        if attempt(raw, base, Phi, x, y) != want:
                            r.add(f"{which}-not-well-defined", x, y)
    r.info["member_pairs"] = compared
    return r


# the evaluation functor


def _require_inducing(q, C, budget):
    if q.base.source_dc is not C:
        rep = decorated_equal(decorated_horizontalization(C), q.base, budget=budget)
        if not rep.ok:
            raise BaseMismatch("H*C differs from the base of the crossed product",
                               witness=tuple(v.law for v in rep.violations[:3]))
    rep = check_induces(C, q.Phi, budget)
    if not rep.ok:
        raise NotInducing(f"C does not induce the {q.Phi.direction}", witness=rep.violations[0].witness)


def forced_image(C, t):
    """up, then U(f), then down, composed in C."""
    try:
        return C.vcomp(C.vcomp(t.up, C.unit_square(t.f)), t.down)
    except (MissingEntry, BoundaryMismatch, KeyError) as e:
        raise IllFormedComposite(f"cannot compose {t} in {C.name}", witness=(t,)) from e


def evaluation_functor(q, C, budget=None):
    """The double functor from the crossed product to C that fixes H*."""
    _require_inducing(q, C, budget)
    V = C.vertical

    def image(s):
        return forced_image(C, s) if is_triple(s) else s

    return DoubleFunctorTable(q.dc, C, {a: a for a in V.objects}, {f: f for f in V.mors},
                              {h: h for h in q.dc.horizontals()}, image)


def check_eval_properties(bang, q, C, budget=None):
    from .length import globularly_generated_piece

    r = ValidationReport()
    r.extend(validate_double_functor(bang, budget), prefix="functor.")
    D = q.dc
    for a in D.vertical.objects:
        if bang.obj(a) != a:
            r.add("horizontalization-not-identity", "object", a)
    for f in D.vertical.mors:
        if bang.vert(f) != f:
            r.add("horizontalization-not-identity", "vertical", f)
    for h in D.horizontals():
        if bang.hor(h) != h:
            r.add("horizontalization-not-identity", "horizontal", h)
    for c in q.base.B.cells():
        if bang.square(c) != c:
            r.add("horizontalization-not-identity", "cell", c)
    image = set()
    for s in D.squares():
        image.add(bang.square(s))
    gamma = globularly_generated_piece(C, budget)
    missing = [s for s in C.sorted_squares(gamma.squares) if s not in image]
    for s in missing:
        r.add("not-full-on-gamma", s)
    # images are forced: every member of a class must give the same square
    for rep, members in q.classes.items():
        want = bang.square(rep)
        for t in members:
            if forced_image(C, t) != want:
                r.add("forced-image-ambiguous", rep, t)
    outside = [s for s in C.sorted_squares() if s not in image]
    r.info["full_on_C"] = not outside
    if outside:
        r.note(f"! misses {len(outside)} squares of C outside the globularly generated piece, e.g. {outside[0]!r}")
    r.info["image"] = len(image)
    r.info["gamma"] = len(gamma.squares)
    return r


def check_eval_injective(bang, q):
    seen = {}
    for s in q.dc.squares():
        x = bang.square(s)
        if x in seen:
            return Decision(False, witness=(seen[x], s))
        seen[x] = s
    return Decision(True)
