"""Strict 2-categories, decorated 2-categories (B*, B) and the decorated
horizontalization H*C = (C0, HC) of a double category.

2-cells compose vertically with vcomp2(top, bottom) (first top, then bottom)
and horizontally with hcomp2(left, right).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core_cat import FiniteCategory, validate_category
from .errors import BoundaryMismatch, MissingEntry, as_budget
from .report import ValidationReport


class TwoCategory:
    """Interface shared by tabulated 2-categories and views of double categories."""

    n_objects: int

    def one_cells(self):
        raise NotImplementedError

    def src1(self, h):
        raise NotImplementedError

    def tgt1(self, h):
        raise NotImplementedError

    def unit1(self, a):
        raise NotImplementedError

    def comp1(self, left, right):
        raise NotImplementedError

    def cells(self):
        raise NotImplementedError

    def cell_source(self, c):
        """The 1-cell a 2-cell starts from."""
        raise NotImplementedError

    def cell_target(self, c):
        raise NotImplementedError

    def cells_between(self, source=None, target=None):
        raise NotImplementedError

    def vcomp2(self, top, bottom):
        raise NotImplementedError

    def hcomp2(self, left, right):
        raise NotImplementedError

    def id2(self, h):
        raise NotImplementedError

    def cell_sort_key(self, c):
        return c

    @property
    def objects(self):
        return range(self.n_objects)


class FiniteTwoCategory(TwoCategory):
    def __init__(self, n_objects, one_cells, units1, comp1, cells, vtable, htable, ids2,
                 labels1=None, labels2=None):
        self.n_objects = n_objects
        if not isinstance(one_cells, dict):
            one_cells = dict(enumerate(one_cells))
        self.one = {int(h): (int(s), int(t)) for h, (s, t) in one_cells.items()}
        if not isinstance(units1, dict):
            units1 = dict(enumerate(units1))
        self.units1 = {int(a): int(h) for a, h in units1.items()}
        self.comp1_table = {(int(a), int(b)): int(c) for (a, b), c in comp1.items()}
        if not isinstance(cells, dict):
            cells = dict(enumerate(cells))
        self.cell = {int(c): (int(s), int(t)) for c, (s, t) in cells.items()}
        self.vtable = {(int(a), int(b)): int(c) for (a, b), c in vtable.items()}
        self.htable = {(int(a), int(b)): int(c) for (a, b), c in htable.items()}
        if not isinstance(ids2, dict):
            ids2 = dict(enumerate(ids2))
        self.ids2 = {int(h): int(c) for h, c in ids2.items()}
        self.labels1 = dict(labels1 or {})
        self.labels2 = dict(labels2 or {})
        self._between = None

    def one_cells(self):
        return sorted(self.one)

    def src1(self, h):
        return self.one[h][0]

    def tgt1(self, h):
        return self.one[h][1]

    def unit1(self, a):
        return self.units1[a]

    def comp1(self, left, right):
        if self.tgt1(left) != self.src1(right):
            raise BoundaryMismatch("1-cells are not composable", witness=(left, right))
        try:
            return self.comp1_table[left, right]
        except KeyError:
            raise MissingEntry("no 1-cell composite", witness=(left, right)) from None

    def cells(self):
        return sorted(self.cell)

    def cell_source(self, c):
        return self.cell[c][0]

    def cell_target(self, c):
        return self.cell[c][1]

    def cells_between(self, source=None, target=None):
        if self._between is None:
            idx = {}
            for c in sorted(self.cell):
                s, t = self.cell[c]
                for key in ((s, t), (s, None), (None, t), (None, None)):
                    idx.setdefault(key, []).append(c)
            self._between = idx
        return self._between.get((source, target), [])

    def vcomp2(self, top, bottom):
        if self.cell_target(top) != self.cell_source(bottom):
            raise BoundaryMismatch("2-cells are not vertically composable", witness=(top, bottom))
        try:
            return self.vtable[top, bottom]
        except KeyError:
            raise MissingEntry("no vertical 2-cell composite", witness=(top, bottom)) from None

    def hcomp2(self, left, right):
        if self.tgt1(self.cell_source(left)) != self.src1(self.cell_source(right)):
            raise BoundaryMismatch("2-cells are not horizontally composable", witness=(left, right))
        try:
            return self.htable[left, right]
        except KeyError:
            raise MissingEntry("no horizontal 2-cell composite", witness=(left, right)) from None

    def id2(self, h):
        return self.ids2[h]

    def __eq__(self, other):
        return isinstance(other, FiniteTwoCategory) and all(
            getattr(self, k) == getattr(other, k)
            for k in ("n_objects", "one", "units1", "comp1_table", "cell", "vtable", "htable", "ids2")
        )

    __hash__ = object.__hash__


class HorizontalView(TwoCategory):
    """HC: the horizontal 1-cells of C with its globular squares as 2-cells."""

    def __init__(self, C):
        self.C = C
        self.n_objects = C.vertical.n_objects

    def one_cells(self):
        return list(self.C.horizontals())

    def src1(self, h):
        return self.C.hsource(h)

    def tgt1(self, h):
        return self.C.htarget(h)

    def unit1(self, a):
        return self.C.hunit(a)

    def comp1(self, left, right):
        return self.C.hcompose(left, right)

    def cells(self):
        return self.C.globular_squares()

    def cell_source(self, c):
        return self.C.top(c)

    def cell_target(self, c):
        return self.C.bottom(c)

    def cells_between(self, source=None, target=None):
        if source is None and target is None:
            return self.cells()
        return self.C.globular_squares(top=source, bottom=target)

    def vcomp2(self, top, bottom):
        return self.C.vcomp(top, bottom)

    def hcomp2(self, left, right):
        return self.C.hcomp(left, right)

    def id2(self, h):
        return self.C.vid(h)

    def cell_sort_key(self, c):
        return self.C.square_sort_key(c)


@dataclass
class DecoratedTwoCategory:
    B: TwoCategory
    Bstar: FiniteCategory
    source_dc: object = None  # the double category this came from, if any


def _try(fn, *args):
    try:
        return fn(*args)
    except (MissingEntry, BoundaryMismatch, KeyError):
        return None


def validate_two_category(B, budget=None):
    budget = as_budget(budget, "validate_two_category")
    r = ValidationReport()
    ones = list(B.one_cells())
    by_src = {}
    for h in ones:
        by_src.setdefault(B.src1(h), []).append(h)
    for a in B.objects:
        u = B.unit1(a)
        if (B.src1(u), B.tgt1(u)) != (a, a):
            r.add("unit1-boundary", a)
    for h in ones:
        for x, y in ((B.unit1(B.src1(h)), h), (h, B.unit1(B.tgt1(h)))):
            if _try(B.comp1, x, y) != h:
                r.add("unit1-law", x, y)
        for k in by_src.get(B.tgt1(h), []):
            budget.spend()
            hk = _try(B.comp1, h, k)
            if hk is None:
                r.add("comp1-missing", h, k)
                continue
            for m in by_src.get(B.tgt1(k), []):
                budget.spend()
                km = _try(B.comp1, k, m)
                a1, a2 = _try(B.comp1, hk, m), (None if km is None else _try(B.comp1, h, km))
                if a1 is not None and a2 is not None and a1 != a2:
                    r.add("comp1-associativity", h, k, m)
    cells = list(B.cells())
    for c in cells:
        s, t = B.cell_source(c), B.cell_target(c)
        if (B.src1(s), B.tgt1(s)) != (B.src1(t), B.tgt1(t)):
            r.add("cell-parallel", c)
    for h in ones:
        i = B.id2(h)
        if (B.cell_source(i), B.cell_target(i)) != (h, h):
            r.add("id2-boundary", h)
    if not r.ok:
        return r
    for c in cells:
        s, t = B.cell_source(c), B.cell_target(c)
        for x, y in ((B.id2(s), c), (c, B.id2(t))):
            if _try(B.vcomp2, x, y) != c:
                r.add("vcomp2-identity", x, y)
        for x, y in ((B.id2(B.unit1(B.src1(s))), c), (c, B.id2(B.unit1(B.tgt1(s))))):
            if _try(B.hcomp2, x, y) != c:
                r.add("hcomp2-identity", x, y)
        for d in B.cells_between(source=t):
            budget.spend()
            cd = _try(B.vcomp2, c, d)
            if cd is None:
                r.add("vcomp2-missing", c, d)
                continue
            if (B.cell_source(cd), B.cell_target(cd)) != (s, B.cell_target(d)):
                r.add("vcomp2-boundary", c, d)
            for e in B.cells_between(source=B.cell_target(d)):
                budget.spend()
                de = _try(B.vcomp2, d, e)
                x1, x2 = _try(B.vcomp2, cd, e), (None if de is None else _try(B.vcomp2, c, de))
                if x1 is not None and x2 is not None and x1 != x2:
                    r.add("vcomp2-associativity", c, d, e)
    right_of = {}
    for c in cells:
        right_of.setdefault(B.src1(B.cell_source(c)), []).append(c)
    for c in cells:
        b = B.tgt1(B.cell_source(c))
        for d in right_of.get(b, []):
            budget.spend()
            cd = _try(B.hcomp2, c, d)
            if cd is None:
                r.add("hcomp2-missing", c, d)
                continue
            want = (_try(B.comp1, B.cell_source(c), B.cell_source(d)),
                    _try(B.comp1, B.cell_target(c), B.cell_target(d)))
            if (B.cell_source(cd), B.cell_target(cd)) != want:
                r.add("hcomp2-boundary", c, d)
            for e in right_of.get(B.tgt1(B.cell_source(d)), []):
                budget.spend()
                de = _try(B.hcomp2, d, e)
                x1, x2 = _try(B.hcomp2, cd, e), (None if de is None else _try(B.hcomp2, c, de))
                if x1 is not None and x2 is not None and x1 != x2:
                    r.add("hcomp2-associativity", c, d, e)
    # identities compose horizontally
    for h in ones:
        for k in by_src.get(B.tgt1(h), []):
            hk = _try(B.comp1, h, k)
            if hk is not None and _try(B.hcomp2, B.id2(h), B.id2(k)) != B.id2(hk):
                r.add("id2-functoriality", h, k)
    # interchange: (alpha ; beta) [] (gamma ; delta) = (alpha [] gamma) ; (beta [] delta)
    for a in cells:
        for b in B.cells_between(source=B.cell_target(a)):
            ab = _try(B.vcomp2, a, b)
            for c in right_of.get(B.tgt1(B.cell_source(a)), []):
                ac = _try(B.hcomp2, a, c)
                for d in B.cells_between(source=B.cell_target(c)):
                    budget.spend()
                    cd, bd = _try(B.vcomp2, c, d), _try(B.hcomp2, b, d)
                    lhs = None if ab is None or cd is None else _try(B.hcomp2, ab, cd)
                    rhs = None if ac is None or bd is None else _try(B.vcomp2, ac, bd)
                    if lhs is not None and rhs is not None and lhs != rhs:
                        r.add("interchange", a, b, c, d)
    return r


def validate_decoration(D):
    r = ValidationReport()
    if D.Bstar.n_objects != D.B.n_objects:
        r.add("object-sets-differ", D.Bstar.n_objects, D.B.n_objects)
    return r


def decorated_horizontalization(C):
    """H*C = (C0, HC). HC is a live view of the globular squares of C."""
    return DecoratedTwoCategory(HorizontalView(C), C.vertical, source_dc=C)


def two_category_of_monoid(m):
    """One object, one 1-cell, the monoid elements as 2-cells (both compositions = op)."""
    n = m.size
    table = {(x, y): m.op(x, y) for x in range(n) for y in range(n)}
    return FiniteTwoCategory(1, [(0, 0)], [0], {(0, 0): 0}, [(0, 0)] * n, table, table, [m.unit])


def two_category_of_category(cat):
    """A category as a locally discrete 2-category: only identity 2-cells."""
    one = {f: cat.mor[f] for f in cat.mors}
    comp1 = {(f, g): cat.comp[g, f] for (g, f) in cat.comp}
    cells = {f: (f, f) for f in cat.mors}
    vt = {(f, f): f for f in cat.mors}
    ht = {(f, g): cat.comp[g, f] for (g, f) in cat.comp}
    return FiniteTwoCategory(cat.n_objects, one, cat.ident, comp1, cells, vt, ht, {f: f for f in cat.mors})


def materialize_two(B, budget=None):
    """Tabulate a 2-category. Returns (FiniteTwoCategory, 1-cell index, 2-cell index)."""
    budget = as_budget(budget, "materialize_two")
    ones = list(B.one_cells())
    hidx = {h: i for i, h in enumerate(ones)}
    cells = sorted(B.cells(), key=B.cell_sort_key)
    cidx = {c: i for i, c in enumerate(cells)}
    comp1 = {}
    for h in ones:
        for k in ones:
            if B.tgt1(h) == B.src1(k):
                hk = _try(B.comp1, h, k)
                if hk in hidx:
                    comp1[hidx[h], hidx[k]] = hidx[hk]
    vt, ht = {}, {}
    for c in cells:
        for d in B.cells_between(source=B.cell_target(c)):
            budget.spend()
            x = _try(B.vcomp2, c, d)
            if x in cidx:
                vt[cidx[c], cidx[d]] = cidx[x]
    for c in cells:
        for d in cells:
            if B.tgt1(B.cell_source(c)) == B.src1(B.cell_source(d)):
                budget.spend()
                x = _try(B.hcomp2, c, d)
                if x in cidx:
                    ht[cidx[c], cidx[d]] = cidx[x]
    out = FiniteTwoCategory(
        B.n_objects, [(B.src1(h), B.tgt1(h)) for h in ones], {a: hidx[B.unit1(a)] for a in B.objects},
        comp1, [(hidx[B.cell_source(c)], hidx[B.cell_target(c)]) for c in cells], vt, ht,
        {hidx[h]: cidx[B.id2(h)] for h in ones})
    return out, hidx, cidx


def decorated_equal(D1, D2, cell_map=None, budget=None):
    """Compare two decorated 2-categories on the nose.

    Objects, B*, 1-cells and their composition must agree exactly. 2-cells of
    D1 are sent to 2-cells of D2 by `cell_map` (identity by default); the map
    must be a bijection preserving boundaries, identities and both
    compositions. Returns a ValidationReport.
    """
    budget = as_budget(budget, "decorated_equal")
    cell_map = cell_map or (lambda c: c)
    r = ValidationReport()
    B1, B2 = D1.B, D2.B
    if D1.Bstar != D2.Bstar:
        r.add("decoration-differs")
    if B1.n_objects != B2.n_objects:
        r.add("objects-differ", B1.n_objects, B2.n_objects)
    if not r.ok:
        return r
    ones1, ones2 = list(B1.one_cells()), list(B2.one_cells())
    if sorted(ones1) != sorted(ones2):
        r.add("one-cells-differ")
        return r
    for h in ones1:
        if (B1.src1(h), B1.tgt1(h)) != (B2.src1(h), B2.tgt1(h)):
            r.add("one-cell-boundary-differs", h)
        for k in ones1:
            if B1.tgt1(h) == B1.src1(k):
                budget.spend()
                if _try(B1.comp1, h, k) != _try(B2.comp1, h, k):
                    r.add("one-cell-composition-differs", h, k)
    for a in B1.objects:
        if B1.unit1(a) != B2.unit1(a):
            r.add("unit1-differs", a)
    cells1 = list(B1.cells())
    image = {}
    for c in cells1:
        budget.spend()
        image[c] = cell_map(c)
    cells2 = set(B2.cells())
    if set(image.values()) != cells2 or len(set(image.values())) != len(cells1):
        r.add("cells-not-bijective", len(cells1), len(cells2))
        return r
    for c in cells1:
        d = image[c]
        if (B1.cell_source(c), B1.cell_target(c)) != (B2.cell_source(d), B2.cell_target(d)):
            r.add("cell-boundary-differs", c)
    for h in ones1:
        if image.get(B1.id2(h)) != B2.id2(h):
            r.add("id2-differs", h)
    right_of = {}
    for c in cells1:
        right_of.setdefault(B1.src1(B1.cell_source(c)), []).append(c)
    for c in cells1:
        for d in B1.cells_between(source=B1.cell_target(c)):
            budget.spend()
            x = _try(B1.vcomp2, c, d)
            if (None if x is None else image[x]) != _try(B2.vcomp2, image[c], image[d]):
                r.add("vcomp2-differs", c, d)
        for d in right_of.get(B1.tgt1(B1.cell_source(c)), []):
            budget.spend()
            x = _try(B1.hcomp2, c, d)
            if (None if x is None else image[x]) != _try(B2.hcomp2, image[c], image[d]):
                r.add("hcomp2-differs", c, d)
    return r


def validate_decorated(D, budget=None):
    r = validate_decoration(D)
    r.extend(validate_category(D.Bstar), prefix="bstar.")
    r.extend(validate_two_category(D.B, budget), prefix="b.")
    return r
