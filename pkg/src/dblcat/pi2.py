"""The commutative monoid pi2(C, a) of squares whose four sides are identities at a."""

from __future__ import annotations

from dataclasses import dataclass

from .core_cat import CommMonoidPresentation, validate_monoid
from .doublecat import DoubleCategory
from .errors import BoundaryMismatch, EckmannHiltonViolation, MissingEntry
from .report import ValidationReport
from .twocat import TwoCategory


@dataclass
class Pi2Monoid:
    base: int
    presentation: CommMonoidPresentation
    embedding: tuple  # element id -> square (or 2-cell) id

    def __post_init__(self):
        self.embedding = tuple(self.embedding)
        self.index = {s: i for i, s in enumerate(self.embedding)}

    @property
    def unit_square(self):
        return self.embedding[self.presentation.unit]

    def element(self, s):
        return self.index[s]

    def op(self, x, y):
        return self.presentation.op(x, y)

    @property
    def size(self):
        return self.presentation.size


def pi2_squares(X, a):
    """The squares (or 2-cells) with all boundary identities at a, in id order."""
    if isinstance(X, DoubleCategory):
        V = X.vertical
        i, u = V.identity(a), X.hunit(a)
        return X.sorted_squares(X.squares_with(i, i, u, u)), X.vcomp, X.hcomp, X.unit_square(i)
    if isinstance(X, TwoCategory):
        u = X.unit1(a)
        return sorted(X.cells_between(u, u), key=X.cell_sort_key), X.vcomp2, X.hcomp2, X.id2(u)
    raise TypeError(f"expected a double category or a 2-category, got {type(X).__name__}")


def _compose(fn, x, y):
    try:
        return fn(x, y)
    except (MissingEntry, BoundaryMismatch) as e:
        raise EckmannHiltonViolation(f"composite of {x!r} and {y!r} is missing", witness=(x, y)) from e


def pi2_monoid(X, a):
    """Build pi2(X, a) with its operation table taken from vertical composition.

    Raises EckmannHiltonViolation when vertical and horizontal composition
    disagree, when a composite leaves the set, or when the result is not a
    commutative monoid.
    """
    elems, v, h, unit = pi2_squares(X, a)
    index = {s: i for i, s in enumerate(elems)}
    table = []
    for x in elems:
        row = []
        for y in elems:
            xy = _compose(v, x, y)
            if xy not in index:
                raise EckmannHiltonViolation("vertical composite leaves pi2", witness=(x, y))
            if _compose(h, x, y) != xy:
                raise EckmannHiltonViolation("vertical and horizontal composites differ", witness=(x, y))
            row.append(index[xy])
        table.append(row)
    if unit not in index:
        raise EckmannHiltonViolation("identity square missing from pi2", witness=(a,))
    pres = CommMonoidPresentation(len(elems), index[unit], table)
    rep = validate_monoid(pres)
    if not rep.ok:
        v0 = rep.violations[0]
        raise EckmannHiltonViolation(f"pi2 fails {v0.law}",
                                     witness=tuple(elems[i] for i in v0.witness if isinstance(i, int)))
    return Pi2Monoid(a, pres, elems)


def eckmann_hilton_check(X, a):
    """Empty iff vcomp(x, y) = hcomp(x, y) = vcomp(y, x) for all x, y in pi2(X, a)."""
    r = ValidationReport()
    elems, v, h, _ = pi2_squares(X, a)
    for x in elems:
        for y in elems:
            try:
                xy, hxy, yx = v(x, y), h(x, y), v(y, x)
            except (MissingEntry, BoundaryMismatch):
                r.add("eckmann-hilton-missing", x, y)
                continue
            if xy != hxy:
                r.add("eckmann-hilton-vh", x, y)
            if xy != yx:
                r.add("eckmann-hilton-commutative", x, y)
    return r


def all_pi2(X):
    n = X.vertical.n_objects if isinstance(X, DoubleCategory) else X.n_objects
    return {a: pi2_monoid(X, a) for a in range(n)}
