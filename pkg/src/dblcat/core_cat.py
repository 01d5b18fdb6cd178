"""Finite categories, commutative monoids and functors as explicit tables.

Composition is written compose(second, first): first f, then g.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BoundaryMismatch, MissingEntry
from .report import ValidationReport


class FiniteCategory:
    """A category given by tables.

    Objects are 0..n-1. Morphism ids are ints but need not be contiguous,
    so a subcategory can keep the ids of its parent.
    """

    def __init__(self, objects, morphisms, identities, composition, labels=None):
        if isinstance(objects, int):
            objects = [f"x{i}" for i in range(objects)]
        self.object_labels = list(objects)
        if not isinstance(morphisms, dict):
            morphisms = dict(enumerate(morphisms))
        self.mor = {int(k): (int(s), int(t)) for k, (s, t) in morphisms.items()}
        self.mors = sorted(self.mor)
        if not isinstance(identities, dict):
            identities = dict(enumerate(identities))
        self.ident = {int(a): int(f) for a, f in identities.items()}
        self.comp = {(int(g), int(f)): int(h) for (g, f), h in composition.items()}
        self.labels = dict(labels or {})
        self._ids = set(self.ident.values())
        self._homs = None

    @property
    def objects(self):
        return range(len(self.object_labels))

    @property
    def n_objects(self):
        return len(self.object_labels)

    def source(self, f):
        return self.mor[f][0]

    def target(self, f):
        return self.mor[f][1]

    def identity(self, a):
        return self.ident[a]

    def is_identity(self, f):
        return f in self._ids

    def label(self, f):
        return self.labels.get(f, f"m{f}")

    def compose(self, second, first):
        return compose(self, second, first)

    def hom(self, a, b):
        if self._homs is None:
            homs = {}
            for f in self.mors:
                homs.setdefault(self.mor[f], []).append(f)
            self._homs = homs
        return self._homs.get((a, b), [])

    def into(self, b):
        """Morphisms with target b."""
        return [f for a in self.objects for f in self.hom(a, b)]

    def out_of(self, a):
        return [f for b in self.objects for f in self.hom(a, b)]

    def composable_pairs(self):
        """Pairs (second, first) with target(first) = source(second)."""
        for f in self.mors:
            for g in self.out_of(self.target(f)):
                yield g, f

    def subcategory(self, keep):
        """Restriction to the morphisms in `keep` (identities are always kept)."""
        keep = set(keep) | set(self.ident.values())
        mors = {f: self.mor[f] for f in self.mors if f in keep}
        comp = {k: v for k, v in self.comp.items() if k[0] in keep and k[1] in keep}
        labels = {f: l for f, l in self.labels.items() if f in keep}
        return FiniteCategory(self.object_labels, mors, self.ident, comp, labels)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteCategory)
            and self.n_objects == other.n_objects
            and self.mor == other.mor
            and self.ident == other.ident
            and self.comp == other.comp
        )

    def __hash__(self):
        return hash((self.n_objects, len(self.mors)))

    def __repr__(self):
        return f"FiniteCategory({self.n_objects} objects, {len(self.mors)} morphisms)"


def compose(cat, second, first):
    if cat.target(first) != cat.source(second):
        raise BoundaryMismatch(
            f"cannot compose {cat.label(second)} after {cat.label(first)}", witness=(second, first)
        )
    try:
        return cat.comp[second, first]
    except KeyError:
        raise MissingEntry(
            f"composition table has no entry for ({second}, {first})", witness=(second, first)
        ) from None


def validate_category(cat):
    r = ValidationReport()
    for a, f in cat.ident.items():
        if f not in cat.mor:
            r.add("identity-missing", a)
        elif cat.mor[f] != (a, a):
            r.add("identity-boundary", a, f)
    for a in cat.objects:
        if a not in cat.ident:
            r.add("identity-missing", a)
    for (g, f), h in sorted(cat.comp.items()):
        if g not in cat.mor or f not in cat.mor or h not in cat.mor:
            r.add("composition-range", g, f, h)
        elif cat.target(f) != cat.source(g):
            r.add("composition-illegal-pair", g, f)
        elif cat.mor[h] != (cat.source(f), cat.target(g)):
            r.add("composition-boundary", g, f, h)
    if not r.ok:
        return r
    for g, f in cat.composable_pairs():
        if (g, f) not in cat.comp:
            r.add("composition-missing", g, f)
    if not r.ok:
        return r
    for f in cat.mors:
        a, b = cat.mor[f]
        if cat.comp[f, cat.ident[a]] != f:
            r.add("identity-right", f)
        if cat.comp[cat.ident[b], f] != f:
            r.add("identity-left", f)
    for g, f in cat.composable_pairs():
        gf = cat.comp[g, f]
        for h in cat.out_of(cat.target(g)):
            # (h g) f = h (g f)
            if cat.comp[cat.comp[h, g], f] != cat.comp[h, gf]:
                r.add("associativity", h, g, f)
    return r


def is_isomorphism(cat, f):
    """Return (True, inverse) or (False, None)."""
    a, b = cat.mor[f]
    found = None
    for g in cat.hom(b, a):
        if cat.comp[g, f] == cat.ident[a] and cat.comp[f, g] == cat.ident[b]:
            found = g
            break
    return (found is not None), found


def isomorphisms(cat):
    return [f for f in cat.mors if is_isomorphism(cat, f)[0]]


@dataclass(frozen=True)
class CommMonoidPresentation:
    """Elements 0..size-1, a unit and a full operation table."""

    size: int
    unit: int
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))

    def op(self, x, y):
        return self.table[x][y]

    @property
    def elements(self):
        return range(self.size)

    def power(self, x, k):
        acc = self.unit
        for _ in range(k):
            acc = self.op(acc, x)
        return acc


def validate_monoid(m):
    r = ValidationReport()
    n = m.size
    if not 0 <= m.unit < n:
        r.add("unit-range", m.unit)
        return r
    if len(m.table) != n or any(len(row) != n for row in m.table):
        r.add("totality", n)
        return r
    for x in range(n):
        for y in range(n):
            if not 0 <= m.table[x][y] < n:
                r.add("totality", x, y)
    if not r.ok:
        return r
    for x in range(n):
        if m.op(m.unit, x) != x or m.op(x, m.unit) != x:
            r.add("unit", x)
    for x in range(n):
        for y in range(x + 1, n):
            if m.op(x, y) != m.op(y, x):
                r.add("commutativity", x, y)
    for x, y, z in itertools.product(range(n), repeat=3):
        if m.op(m.op(x, y), z) != m.op(x, m.op(y, z)):
            r.add("associativity", x, y, z)
    return r


def is_monoid_hom(table, dom, cod):
    """Check that the element map `table` is a unital multiplicative map dom -> cod."""
    if table[dom.unit] != cod.unit:
        return False
    return all(
        table[dom.op(x, y)] == cod.op(table[x], table[y]) for x in dom.elements for y in dom.elements
    )


@dataclass(frozen=True)
class FunctorTable:
    obj_map: dict
    mor_map: dict

    def __post_init__(self):
        if not isinstance(self.obj_map, dict):
            object.__setattr__(self, "obj_map", dict(enumerate(self.obj_map)))
        if not isinstance(self.mor_map, dict):
            object.__setattr__(self, "mor_map", dict(enumerate(self.mor_map)))


def validate_functor(F, dom, cod):
    r = ValidationReport()
    for a in dom.objects:
        if a not in F.obj_map:
            r.add("object-map-total", a)
    for f in dom.mors:
        if f not in F.mor_map:
            r.add("morphism-map-total", f)
    if not r.ok:
        return r
    for f in dom.mors:
        a, b = dom.mor[f]
        Ff = F.mor_map[f]
        if Ff not in cod.mor:
            r.add("morphism-map-range", f)
            continue
        if cod.source(Ff) != F.obj_map[a]:
            r.add("preserves-source", f)
        if cod.target(Ff) != F.obj_map[b]:
            r.add("preserves-target", f)
    for a in dom.objects:
        if F.mor_map[dom.identity(a)] != cod.identity(F.obj_map[a]):
            r.add("preserves-identity", a)
    if not r.ok:
        return r
    for g, f in dom.composable_pairs():
        Fg, Ff = F.mor_map[g], F.mor_map[f]
        if cod.comp.get((Fg, Ff)) != F.mor_map[dom.comp[g, f]]:
            r.add("preserves-composition", g, f)
    return r


def identity_functor(cat):
    return FunctorTable({a: a for a in cat.objects}, {f: f for f in cat.mors})


# small builders


def discrete_category(n):
    return FiniteCategory(n, [(a, a) for a in range(n)], list(range(n)), {(a, a): a for a in range(n)})


def path_category(n):
    """Free category on the path x0 -> x1 -> ... -> xn.

    Morphisms are the pairs i <= j; labels spell the path, e.g. "f1f0".
    """
    pairs = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    ids = {p: k for k, p in enumerate(pairs)}
    comp = {}
    for (i, j) in pairs:
        for (j2, k) in pairs:
            if j2 == j:
                comp[ids[j, k], ids[i, j]] = ids[i, k]
    labels = {}
    for (i, j), k in ids.items():
        labels[k] = "".join(f"f{t}" for t in reversed(range(i, j))) or f"id{i}"
    return FiniteCategory(n + 1, pairs, [ids[i, i] for i in range(n + 1)], comp, labels)


def group_category(m, labels=None):
    """One-object category from a group (or any monoid) given by its table."""
    n = m.size
    comp = {(g, f): m.op(f, g) for f in range(n) for g in range(n)}
    return FiniteCategory(1, [(0, 0)] * n, [m.unit], comp, labels)


def cyclic_monoid(n):
    """Z/n under addition."""
    return CommMonoidPresentation(n, 0, [[(x + y) % n for y in range(n)] for x in range(n)])


def product_monoid(m1, m2):
    n2 = m2.size
    size = m1.size * n2
    table = [
        [m1.op(x // n2, y // n2) * n2 + m2.op(x % n2, y % n2) for y in range(size)]
        for x in range(size)
    ]
    return CommMonoidPresentation(size, m1.unit * n2 + m2.unit, table)
