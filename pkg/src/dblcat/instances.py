"""Concrete double categories.

Tabulated: commuting squares of a category, monoid bundles, group double
groupoids and a small length-two example. Computed on demand: relations
Rel(n) and spans Span(n) between the sets {0..k-1}, k = 1..n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core_cat import (CommMonoidPresentation, FiniteCategory, cyclic_monoid, discrete_category,
                       group_category, path_category)
from .doublecat import DoubleCategory, FiniteDoubleCategory, SubDoubleCategory
from .errors import BudgetExceeded, MissingEntry

RESTRICTIONS = (None, "star", "tilde", "hat")

# Square-count caps for the tabulated builders.
TABULATE_BUDGET = 10**5


def posetal_double_category(vertical, horizontals, hunits, hcomposition, boundaries, name="C",
                            hlabels=None):
    """Tabulate a double category with at most one square per boundary.

    `boundaries` is the set of (left, right, top, bottom) that carry a square.
    Composites are found by boundary; a composite boundary that is not in the
    set is simply left out of the tables (the validator will report it).
    """
    bnds = sorted(set(boundaries))
    if len(bnds) > TABULATE_BUDGET:
        raise BudgetExceeded(f"{len(bnds)} squares", witness=len(bnds))
    idx = {b: i for i, b in enumerate(bnds)}
    by_top, by_left = {}, {}
    for b in bnds:
        by_top.setdefault(b[2], []).append(b)
        by_left.setdefault(b[0], []).append(b)
    V = vertical
    vt, ht = {}, {}
    for s in bnds:
        l, r, t, bot = s
        for u in by_top.get(bot, []):
            key = (V.compose(u[0], l), V.compose(u[1], r), t, u[3])
            if key in idx:
                vt[idx[s], idx[u]] = idx[key]
        for u in by_left.get(r, []):
            tt, bb = hcomposition.get((t, u[2])), hcomposition.get((bot, u[3]))
            key = (l, u[1], tt, bb)
            if key in idx:
                ht[idx[s], idx[u]] = idx[key]
    units = {}
    for f in V.mors:
        a, b = V.mor[f]
        key = (f, f, hunits[a], hunits[b])
        if key in idx:
            units[f] = idx[key]
    vids = {}
    for h, (a, b) in horizontals.items():
        key = (V.identity(a), V.identity(b), h, h)
        if key in idx:
            vids[h] = idx[key]
    return FiniteDoubleCategory(V, horizontals, hunits, hcomposition, bnds, vt, ht, units, vids,
                                hlabels=hlabels, name=name)


def build_commuting_squares(cat, name=None):
    """The double category of commuting squares: both directions are `cat`."""
    horizontals = {f: cat.mor[f] for f in cat.mors}
    hcomposition = {(f, g): cat.comp[g, f] for (g, f) in cat.comp}
    bnds = []
    for t in cat.mors:
        a, b = cat.mor[t]
        for l in cat.out_of(a):
            for r in cat.out_of(b):
                for bot in cat.hom(cat.target(l), cat.target(r)):
                    if cat.comp[bot, l] == cat.comp[r, t]:
                        bnds.append((l, r, t, bot))
    return posetal_double_category(cat, horizontals, dict(cat.ident), hcomposition, bnds,
                                   name=name or "commuting squares", hlabels=dict(cat.labels))


def build_monoid_bundle(m, name=None):
    """One object, only identity edges, and the elements of m as squares."""
    V = FiniteCategory(1, [(0, 0)], [0], {(0, 0): 0}, {0: "id"})
    table = {(x, y): m.op(x, y) for x in m.elements for y in m.elements}
    return FiniteDoubleCategory(V, [(0, 0)], [0], {(0, 0): 0}, [(0, 0, 0, 0)] * m.size, table, table,
                                {0: m.unit}, {0: m.unit}, name=name or f"monoid bundle ({m.size})")


def build_group_double_groupoid(G, A, name=None):
    """One object, vertical morphisms the group G, only the unit 1-cell.

    Squares are triples (l, r, z) with z in the abelian group A; they compose
    by multiplying frames and adding labels. pi2 is A, every square is
    invertible both ways, and squares with l != r lie outside the part
    generated by globular and unit squares.
    """
    V = group_category(G, {g: f"g{g}" for g in G.elements})
    nG, nA = G.size, A.size

    def sid(l, r, z):
        return (l * nG + r) * nA + z

    sq, vt, ht = {}, {}, {}
    for l, r, z in itertools.product(range(nG), range(nG), range(nA)):
        sq[sid(l, r, z)] = (l, r, 0, 0)
    for (l, r, z), (l2, r2, z2) in itertools.product(itertools.product(range(nG), range(nG), range(nA)),
                                                     repeat=2):
        vt[sid(l, r, z), sid(l2, r2, z2)] = sid(V.compose(l2, l), V.compose(r2, r), A.op(z, z2))
        if r == l2:
            ht[sid(l, r, z), sid(l2, r2, z2)] = sid(l, r2, A.op(z, z2))
    units = {g: sid(g, g, A.unit) for g in range(nG)}
    slabels = {sid(l, r, z): f"({l},{r},{z})" for l, r, z in itertools.product(range(nG), range(nG), range(nA))}
    return FiniteDoubleCategory(V, [(0, 0)], [0], {(0, 0): 0}, sq, vt, ht, units,
                                {0: sid(G.unit, G.unit, A.unit)}, slabels=slabels,
                                name=name or f"group double groupoid ({nG}, {nA})")


def build_z2_double_groupoid():
    z2 = cyclic_monoid(2)
    return build_group_double_groupoid(z2, z2, name="Z/2 double groupoid")


def build_length_two_witness():
    """A double category that is not of length one.

    Objects a, b, b', c; vertical morphisms f1: a -> b, f2: b -> c,
    g1: a -> b', g2: b' -> c with f2 f1 = g2 g1 = F. Only unit 1-cells.
    Squares over a morphism h form a vector space A_h over Z/2:
    A at b and b' is Z/2 (a nontrivial pi2), A over f1, f2, g1, g2 is Z/2
    and A over F is Z/2 x Z/2 with the b-route landing on x and the b'-route
    on y. Stacking adds labels after transport, pasting side by side adds
    labels. The square (F, x + y) is a side-by-side paste of two vertical
    composites but not itself a vertical composite of globular and unit
    squares.
    """
    names = ["a", "b", "b'", "c"]
    a, b, bp, c = range(4)
    mors = [(a, a), (b, b), (bp, bp), (c, c), (a, b), (b, c), (a, bp), (bp, c), (a, c)]
    ID_A, ID_B, ID_BP, ID_C, F1, F2, G1, G2, F = range(9)
    labels = {ID_A: "id_a", ID_B: "id_b", ID_BP: "id_b'", ID_C: "id_c",
              F1: "f1", F2: "f2", G1: "g1", G2: "g2", F: "F"}
    comp = {}
    for f, (s, t) in enumerate(mors):
        comp[f, s] = f  # f after id  (identity ids equal object ids here)
        comp[t, f] = f
    comp[F2, F1] = F
    comp[G2, G1] = F
    V = FiniteCategory(names, mors, [ID_A, ID_B, ID_BP, ID_C], comp, labels)
    dim = {ID_A: 0, ID_B: 1, ID_BP: 1, ID_C: 0, F1: 1, F2: 1, G1: 1, G2: 1, F: 2}

    # transport of labels along composition, as images of basis vectors:
    # top(f, v) stacked on bottom(g, w) gives (g f, P[g, f](v) + Q[g, f](w))
    def P(g, f):
        if V.is_identity(g):
            return [1 << i for i in range(dim[f])]
        if V.is_identity(f):
            return {F2: [1], G2: [1]}.get(g, [0] * dim[f])
        return {(F2, F1): [1], (G2, G1): [2]}[g, f]

    def Q(g, f):
        if V.is_identity(f):
            return [1 << i for i in range(dim[g])]
        if V.is_identity(g):
            return {F1: [1], G1: [1]}.get(f, [0] * dim[g])
        return {(F2, F1): [1], (G2, G1): [2]}[g, f]

    def apply(images, v):
        out = 0
        for i, img in enumerate(images):
            if v >> i & 1:
                out ^= img
        return out

    sq_list = [(f, v) for f in range(9) for v in range(1 << dim[f])]
    sid = {s: i for i, s in enumerate(sq_list)}
    squares = {i: (f, f, V.source(f), V.target(f)) for i, (f, v) in enumerate(sq_list)}
    vt, ht = {}, {}
    for (f, v) in sq_list:
        for (g, w) in sq_list:
            if V.target(f) == V.source(g):
                gf = V.compose(g, f)
                vt[sid[f, v], sid[g, w]] = sid[gf, apply(P(g, f), v) ^ apply(Q(g, f), w)]
            if f == g:
                ht[sid[f, v], sid[g, w]] = sid[f, v ^ w]
    units = {f: sid[f, 0] for f in range(9)}
    vids = {x: sid[x, 0] for x in range(4)}
    slabels = {i: f"{labels[f]}:{v}" for i, (f, v) in enumerate(sq_list)}
    return FiniteDoubleCategory(V, [(x, x) for x in range(4)], list(range(4)),
                                {(x, x): x for x in range(4)}, squares, vt, ht, units, vids,
                                hlabels={x: f"1_{names[x]}" for x in range(4)}, slabels=slabels,
                                name="length-two witness")


def nat_endomorphisms_monoid(cat):
    """Natural endomorphisms of the identity functor, composed componentwise."""
    objs = list(cat.objects)
    choices = [cat.hom(x, x) for x in objs]
    fams = []
    for fam in itertools.product(*choices):
        if all(cat.comp[fam[cat.target(f)], f] == cat.comp[f, fam[cat.source(f)]] for f in cat.mors):
            fams.append(fam)
    idx = {fam: i for i, fam in enumerate(fams)}
    table = [[idx[tuple(cat.comp[g[x], f[x]] for x in objs)] for g in fams] for f in fams]
    unit = idx[tuple(cat.identity(x) for x in objs)]
    return CommMonoidPresentation(len(fams), unit, table), fams


# relations


def function_category(n, frames=None):
    """Sets of size 1..n (object k-1 has size k) and the functions between them.

    `frames` optionally keeps only injective, surjective or bijective maps.
    Returns (category, list of function tuples indexed by morphism id).
    """
    funcs, mors = [], []
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            for fn in itertools.product(range(k), repeat=j):
                funcs.append(fn)
                mors.append((j - 1, k - 1))
    fid = {(mors[i], funcs[i]): i for i in range(len(funcs))}
    comp = {}
    for f, (a, b) in enumerate(mors):
        for g, (b2, c) in enumerate(mors):
            if b2 == b:
                comp[g, f] = fid[(a, c), tuple(funcs[g][funcs[f][i]] for i in range(a + 1))]
    idents = [fid[(a, a), tuple(range(a + 1))] for a in range(n)]
    labels = {i: "".join(map(str, fn)) + f":{mors[i][0] + 1}>{mors[i][1] + 1}" for i, fn in enumerate(funcs)}
    cat = FiniteCategory([f"{k}" for k in range(1, n + 1)], mors, idents, comp, labels)
    if frames is not None:
        keep = [f for f in range(len(funcs)) if _frame_ok(funcs[f], mors[f][1] + 1, frames)]
        cat = cat.subcategory(keep)
    return cat, funcs


def _frame_ok(fn, k, kind):
    inj = len(set(fn)) == len(fn)
    surj = len(set(fn)) == k
    return {"injective": inj, "surjective": surj, "bijective": inj and surj}[kind]


def _subsets(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class RelDoubleCategory(DoubleCategory):
    """Rel(n): sets of size 1..n, functions, relations, and inclusions.

    A relation R between sets of sizes j and k is a bitmask with bit i*k + x
    set when i R x. Its id is offset(j, k) + (full - mask), so within a hom
    larger relations get smaller ids. A square is the tuple
    (left, right, top, bottom) and exists iff (left x right)(top) is
    contained in bottom, so there is at most one square per boundary.
    """

    locally_posetal = True

    def __init__(self, n):
        if not 1 <= n <= 3:
            raise BudgetExceeded(f"Rel({n}) is outside the supported range 1..3", witness=n)
        self.n = n
        self.name = f"Rel({n})"
        self.vertical, self.funcs = function_category(n)
        self._offset = {}
        self._rel = []  # id -> (j, k, mask), sizes not object ids
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                self._offset[j, k] = len(self._rel)
                self._rel.extend((j, k, m) for m in reversed(range(1 << (j * k))))
        self._hom = {}
        for h, (j, k, m) in enumerate(self._rel):
            self._hom.setdefault((j - 1, k - 1), []).append(h)
        self._hs = [j - 1 for j, _, _ in self._rel]
        self._ht = [k - 1 for _, k, _ in self._rel]
        self._hc = {}
        self._image = lru_cache(maxsize=None)(self._image_uncached)
        self._preimage = lru_cache(maxsize=None)(self._preimage_uncached)
        self._sw_cache = {}

    # 1-cells

    def rel(self, j, k, mask):
        return self._offset[j, k] + (1 << (j * k)) - 1 - mask

    def relation(self, h):
        """(j, k, set of pairs) for a 1-cell id."""
        j, k, m = self._rel[h]
        return j, k, {(i, x) for i in range(j) for x in range(k) if m >> (i * k + x) & 1}

    def hlabel(self, h):
        j, k, pairs = self.relation(h)
        return f"{j}>{k}:" + ",".join(f"{i}{x}" for i, x in sorted(pairs))

    def horizontals(self):
        return range(len(self._rel))

    def horizontals_between(self, a, b):
        return self._hom.get((a, b), [])

    def hsource(self, h):
        return self._hs[h]

    def htarget(self, h):
        return self._ht[h]

    def hunit(self, a):
        j = a + 1
        return self.rel(j, j, sum(1 << (i * j + i) for i in range(j)))

    def hcompose(self, left, right):
        out = self._hc.get((left, right))
        if out is None:
            if self._ht[left] != self._hs[right]:
                raise MissingEntry("relations are not composable", witness=(left, right))
            out = self._hc[left, right] = self._compose_uncached(left, right)
        return out

    def _compose_uncached(self, left, right):
        j, k, m1 = self._rel[left]
        _, l, m2 = self._rel[right]
        rows = [(m2 >> (x * l)) & ((1 << l) - 1) for x in range(k)]
        out = 0
        for i in range(j):
            row = 0
            for x in range(k):
                if m1 >> (i * k + x) & 1:
                    row |= rows[x]
            out |= row << (i * l)
        return self.rel(j, l, out)

    def _image_uncached(self, l, r, t):
        """Mask of (l x r)(t) inside the target hom."""
        j, k, m = self._rel[t]
        fl, fr = self.funcs[l], self.funcs[r]
        k2 = self.vertical.target(r) + 1
        out = 0
        for i in range(j):
            for x in range(k):
                if m >> (i * k + x) & 1:
                    out |= 1 << (fl[i] * k2 + fr[x])
        return out

    def _preimage_uncached(self, l, r, b):
        """Largest mask R with (l x r)(R) inside b."""
        j, k = self.vertical.source(l) + 1, self.vertical.source(r) + 1
        _, k2, m = self._rel[b]
        fl, fr = self.funcs[l], self.funcs[r]
        out = 0
        for i in range(j):
            for x in range(k):
                if m >> (fl[i] * k2 + fr[x]) & 1:
                    out |= 1 << (i * k + x)
        return out

    # squares

    def boundary(self, s):
        return s

    def has_square(self, s):
        l, r, t, b = s
        mor = self.vertical.mor
        (a, c), (bb, d) = mor[l], mor[r]
        if self._hs[t] != a or self._ht[t] != bb or self._hs[b] != c or self._ht[b] != d:
            return False
        return self._image(l, r, t) & ~self._rel[b][2] == 0

    def _frame_pairs(self, left, right, top, bottom):
        V = self.vertical
        if left is not None:
            lefts = [left]
        elif top is not None and bottom is not None:
            lefts = V.hom(self.hsource(top), self.hsource(bottom))
        elif top is not None:
            lefts = V.out_of(self.hsource(top))
        elif bottom is not None:
            lefts = V.into(self.hsource(bottom))
        else:
            lefts = V.mors
        if right is not None:
            rights = [right]
        elif top is not None and bottom is not None:
            rights = V.hom(self.htarget(top), self.htarget(bottom))
        elif top is not None:
            rights = V.out_of(self.htarget(top))
        elif bottom is not None:
            rights = V.into(self.htarget(bottom))
        else:
            rights = V.mors
        return lefts, rights

    def squares_with(self, left=None, right=None, top=None, bottom=None):
        key = (left, right, top, bottom)
        hit = self._sw_cache.get(key)
        if hit is None:
            hit = self._squares_with(left, right, top, bottom)
            if len(self._sw_cache) < 200000:
                self._sw_cache[key] = hit
        return hit

    def _squares_with(self, left, right, top, bottom):
        V = self.vertical
        out = []
        lefts, rights = self._frame_pairs(left, right, top, bottom)
        for l in lefts:
            for r in rights:
                a, b = V.source(l), V.source(r)
                c, d = V.target(l), V.target(r)
                if top is not None and (self.hsource(top), self.htarget(top)) != (a, b):
                    continue
                if bottom is not None and (self.hsource(bottom), self.htarget(bottom)) != (c, d):
                    continue
                if top is not None:
                    img = self._image(l, r, top)
                    if bottom is not None:
                        if img & ~self._rel[bottom][2] == 0:
                            out.append((l, r, top, bottom))
                        continue
                    full = (1 << ((c + 1) * (d + 1))) - 1
                    for extra in _subsets(full & ~img):
                        out.append((l, r, top, self.rel(c + 1, d + 1, img | extra)))
                elif bottom is not None:
                    pre = self._preimage(l, r, bottom)
                    for sub in _subsets(pre):
                        out.append((l, r, self.rel(a + 1, b + 1, sub), bottom))
                else:
                    for t in self._hom.get((a, b), []):
                        out.extend(self._squares_with(l, r, t, None))
        return out

    def squares(self):
        return self.squares_with()

    def maximal_squares_with(self, left, right, bottom):
        """The squares with given frames and bottom whose top is maximal.

        Tops of such squares are closed under going down, so every other one
        sits below the single maximal top (the preimage of bottom).
        """
        V = self.vertical
        a, b = V.source(left), V.source(right)
        pre = self._preimage(left, right, bottom)
        return [(left, right, self.rel(a + 1, b + 1, pre), bottom)]

    def minimal_squares_with(self, left, right, top):
        V = self.vertical
        c, d = V.target(left), V.target(right)
        return [(left, right, top, self.rel(c + 1, d + 1, self._image(left, right, top)))]

    def _vcomp(self, top, bottom):
        V = self.vertical
        return (V.compose(bottom[0], top[0]), V.compose(bottom[1], top[1]), top[2], bottom[3])

    def _hcomp(self, left, right):
        return (left[0], right[1], self.hcompose(left[2], right[2]), self.hcompose(left[3], right[3]))

    def unit_square(self, f):
        V = self.vertical
        return (f, f, self.hunit(V.source(f)), self.hunit(V.target(f)))

    def vid(self, h):
        V = self.vertical
        return (V.identity(self.hsource(h)), V.identity(self.htarget(h)), h, h)

    def slabel(self, s):
        V = self.vertical
        return f"[{V.label(s[0])} | {V.label(s[1])} : {self.hlabel(s[2])} <= {self.hlabel(s[3])}]"


# spans


@dataclass(frozen=True)
class SpanCell:
    """A span j <- apex -> k with apex {0..m-1}; the left leg is non-decreasing."""

    j: int
    k: int
    left: tuple
    right: tuple

    @property
    def apex(self):
        return len(self.left)


def pullback(s, t):
    """Apex pairs (x, y) with s.right[x] == t.left[y], in lexicographic order."""
    return [(x, y) for x in range(s.apex) for y in range(t.apex) if s.right[x] == t.left[y]]


class SpanDoubleCategory(DoubleCategory):
    """Span(n): sets of size 1..n, functions, spans with apex at most `apex`.

    Spans are stored strictly: the apex is {0..m-1} and the left leg is
    non-decreasing, which makes composition by lexicographic pullback
    strictly associative and unital. Squares are (left, right, top, bottom,
    u) where u maps the top apex to the bottom apex compatibly with the legs.
    Composites whose apex exceeds the cap are outside the window and raise
    MissingEntry.
    """

    def __init__(self, n, apex=None):
        if not 1 <= n <= 3:
            raise BudgetExceeded(f"Span({n}) is outside the supported range 1..3", witness=n)
        self.n = n
        self.cap = n if apex is None else apex
        if self.cap > 3:
            raise BudgetExceeded(f"apex cap {self.cap} exceeds 3", witness=self.cap)
        self.name = f"Span({n}, apex<={self.cap})"
        self.vertical, self.funcs = function_category(n)
        cells = []
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for m in range(self.cap + 1):
                    for left in itertools.combinations_with_replacement(range(j), m):
                        for right in itertools.product(range(k), repeat=m):
                            cells.append(SpanCell(j, k, left, tuple(right)))
        self.cells = cells
        self.cell_id = {c: i for i, c in enumerate(cells)}
        self._hom = {}
        for i, c in enumerate(cells):
            self._hom.setdefault((c.j - 1, c.k - 1), []).append(i)
        self._maps = {}
        self._hc = {}
        self._pb = {}

    def hlabel(self, h):
        c = self.cells[h]
        return f"{c.j}<{''.join(map(str, c.left))}|{''.join(map(str, c.right))}>{c.k}"

    def horizontals(self):
        return range(len(self.cells))

    def horizontals_between(self, a, b):
        return self._hom.get((a, b), [])

    def hsource(self, h):
        return self.cells[h].j - 1

    def htarget(self, h):
        return self.cells[h].k - 1

    def hunit(self, a):
        j = a + 1
        return self.cell_id[SpanCell(j, j, tuple(range(j)), tuple(range(j)))]

    def hcompose(self, left, right):
        out = self._hc.get((left, right))
        if out is None:
            out = self._hc[left, right] = self._compose_uncached(left, right)
        if out < 0:
            raise MissingEntry(f"composite apex {-out} is outside the window", witness=(left, right))
        return out

    def _compose_uncached(self, left, right):
        s, t = self.cells[left], self.cells[right]
        if s.k != t.j:
            raise MissingEntry("spans are not composable", witness=(left, right))
        pb = self._pullback(left, right)
        c = SpanCell(s.j, t.k, tuple(s.left[x] for x, _ in pb), tuple(t.right[y] for _, y in pb))
        if c.apex > self.cap:
            return -c.apex
        return self.cell_id[c]

    def _pullback(self, left, right):
        pb = self._pb.get((left, right))
        if pb is None:
            pb = self._pb[left, right] = pullback(self.cells[left], self.cells[right])
        return pb

    def boundary(self, s):
        return s[:4]

    def has_square(self, s):
        l, r, t, b, u = s
        V = self.vertical
        T, B = self.cells[t], self.cells[b]
        if (T.j - 1, T.k - 1, B.j - 1, B.k - 1) != (V.source(l), V.source(r), V.target(l), V.target(r)):
            return False
        if len(u) != T.apex:
            return False
        fl, fr = self.funcs[l], self.funcs[r]
        return all(0 <= u[x] < B.apex and B.left[u[x]] == fl[T.left[x]] and B.right[u[x]] == fr[T.right[x]]
                   for x in range(T.apex))

    def apex_maps(self, l, r, t, b):
        key = (l, r, t, b)
        if key not in self._maps:
            T, B = self.cells[t], self.cells[b]
            fl, fr = self.funcs[l], self.funcs[r]
            options = []
            for x in range(T.apex):
                want = (fl[T.left[x]], fr[T.right[x]])
                options.append([y for y in range(B.apex) if (B.left[y], B.right[y]) == want])
            self._maps[key] = [tuple(u) for u in itertools.product(*options)]
        return self._maps[key]

    def squares_with(self, left=None, right=None, top=None, bottom=None):
        V = self.vertical
        lefts = [left] if left is not None else (
            V.out_of(self.hsource(top)) if top is not None else
            V.into(self.hsource(bottom)) if bottom is not None else V.mors)
        rights = [right] if right is not None else (
            V.out_of(self.htarget(top)) if top is not None else
            V.into(self.htarget(bottom)) if bottom is not None else V.mors)
        out = []
        for l in lefts:
            for r in rights:
                a, b = V.source(l), V.source(r)
                c, d = V.target(l), V.target(r)
                tops = [top] if top is not None else self._hom.get((a, b), [])
                bots = [bottom] if bottom is not None else self._hom.get((c, d), [])
                for t in tops:
                    if (self.hsource(t), self.htarget(t)) != (a, b):
                        continue
                    for bb in bots:
                        if (self.hsource(bb), self.htarget(bb)) != (c, d):
                            continue
                        for u in self.apex_maps(l, r, t, bb):
                            out.append((l, r, t, bb, u))
        return out

    def squares(self):
        return self.squares_with()

    def _vcomp(self, top, bottom):
        V = self.vertical
        u = tuple(bottom[4][y] for y in top[4])
        return (V.compose(bottom[0], top[0]), V.compose(bottom[1], top[1]), top[2], bottom[3], u)

    def _hcomp(self, left, right):
        t, b = self.hcompose(left[2], right[2]), self.hcompose(left[3], right[3])
        pt = self._pullback(left[2], right[2])
        pb = self._pullback(left[3], right[3])
        u = tuple(pb.index((left[4][x], right[4][y])) for x, y in pt)
        return (left[0], right[1], t, b, u)

    def unit_square(self, f):
        V = self.vertical
        return (f, f, self.hunit(V.source(f)), self.hunit(V.target(f)), tuple(self.funcs[f]))

    def vid(self, h):
        V = self.vertical
        return (V.identity(self.hsource(h)), V.identity(self.htarget(h)), h, h, tuple(range(self.cells[h].apex)))

    def slabel(self, s):
        V = self.vertical
        return f"[{V.label(s[0])} | {V.label(s[1])} : {self.hlabel(s[2])} => {self.hlabel(s[3])} via {s[4]}]"


def build_rel(n, restriction=None):
    C = RelDoubleCategory(n)
    return _restrict(C, restriction, {"star": "bijective", "tilde": "injective", "hat": "surjective"})


def build_span(n, apex=None, restriction=None):
    C = SpanDoubleCategory(n, apex)
    return _restrict(C, restriction, {"star": "bijective", "tilde": "injective", "hat": "surjective"})


def _restrict(C, restriction, kinds):
    """Restrict frames. The star restriction is decided by iso search; the
    tilde and hat ones by the explicit function-class shortcut, which the
    test-suite checks against the cartesian search."""
    if restriction is None:
        return C
    if restriction not in kinds:
        raise ValueError(f"unknown restriction {restriction!r}")
    if restriction == "star":
        from .framed import restrict_star
        return restrict_star(C)
    V = C.vertical
    keep = [f for f in V.mors if _frame_ok(C.funcs[f], V.target(f) + 1, kinds[restriction])]
    sym = {"tilde": "~", "hat": "^"}[restriction]
    return SubDoubleCategory(C, vertical_keep=keep, name=f"{C.name}{sym}")


# witnesses


@dataclass
class NoninjectivityWitness:
    """Two distinct squares of the crossed product with the same image under !."""

    first: object
    second: object
    image: object
    crossed_product: object


def find_noninjectivity_witness(C, budget=None):
    """Search the crossed product of H*C for two classes that ! identifies.

    C must be fully faithful so that it induces an opindexing. Squares are
    scanned in sort order and the first collision is returned, or None.
    """
    from .crossprod import build_crossed_product, evaluation_functor
    from .indexing import induce_opindexing

    Phi = induce_opindexing(C)
    q = build_crossed_product(Phi.base, Phi, budget)
    bang = evaluation_functor(q, C, budget)
    seen = {}
    for s in q.dc.sorted_squares():
        x = bang.square(s)
        if x in seen:
            return NoninjectivityWitness(seen[x], s, x, q)
        seen[x] = s
    return None


def replay_noninjectivity(C, w):
    """True iff the two squares are in different classes and compose to the same square of C."""
    from .crossprod import forced_image, is_triple

    q = w.crossed_product

    def image(s):
        return forced_image(C, s) if is_triple(s) else s

    def cls(s):
        return q.rep_of[s] if is_triple(s) else s

    return cls(w.first) != cls(w.second) and image(w.first) == image(w.second) == w.image


# named instances


INSTANCE_KINDS = ("rel", "span", "commuting_squares", "monoid_bundle", "group_double_groupoid",
                  "length_two_witness")
BASE_CATEGORIES = ("path", "cyclic", "discrete")
_REQUIRED = {"rel": ("n",), "span": ("n", "apex"), "commuting_squares": ("category", "n"), "monoid_bundle": ("n",),
             "group_double_groupoid": ("n", "m"), "length_two_witness": ()}


@dataclass(frozen=True)
class InstanceSpec:
    """Names a builder and its size parameters.

    rel: n; span: n and apex; commuting_squares: category (path, cyclic or
    discrete) and n; monoid_bundle: n (Z/n); group_double_groupoid: n and m
    (frames in Z/n, labels in Z/m); length_two_witness: nothing.
    """

    kind: str
    n: int = None
    m: int = None
    apex: int = None
    category: str = None
    restriction: str = None

    def to_plain(self):
        return {k: v for k, v in self.__dict__.items() if v is not None}


def build_instance(spec):
    k = spec.kind
    if k not in INSTANCE_KINDS:
        raise ValueError(f"unknown instance kind {k!r}")
    if spec.restriction is not None and k not in ("rel", "span"):
        raise ValueError(f"{k} takes no restriction")
    for name in _REQUIRED[k]:
        if getattr(spec, name) is None:
            raise ValueError(f"{k} needs {name}")
    if k == "rel":
        return build_rel(spec.n, spec.restriction)
    if k == "span":
        return build_span(spec.n, spec.apex, spec.restriction)
    if k == "commuting_squares":
        cats = {"path": path_category, "discrete": discrete_category,
                "cyclic": lambda n: group_category(cyclic_monoid(n))}
        if spec.category not in cats:
            raise ValueError(f"unknown base category {spec.category!r}")
        if spec.n * spec.n > TABULATE_BUDGET:
            raise BudgetExceeded("category too large to tabulate", witness=spec.n)
        return build_commuting_squares(cats[spec.category](spec.n),
                                       name=f"commuting squares ({spec.category} {spec.n})")
    if k == "monoid_bundle":
        return build_monoid_bundle(cyclic_monoid(spec.n))
    if k == "group_double_groupoid":
        if (spec.n * spec.n * spec.m) ** 2 > TABULATE_BUDGET * 10:
            raise BudgetExceeded("group double groupoid too large to tabulate", witness=(spec.n, spec.m))
        return build_group_double_groupoid(cyclic_monoid(spec.n), cyclic_monoid(spec.m))
    return build_length_two_witness()
