import itertools

import pytest

from dblcat.core_cat import cyclic_monoid, path_category
from dblcat.doublecat import (FiniteDoubleCategory, boundary_legal_pairs, identity_double_functor, materialize,
                              validate_double_category, validate_double_functor)
from dblcat.errors import BoundaryMismatch, BudgetExceeded, MissingEntry
from dblcat.instances import build_commuting_squares, build_monoid_bundle

import oracles
from conftest import instance


def _rel(C, h):
    return frozenset(C.relation(h)[2])


def _span(C, h):
    c = C.cells[h]
    return (c.j, c.k, c.left, c.right)


@pytest.mark.parametrize("name", ["square2", "bundle2", "z2", "rel1", "two"])
def test_small_instances_validate(name):
    rep = validate_double_category(instance(name))
    assert rep.ok, rep.violations[:3]


@pytest.mark.slow
def test_rel2_validates():
    rep = validate_double_category(instance("rel2"))
    assert rep.ok
    assert rep.info["squares"] == 2778


def test_rel_composition_matches_powerset_oracle():
    C = instance("rel2")
    for h in C.horizontals():
        for k in C.horizontals_between(C.htarget(h), 0) + C.horizontals_between(C.htarget(h), 1):
            assert _rel(C, C.hcompose(h, k)) == oracles.rel_compose(_rel(C, h), _rel(C, k))
    for a in C.vertical.objects:
        assert _rel(C, C.hunit(a)) == oracles.rel_identity(a + 1)


def test_rel_squares_match_inclusion_oracle():
    C = instance("rel2")
    V = C.vertical
    count = 0
    for l, r in itertools.product(V.mors, repeat=2):
        (a, c), (b, d) = V.mor[l], V.mor[r]
        for t in C.horizontals_between(a, b):
            for bot in C.horizontals_between(c, d):
                want = oracles.rel_has_square(C.funcs[l], C.funcs[r], _rel(C, t), _rel(C, bot))
                assert C.has_square((l, r, t, bot)) == want
                assert ((l, r, t, bot) in C.squares_with(l, r, t, None)) == want
                assert ((l, r, t, bot) in C.squares_with(l, r, None, bot)) == want
                count += want
    assert count == len(C.squares()) == 2778


def test_rel_unit_square_is_graph_of_f():
    C = instance("rel2")
    V = C.vertical
    for f in V.mors:
        l, r, t, b = C.unit_square(f)
        a, c = V.mor[f]
        assert (l, r) == (f, f)
        assert _rel(C, t) == oracles.rel_identity(a + 1) and _rel(C, b) == oracles.rel_identity(c + 1)
        assert oracles.rel_image(C.funcs[f], C.funcs[f], oracles.rel_identity(a + 1)) <= _rel(C, b)


def test_rel2_globular_count():
    C = instance("rel2")
    V = C.vertical
    brute = [s for s in C.squares() if V.is_identity(s[0]) and V.is_identity(s[1])]
    assert len(C.globular_squares()) == len(brute) == oracles.inclusion_count(2)


def test_span_composition_matches_pullback_oracle():
    C = instance("span2")
    for h in C.horizontals():
        for b in C.vertical.objects:
            for k in C.horizontals_between(C.htarget(h), b):
                want = oracles.span_compose(_span(C, h), _span(C, k))
                if len(want[2]) > C.cap:
                    with pytest.raises(MissingEntry):
                        C.hcompose(h, k)
                else:
                    assert _span(C, C.hcompose(h, k)) == want


def test_span_squares_match_pointwise_maps():
    C = instance("span2")
    V = C.vertical
    for l, r in itertools.product(V.mors, repeat=2):
        (a, c), (b, d) = V.mor[l], V.mor[r]
        for t in C.horizontals_between(a, b):
            for bot in C.horizontals_between(c, d):
                want = oracles.span_maps(_span(C, t), _span(C, bot), C.funcs[l], C.funcs[r])
                got = [s[4] for s in C.squares_with(l, r, t, bot)]
                assert sorted(got) == sorted(want)


def test_windowed_span_reports_missing_composites():
    rep = validate_double_category(instance("span2"))
    assert "horizontal-composition-missing" in rep.laws()


def _pairs(C, s):
    V = C.vertical
    return tuple(V.mor[x] for x in C.boundary(s))


def test_commuting_squares_match_pointwise_oracle():
    C = instance("square2")
    assert sorted(_pairs(C, s) for s in C.squares()) == sorted(oracles.poset_squares(2))
    for s, u in boundary_legal_pairs(C, "v"):
        assert _pairs(C, C.vcomp(s, u)) == oracles.poset_vcomp(_pairs(C, s), _pairs(C, u))
    for s, u in boundary_legal_pairs(C, "h"):
        assert _pairs(C, C.hcomp(s, u)) == oracles.poset_hcomp(_pairs(C, s), _pairs(C, u))


def test_bad_boundary_raises():
    C = instance("square2")
    s = next(s for s in C.squares() if not C.is_globular(s))
    with pytest.raises(BoundaryMismatch):
        C.vcomp(s, s)


def test_missing_vertical_composite_reported():
    C = build_commuting_squares(path_category(1))
    vt = dict(C.vtable)
    victim = sorted(vt)[0]
    del vt[victim]
    broken = FiniteDoubleCategory(C.vertical, C.hor, C.hunits, C.hcomposition, C.sq, vt, C.htable, C.units, C.vids)
    rep = validate_double_category(broken)
    assert "vcomp-missing" in rep.laws()
    assert victim in [v.witness for v in rep.violations]


def test_interchange_violation_reported():
    # Z/3 bundle with horizontal composition replaced by x + 2y: units still
    # work for 0 but interchange fails
    m = cyclic_monoid(3)
    C = build_monoid_bundle(m)
    ht = {(x, y): (x + 2 * y) % 3 for x in range(3) for y in range(3)}
    broken = FiniteDoubleCategory(C.vertical, C.hor, C.hunits, C.hcomposition, C.sq, C.vtable, ht, C.units, C.vids)
    rep = validate_double_category(broken)
    assert not rep.ok
    assert {"hcomp-unit", "interchange", "hcomp-associativity"} & set(rep.laws())


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        validate_double_category(instance("rel2"), budget=1000)


def test_materialize_round_trip():
    C = instance("z2")
    T, idx = materialize(C)
    assert validate_double_category(T).ok
    T2, _ = materialize(T)
    assert T == T2
    assert validate_double_functor(identity_double_functor(C)).ok
