import itertools

import pytest

from dblcat.crossprod import (CrossedProductDouble, Triple, build_crossed_product, check_classes,
                              check_eval_injective, check_eval_properties, check_well_defined, cp_boundary,
                              cp_equal, cp_hcomp, cp_unit_square, cp_vcomp, evaluation_functor, forced_image,
                              horizontalization_matches, is_triple, make_triple, triples_over)
from dblcat.doublecat import boundary_legal_pairs, validate_double_category
from dblcat.errors import BaseMismatch, BoundaryMismatch, NotInducing
from dblcat.indexing import OPINDEXING, induce_indexing, indexing_from_tables, trivial_indexing
from dblcat.length import globularly_generated_piece
from dblcat.twocat import decorated_horizontalization

import oracles
from conftest import crossed, instance

SUITE = ["square2", "bundle2", "z2", "relstar2"]


def _v(B, x, y):
    try:
        return B.vcomp2(x, y)
    except Exception:
        return None


def nu_neighbours(base, Phi):
    """Both directions of one nu-step, by trying every nu, down and up."""
    B, V = base.B, base.Bstar

    def step(t):
        ups = list(B.cells_between(target=B.unit1(V.source(t.f))))
        downs = list(B.cells_between(source=B.unit1(V.target(t.f))))
        out = []
        if Phi.direction == OPINDEXING:
            for nu in Phi.monoids[V.target(t.f)].embedding:
                slid = Phi.apply_square(t.f, nu)
                # t = (d, f, u) on the left of the relation
                for d2 in downs:
                    if _v(B, nu, d2) == t.down:
                        out.append(Triple(d2, t.f, _v(B, t.up, slid)))
                # t = (d', f, u') on the right
                for u in ups:
                    if _v(B, u, slid) == t.up:
                        out.append(Triple(_v(B, nu, t.down), t.f, u))
        else:
            for nu in Phi.monoids[V.source(t.f)].embedding:
                slid = Phi.apply_square(t.f, nu)
                for u2 in ups:
                    if _v(B, u2, nu) == t.up:
                        out.append(Triple(_v(B, slid, t.down), t.f, u2))
                for d in downs:
                    if _v(B, slid, d) == t.down:
                        out.append(Triple(d, t.f, _v(B, t.up, nu)))
        return out

    return step


def oracle_classes(base, Phi):
    V = base.Bstar
    triples = [t for f in V.mors if not V.is_identity(f) for t in triples_over(base, f)]
    return set(oracles.closure_classes(triples, nu_neighbours(base, Phi)))


@pytest.mark.parametrize("name", SUITE)
def test_classes_match_bfs_oracle(name):
    C, Phi, q = crossed(name)
    assert {frozenset(m) for m in q.classes.values()} == oracle_classes(q.base, Phi)
    assert check_classes(q).ok


def test_indexing_classes_match_bfs_oracle():
    C = instance("z2")
    Phi = induce_indexing(C)
    q = build_crossed_product(Phi.base, Phi)
    assert {frozenset(m) for m in q.classes.values()} == oracle_classes(q.base, Phi)


def test_z2_orbit_count():
    C, Phi, q = crossed("z2")
    B = q.base.B
    f = 1
    triples = triples_over(q.base, f)
    group = list(Phi.monoids[0].embedding)

    def act(nu, t):
        return Triple(_v(B, nu, t.down), f, _v(B, t.up, Phi.apply_square(f, nu)))

    assert len(triples) == 4
    assert len(q.classes) == oracles.orbit_count(triples, group, act) == 2
    assert q.dc.square_count() == len(list(B.cells())) + 2 == 4


def test_cp_equal_z2_witness():
    C, Phi, q = crossed("z2")
    B = q.base.B
    zero, one = Phi.monoids[0].embedding
    s, t = Triple(one, 1, zero), Triple(zero, 1, one)
    d = cp_equal(q.base, Phi, s, t)
    assert d and d.witness == one
    assert not cp_equal(q.base, Phi, s, Triple(one, 1, one))
    with pytest.raises(BoundaryMismatch):
        cp_equal(q.base, Phi, s, zero if False else Triple(one, 0, zero))


def test_commuting_squares_trivial_indexing():
    C = instance("square2")
    base = decorated_horizontalization(C)
    Phi = trivial_indexing(base)
    q = build_crossed_product(base, Phi)
    V = base.Bstar
    B = base.B
    for rep, members in q.classes.items():
        assert len(members) == 1
        assert rep.down == B.id2(B.unit1(V.target(rep.f)))
        assert rep.up == B.id2(B.unit1(V.source(rep.f)))
    assert validate_double_category(q.dc).ok
    assert horizontalization_matches(q).ok


def _pairs(C, bnd):
    V = C.vertical
    return tuple(V.mor[x] for x in bnd)


def test_commuting_squares_composites_match_pointwise():
    C, Phi, q = crossed("square2")
    D = q.dc
    for s, u in boundary_legal_pairs(D, "v"):
        got = _pairs(C, D.boundary(D.vcomp(s, u)))
        assert got == oracles.poset_vcomp(_pairs(C, D.boundary(s)), _pairs(C, D.boundary(u)))
    for s, u in boundary_legal_pairs(D, "h"):
        got = _pairs(C, D.boundary(D.hcomp(s, u)))
        assert got == oracles.poset_hcomp(_pairs(C, D.boundary(s)), _pairs(C, D.boundary(u)))


def _requotient(q, x):
    return q.rep_of[x] if is_triple(x) else x


def test_z2_associativity_against_requotient():
    C, Phi, q = crossed("z2")
    D, base = q.dc, q.base
    classes = oracle_classes(base, Phi)
    cls = {t: c for c in classes for t in c}

    def same(x, y):
        if is_triple(x) or is_triple(y):
            return is_triple(x) and is_triple(y) and cls[x] == cls[y]
        return x == y

    # every member, not just representatives
    members = [m for s in D.squares() for m in (q.classes[s] if is_triple(s) else (s,))]
    for x, y, z in itertools.product(members, repeat=3):
        try:
            left = cp_vcomp(base, Phi, cp_vcomp(base, Phi, x, y), z)
            right = cp_vcomp(base, Phi, x, cp_vcomp(base, Phi, y, z))
        except BoundaryMismatch:
            continue
        assert same(left, right), (x, y, z)
        try:
            left = cp_hcomp(base, Phi, cp_hcomp(base, Phi, x, y), z)
            right = cp_hcomp(base, Phi, x, cp_hcomp(base, Phi, y, z))
        except BoundaryMismatch:
            continue
        assert same(left, right), (x, y, z)


@pytest.mark.parametrize("name", SUITE)
def test_crossed_product_is_valid(name):
    C, Phi, q = crossed(name)
    assert validate_double_category(q.dc).ok
    assert horizontalization_matches(q).ok
    assert check_well_defined(q).ok
    assert q.one_step_is_closure


def test_unit_square_and_normalisation():
    C, Phi, q = crossed("z2")
    base = q.base
    B = base.B
    u = cp_unit_square(base, 1)
    assert cp_boundary(base, u) == (1, 1, 0, 0)
    # a triple over an identity is the vertical composite of its cells
    x = B.cells()[1]
    assert make_triple(base, x, 0, B.id2(0)) == x
    C2, Phi2, q2 = crossed("square2")
    B2, V2 = q2.base.B, q2.base.Bstar
    f = next(f for f in V2.mors if not V2.is_identity(f))
    wrong = next(c for c in B2.cells() if B2.cell_target(c) != B2.unit1(V2.source(f)))
    ok_down = B2.id2(B2.unit1(V2.target(f)))
    with pytest.raises(BoundaryMismatch):
        make_triple(q2.base, ok_down, f, wrong)


def test_bang_on_relstar3_is_posetal_oracle():
    C, Phi, q = crossed("relstar3")
    bang = evaluation_functor(q, C)
    for s in q.dc.squares():
        want = C.squares_with(*q.dc.boundary(s))
        assert [bang.square(s)] == want
    assert check_eval_injective(bang, q)


def test_bang_on_z2_is_bijective_onto_gamma():
    C, Phi, q = crossed("z2")
    bang = evaluation_functor(q, C)
    image = {bang.square(s) for s in q.dc.squares()}
    gamma = globularly_generated_piece(C)
    assert len(image) == q.dc.square_count() == len(gamma) == 4
    assert image == set(gamma.squares)
    assert check_eval_injective(bang, q)


@pytest.mark.parametrize("name", SUITE)
def test_eval_properties(name):
    C, Phi, q = crossed(name)
    bang = evaluation_functor(q, C)
    rep = check_eval_properties(bang, q, C)
    assert rep.ok, rep.violations[:3]
    assert rep.info["image"] == rep.info["gamma"]


def test_fullness_onto_c_is_informational():
    C, Phi, q = crossed("z2")
    rep = check_eval_properties(evaluation_functor(q, C), q, C)
    assert rep.ok and rep.info["full_on_C"] is False
    assert rep.notes and "outside the globularly generated piece" in rep.notes[0]
    # squares with different frames are exactly the ones missed
    missed = [s for s in C.squares() if C.left(s) != C.right(s)]
    assert len(missed) == len(C.squares()) - rep.info["image"]


def test_forced_image_is_composite():
    C, Phi, q = crossed("z2")
    for rep in q.classes:
        want = C.vcomp(C.vcomp(rep.up, C.unit_square(rep.f)), rep.down)
        assert forced_image(C, rep) == want


def test_eval_refuses_wrong_base():
    C, Phi, q = crossed("z2")
    with pytest.raises(BaseMismatch):
        evaluation_functor(q, instance("bundle2"))


def test_eval_refuses_noninducing():
    C = instance("z2")
    base = decorated_horizontalization(C)
    bad = indexing_from_tables(base, OPINDEXING, {0: (0, 1), 1: (0, 0)})
    q = build_crossed_product(base, bad)
    with pytest.raises(NotInducing):
        evaluation_functor(q, C)


def test_locally_posetal_flag():
    assert crossed("relstar2")[2].dc.locally_posetal
    assert not crossed("z2")[2].dc.locally_posetal
    assert isinstance(crossed("z2")[2].dc, CrossedProductDouble)
