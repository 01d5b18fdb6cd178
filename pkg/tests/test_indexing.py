import pytest

from dblcat.core_cat import cyclic_monoid
from dblcat.crossprod import build_crossed_product, evaluation_functor
from dblcat.errors import BaseMismatch, DirectionMismatch, NoFactorization, NotFramed
from dblcat.indexing import (INDEXING, OPINDEXING, apply, check_indexing_morphism, check_induces,
                             indexing_from_tables, induce_indexing, induce_opindexing, trivial_indexing,
                             validate_indexing)
from dblcat.instances import build_rel
from dblcat.twocat import decorated_horizontalization

import oracles
from conftest import crossed, instance

XOR = oracles.xor_table()


def _is_trivial(Phi):
    return all(m.size == 1 for m in Phi.monoids.values())


def test_z2_endomorphism_candidates():
    # the only monoid endomorphisms of Z/2 are the identity and the zero map
    cands = oracles.monoid_endomorphisms(2, XOR, 0)
    assert sorted(cands) == [(0, 0), (0, 1)]
    base = decorated_horizontalization(instance("bundle2"))
    results = {h: validate_indexing(indexing_from_tables(base, OPINDEXING, {0: h})).ok for h in cands}
    assert results == {(0, 1): True, (0, 0): False}
    base = decorated_horizontalization(instance("z2"))
    results = {h: validate_indexing(indexing_from_tables(base, OPINDEXING, {0: (0, 1), 1: h})).ok
               for h in cands}
    assert results == {(0, 1): True, (0, 0): False}


def test_apply_identity_hom():
    Phi = induce_opindexing(instance("z2"))
    for x in range(2):
        assert apply(Phi, 1, x) == x
    with pytest.raises(DirectionMismatch):
        apply(Phi, 1, 5)


def test_apply_checks_object():
    Phi = trivial_indexing(decorated_horizontalization(instance("two")))
    V = Phi.base.Bstar
    f1 = next(f for f in V.mors if V.label(f) == "f1")
    # an opindexing slides from the target of f1 (b) to its source (a)
    assert apply(Phi, f1, 1, obj=1) == 0
    with pytest.raises(DirectionMismatch):
        apply(Phi, f1, 0, obj=0)


def test_z2_groupoid_induces_identity_both_ways():
    C = instance("z2")
    for induce in (induce_opindexing, induce_indexing):
        Phi = induce(C)
        assert validate_indexing(Phi).ok
        assert Phi.homs[1] == (0, 1)
        assert check_induces(C, Phi).ok


def test_relstar3_indexing_is_trivial():
    C = instance("relstar3")
    Phi = induce_opindexing(C)
    assert _is_trivial(Phi)
    assert validate_indexing(Phi).ok
    T = trivial_indexing(Phi.base)
    assert T.homs == Phi.homs


def test_rel_hat_indexing_is_trivial():
    C = build_rel(3, "hat")
    Phi = induce_indexing(C)
    assert Phi.direction == INDEXING
    assert _is_trivial(Phi) and validate_indexing(Phi).ok


def test_induce_checks_framing_on_request():
    with pytest.raises(NotFramed):
        induce_opindexing(instance("square2"), check_framed=True)


def test_crossed_product_induces_its_indexing():
    for name in ("square2", "bundle2", "z2", "relstar2"):
        C, Phi, q = crossed(name)
        assert check_induces(q.dc, Phi).ok, name


def test_base_mismatch_raises():
    C, Phi, q = crossed("z2")
    with pytest.raises(BaseMismatch):
        check_induces(instance("bundle2"), Phi)


def test_noninducing_double_category():
    # in the length-two witness the nonzero element of pi2(b) cannot slide up f1
    C = instance("two")
    with pytest.raises(NoFactorization) as e:
        induce_opindexing(C)
    f, phi = e.value.witness
    assert C.vertical.label(f) == "f1"
    assert not check_induces(C, trivial_indexing(decorated_horizontalization(C))).ok


def test_missing_slide_raises():
    # Z/2 bundle whose pi2 is Z/2 but the vertical part is trivial: induce is
    # fine; a hand-made indexing with a bad table is not induced
    C = instance("z2")
    base = decorated_horizontalization(C)
    bad = indexing_from_tables(base, OPINDEXING, {0: (0, 1), 1: (0, 0)})
    assert not check_induces(C, bad).ok


def test_bang_is_indexing_morphism():
    for name in ("square2", "bundle2", "z2", "relstar2"):
        C, Phi, q = crossed(name)
        bang = evaluation_functor(q, C)
        assert check_indexing_morphism(bang, Phi, Phi).ok, name
