import pytest

from dblcat.core_cat import cyclic_monoid, product_monoid
from dblcat.doublecat import FiniteDoubleCategory
from dblcat.errors import EckmannHiltonViolation
from dblcat.instances import build_monoid_bundle
from dblcat.pi2 import all_pi2, eckmann_hilton_check, pi2_monoid, pi2_squares
from dblcat.twocat import decorated_horizontalization, two_category_of_monoid

import oracles
from conftest import instance


def _brute_pi2(C, a):
    V = C.vertical
    i, u = V.identity(a), C.hunit(a)
    return [s for s in C.squares() if C.boundary(s) == (i, i, u, u)]


@pytest.mark.parametrize("name", ["rel1", "rel2", "relstar3"])
def test_rel_pi2_is_trivial(name):
    C = instance(name)
    for a, m in all_pi2(C).items():
        assert m.size == 1
        assert m.unit_square == C.vid(C.hunit(a))
        if name != "relstar3":
            assert list(m.embedding) == _brute_pi2(C, a)


def test_commuting_squares_pi2_is_trivial():
    C = instance("square2")
    for a in C.vertical.objects:
        assert len(_brute_pi2(C, a)) == 1
        assert pi2_monoid(C, a).size == 1


def test_z2_bundle_pi2_is_xor():
    C = instance("bundle2")
    m = pi2_monoid(C, 0)
    assert m.size == 2
    assert [list(r) for r in m.presentation.table] == oracles.xor_table()
    assert eckmann_hilton_check(C, 0).ok


def test_pi2_of_horizontalization_matches():
    for name in ("z2", "bundle2", "two"):
        C = instance(name)
        B = decorated_horizontalization(C).B
        for a in C.vertical.objects:
            assert pi2_monoid(C, a).presentation == pi2_monoid(B, a).presentation


def test_length_two_witness_has_z2_at_middle_objects():
    sizes = {a: m.size for a, m in all_pi2(instance("two")).items()}
    assert sizes == {0: 1, 1: 2, 2: 2, 3: 1}


def test_two_category_of_monoid():
    m = product_monoid(cyclic_monoid(2), cyclic_monoid(3))
    pm = pi2_monoid(two_category_of_monoid(m), 0)
    assert pm.presentation == m


def test_vertical_and_horizontal_disagree():
    C = build_monoid_bundle(cyclic_monoid(3))
    ht = {(x, y): (x + y) % 3 for x in range(3) for y in range(3)}
    ht[1, 1] = 0
    ht[2, 2] = 0
    bad = FiniteDoubleCategory(C.vertical, C.hor, C.hunits, C.hcomposition, C.sq, C.vtable, ht, C.units, C.vids)
    assert eckmann_hilton_check(bad, 0).laws() == ["eckmann-hilton-vh"]
    with pytest.raises(EckmannHiltonViolation) as e:
        pi2_monoid(bad, 0)
    assert e.value.witness in ((1, 1), (2, 2))


def test_pi2_squares_rejects_other_types():
    with pytest.raises(TypeError):
        pi2_squares(object(), 0)
