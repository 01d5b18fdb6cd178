import dataclasses
import random

import pytest

from dblcat.core_cat import cyclic_monoid, group_category, path_category
from dblcat.doublecat import validate_double_category
from dblcat.errors import BudgetExceeded
from dblcat.framed import is_absolutely_dense, is_cartesian, is_double_groupoid, is_framed, is_fully_faithful, \
    is_opcartesian
from dblcat.instances import (INSTANCE_KINDS, InstanceSpec, build_commuting_squares, build_instance, build_rel,
                              build_span, find_noninjectivity_witness, function_category,
                              nat_endomorphisms_monoid, replay_noninjectivity)
from dblcat.pi2 import pi2_monoid

import oracles
from conftest import instance


def test_function_category_counts():
    cat, funcs = function_category(3)
    assert len(cat.mors) == sum(len(oracles.functions(j, k)) for j in (1, 2, 3) for k in (1, 2, 3))
    for f in cat.mors:
        j, k = cat.mor[f]
        assert len(funcs[f]) == j + 1 and max(funcs[f]) <= k
    for g, f in cat.composable_pairs():
        gf = cat.compose(g, f)
        assert funcs[gf] == tuple(funcs[g][x] for x in funcs[f])


def test_rel3_sampled_niches_have_preimage_fillers():
    C = instance("rel3")
    V = C.vertical
    rng = random.Random(3)
    for _ in range(40):
        beta = rng.choice(list(C.horizontals()))
        l = rng.choice(V.into(C.hsource(beta)))
        r = rng.choice(V.into(C.htarget(beta)))
        j, k = V.source(l) + 1, V.source(r) + 1
        S = frozenset(C.relation(beta)[2])
        pre = oracles.rel_preimage(C.funcs[l], C.funcs[r], S, j, k)
        top = [h for h in C.horizontals_between(V.source(l), V.source(r)) if frozenset(C.relation(h)[2]) == pre]
        assert len(top) == 1
        assert is_cartesian(C, (l, r, top[0], beta))
        alpha = rng.choice(list(C.horizontals()))
        l = rng.choice(V.out_of(C.hsource(alpha)))
        r = rng.choice(V.out_of(C.htarget(alpha)))
        img = oracles.rel_image(C.funcs[l], C.funcs[r], frozenset(C.relation(alpha)[2]))
        bot = [h for h in C.horizontals_between(V.target(l), V.target(r))
               if frozenset(C.relation(h)[2]) == img]
        assert is_opcartesian(C, (l, r, alpha, bot[0]))


def test_rel_size_limit():
    with pytest.raises(BudgetExceeded):
        build_rel(4)
    with pytest.raises(BudgetExceeded):
        build_span(2, 4)


def test_spanstar2_fully_faithful_and_dense():
    C = instance("spanstar2")
    rep = is_framed(C)
    assert rep.ok
    assert is_fully_faithful(C, framed_report=rep) and is_absolutely_dense(C, framed_report=rep)


def test_commuting_squares_builders():
    assert validate_double_category(build_commuting_squares(path_category(2))).ok
    G = build_commuting_squares(group_category(cyclic_monoid(2)))
    assert validate_double_category(G).ok
    assert is_double_groupoid(G)


def test_monoid_bundle_pi2():
    C = instance("bundle2")
    assert pi2_monoid(C, 0).presentation == cyclic_monoid(2)


def test_nat_endomorphisms():
    m, fams = nat_endomorphisms_monoid(group_category(cyclic_monoid(3)))
    assert m.size == 3  # Z/3 is commutative, so every element is central
    m, fams = nat_endomorphisms_monoid(path_category(2))
    assert m.size == 1


def test_no_witness_on_groupoid():
    assert find_noninjectivity_witness(instance("z2")) is None
    assert find_noninjectivity_witness(instance("relstar2")) is None


def test_span_witness_and_replay():
    C = instance("spanstar23")
    w = find_noninjectivity_witness(C)
    assert w is not None
    assert replay_noninjectivity(C, w)
    # same class on both sides is not a witness
    assert not replay_noninjectivity(C, dataclasses.replace(w, second=w.first))


@pytest.mark.parametrize("spec", [
    InstanceSpec("rel", n=2),
    InstanceSpec("rel", n=2, restriction="star"),
    InstanceSpec("span", n=2, apex=2, restriction="star"),
    InstanceSpec("commuting_squares", n=2, category="path"),
    InstanceSpec("commuting_squares", n=2, category="cyclic"),
    InstanceSpec("commuting_squares", n=2, category="discrete"),
    InstanceSpec("monoid_bundle", n=3),
    InstanceSpec("group_double_groupoid", n=2, m=3),
    InstanceSpec("length_two_witness"),
])
def test_build_instance(spec):
    C = build_instance(spec)
    assert C.vertical.mors
    assert spec.to_plain()["kind"] in INSTANCE_KINDS


@pytest.mark.parametrize("spec", [
    InstanceSpec("nope"),
    InstanceSpec("monoid_bundle", n=2, restriction="star"),
    InstanceSpec("commuting_squares", n=2, category="tree"),
    InstanceSpec("rel", n=2, restriction="sideways"),
])
def test_build_instance_rejects(spec):
    with pytest.raises(ValueError):
        build_instance(spec)
