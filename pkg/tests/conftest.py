import functools
import gc
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dblcat.core_cat import cyclic_monoid, path_category
from dblcat.instances import (build_commuting_squares, build_length_two_witness, build_monoid_bundle,
                              build_rel, build_span, build_z2_double_groupoid)


# Builders are cached: several modules share the same instances.

@functools.lru_cache(maxsize=None)
def instance(name):
    return {
        "square2": lambda: build_commuting_squares(path_category(2)),
        "bundle2": lambda: build_monoid_bundle(cyclic_monoid(2)),
        "z2": build_z2_double_groupoid,
        "rel1": lambda: build_rel(1),
        "rel2": lambda: build_rel(2),
        "rel3": lambda: build_rel(3),
        "relstar2": lambda: build_rel(2, "star"),
        "relstar3": lambda: build_rel(3, "star"),
        "span2": lambda: build_span(2, 2),
        "spanstar2": lambda: build_span(2, 2, "star"),
        "spanstar23": lambda: build_span(2, 3, "star"),
        "two": build_length_two_witness,
    }[name]()


@functools.lru_cache(maxsize=None)
def crossed(name):
    """(C, Phi, crossed product) for a suite instance."""
    from dblcat.crossprod import build_crossed_product
    from dblcat.indexing import induce_opindexing

    C = instance(name)
    Phi = induce_opindexing(C)
    return C, Phi, build_crossed_product(Phi.base, Phi)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs for more than a few seconds")


@pytest.fixture(scope="module", autouse=True)
def _drop_cached_instances():
    # Rel(3), Rel*(3) and their crossed products take gigabytes together,
    # so no module keeps another module's instances alive
    yield
    instance.cache_clear()
    crossed.cache_clear()
    gc.collect()
