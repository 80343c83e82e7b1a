import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semiheap import enumeration, functors, groups
from semiheap.core import PointedSemiheap


@pytest.fixture(scope="session")
def corpus():
    return groups.corpus()


@pytest.fixture(scope="session")
def heap_corpus(corpus):
    """(group, pointed heap) pairs for every bundled group."""
    return [(g, functors.heapify(g)) for g in corpus]


@pytest.fixture(scope="session")
def order2_semiheaps():
    return enumeration.enumerate_semiheaps(2)


@pytest.fixture(scope="session")
def pointed_heaps_upto3():
    """Every (heap, basepoint) pair on carriers of size 1..3."""
    return [PointedSemiheap(s, pt)
            for n in (1, 2, 3)
            for s in enumeration.enumerate_heaps(n)
            for pt in range(n)]
