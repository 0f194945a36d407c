import random

import pytest
from hypothesis import strategies as st

from genuslab.maps import relabel
from genuslab.oracle import enumerate_quadrangulations


def shuffle_perm(size, seed):
    perm = list(range(size))
    random.Random(seed).shuffle(perm)
    return perm


def shuffled(m, seed):
    """The same rooted map with dart d renamed to ``shuffle_perm(D, seed)[d]``."""
    return relabel(m, shuffle_perm(m.dart_count, seed))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture(scope="session")
def oracle_maps():
    return {n: enumerate_quadrangulations(n).maps for n in range(0, 5)}


def chisquare_pvalue(codes, support):
    """Goodness of fit of observed codes against the uniform law on ``support``."""
    from collections import Counter

    from scipy.stats import chisquare

    counts = Counter(codes)
    assert set(counts) <= set(support), "sample outside the support"
    if len(support) == 1:
        return 1.0
    return float(chisquare([counts.get(c, 0) for c in support]).pvalue)
