from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as scistats

from perfectgen.errors import ValidationError
from perfectgen.partitions import (
    SetPartition,
    all_partitions,
    harper_moments,
    sample_uniform,
    stats,
    tail_reports,
)

import oracles


def test_all_partitions_enumerates_bell_many():
    for m, want in ((1, 1), (2, 2), (3, 5), (4, 15), (5, 52)):
        parts = all_partitions(m)
        assert len(parts) == want
        assert len({p.block_of for p in parts}) == want
        assert {p.block_of for p in parts} == set(oracles.brute_partitions(m))


def test_set_partition_validates_canonical_form():
    SetPartition(3, (0, 1, 0))
    with pytest.raises(ValidationError):
        SetPartition(3, (1, 0, 0))  # first label must be 0
    with pytest.raises(ValidationError):
        SetPartition(3, (0, 2, 1))  # labels must appear in order
    with pytest.raises(ValidationError):
        SetPartition(3, (0, 1))  # wrong length


def test_blocks_listing():
    p = SetPartition(5, (0, 1, 0, 2, 1))
    assert p.blocks() == [[0, 2], [1, 4], [3]]
    assert p.block_count == 3


@settings(max_examples=50)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_sample_uniform_is_canonical_and_consistent(m, seed):
    p = sample_uniform(m, np.random.default_rng(seed))
    assert p.m == m
    # canonical restricted-growth labels reconstruct the same object
    assert SetPartition(m, p.block_of) == p
    s = stats(p)
    assert s.block_count == p.block_count == len(p.blocks())
    assert sum(t * y for t, y in enumerate(s.size_spectrum)) == m
    assert s.max_block == max(len(b) for b in p.blocks())


def test_sample_uniform_chi_square():
    # frozen run: m = 4, 30k draws, seed 3 gives p = 0.993
    rng = np.random.default_rng(3)
    n_draws = 30_000
    counts = Counter(sample_uniform(4, rng).block_of for _ in range(n_draws))
    assert len(counts) == 15
    _, p = scistats.chisquare(np.array(sorted(counts.values())))
    assert p > 1e-3


def test_harper_moments_small():
    # enumeration over the 5 partitions of a 3-set: block counts
    # 1,2,2,2,3 so the mean is 2 and the variance 0.4
    assert harper_moments(3) == pytest.approx((2.0, 0.4))
    for m in (1, 2, 4, 6):
        parts = all_partitions(m)
        counts = [p.block_count for p in parts]
        mean = sum(counts) / len(counts)
        var = sum((c - mean) ** 2 for c in counts) / len(counts)
        got_mean, got_var = harper_moments(m)
        assert got_mean == pytest.approx(mean, rel=1e-9)
        assert got_var == pytest.approx(var, rel=1e-9)


def test_harper_moments_grow():
    means = [harper_moments(m)[0] for m in (5, 20, 80, 320)]
    assert means == sorted(means)


def test_sample_uniform_edge_cases():
    # the empty ground set has exactly one partition
    assert sample_uniform(0, np.random.default_rng(0)) == SetPartition(0, ())
    with pytest.raises(ValidationError):
        sample_uniform(-1, np.random.default_rng(0))


def test_tail_reports_shape_and_flags():
    rep = tail_reports(30, 4000, np.random.default_rng(9))
    kinds = [line.kind for line in rep.lines]
    assert kinds.count("block_count") == 2
    assert "max_block" in kinds
    assert "interval_count" in kinds
    for line in rep.lines:
        assert 0.0 <= line.empirical <= 1.0
        assert not line.flagged
    assert rep.m == 30
    assert rep.samples == 4000
    # the solved urn rate satisfies r * e^r = m
    assert rep.r * np.exp(rep.r) == pytest.approx(30.0, rel=1e-9)


def test_tail_reports_reproducible():
    a = tail_reports(12, 500, np.random.default_rng(21))
    b = tail_reports(12, 500, np.random.default_rng(21))
    assert a == b
