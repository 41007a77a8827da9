import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from perfectgen.errors import ValidationError
from perfectgen.numerics import (
    DEFAULT_EXACT_CUTOFF,
    bell_table,
    log2_binomial_row,
    log_binomial,
    solve_r,
)

import oracles

# first values of the set-partition counting sequence, checked against
# the Bell triangle oracle below as well
BELL_SMALL = (1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975)


def test_bell_small_values():
    t = bell_table(10)
    assert t.exact == BELL_SMALL
    assert t.exact == tuple(oracles.bell_numbers(11))


def test_bell_table_shape_and_cutoff():
    t = bell_table(450)
    assert t.n_max == 450
    assert t.exact_cutoff == DEFAULT_EXACT_CUTOFF == 400
    assert len(t.exact) == DEFAULT_EXACT_CUTOFF + 1
    assert len(t.logs) == 451
    # logs agree with exact values where both exist
    for n in (1, 10, 50, 200, 400):
        assert math.isclose(t.logs[n], math.log2(t.exact[n]), rel_tol=1e-12)


def test_bell_logs_monotone_beyond_cutoff():
    t = bell_table(500)
    diffs = np.diff(t.logs[1:])
    assert (diffs > 0).all()


def test_bell_table_rejects_negative():
    with pytest.raises(ValidationError):
        bell_table(-1)


@given(st.integers(0, 60))
def test_log2_binomial_row_matches_comb(n):
    row = log2_binomial_row(n)
    assert row.shape == (n + 1,)
    for k in range(n + 1):
        assert math.isclose(row[k], math.log2(math.comb(n, k)), abs_tol=1e-10)


@given(st.integers(0, 200), st.integers(0, 200))
def test_log_binomial_matches_comb(n, k):
    if k > n:
        assert log_binomial(n, k).lg == -math.inf
    else:
        assert math.isclose(log_binomial(n, k).lg, math.log2(math.comb(n, k)), abs_tol=1e-9)


def test_solve_r_fixed_point():
    # r * e^r = n, so r(1) is the omega constant
    assert math.isclose(solve_r(1).r, 0.5671432904097838, rel_tol=1e-12)
    for n in (2, 10, 100, 10**6):
        r = solve_r(n).r
        assert math.isclose(r * math.exp(r), n, rel_tol=1e-10)


def test_solve_r_monotone():
    values = [solve_r(n).r for n in (1, 3, 10, 50, 1000)]
    assert values == sorted(values)


def test_solve_r_rejects_nonpositive():
    with pytest.raises(ValidationError):
        solve_r(0)
