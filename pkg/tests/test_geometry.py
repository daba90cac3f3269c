import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pathfield.geometry import (dual_rank, extend_metric, interval,
                                levi_civita_sign, minkowski_metric)


def test_minkowski_examples():
    assert minkowski_metric(2).diag == (1, -1)
    assert minkowski_metric(4).diag == (1, -1, -1, -1)
    assert minkowski_metric(5).diag == (1, -1, -1, -1, -1)
    assert minkowski_metric(4).invariant_label is None


@pytest.mark.parametrize("n", [1, 0, -3])
def test_minkowski_rejects_low_dimension(n):
    with pytest.raises(ValueError):
        minkowski_metric(n)


def test_extend_metric_examples():
    g4 = minkowski_metric(4)
    g5 = extend_metric(g4, "m'")
    assert g5.diag == (1, -1, -1, -1, -1)
    assert g5.invariant_label == "m'"
    assert extend_metric(minkowski_metric(2), "m'").diag == (1, -1, -1)
    g6 = extend_metric(g5, "m''")
    assert g6.dim == 6
    assert g6.diag == g4.diag + (-1, -1)


def test_extend_preserves_existing_entries_exactly():
    g = minkowski_metric(3)
    ext = extend_metric(g, "w")
    assert ext.diag[: g.dim] == g.diag
    assert ext.diag[g.dim] == -1


def test_interval_examples():
    g = minkowski_metric(4)
    assert interval(g, (1, 1, 0, 0)) == 0.0
    assert interval(g, (1, 0, 0, 0)) == 1.0
    assert interval(g, (0, 1, 0, 0)) == -1.0


def test_interval_dimension_mismatch():
    with pytest.raises(ValueError):
        interval(minkowski_metric(4), (1, 2, 3))


@given(st.floats(-1e3, 1e3), st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=4))
def test_interval_quadratic_scaling(a, dx):
    g = minkowski_metric(4)
    scaled = interval(g, [a * v for v in dx])
    # the form cancels for near-null vectors, so the roundoff bound must
    # scale with the summed squares, not with the (possibly tiny) interval
    magnitude = a * a * sum(v * v for v in dx)
    assert abs(scaled - a * a * interval(g, dx)) <= 1e-12 * magnitude + 1e-12


def test_levi_civita_examples():
    assert levi_civita_sign((0, 1, 2, 3)) == 1
    assert levi_civita_sign((1, 0, 2, 3)) == -1
    assert levi_civita_sign((0, 0, 2, 3)) == 0


def test_levi_civita_out_of_range():
    with pytest.raises(IndexError):
        levi_civita_sign((0, 1, 2, 4))
    with pytest.raises(IndexError):
        levi_civita_sign((0, 1, 2), dim=4)


@given(st.permutations(range(5)), st.integers(0, 4), st.integers(0, 4))
def test_levi_civita_antisymmetry(perm, i, j):
    perm = list(perm)
    swapped = perm[:]
    swapped[i], swapped[j] = swapped[j], swapped[i]
    if i == j:
        assert levi_civita_sign(swapped) == levi_civita_sign(perm)
    else:
        assert levi_civita_sign(swapped) == -levi_civita_sign(perm)


@given(st.permutations(range(4)), st.permutations(range(4)))
def test_levi_civita_multiplicative(p, q):
    composed = [p[q[i]] for i in range(4)]
    assert levi_civita_sign(composed) == levi_civita_sign(p) * levi_civita_sign(q)


def test_levi_civita_brute_force_small():
    # independent oracle: inversion counting
    for perm in itertools.permutations(range(4)):
        inversions = sum(1 for a in range(4) for b in range(a + 1, 4)
                         if perm[a] > perm[b])
        assert levi_civita_sign(perm) == (-1) ** inversions


def test_dual_rank_is_two_only_in_four_dimensions():
    assert dual_rank(4) == 2
    for n in (2, 3, 5, 6, 7):
        assert dual_rank(n) != 2 or n == 4


def test_metric_validation():
    from pathfield.geometry import Metric
    with pytest.raises(ValueError):
        Metric(dim=2, diag=(1, 2))
    with pytest.raises(ValueError):
        Metric(dim=3, diag=(1, -1))
    with pytest.raises(ValueError):
        Metric(dim=0, diag=())
