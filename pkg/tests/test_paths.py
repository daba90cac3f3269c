import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pathfield.errors import CausalityError
from pathfield.geometry import minkowski_metric
from pathfield.paths import (AdmissibilityReport, Path, action,
                             admissible_fraction, arc_length_action,
                             free_alt_action, is_admissible, path_from_text,
                             path_to_text, proper_time, rel_ho_action,
                             reverse, sample_paths, translate_parameter)

G4 = minkowski_metric(4)
G2 = minkowski_metric(2)

# regression pin: computed once with this exact configuration
PINNED_FRACTION = 0.0078  # seed=7, count=10_000, segments=8, tol=0.1, m=1


def rest_path(dt, dim=4):
    ev = np.zeros((2, dim))
    ev[1, 0] = dt
    return Path(events=ev, params=np.array([0.0, dt]))


def segment_path(dt, dx, dim=4):
    ev = np.zeros((2, dim))
    ev[1, 0] = dt
    ev[1, 1] = dx
    tau = math.sqrt(max(dt * dt - dx * dx, 0.0))
    return Path(events=ev, params=np.array([0.0, max(tau, 1.0)]))


def test_path_validation():
    with pytest.raises(ValueError):
        Path(events=np.zeros((1, 4)), params=np.array([0.0]))
    with pytest.raises(ValueError):
        Path(events=np.zeros((2, 4)), params=np.array([0.0, 0.0]))
    with pytest.raises(ValueError):
        Path(events=np.zeros((3, 4)), params=np.array([0.0, 1.0]))


def test_paths_are_immutable():
    p = rest_path(1.0)
    with pytest.raises(ValueError):
        p.events[0, 0] = 5.0


def test_proper_time_examples():
    assert proper_time(rest_path(3.0), G4) == pytest.approx(3.0, abs=1e-14)
    assert proper_time(segment_path(5.0, 3.0), G4) == pytest.approx(4.0, abs=1e-12)
    assert proper_time(segment_path(1.0, 1.0), G4) == pytest.approx(0.0, abs=1e-9)


def test_spacelike_segment_raises():
    with pytest.raises(CausalityError):
        proper_time(segment_path(1.0, 2.0), G4)


def test_action_scales_proper_time():
    # straight timelike path with proper time pi, m = 2 -> action 2 pi
    p = rest_path(math.pi)
    assert action(p, arc_length_action(2.0), G4) == pytest.approx(2 * math.pi,
                                                                  rel=1e-14)


def test_degenerate_path_zero_action():
    ev = np.zeros((2, 4))
    p = Path(events=ev, params=np.array([0.0, 1.0]))
    assert action(p, arc_length_action(1.0), G4) == 0.0


def test_free_alt_matches_arc_length_on_arc_parameterized_paths():
    for path in sample_paths(3, 20, 6, G4):
        s_arc = action(path, arc_length_action(1.5), G4)
        s_alt = action(path, free_alt_action(1.5), G4)
        assert s_alt == pytest.approx(s_arc, rel=1e-10)


def test_rel_ho_reduces_to_free_alt_at_zero_stiffness():
    for path in sample_paths(5, 10, 5, G2):
        s_free = action(path, free_alt_action(1.0), G2)
        s_ho = action(path, rel_ho_action(0.0, m=1.0), G2)
        assert s_ho == s_free


def test_rel_ho_hand_value():
    # one segment in 1+1: t: 0->2, q: 1->2, dtau = 1
    ev = np.array([[0.0, 1.0], [2.0, 2.0]])
    p = Path(events=ev, params=np.array([0.0, 1.0]))
    eta = 0.8
    # v = (2, 1), v.v = 3, qmid = 1.5 -> L = (3+1)/2 + 0.4*2.25*2
    expected = 2.0 + 0.4 * 2.25 * 2.0
    assert action(p, rel_ho_action(eta), G2) == pytest.approx(expected, rel=1e-14)


def test_admissibility_examples():
    rep = is_admissible(rest_path(math.pi), arc_length_action(2.0), G4, 1e-6)
    assert rep.admissible and rep.nearest_n == 1
    assert rep.deviation <= 1e-12

    rep = is_admissible(rest_path(math.pi), arc_length_action(1.0), G4, 1e-6)
    assert not rep.admissible
    assert rep.deviation == pytest.approx(math.pi, rel=1e-12)

    ev = np.zeros((2, 4))
    degenerate = Path(events=ev, params=np.array([0.0, 1.0]))
    rep = is_admissible(degenerate, arc_length_action(1.0), G4, 1e-6)
    assert rep.admissible and rep.nearest_n == 0 and rep.deviation == 0.0


@pytest.mark.parametrize("tol", [0.0, -0.1, math.pi + 0.1])
def test_admissibility_tolerance_domain(tol):
    with pytest.raises(ValueError):
        is_admissible(rest_path(1.0), arc_length_action(1.0), G4, tol)


def test_translate_identity_and_anchor():
    p = sample_paths(1, 1, 5, G4)[0]
    same = translate_parameter(p, 0.0)
    assert np.array_equal(same.events, p.events)
    assert np.array_equal(same.params, p.params)
    anchored = translate_parameter(p, -p.params[0])
    assert anchored.params[0] == 0.0


@given(st.floats(-50.0, 50.0))
@settings(max_examples=30, deadline=None)
def test_translate_leaves_report_unchanged(dtau):
    model = arc_length_action(1.0)
    p = sample_paths(2, 1, 6, G4)[0]
    a = is_admissible(p, model, G4, 0.1)
    b = is_admissible(translate_parameter(p, dtau), model, G4, 0.1)
    assert (a.admissible, a.nearest_n, a.deviation) == (b.admissible, b.nearest_n, b.deviation)


def test_action_additivity_exact():
    p = sample_paths(9, 1, 8, G4)[0]
    model = arc_length_action(1.0)
    k = 4
    front = Path(events=p.events[: k + 1], params=p.params[: k + 1])
    back = Path(events=p.events[k:], params=p.params[k:])
    assert action(front, model, G4) + action(back, model, G4) == action(p, model, G4)


def test_reparameterization_leaves_arc_action_unchanged():
    p = sample_paths(4, 1, 6, G4)[0]
    model = arc_length_action(2.0)
    rescaled = Path(events=p.events, params=3.7 * p.params)
    assert action(rescaled, model, G4) == action(p, model, G4)


def test_reversal_negates_winding_number():
    model = arc_length_action(1.0)
    for p in sample_paths(6, 10, 7, G4):
        a = is_admissible(p, model, G4, 0.1)
        b = is_admissible(reverse(p), model, G4, 0.1)
        assert b.nearest_n == -a.nearest_n
        assert b.deviation == pytest.approx(a.deviation, abs=1e-12)


def test_sample_paths_contracts():
    assert sample_paths(1, 0, 5, G4) == []
    a = sample_paths(1, 4, 5, G4)
    b = sample_paths(1, 4, 5, G4)
    for pa, pb in zip(a, b):
        assert np.array_equal(pa.events, pb.events)
        assert np.array_equal(pa.params, pb.params)
    # partition independence: the prefix of a larger ensemble is identical
    big = sample_paths(1, 8, 5, G4)
    for pa, pb in zip(a, big[:4]):
        assert np.array_equal(pa.events, pb.events)


def test_sampled_paths_are_timelike():
    for p in sample_paths(1, 200, 20, G4):
        assert proper_time(p, G4) > 0.0


def test_admissible_fraction_bounds():
    model = arc_length_action(1.0)
    ens = sample_paths(7, 500, 8, G4)
    assert admissible_fraction(ens, model, G4, math.pi) == 1.0
    assert admissible_fraction(ens, model, G4, 1e-9) <= 0.01


def test_admissible_fraction_regression():
    model = arc_length_action(1.0)
    ens = sample_paths(7, 10_000, 8, G4)
    assert admissible_fraction(ens, model, G4, 0.1) == PINNED_FRACTION


def test_admissible_fraction_empty():
    with pytest.raises(ValueError):
        admissible_fraction([], arc_length_action(1.0), G4, 0.1)


def test_text_round_trip():
    p = sample_paths(8, 1, 5, G4)[0]
    again = path_from_text(path_to_text(p))
    assert np.array_equal(again.events, p.events)
    assert np.array_equal(again.params, p.params)


def test_reader_rejects_bad_tables():
    with pytest.raises(ValueError):
        path_from_text("0.0 1.0 0 0 0\n0.0 2.0 0 0 0\n")  # non-increasing tau
    with pytest.raises(ValueError):
        path_from_text("0.0 1.0 0 0\n1.0 2.0 0\n")  # ragged rows
    with pytest.raises(ValueError):
        path_from_text("0.0 1.0 0 0\n")  # single vertex
