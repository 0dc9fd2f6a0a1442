import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swapqkd import metrics
from swapqkd.metrics import binary_entropy
from swapqkd.protocol import PINNED_CONVENTION, JointDistribution, Mode, Scenario, run_mode
from swapqkd.transforms import AngleSet

angle = st.floats(-math.pi, math.pi, allow_nan=False)
HALF = math.pi / 2


def test_binary_entropy_values():
    assert binary_entropy(0) == 0 and binary_entropy(1) == 0
    assert binary_entropy(0.5) == 1
    assert binary_entropy(2 / 3) == pytest.approx(0.918296, abs=1e-6)
    assert isinstance(binary_entropy(0.3), float)
    assert binary_entropy(np.array([0.25, 0.75])) == pytest.approx([0.811278, 0.811278], abs=1e-6)


@pytest.mark.parametrize("bad", [-0.1, 1.1, math.nan])
def test_binary_entropy_domain(bad):
    with pytest.raises(ValueError):
        binary_entropy(bad)


@given(st.floats(0, 1))
def test_binary_entropy_symmetric(x):
    assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-12)


def test_weights_must_sum_to_one():
    d = JointDistribution(np.full((4, 4, 4), 1 / 64), Scenario(False, False, 0.5))
    for f in (metrics.error_from_dist, metrics.collision_from_dist, metrics.entropy_from_dist):
        with pytest.raises(ValueError):
            f([d])


def test_identity_angles_report():
    r = metrics.report(AngleSet(), "combined", PINNED_CONVENTION)
    assert r.simulation.expected_error == pytest.approx(0, abs=1e-12)
    assert r.simulation.shannon_entropy == pytest.approx(0, abs=1e-12)
    assert r.simulation.mutual_information == pytest.approx(1, abs=1e-12)
    assert r.closed_form.expected_collision is None
    assert r.deltas["expected_collision"] is None
    assert r.deltas["expected_error"] == pytest.approx(0, abs=1e-12)


def test_identity_angles_eve_deterministic():
    # zero entropy exactly when every conditional Eve distribution is one-hot
    for d in run_mode(AngleSet(), "combined"):
        cond = d.eve_given_alice()
        assert np.allclose(np.sort(cond, axis=1), [[0, 0, 0, 1]] * 4, atol=1e-12)


def test_hadamard_single_report():
    r = metrics.report(AngleSet.from_pi(0.5, 0.5), "single-alice", PINNED_CONVENTION)
    for src in (r.closed_form, r.simulation):
        got = (src.expected_error, src.expected_collision, src.shannon_entropy, src.mutual_information)
        assert got == pytest.approx((0.25, 0.75, 0.5, 0.5), abs=1e-12)


def test_report_needs_convention():
    with pytest.raises(ValueError, match="convention_search"):
        metrics.report(AngleSet(), "combined", None)


def test_report_dict_in_pi_units():
    d = metrics.report(AngleSet.from_pi(0.5, 0.25), "single-alice", PINNED_CONVENTION).to_dict()
    assert d["angles_in_pi"] == {"theta_a": 0.5, "phi_a": 0.25, "theta_b": 0, "phi_b": 0}
    assert d["convention"] == "RQ-tf"


def test_collision_half_pi_values():
    assert metrics.cf_collision_single(HALF, HALF) == pytest.approx(0.75, abs=1e-12)
    rng = np.random.default_rng(1)
    t = rng.uniform(-math.pi, math.pi, 50)
    assert np.allclose(metrics.cf_collision_single(t, HALF), (7 + np.cos(2 * t)) / 8, atol=1e-12)


def test_combined_simple_collapses_when_one_party_idle():
    t = np.linspace(-math.pi, math.pi, 1000)
    assert np.max(np.abs(metrics.cf_entropy_combined_simple(t, 0.0) - metrics.cf_entropy_single_simple(t))) <= 1e-12
    assert np.max(np.abs(metrics.cf_entropy_combined_simple(0.0, t) - metrics.cf_entropy_single_simple(t))) <= 1e-12


def test_closed_forms_vectorize():
    t = np.linspace(0, 1, 7)
    assert metrics.cf_error_combined(t, t, t, t).shape == (7,)
    assert isinstance(metrics.cf_entropy_combined(0.1, 0.2, 0.3, 0.4), float)


@pytest.mark.parametrize("mode", ["single-alice", "single-bob"])
def test_single_modes_match_closed_forms(mode):
    rng = np.random.default_rng(2)
    for _ in range(100):
        a = AngleSet(*rng.uniform(-math.pi, math.pi, 4))
        r = metrics.report(a, mode, PINNED_CONVENTION)
        assert max(r.deltas.values()) <= 1e-9


@given(angle, angle)
def test_combined_half_pi_matches_closed_forms(ta, tb):
    a = AngleSet(ta, HALF, tb, HALF)
    sim = metrics.simulated(a, Mode.COMBINED)
    assert sim["expected_error"] == pytest.approx(metrics.cf_error_combined_simple(ta, tb), abs=1e-9)
    assert sim["shannon_entropy"] == pytest.approx(metrics.cf_entropy_combined_simple(ta, tb), abs=1e-9)


def test_rotation_only_reference():
    assert 1 - metrics.cf_entropy_single(2 * math.pi / 3, HALF) == pytest.approx(0.59436, abs=1e-5)


def test_practical_single_values():
    assert metrics.cf_error_single(3 * math.pi / 8, math.pi / 4) == pytest.approx(0.332877, abs=1e-6)
    assert metrics.cf_entropy_single(3 * math.pi / 8, math.pi / 4) == pytest.approx(0.791480, abs=1e-6)


def test_mismatched_overview_cell_values():
    a = AngleSet.from_pi(0, 0.25, 0.5, 0.5)
    assert metrics.cf_error_combined(*a.as_tuple()) == pytest.approx(0.40625, abs=1e-12)
    assert metrics.simulated(a, "combined")["expected_error"] == pytest.approx(0.4375, abs=1e-12)
    assert 1 - metrics.cf_entropy_combined(*a.as_tuple()) == pytest.approx(0.125, abs=1e-12)
