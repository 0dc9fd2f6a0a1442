import math

import numpy as np
import pytest

from swapqkd import metrics
from swapqkd.optimize import (
    SweepSpec,
    find_optima,
    golden_section_max,
    grid_sweep,
    make_objective,
    refine,
)
from swapqkd.transforms import AngleSet

PI = math.pi


def test_golden_section_parabola():
    x, fx = golden_section_max(lambda v: -(v - 0.3) ** 2, -1, 2)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert fx == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize(
    "kw",
    [
        dict(mode="single-alice", objective="speed"),
        dict(mode="single-alice", objective="error", evaluator="magic"),
        dict(mode="single-alice", objective="error", ranges={"theta_c": (0, 1, 3)}),
        dict(mode="single-alice", objective="error", ranges={"theta_a": (1, 0, 3)}),
        dict(mode="single-alice", objective="error", ranges={"theta_a": (0, 1, 1)}),
        dict(mode="single-alice", objective="error", ranges={"theta_a": (0, math.inf, 3)}),
        dict(mode="single-alice", objective="error", ranges={"theta_a": (0, 1, 3)}, pins={"theta_a": 0}),
        dict(mode="single-alice", objective="error", pins={"phi_a": math.nan}),
    ],
)
def test_sweep_spec_validation(kw):
    with pytest.raises(ValueError):
        SweepSpec(**kw)


def test_grid_sweep_row_major_and_values():
    spec = SweepSpec("combined", "error", {"theta_a": (0, PI, 3), "theta_b": (0, PI, 2)}, {"phi_a": PI / 2, "phi_b": PI / 2})
    rows = grid_sweep(spec)
    assert [(round(a.theta_a / PI, 3), round(a.theta_b / PI, 3)) for a, _ in rows] == [
        (0, 0), (0, 1), (0.5, 0), (0.5, 1), (1, 0), (1, 1)
    ]
    for a, v in rows:
        assert v == pytest.approx(metrics.cf_error_combined(*a.as_tuple()), abs=1e-15)


def test_grid_sweep_simulation_evaluator():
    spec = SweepSpec("single-alice", "entropy", {"theta_a": (0, PI, 5)}, {"phi_a": PI / 2}, evaluator="simulation")
    for a, v in grid_sweep(spec):
        assert v == pytest.approx(metrics.cf_entropy_single(a.theta_a, a.phi_a), abs=1e-9)


def test_refine_entropy_from_hadamard_point():
    r = refine("entropy", "single-alice", AngleSet.from_pi(0.5, 0.5))
    assert math.cos(r.best_angles.theta_a / 2) ** 2 == pytest.approx(2 / 3, abs=1e-4)
    assert abs(r.best_angles.phi_a) % (PI / 2) == pytest.approx(PI / 4, abs=1e-4)
    assert r.best_value == pytest.approx(0.79248, abs=1e-5)
    assert r.converged


def test_refine_error_with_pinned_phi():
    r = refine("error", "single-alice", AngleSet.from_pi(0.1, 0.25), pins={"phi_a": PI / 4})
    assert r.best_angles.theta_a / PI == pytest.approx(0.39183, abs=1e-3)
    assert r.best_angles.phi_a == PI / 4
    assert r.best_value == pytest.approx(1 / 3, abs=1e-6)


def test_refine_at_local_maximum_stays_put():
    start = AngleSet.from_pi(0.5, 0.5)
    r = refine("error", "single-alice", start, pins={"phi_a": PI / 2})
    assert r.cycles == 1 and len(r.refinement_trace) == 1
    assert r.best_angles == start


def test_refine_trace_monotone_and_in_box():
    r = refine("entropy", "combined", AngleSet.from_pi(0.1, 0.2, 0.3, 0.4))
    values = [v for _, v in r.refinement_trace]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert all(-PI <= x <= PI for x in r.best_angles.as_tuple())


def test_refine_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        refine("error", "single-alice", AngleSet(), tolerance=0)


def test_single_entropy_optimum():
    r = find_optima("single-alice", "entropy")
    assert r.best_value == pytest.approx(0.79248, abs=1e-5)
    assert r.mutual_information == pytest.approx(0.20752, abs=1e-5)
    assert r.grid_resolution_used == 40


def test_single_party_symmetry():
    for obj in ("error", "entropy"):
        a = find_optima("single-alice", obj).best_value
        b = find_optima("single-bob", obj).best_value
        assert a == pytest.approx(b, abs=1e-9)


def test_distinct_maxima_all_optimal():
    r = find_optima("single-alice", "error")
    assert len(r.distinct_maxima) >= 2
    for a, v in r.distinct_maxima:
        assert v == pytest.approx(r.best_value, abs=1e-6)
        assert metrics.cf_error_single(a.theta_a, a.phi_a) == pytest.approx(v, abs=1e-12)


def test_phi_b_free_at_combined_error_maximum():
    best = find_optima("combined", "error").best_value
    for phi_b in np.linspace(-PI, PI, 16, endpoint=False):
        r = find_optima("combined", "error", pins={"phi_a": PI / 4, "phi_b": float(phi_b)})
        assert r.best_value == pytest.approx(best, abs=1e-6)


def test_pinned_identity_evaluation():
    pins = {"theta_a": 0.0, "phi_a": 0.0}
    r = find_optima("single-alice", "error", pins=pins)
    assert r.best_value == make_objective("single-alice", "error")(AngleSet())


def test_report_dict():
    d = find_optima("single-alice", "error").to_dict()
    assert d["best_angles_in_pi"]["theta_a"] == pytest.approx(0.39183, abs=1e-3)
    assert d["mutual_information"] is None
    assert set(d) >= {"refinement_trace", "distinct_maxima", "grid_resolution_used", "converged"}
