"""Grid sweeps and derivative-free maximization over the transformation angles."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import metrics
from .protocol import PINNED_CONVENTION, Convention, Mode
from .transforms import AngleSet, canonical_angle

OBJECTIVES = ("error", "entropy")
EVALUATORS = ("closed_form", "simulation")
NAMES = AngleSet.NAMES

FREE_AXES = {
    Mode.SINGLE_ALICE: ("theta_a", "phi_a"),
    Mode.SINGLE_BOB: ("theta_b", "phi_b"),
    Mode.COMBINED: NAMES,
}

INV_PHI = (math.sqrt(5) - 1) / 2


def _check_objective(objective):
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")


def cf_vectorized(mode, objective) -> Callable:
    """Closed-form objective taking four broadcastable angle arrays."""
    mode = Mode.parse(mode)
    _check_objective(objective)
    if mode is Mode.COMBINED:
        return metrics.cf_error_combined if objective == "error" else metrics.cf_entropy_combined
    single = metrics.cf_error_single if objective == "error" else metrics.cf_entropy_single
    if mode is Mode.SINGLE_ALICE:
        return lambda ta, pa, tb, pb: single(ta, pa)
    return lambda ta, pa, tb, pb: single(tb, pb)


def make_objective(mode, objective, evaluator="closed_form", convention: Convention = PINNED_CONVENTION):
    """Scalar objective ``f(AngleSet) -> float``."""
    mode = Mode.parse(mode)
    _check_objective(objective)
    if evaluator == "closed_form":
        g = cf_vectorized(mode, objective)
        return lambda a: float(g(*a.as_tuple()))
    if evaluator == "simulation":
        key = "expected_error" if objective == "error" else "shannon_entropy"
        return lambda a: metrics.simulated(a, mode, convention)[key]
    raise ValueError(f"evaluator must be one of {EVALUATORS}, got {evaluator!r}")


@dataclass
class SweepSpec:
    """Grid definition. ``ranges`` maps an angle name to ``(lo, hi, steps)``
    in radians; ``pins`` fixes angles. Unmentioned angles are 0."""

    mode: Mode
    objective: str
    ranges: Mapping[str, tuple[float, float, int]] = field(default_factory=dict)
    pins: Mapping[str, float] = field(default_factory=dict)
    evaluator: str = "closed_form"

    def __post_init__(self):
        self.mode = Mode.parse(self.mode)
        _check_objective(self.objective)
        if self.evaluator not in EVALUATORS:
            raise ValueError(f"evaluator must be one of {EVALUATORS}")
        for name, (lo, hi, steps) in self.ranges.items():
            if name not in NAMES:
                raise ValueError(f"unknown angle {name!r}")
            if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
                raise ValueError(f"{name}: need finite lo < hi, got [{lo}, {hi}]")
            if int(steps) != steps or steps < 2:
                raise ValueError(f"{name}: need at least 2 steps, got {steps}")
        for name, v in self.pins.items():
            if name not in NAMES:
                raise ValueError(f"unknown angle {name!r}")
            if name in self.ranges:
                raise ValueError(f"{name} is both swept and pinned")
            if not math.isfinite(v):
                raise ValueError(f"{name}: pinned value must be finite")

    def axes(self) -> list[np.ndarray]:
        out = []
        for name in NAMES:
            if name in self.ranges:
                lo, hi, steps = self.ranges[name]
                out.append(np.linspace(lo, hi, int(steps)))
            else:
                out.append(np.array([float(self.pins.get(name, 0.0))]))
        return out


def _mesh(axes):
    grids = np.meshgrid(*axes, indexing="ij")
    return [g.ravel() for g in grids]


def grid_sweep(spec: SweepSpec, convention: Convention = PINNED_CONVENTION) -> list[tuple[AngleSet, float]]:
    """Objective at every grid point, row-major over (theta_a, phi_a, theta_b, phi_b)."""
    axes = spec.axes()
    if spec.evaluator == "closed_form":
        cols = _mesh(axes)
        values = np.broadcast_to(cf_vectorized(spec.mode, spec.objective)(*cols), cols[0].shape)
        points = [AngleSet(*map(float, p)) for p in zip(*cols)]
        values = [float(v) for v in values]
    else:
        f = make_objective(spec.mode, spec.objective, "simulation", convention)
        points = [AngleSet(*map(float, p)) for p in itertools.product(*axes)]
        values = [f(p) for p in points]
    if not all(math.isfinite(v) for v in values):
        raise FloatingPointError("non-finite objective value in sweep")
    return list(zip(points, values))


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10):
    """Maximize ``f`` on [a, b]; returns (x, f(x)). Assumes one peak in the bracket."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass
class OptimumReport:
    best_angles: AngleSet
    best_value: float
    objective: str
    mode: Mode
    refinement_trace: list = field(default_factory=list)
    grid_resolution_used: int | None = None
    cycles: int = 0
    converged: bool = True
    distinct_maxima: list = field(default_factory=list)

    @property
    def mutual_information(self) -> float | None:
        return 1.0 - self.best_value if self.objective == "entropy" else None

    def to_dict(self) -> dict:
        def pt(a):
            return dict(zip(NAMES, a.canonical().in_pi()))

        return {
            "mode": self.mode.value,
            "objective": self.objective,
            "best_value": self.best_value,
            "mutual_information": self.mutual_information,
            "best_angles_in_pi": pt(self.best_angles),
            "grid_resolution_used": self.grid_resolution_used,
            "cycles": self.cycles,
            "converged": self.converged,
            "refinement_trace": [{"angles_in_pi": pt(a), "value": v} for a, v in self.refinement_trace],
            "distinct_maxima": [{"angles_in_pi": pt(a), "value": v} for a, v in self.distinct_maxima],
        }


def refine(
    objective,
    mode,
    start: AngleSet,
    tolerance: float = 1e-12,
    pins: Mapping[str, float] | None = None,
    evaluator: str = "closed_form",
    span: float = math.pi / 2,
    max_cycles: int = 200,
    convention: Convention = PINNED_CONVENTION,
) -> OptimumReport:
    """Coordinate-wise golden-section ascent inside [-pi, pi] per free angle.

    Each cycle line-searches every unpinned angle over ``current +/- span``
    and keeps a move only if it strictly improves the objective. Stops when a
    cycle gains less than ``tolerance`` or after ``max_cycles`` cycles.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    mode = Mode.parse(mode)
    pins = dict(pins or {})
    f = make_objective(mode, objective, evaluator, convention)
    free = [n for n in FREE_AXES[mode] if n not in pins]
    x = start.replace(**pins)
    fx = f(x)
    trace, converged, cycles = [], False, 0
    for cycles in range(1, max_cycles + 1):
        f0 = fx
        for name in free:
            c = getattr(x, name)
            lo, hi = max(c - span, -math.pi), min(c + span, math.pi)
            xn, fn = golden_section_max(lambda v: f(x.replace(**{name: v})), lo, hi)
            if fn > fx:
                x, fx = x.replace(**{name: xn}), fn
        trace.append((x, fx))
        if fx - f0 < tolerance:
            converged = True
            break
    return OptimumReport(x, fx, objective, mode, trace, None, cycles, converged, [(x, fx)])


def _grid_axis(points: int) -> np.ndarray:
    # (-pi, pi]
    return -math.pi + 2 * math.pi * np.arange(1, points + 1) / points


def _angle_key(a: AngleSet):
    # canonical ordering: smallest representatives in [0, 2pi) first
    return tuple(round(x % (2 * math.pi), 9) for x in a.as_tuple())


def find_optima(
    mode,
    objective,
    pins: Mapping[str, float] | None = None,
    points_per_axis: int = 40,
    top: int = 5,
    tolerance: float = 1e-12,
    evaluator: str = "closed_form",
    convention: Convention = PINNED_CONVENTION,
) -> OptimumReport:
    """Coarse grid over the free angles, then ``refine`` from the best ``top`` points."""
    mode = Mode.parse(mode)
    _check_objective(objective)
    pins = dict(pins or {})
    if points_per_axis < 2:
        raise ValueError("need at least 2 grid points per axis")
    axis = _grid_axis(points_per_axis)
    free = [n for n in FREE_AXES[mode] if n not in pins]
    axes = [axis if n in free else np.array([float(pins.get(n, 0.0))]) for n in NAMES]

    if evaluator == "closed_form":
        g = cf_vectorized(mode, objective)
        cols = _mesh(axes)
        values = np.broadcast_to(np.asarray(g(*cols), dtype=float), cols[0].shape)
    else:
        f = make_objective(mode, objective, evaluator, convention)
        cols = _mesh(axes)
        values = np.array([f(AngleSet(*map(float, p))) for p in zip(*cols)])

    # best first; ties resolved by canonical angle order
    order = np.lexsort(tuple(np.round(c % (2 * math.pi), 9) for c in cols[::-1]) + (-values,))
    starts = [AngleSet(*(float(c[i]) for c in cols)) for i in order[:top]]

    results = [
        refine(objective, mode, s, tolerance, pins, evaluator, convention=convention) for s in starts
    ]
    results.sort(key=lambda r: (-r.best_value, _angle_key(r.best_angles)))
    best = results[0]

    distinct, seen = [], []
    for r in results:
        if best.best_value - r.best_value > 1e-6:
            continue
        key = np.array(r.best_angles.canonical().as_tuple())
        if any(np.max(np.abs(key - s)) < 1e-4 for s in seen):
            continue
        seen.append(key)
        distinct.append((r.best_angles, r.best_value))

    best.grid_resolution_used = points_per_axis
    best.distinct_maxima = distinct
    return best
