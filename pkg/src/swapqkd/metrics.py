"""Error rate, collision probability and Eve's entropy.

Each quantity has two routes: from simulated joint distributions, and from
closed-form expressions in the transformation angles. The closed forms are
vectorized over numpy arrays so the optimizer can evaluate whole grids.

Definitions used for the simulated route, all averaged over scenarios with
their weights:

* expected error      sum_s w_s P_s(bob != alice)
* expected collision  sum_s w_s sum_a P_s(a) sum_e P_s(e | a)^2
* Shannon entropy     sum_s w_s H_s(E | A), in bits
* mutual information  1 - H
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .protocol import PINNED_CONVENTION, Convention, JointDistribution, Mode, run_mode
from .transforms import AngleSet


def binary_entropy(x):
    """h(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise ValueError(f"binary entropy needs 0 <= x <= 1, got {x!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        y = 1.0 - arr
        out = -np.where(arr > 0, arr * np.log2(np.where(arr > 0, arr, 1.0)), 0.0)
        out -= np.where(y > 0, y * np.log2(np.where(y > 0, y, 1.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def _shannon(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def _check_weights(dists: Sequence[JointDistribution]):
    total = sum(d.scenario.weight for d in dists)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"scenario weights sum to {total}, not 1")


def error_from_dist(dists: Sequence[JointDistribution]) -> float:
    _check_weights(dists)
    return float(sum(d.scenario.weight * d.p_error() for d in dists))


def collision_from_dist(dists: Sequence[JointDistribution]) -> float:
    _check_weights(dists)
    total = 0.0
    for d in dists:
        pa = d.alice_marginal()
        cond = d.eve_given_alice()
        total += d.scenario.weight * float(np.sum(pa * np.sum(cond**2, axis=1)))
    return total


def entropy_from_dist(dists: Sequence[JointDistribution]) -> float:
    """Scenario-averaged conditional entropy H(E|A) in bits."""
    _check_weights(dists)
    total = 0.0
    for d in dists:
        pa = d.alice_marginal()
        cond = d.eve_given_alice()
        total += d.scenario.weight * sum(float(pa[a]) * _shannon(cond[a]) for a in range(4) if pa[a] > 0)
    return float(total)


# ---------------------------------------------------------------------------
# closed forms (angles in radians; scalars or broadcastable arrays)


def _error_bracket(theta, phi):
    return np.sin(theta) ** 2 + np.cos(theta / 2) ** 4 * np.sin(2 * phi) ** 2


def _entropy_bracket(theta, phi):
    c2 = np.clip(np.cos(theta / 2) ** 2, 0.0, 1.0)
    return binary_entropy(c2) + c2 * binary_entropy(np.clip(np.cos(phi) ** 2, 0.0, 1.0))


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def cf_error_single(theta, phi):
    return _scalar(0.25 * _error_bracket(theta, phi))


def cf_collision_single(theta, phi):
    c4 = np.cos(theta / 2) ** 4
    return _scalar((53 - 4 * np.cos(theta) + 7 * np.cos(2 * theta) + 8 * c4 * np.cos(4 * phi)) / 64)


def cf_entropy_single(theta, phi):
    return _scalar(0.5 * _entropy_bracket(theta, phi))


def cf_error_combined(theta_a, phi_a, theta_b, phi_b):
    return _scalar(
        _error_bracket(theta_a, phi_a) / 8
        + _error_bracket(theta_b, phi_b) / 8
        + _error_bracket(theta_a + theta_b, phi_a + phi_b) / 16
        + _error_bracket(theta_a - theta_b, phi_a - phi_b) / 16
    )


def cf_entropy_combined(theta_a, phi_a, theta_b, phi_b):
    return _scalar(
        _entropy_bracket(theta_a, phi_a) / 4
        + _entropy_bracket(theta_b, phi_b) / 4
        + _entropy_bracket(theta_a + theta_b, phi_a + phi_b) / 8
        + _entropy_bracket(theta_a - theta_b, phi_a - phi_b) / 8
    )


# phi = pi/2 forms, kept separate so the general forms can be checked against them
def cf_error_single_simple(theta):
    return _scalar(0.25 * np.sin(theta) ** 2)


def cf_collision_single_simple(theta):
    return _scalar((7 + np.cos(2 * theta)) / 8)


def cf_entropy_single_simple(theta):
    return _scalar(0.5 * binary_entropy(np.clip(np.cos(theta / 2) ** 2, 0.0, 1.0)))


def cf_error_combined_simple(theta_a, theta_b):
    return _scalar(
        np.sin(theta_a) ** 2 / 8
        + np.sin(theta_b) ** 2 / 8
        + np.sin(theta_a + theta_b) ** 2 / 16
        + np.sin(theta_a - theta_b) ** 2 / 16
    )


def cf_entropy_combined_simple(theta_a, theta_b):
    h = lambda t: binary_entropy(np.clip(np.cos(t / 2) ** 2, 0.0, 1.0))  # noqa: E731
    return _scalar(h(theta_a) / 4 + h(theta_b) / 4 + h(theta_a + theta_b) / 8 + h(theta_a - theta_b) / 8)


def closed_form(angles: AngleSet, mode) -> dict:
    """Closed-form metrics; ``expected_collision`` is None in combined mode."""
    mode = Mode.parse(mode)
    ta, pa, tb, pb = angles.as_tuple()
    if mode is Mode.COMBINED:
        err = cf_error_combined(ta, pa, tb, pb)
        ent = cf_entropy_combined(ta, pa, tb, pb)
        col = None
    else:
        t, p = (ta, pa) if mode is Mode.SINGLE_ALICE else (tb, pb)
        err, ent, col = cf_error_single(t, p), cf_entropy_single(t, p), cf_collision_single(t, p)
    return {"expected_error": err, "expected_collision": col, "shannon_entropy": ent}


def simulated(angles: AngleSet, mode, convention: Convention = PINNED_CONVENTION) -> dict:
    dists = run_mode(angles, mode, convention)
    return {
        "expected_error": error_from_dist(dists),
        "expected_collision": collision_from_dist(dists),
        "shannon_entropy": entropy_from_dist(dists),
    }


@dataclass(frozen=True)
class MetricsReport:
    expected_error: float
    expected_collision: float | None
    shannon_entropy: float
    mutual_information: float
    source: str
    mode: str
    angles: AngleSet

    @classmethod
    def build(cls, values: dict, source: str, mode: Mode, angles: AngleSet) -> "MetricsReport":
        h = values["shannon_entropy"]
        return cls(values["expected_error"], values["expected_collision"], h, 1.0 - h, source, mode.value, angles)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["angles"] = dict(zip(AngleSet.NAMES, self.angles.in_pi()))
        return d


@dataclass(frozen=True)
class ReportPair:
    closed_form: MetricsReport
    simulation: MetricsReport
    deltas: dict
    convention: str

    def to_dict(self) -> dict:
        return {
            "mode": self.closed_form.mode,
            "angles_in_pi": dict(zip(AngleSet.NAMES, self.closed_form.angles.in_pi())),
            "convention": self.convention,
            "closed_form": self.closed_form.to_dict(),
            "simulation": self.simulation.to_dict(),
            "deltas": self.deltas,
        }


def report(angles: AngleSet, mode, convention: Convention | None) -> ReportPair:
    """Closed-form and simulated metrics side by side, with |difference| per metric."""
    if convention is None:
        raise ValueError(
            "no adjudicated convention; run protocol.convention_search() "
            "or pass protocol.PINNED_CONVENTION"
        )
    mode = Mode.parse(mode)
    cf = MetricsReport.build(closed_form(angles, mode), "closed_form", mode, angles)
    sim = MetricsReport.build(simulated(angles, mode, convention), "simulation", mode, angles)
    deltas = {}
    for name in ("expected_error", "expected_collision", "shannon_entropy", "mutual_information"):
        a, b = getattr(cf, name), getattr(sim, name)
        deltas[name] = None if a is None or b is None else abs(a - b)
    return ReportPair(cf, sim, deltas, convention.id)
