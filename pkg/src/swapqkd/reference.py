"""Published reference numbers and named angle sets.

Values are stored as reported (rounded). Angles are in units of pi; use
``AngleSet.from_pi`` to build them.
"""
from __future__ import annotations

from dataclasses import dataclass

from .transforms import AngleSet

# (theta_a, phi_a, theta_b, phi_b) in units of pi
ERROR_OPTIMUM = (0.0, 0.25, 0.45437, 0.25)
ENTROPY_OPTIMUM = (-0.18865, -0.22405, 0.42765, 0.36218)
PRACTICAL_MIXED = (-3 / 16, -0.25, 7 / 16, 3 / 8)
PRACTICAL_FIXED_PHI = (3 / 16, 0.25, 7 / 16, 0.25)

SINGLE_ERROR_MAX = 1 / 3
SINGLE_ERROR_ARGMAX_THETA = 0.39183  # units of pi, with phi in {1/4, 3/4}
SINGLE_ENTROPY_MAX = 0.79248
SINGLE_PRACTICAL = (3 / 8, 0.25)
SINGLE_PRACTICAL_ERROR = 0.33288
SINGLE_PRACTICAL_ENTROPY = 0.79148

COMBINED_ERROR_MAX = 0.41071
COMBINED_ENTROPY_MAX = 0.9452
COMBINED_MIN_INFORMATION = 0.0548
COMBINED_SIMPLE_ENTROPY_MAX = 0.55046
COMBINED_SIMPLE_ARGMAX = (0.25, 0.5, 0.5, 0.5)

ERROR_AT_ENTROPY_OPTIMUM = 0.3993
ENTROPY_AT_ERROR_OPTIMUM = 0.90635

PRACTICAL_MIXED_ENTROPY = 0.9399
PRACTICAL_FIXED_PHI_ENTROPY = 0.91223
PRACTICAL_ERROR = 0.39288

ROTATION_ONLY_THETA = 2 / 3  # units of pi, phi = pi/2
ROTATION_ONLY_INFORMATION = 0.594


@dataclass(frozen=True)
class OverviewCell:
    """One cell of the overview table: angles (units of pi) and the published
    error rate and Eve information. ``known_error_mismatch`` marks the cell whose
    printed error rate disagrees with the combined closed form."""

    angles_pi: tuple[float, float, float, float]
    error: float
    information: float
    known_error_mismatch: bool = False

    @property
    def angles(self) -> AngleSet:
        return AngleSet.from_pi(*self.angles_pi)

    @property
    def name(self) -> str:
        return "(" + ", ".join(f"{x:g}" for x in self.angles_pi) + ")pi"


OVERVIEW = (
    OverviewCell((0.0, 0.0, 0.0, 0.0), 0.0, 1.0),
    OverviewCell((0.5, 0.5, 0.0, 0.0), 0.25, 0.5),
    OverviewCell((3 / 8, 0.25, 0.0, 0.0), 0.333, 0.208),
    OverviewCell((0.5, 0.5, 0.25, 0.5), 0.25, 0.45),
    OverviewCell((0.0, 0.25, 0.5, 0.5), 0.334, 0.125, known_error_mismatch=True),
    OverviewCell((3 / 16, 0.25, 7 / 16, 0.25), 0.393, 0.088),
)
