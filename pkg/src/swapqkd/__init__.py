"""Simulation and analysis of an entanglement-swapping QKD scheme under a
collective simulation attack, with randomized basis transformations as the
countermeasure."""
from ._backend import BACKEND
from .attack import default_aux, delta_state
from .metrics import (
    MetricsReport,
    ReportPair,
    binary_entropy,
    cf_collision_single,
    cf_entropy_combined,
    cf_entropy_single,
    cf_error_combined,
    cf_error_single,
    closed_form,
    report,
    simulated,
)
from .optimize import OptimumReport, SweepSpec, find_optima, grid_sweep, refine
from .protocol import (
    ALL_CONVENTIONS,
    PINNED_CONVENTION,
    Convention,
    ConventionSearchError,
    JointDistribution,
    Mode,
    Scenario,
    attacked_run,
    convention_search,
    honest_run,
    run_mode,
    scenario_set,
)
from .qstate import BellOutcome, PureState, apply_gate, basis_state, bell_project, bell_state, tensor
from .transforms import AngleSet, basis_transform

__version__ = "0.1.0"
