"""Eve's six-qubit simulation-attack state.

Alice holds qubits (1, R), Bob holds (Q, 4) and Eve keeps (T, U). The state
is prepared directly on this assignment:

    |delta> = 1/2 sum_i |B_i>_{1R} |B_i>_{Q4} |phi_i>_{TU}

with B = (PhiPlus, PhiMinus, PsiPlus, PsiMinus). The labels are stored in
the order (1, Q, R, 4, T, U).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Mapping

import numpy as np

from .qstate import BellOutcome, PureState, bell_state, inner_product, permute, tensor

DELTA_LABELS = ("1", "Q", "R", "4", "T", "U")
AUX_LABELS = ("T", "U")

AuxAssignment = Mapping[int, PureState]


def default_aux() -> dict[int, PureState]:
    """phi_1..phi_4 = PhiPlus, PhiMinus, PsiPlus, PsiMinus on (T, U)."""
    return {i + 1: bell_state(b, AUX_LABELS) for i, b in enumerate(BellOutcome)}


def check_aux(aux: AuxAssignment, tol: float = 1e-12) -> None:
    if sorted(aux) != [1, 2, 3, 4]:
        raise ValueError(f"aux states must be indexed 1..4, got {sorted(aux)}")
    for i in range(1, 5):
        if aux[i].labels != AUX_LABELS:
            raise ValueError(f"aux state {i} must live on {AUX_LABELS}, got {aux[i].labels}")
    for i in range(1, 5):
        for j in range(1, 5):
            want = 1.0 if i == j else 0.0
            if abs(inner_product(aux[i], aux[j]) - want) > tol:
                raise ValueError(f"aux states {i} and {j} are not orthonormal")


def delta_state(aux: AuxAssignment | None = None) -> PureState:
    if aux is None:
        return _default_delta()
    check_aux(aux)
    return _build_delta(aux)


def _build_delta(aux: AuxAssignment) -> PureState:
    amps = np.zeros(64, dtype=np.complex128)
    labels = ("1", "R", "Q", "4", "T", "U")
    for i, b in enumerate(BellOutcome):
        term = tensor(tensor(bell_state(b, ("1", "R")), bell_state(b, ("Q", "4"))), aux[i + 1])
        amps += 0.5 * term.amplitudes
    return permute(PureState(labels, amps), DELTA_LABELS)


@lru_cache(maxsize=1)
def _default_delta() -> PureState:
    return _build_delta(default_aux())
