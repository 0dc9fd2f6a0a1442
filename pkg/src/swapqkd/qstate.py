"""Labeled pure states, single-qubit gates and Bell-basis measurement.

Qubit order is big-endian by label position: the first label is the most
significant bit of the amplitude index. Global phases are kept as-is.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

import numpy as np

from ._backend import kernels
from ._kernels_py import BELL_MATRIX

NORM_TOL = 1e-12
NULL_BRANCH = 1e-15  # outcomes at or below this probability get no post-state

_S = 1.0 / np.sqrt(2.0)


class BellOutcome(IntEnum):
    PHI_PLUS = 0
    PHI_MINUS = 1
    PSI_PLUS = 2
    PSI_MINUS = 3

    @property
    def label(self) -> str:
        return ("PhiPlus", "PhiMinus", "PsiPlus", "PsiMinus")[self]


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over an ordered tuple of qubit labels."""

    labels: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate qubit labels in {labels}")
        if amps.shape[0] != 2 ** len(labels):
            raise ValueError(
                f"{len(labels)} labels need {2 ** len(labels)} amplitudes, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized (norm^2 = {norm!r})")
        amps.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown qubit label {label!r}; state has {self.labels}") from None

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self):
        return f"PureState(labels={self.labels}, amplitudes={np.round(self.amplitudes, 6)})"


def basis_state(bits: str, labels: Sequence[str]) -> PureState:
    """Computational basis state, e.g. ``basis_state("01", ["a", "b"])``."""
    if len(bits) != len(labels):
        raise ValueError("one bit per label")
    amps = np.zeros(2 ** len(bits), dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return PureState(tuple(labels), amps)


def x_state(sign: int, label: str = "0") -> PureState:
    """|x+> or |x-> = (|0> +/- |1>)/sqrt(2)."""
    return PureState((label,), np.array([_S, _S if sign > 0 else -_S]))


def bell_state(outcome: BellOutcome, labels: Sequence[str] = ("a", "b")) -> PureState:
    outcome = BellOutcome(outcome)
    return PureState(tuple(labels), BELL_MATRIX[int(outcome)])


def tensor(a: PureState, b: PureState) -> PureState:
    overlap = set(a.labels) & set(b.labels)
    if overlap:
        raise ValueError(f"labels overlap: {sorted(overlap)}")
    return PureState(a.labels + b.labels, np.kron(a.amplitudes, b.amplitudes))


def permute(state: PureState, labels: Sequence[str]) -> PureState:
    """Reorder the qubits of ``state`` to the given label order."""
    labels = tuple(str(x) for x in labels)
    if sorted(labels) != sorted(state.labels):
        raise ValueError(f"{labels} is not a permutation of {state.labels}")
    axes = [state.index(x) for x in labels]
    psi = state.amplitudes.reshape((2,) * state.n_qubits)
    return PureState(labels, np.transpose(psi, axes).reshape(-1))


def apply_gate(state: PureState, gate: np.ndarray, label) -> PureState:
    k = state.index(label)
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got shape {gate.shape}")
    return PureState(state.labels, kernels.apply_gate(state.amplitudes, state.n_qubits, k, gate))


def bell_project(state: PureState, pair) -> list[tuple[BellOutcome, float, PureState | None]]:
    """Complete Bell measurement on ``pair``; the measured qubits are discarded.

    Returns one ``(outcome, probability, post_state)`` entry per Bell state in
    canonical order. ``post_state`` is None for branches with probability at or
    below 1e-15.
    """
    l0, l1 = pair
    q0, q1 = state.index(l0), state.index(l1)
    if q0 == q1:
        raise ValueError("Bell measurement needs two distinct qubits")
    rest = tuple(x for i, x in enumerate(state.labels) if i not in (q0, q1))
    vecs = kernels.bell_project(state.amplitudes, state.n_qubits, q0, q1)
    out = []
    for k in range(4):
        v = vecs[k]
        p = float(np.vdot(v, v).real)
        post = PureState(rest, v / np.sqrt(p)) if p > NULL_BRANCH else None
        out.append((BellOutcome(k), p, post))
    return out


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.labels != b.labels:
        raise ValueError(f"label mismatch: {a.labels} vs {b.labels}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
