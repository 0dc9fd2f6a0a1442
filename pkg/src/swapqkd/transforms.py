"""Rotation operators and the two-angle basis transformation.

Gates are plain 2x2 complex numpy arrays. ``basis_transform(theta, phi)``
keeps its ``e^{i phi}`` prefactor, so ``basis_transform(pi/2, pi/2)`` is the
Hadamard matrix exactly rather than up to phase.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

IDENTITY = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)


def _finite(*xs):
    for x in xs:
        if not math.isfinite(x):
            raise ValueError(f"angle must be finite, got {x!r}")


def rot_x(theta: float) -> np.ndarray:
    _finite(theta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def rot_y(theta: float) -> np.ndarray:
    _finite(theta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rot_z(theta: float) -> np.ndarray:
    _finite(theta)
    return np.array(
        [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=np.complex128
    )


def basis_transform(theta: float, phi: float) -> np.ndarray:
    """e^{i phi} R_z(phi) R_x(theta) R_z(phi), written out entrywise."""
    _finite(theta, phi)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    e = complex(math.cos(phi), math.sin(phi))
    off = -1j * e * s
    return np.array([[c, off], [off, e * e * c]], dtype=np.complex128)


def dagger(g: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(g, dtype=np.complex128).conj().T)


def is_unitary(g: np.ndarray, tol: float = 1e-12) -> bool:
    g = np.asarray(g)
    return bool(np.max(np.abs(g.conj().T @ g - IDENTITY)) <= tol)


def canonical_angle(x: float) -> float:
    """Map to (-pi, pi]."""
    y = math.remainder(x, 2 * math.pi)
    return math.pi if y == -math.pi else y


@dataclass(frozen=True)
class AngleSet:
    """Transformation angles in radians for Alice (a) and Bob (b)."""

    theta_a: float = 0.0
    phi_a: float = 0.0
    theta_b: float = 0.0
    phi_b: float = 0.0

    def __post_init__(self):
        _finite(self.theta_a, self.phi_a, self.theta_b, self.phi_b)

    NAMES = ("theta_a", "phi_a", "theta_b", "phi_b")

    @classmethod
    def from_pi(cls, theta_a=0.0, phi_a=0.0, theta_b=0.0, phi_b=0.0) -> "AngleSet":
        """Build from angles given in units of pi (0.5 -> pi/2)."""
        return cls(theta_a * math.pi, phi_a * math.pi, theta_b * math.pi, phi_b * math.pi)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.theta_a, self.phi_a, self.theta_b, self.phi_b)

    def in_pi(self) -> tuple[float, float, float, float]:
        return tuple(x / math.pi for x in self.as_tuple())

    def canonical(self) -> "AngleSet":
        # reporting only; evaluation always uses the raw angles
        return AngleSet(*(canonical_angle(x) for x in self.as_tuple()))

    def replace(self, **kw) -> "AngleSet":
        d = dict(zip(self.NAMES, self.as_tuple()))
        d.update(kw)
        return AngleSet(**d)

    def alice_gate(self) -> np.ndarray:
        return basis_transform(self.theta_a, self.phi_a)

    def bob_gate(self) -> np.ndarray:
        return basis_transform(self.theta_b, self.phi_b)
