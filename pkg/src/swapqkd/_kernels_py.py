"""Pure numpy kernels; reference implementation for the Cython core.

Amplitude vectors are big-endian: qubit 0 is the most significant bit.
"""
import numpy as np

_S = 1.0 / np.sqrt(2.0)

# rows: PhiPlus, PhiMinus, PsiPlus, PsiMinus over |00>, |01>, |10>, |11>
BELL_MATRIX = np.array(
    [
        [_S, 0.0, 0.0, _S],
        [_S, 0.0, 0.0, -_S],
        [0.0, _S, _S, 0.0],
        [0.0, _S, -_S, 0.0],
    ],
    dtype=np.complex128,
)


def apply_gate(amps, n, target, gate):
    psi = np.asarray(amps, dtype=np.complex128).reshape((2,) * n)
    out = np.tensordot(np.asarray(gate, dtype=np.complex128), psi, axes=([1], [target]))
    out = np.moveaxis(out, 0, target)
    return np.ascontiguousarray(out).reshape(-1)


def bell_project(amps, n, q0, q1):
    """Unnormalized post-measurement vectors, shape (4, 2**(n-2)).

    Row k holds <B_k|_{q0,q1} |psi>, remaining qubits in their original order.
    """
    psi = np.asarray(amps, dtype=np.complex128).reshape((2,) * n)
    psi = np.moveaxis(psi, (q0, q1), (0, 1)).reshape(4, -1)
    return BELL_MATRIX.conj() @ psi


def bell_table3(amps, pairs):
    """Joint Bell-outcome probabilities for a 6-qubit state split into 3 pairs."""
    psi = np.asarray(amps, dtype=np.complex128).reshape((2,) * 6)
    order = [q for pair in pairs for q in pair]
    psi = np.transpose(psi, order).reshape(4, 4, 4)
    b = BELL_MATRIX.conj()
    amp = np.einsum("ai,bj,ck,ijk->abc", b, b, b, psi)
    return (amp * amp.conj()).real
