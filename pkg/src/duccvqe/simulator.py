"""Dense state-vector circuit execution and exact Pauli expectations.

Amplitudes are little-endian (qubit 0 is the least-significant bit of the
basis index). Expectations are computed term-wise from the X/Z bitmasks
without forming dense operators, so there is no shot noise anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

QUBIT_CAP = 24


class SimulatorError(Exception):
    """Register-size, slot-count, or hermiticity violations."""


@dataclass
class StateVector:
    """Normalized complex amplitudes over 2^n_qubits basis states."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def copy(self):
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def overlap(self, other):
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def prepare_reference(n_qubits, occupied, max_qubits=QUBIT_CAP) -> StateVector:
    """Computational-basis state with 1s on the occupied qubits."""
    if n_qubits > max_qubits:
        raise SimulatorError(
            f"{n_qubits} qubits exceed the cap {max_qubits}; "
            "raise max_qubits explicitly for larger registers")
    occupied = set(occupied)
    if any(not 0 <= q < n_qubits for q in occupied):
        raise SimulatorError(f"occupied qubits {sorted(occupied)} "
                             f"outside 0..{n_qubits - 1}")
    amp = np.zeros(1 << n_qubits, dtype=complex)
    amp[sum(1 << q for q in occupied)] = 1.0
    return StateVector(n_qubits, amp)


def _apply_single(amp, n, q, mat):
    a = amp.reshape(-1, 2, 1 << q)
    a0 = a[:, 0, :].copy()
    a1 = a[:, 1, :]
    a[:, 0, :] = mat[0, 0] * a0 + mat[0, 1] * a1
    a[:, 1, :] = mat[1, 0] * a0 + mat[1, 1] * a1


def _apply_rz(amp, n, q, angle):
    a = amp.reshape(-1, 2, 1 << q)
    a[:, 0, :] *= np.exp(-0.5j * angle)
    a[:, 1, :] *= np.exp(0.5j * angle)


def _apply_cnot(amp, n, control, target):
    a = amp.reshape([2] * n)
    idx = [slice(None)] * n
    idx[n - 1 - control] = 1
    sub = a[tuple(idx)]
    t_axis = (n - 1 - target) - (1 if control > target else 0)
    sub[...] = np.flip(sub, axis=t_axis)


def _rx_matrix(angle):
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


_H_MATRIX = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def apply(circuit, params, state: StateVector) -> StateVector:
    """Run the circuit gate by gate on a copy of the state."""
    if circuit.n_qubits != state.n_qubits:
        raise SimulatorError(
            f"{circuit.n_qubits}-qubit circuit on "
            f"{state.n_qubits}-qubit state")
    if len(params) != circuit.n_params:
        raise SimulatorError(
            f"{len(params)} parameters for {circuit.n_params} slots")
    amp = state.amplitudes.copy()
    n = state.n_qubits
    for g in circuit.gates:
        if g.name == "H":
            _apply_single(amp, n, g.qubits[0], _H_MATRIX)
        elif g.name == "RX":
            _apply_single(amp, n, g.qubits[0], _rx_matrix(g.angle))
        elif g.name == "RZ":
            _apply_rz(amp, n, g.qubits[0], g.resolved_angle(params))
        elif g.name == "CNOT":
            _apply_cnot(amp, n, *g.qubits)
        else:
            raise SimulatorError(f"unknown gate {g.name!r}")
    return StateVector(n, amp)


def _string_expectation(string, amp):
    """<psi|P|psi> from P|k> = i^{nY} (-1)^{|k & z|} |k ^ x>."""
    n_y = (string.x & string.z).bit_count()
    k = np.arange(amp.size, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(k & np.uint64(string.z)) & 1)
    bra = np.conj(amp)[k ^ np.uint64(string.x)]
    return (1j ** n_y) * np.dot(bra, signs * amp)


def expectation(h, state: StateVector, imag_tol=1e-10) -> float:
    """Exact <psi|H|psi> for a Hermitian PauliSum."""
    if not h.is_hermitian(imag_tol):
        raise SimulatorError("PauliSum has non-real coefficients")
    val = 0.0 + 0.0j
    for string, c in h.terms.items():
        val += c * _string_expectation(string, state.amplitudes)
    if abs(val.imag) > imag_tol:
        raise SimulatorError(f"expectation has imaginary residue {val.imag}")
    return float(val.real)
