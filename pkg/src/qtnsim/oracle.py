"""Exact reference simulators: dense statevector, density-matrix channel
evolution, and the classical fidelity error metric.

Convention: qubit 0 is the most significant bit of the computational-basis
index, so basis state j has bitstring bin(j) read qubit 0 first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Gate, gate_unitary

STATEVECTOR_MAX_QUBITS = 26
DENSITY_MATRIX_MAX_QUBITS = 13


class SimulationCapError(Exception):
    """Raised when a simulation would exceed the configured qubit cap."""


def _apply_gate_tensor(state: np.ndarray, g: Gate, axes) -> np.ndarray:
    """Apply gate unitary to the given tensor axes of a (2,)*k-shaped state."""
    u = gate_unitary(g)
    if g.arity == 1:
        out = np.tensordot(u, state, axes=([1], [axes[0]]))
        return np.moveaxis(out, 0, axes[0])
    ut = u.reshape(2, 2, 2, 2)
    out = np.tensordot(ut, state, axes=([2, 3], list(axes)))
    return np.moveaxis(out, [0, 1], list(axes))


def statevector_simulate(c: Circuit, max_qubits: int = STATEVECTOR_MAX_QUBITS) -> np.ndarray:
    """Evolve |0...0> through the circuit; returns 2^n complex amplitudes."""
    n = c.n_qubits
    if n > max_qubits:
        raise SimulationCapError(f"statevector needs {n} qubits > cap {max_qubits}")
    psi = np.zeros((2,) * n, dtype=np.complex128)
    psi[(0,) * n] = 1.0
    for g in c.gates:
        psi = _apply_gate_tensor(psi, g, g.qubits)
    return psi.reshape(-1)


def probabilities(psi: np.ndarray) -> np.ndarray:
    return (psi.real**2 + psi.imag**2).astype(np.float64)


def amplitude(psi: np.ndarray, bitstring) -> complex:
    idx = 0
    for b in bitstring:
        idx = (idx << 1) | int(b)
    return complex(psi[idx])


def zz_expectation(psi: np.ndarray, n: int, u: int, v: int) -> float:
    """<psi| Z_u Z_v |psi> for a statevector over n qubits."""
    j = np.arange(psi.size)
    bu = (j >> (n - 1 - u)) & 1
    bv = (j >> (n - 1 - v)) & 1
    signs = 1.0 - 2.0 * ((bu ^ bv).astype(np.float64))
    return float(np.sum(signs * probabilities(psi)))


def maxcut_energy_statevector(graph, params) -> float:
    """MaxCut objective sum((1 - <Z_u Z_v>)/2) from a full statevector."""
    from .circuits import qaoa_maxcut_circuit

    psi = statevector_simulate(qaoa_maxcut_circuit(graph, params))
    return sum(
        0.5 * (1.0 - zz_expectation(psi, graph.n_nodes, u, v)) for u, v in graph.edges
    )


def _apply_channel(rho: np.ndarray, kraus_ops, qubit: int, n: int) -> np.ndarray:
    """rho -> sum_j K_j rho K_j^dag on one qubit of a (2,)*(2n)-shaped rho."""
    out = np.zeros_like(rho)
    for k in kraus_ops:
        tmp = np.tensordot(k, rho, axes=([1], [qubit]))
        tmp = np.moveaxis(tmp, 0, qubit)
        tmp = np.tensordot(k.conj(), tmp, axes=([1], [n + qubit]))
        out += np.moveaxis(tmp, 0, n + qubit)
    return out


def density_matrix_simulate(
    c: Circuit, noise_model=None, max_qubits: int = DENSITY_MATRIX_MAX_QUBITS
) -> np.ndarray:
    """Exact noisy evolution of |0><0| with channels applied after each gate.

    Two-qubit channel attachments act as independent single-qubit channels on
    each of the gate's qubits.  Returns the 2^n x 2^n density matrix.
    """
    n = c.n_qubits
    if n > max_qubits:
        raise SimulationCapError(f"density matrix needs {n} qubits > cap {max_qubits}")
    rho = np.zeros((2,) * (2 * n), dtype=np.complex128)
    rho[(0,) * (2 * n)] = 1.0
    for g in c.gates:
        rho = _apply_gate_tensor(rho, g, g.qubits)
        u = gate_unitary(g)
        conj_gate = u.conj()
        bra_axes = tuple(n + q for q in g.qubits)
        if g.arity == 1:
            tmp = np.tensordot(conj_gate, rho, axes=([1], [bra_axes[0]]))
            rho = np.moveaxis(tmp, 0, bra_axes[0])
        else:
            tmp = np.tensordot(conj_gate.reshape(2, 2, 2, 2), rho, axes=([2, 3], list(bra_axes)))
            rho = np.moveaxis(tmp, [0, 1], list(bra_axes))
        if noise_model is not None:
            for ch in noise_model.channels_for(g):
                ops = ch.kraus_ops()
                for q in g.qubits:
                    rho = _apply_channel(rho, ops, q, n)
    return rho.reshape(2**n, 2**n)


def sigma_exact(rho: np.ndarray) -> np.ndarray:
    """Probability vector from the diagonal of an exact density matrix."""
    diag = np.diagonal(rho)
    if np.max(np.abs(diag.imag)) > 1e-8:
        raise ValueError("density matrix diagonal has non-negligible imaginary part")
    probs = np.clip(diag.real, 0.0, None)
    return probs / probs.sum()


@dataclass(frozen=True)
class ErrorReport:
    fidelity: float
    error: float


def error_metric(a: np.ndarray, b: np.ndarray) -> ErrorReport:
    """Classical fidelity F = (sum sqrt(a_j b_j))^2 and Error = 1 - F."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("probability vectors have different lengths")
    overlap = float(np.sum(np.sqrt(np.clip(a, 0.0, None) * np.clip(b, 0.0, None))))
    fid = min(overlap**2, 1.0)
    return ErrorReport(fidelity=fid, error=1.0 - fid)
