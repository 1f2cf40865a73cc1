import itertools

import numpy as np
import pytest

from qtnsim.circuits import Circuit, Gate
from qtnsim.tensor_core import Tensor


def brute_force_bucket(bucket_index, tensors):
    """Independent oracle: contract a bucket by enumerating every joint
    assignment of all indices with plain dict/loop arithmetic."""
    union = sorted({i for t in tensors for i in t.indices} - {bucket_index})
    out = {}
    for assign in itertools.product((0, 1), repeat=len(union)):
        env = dict(zip(union, assign))
        total = 0j
        for bval in (0, 1):
            env[bucket_index] = bval
            prod = 1 + 0j
            for t in tensors:
                key = tuple(env[i] for i in t.indices)
                prod *= complex(t.data[key])
            total += prod
        out[assign] = total
    data = np.zeros((2,) * len(union), dtype=np.complex128)
    for assign, val in out.items():
        data[assign] = val
    return union, data


def brute_force_network(tensors):
    """Contract a closed network to a scalar by full enumeration."""
    union = sorted({i for t in tensors for i in t.indices})
    total = 0j
    for assign in itertools.product((0, 1), repeat=len(union)):
        env = dict(zip(union, assign))
        prod = 1 + 0j
        for t in tensors:
            key = tuple(env[i] for i in t.indices)
            prod *= complex(t.data[key])
        total += prod
    return total


def random_tensor(rng, indices):
    shape = (2,) * len(indices)
    data = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return Tensor(indices, data)


GATE_POOL_1Q = ["H", "X", "Y", "Z", "RX", "RZ"]
GATE_POOL_2Q = ["ZZ", "CX"]


def random_circuit(rng, n_qubits, n_gates):
    gates = []
    for _ in range(n_gates):
        if n_qubits >= 2 and rng.random() < 0.4:
            kind = GATE_POOL_2Q[rng.integers(len(GATE_POOL_2Q))]
            q = rng.choice(n_qubits, size=2, replace=False)
            angle = float(rng.uniform(0, 2 * np.pi)) if kind == "ZZ" else None
            gates.append(Gate(kind, tuple(int(x) for x in q), angle))
        else:
            kind = GATE_POOL_1Q[rng.integers(len(GATE_POOL_1Q))]
            q = int(rng.integers(n_qubits))
            angle = float(rng.uniform(0, 2 * np.pi)) if kind in ("RX", "RZ") else None
            gates.append(Gate(kind, (q,), angle))
    return Circuit(n_qubits, gates)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
