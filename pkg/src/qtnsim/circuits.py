"""Gate/circuit model, QAOA MaxCut circuit builder, and graph utilities."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ONE_QUBIT_KINDS = {"H", "X", "Y", "Z", "RX", "RZ"}
TWO_QUBIT_KINDS = {"ZZ", "CX"}
PARAM_KINDS = {"RX", "RZ", "ZZ"}
# Gates whose unitary is diagonal in the computational basis; the network
# builder keeps these on the existing wire indices.
DIAGONAL_KINDS = {"Z", "RZ", "ZZ"}

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind not in ONE_QUBIT_KINDS | TWO_QUBIT_KINDS:
            raise ValueError(f"unknown gate kind: {self.kind!r}")
        arity = 1 if self.kind in ONE_QUBIT_KINDS else 2
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} expects {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate qubits must be distinct")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")
        if self.kind in PARAM_KINDS:
            if self.angle is None or not np.isfinite(self.angle):
                raise ValueError(f"{self.kind} requires a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    @property
    def arity(self) -> int:
        return len(self.qubits)

    @property
    def is_diagonal(self) -> bool:
        return self.kind in DIAGONAL_KINDS


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise ValueError(f"gate {g} out of range for {self.n_qubits} qubits")


def gate_unitary(g: Gate) -> np.ndarray:
    """Gate unitary as a 2x2 (one-qubit) or 4x4 (two-qubit) matrix."""
    if g.kind == "H":
        return _H.copy()
    if g.kind == "X":
        return _X.copy()
    if g.kind == "Y":
        return _Y.copy()
    if g.kind == "Z":
        return _Z.copy()
    if g.kind == "RX":
        c, s = np.cos(g.angle / 2), np.sin(g.angle / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if g.kind == "RZ":
        return np.diag(np.exp([-0.5j * g.angle, 0.5j * g.angle])).astype(np.complex128)
    if g.kind == "ZZ":
        return np.diag(gate_diagonal(g)).astype(np.complex128)
    if g.kind == "CX":
        return _CX.copy()
    raise AssertionError(g.kind)


def gate_diagonal(g: Gate) -> np.ndarray:
    """Diagonal entries for diagonal gates; raises for non-diagonal kinds."""
    if g.kind == "Z":
        return np.array([1, -1], dtype=np.complex128)
    if g.kind == "RZ":
        return np.exp([-0.5j * g.angle, 0.5j * g.angle]).astype(np.complex128)
    if g.kind == "ZZ":
        h = 0.5 * g.angle
        return np.exp([-1j * h, 1j * h, 1j * h, -1j * h]).astype(np.complex128)
    raise ValueError(f"{g.kind} is not diagonal")


@dataclass(frozen=True)
class Graph:
    n_nodes: int
    edges: tuple

    def __post_init__(self):
        norm = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError("self-loop in graph")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ValueError("edge endpoint out of range")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self):
        deg = [0] * self.n_nodes
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class QaoaParams:
    p: int
    gammas: tuple
    betas: tuple

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if self.p < 1:
            raise ValueError("depth p must be >= 1")
        if len(self.gammas) != self.p or len(self.betas) != self.p:
            raise ValueError("need exactly p gammas and p betas")


# Arbitrary smoke-test angles for CLI defaults; acceptance tests always
# supply explicit angles.
DEFAULT_GAMMA = 0.6
DEFAULT_BETA = 0.4


def qaoa_maxcut_circuit(g: Graph, params: QaoaParams) -> Circuit:
    """H layer, then p alternating layers of ZZ(2*gamma) per edge and RX(2*beta)."""
    gates = [Gate("H", (q,)) for q in range(g.n_nodes)]
    for k in range(params.p):
        for u, v in g.edges:  # Graph.edges already sorted lexicographically
            gates.append(Gate("ZZ", (u, v), 2.0 * params.gammas[k]))
        for q in range(g.n_nodes):
            gates.append(Gate("RX", (q,), 2.0 * params.betas[k]))
    return Circuit(g.n_nodes, gates)


def random_regular_graph(n: int, d: int, seed: int) -> Graph:
    """Uniform d-regular simple graph via the pairing model with rejection."""
    if (n * d) % 2 != 0:
        raise ValueError("degree sequence infeasible")
    if d >= n:
        raise ValueError("degree must be < number of nodes")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(100000):
        perm = rng.permutation(stubs)
        edges = set()
        ok = True
        for i in range(0, len(perm), 2):
            u, v = int(perm[i]), int(perm[i + 1])
            if u == v:
                ok = False
                break
            e = (min(u, v), max(u, v))
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph(n, tuple(sorted(edges)))
    raise RuntimeError(f"pairing model failed to produce a simple graph (n={n}, d={d})")


def parse_graph(text: str) -> Graph:
    """Edge-list format: one edge per line, optional 'nodes N' header, '#' comments."""
    edges = []
    n_nodes = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "nodes":
            n_nodes = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"graph line {lineno}: expected two node indices")
        edges.append((int(parts[0]), int(parts[1])))
    if n_nodes is None:
        if not edges:
            raise ValueError("graph file has no edges and no 'nodes N' header")
        n_nodes = 1 + max(max(e) for e in edges)
    return Graph(n_nodes, tuple(edges))


def read_graph(path) -> Graph:
    with open(path) as f:
        return parse_graph(f.read())


def parse_circuit(text: str) -> Circuit:
    """Circuit format: one gate per line, 'KIND qubit [qubit] [angle]', '#' comments."""
    gates = []
    n_qubits = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0].upper()
        if kind not in ONE_QUBIT_KINDS | TWO_QUBIT_KINDS:
            raise ValueError(f"circuit line {lineno}: unknown gate {kind!r}")
        arity = 1 if kind in ONE_QUBIT_KINDS else 2
        needs_angle = kind in PARAM_KINDS
        expect = 1 + arity + (1 if needs_angle else 0)
        if len(parts) != expect:
            raise ValueError(f"circuit line {lineno}: expected {expect} fields")
        qubits = tuple(int(p) for p in parts[1 : 1 + arity])
        angle = float(parts[1 + arity]) if needs_angle else None
        gates.append(Gate(kind, qubits, angle))
        n_qubits = max(n_qubits, 1 + max(qubits))
    return Circuit(n_qubits, gates)


def read_circuit(path) -> Circuit:
    with open(path) as f:
        return parse_circuit(f.read())
