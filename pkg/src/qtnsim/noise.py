"""Kraus-channel noise models, stochastic circuit sampling, and the
ensemble simulation producing the approximate noisy distribution."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, Gate, ONE_QUBIT_KINDS, TWO_QUBIT_KINDS
from . import oracle

_PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True)
class NoiseChannel:
    """Single-qubit Pauli channel: 'bitflip' (p) or 'depolarizing' (lambda)."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in ("bitflip", "depolarizing"):
            raise ValueError(f"unknown channel kind: {self.kind!r}")
        if not (0.0 <= self.param <= 1.0):
            raise ValueError(f"{self.kind} parameter must be in [0, 1]")

    def branch_probs(self):
        """(probability, Pauli label) pairs, identity branch first."""
        if self.kind == "bitflip":
            p = self.param
            return [(1.0 - p, "I"), (p, "X")]
        lam = self.param
        return [
            (1.0 - 0.75 * lam, "I"),
            (0.25 * lam, "X"),
            (0.25 * lam, "Y"),
            (0.25 * lam, "Z"),
        ]

    def kraus_ops(self):
        return [np.sqrt(p) * _PAULI[label] for p, label in self.branch_probs()]


def bit_flip(p: float) -> NoiseChannel:
    return NoiseChannel("bitflip", p)


def depolarizing(lam: float) -> NoiseChannel:
    return NoiseChannel("depolarizing", lam)


@dataclass(frozen=True)
class NoiseModel:
    """Channels attached per gate kind, plus arity wildcards.

    ``all_1q`` channels attach to every one-qubit gate, ``all_2q`` to every
    two-qubit gate (applied independently on each of its qubits); ``per_gate``
    maps specific gate kinds to extra channels.
    """

    per_gate: dict = field(default_factory=dict)
    all_1q: tuple = ()
    all_2q: tuple = ()

    def __post_init__(self):
        for kind in self.per_gate:
            if kind not in ONE_QUBIT_KINDS | TWO_QUBIT_KINDS:
                raise ValueError(f"noise model references unknown gate kind {kind!r}")
        object.__setattr__(self, "all_1q", tuple(self.all_1q))
        object.__setattr__(self, "all_2q", tuple(self.all_2q))

    def channels_for(self, g: Gate):
        chans = list(self.all_1q if g.arity == 1 else self.all_2q)
        chans.extend(self.per_gate.get(g.kind, ()))
        return chans

    @property
    def empty(self) -> bool:
        return not (self.per_gate or self.all_1q or self.all_2q)


def _channel_from_config(cfg: dict) -> NoiseChannel:
    kind = cfg.get("type")
    if kind == "depolarizing":
        return depolarizing(float(cfg["lambda"]))
    if kind == "bitflip":
        return bit_flip(float(cfg["p"]))
    raise ValueError(f"unknown noise type in config: {kind!r}")


def noise_model_from_config(cfg: dict) -> NoiseModel:
    """Build from {'single_qubit': {...}, 'two_qubit': {...}, 'gates': {...}}."""
    all_1q = []
    all_2q = []
    per_gate = {}
    if "single_qubit" in cfg:
        all_1q.append(_channel_from_config(cfg["single_qubit"]))
    if "two_qubit" in cfg:
        all_2q.append(_channel_from_config(cfg["two_qubit"]))
    for kind, sub in cfg.get("gates", {}).items():
        per_gate[kind] = (_channel_from_config(sub),)
    return NoiseModel(per_gate=per_gate, all_1q=tuple(all_1q), all_2q=tuple(all_2q))


def read_noise_config(path) -> NoiseModel:
    with open(path) as f:
        return noise_model_from_config(json.load(f))


@dataclass(frozen=True)
class SampledCircuit:
    """A noisy instance: base circuit plus Pauli insertions after gates."""

    base: Circuit
    inserted_paulis: tuple  # (position after gate index, pauli label, qubit)

    def to_circuit(self) -> Circuit:
        by_pos = {}
        for pos, pauli, qubit in self.inserted_paulis:
            by_pos.setdefault(pos, []).append((pauli, qubit))
        gates = []
        for i, g in enumerate(self.base.gates):
            gates.append(g)
            for pauli, qubit in by_pos.get(i, ()):
                gates.append(Gate(pauli, (qubit,)))
        return Circuit(self.base.n_qubits, gates)


def _pick_branch(channel: NoiseChannel, u: float) -> str:
    acc = 0.0
    branches = channel.branch_probs()
    for p, label in branches:
        acc += p
        if u < acc:
            return label
    return branches[-1][1]


def sample_noisy_circuit(c: Circuit, nm: NoiseModel, rng) -> SampledCircuit:
    """Draw one noisy instance: per gate, per channel, per affected qubit,
    pick a Kraus branch by cumulative probability and insert the Pauli."""
    insertions = []
    for i, g in enumerate(c.gates):
        for ch in nm.channels_for(g):
            for q in g.qubits:  # independent draw per qubit on 2q gates
                label = _pick_branch(ch, rng.random())
                if label != "I":
                    insertions.append((i, label, q))
    return SampledCircuit(base=c, inserted_paulis=tuple(insertions))


@dataclass(frozen=True)
class EnsembleConfig:
    K: int
    seed: int = 0
    n_workers: int = 1

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("ensemble size K must be >= 1")


def sample_rng(seed: int, k: int):
    """Independent RNG stream for sample k; order-independent across workers."""
    return np.random.default_rng([seed, k])


def _one_sample(c: Circuit, nm: NoiseModel, seed: int, k: int) -> np.ndarray:
    sc = sample_noisy_circuit(c, nm, sample_rng(seed, k))
    psi = oracle.statevector_simulate(sc.to_circuit())
    return oracle.probabilities(psi)


def simulate_batch_ensemble(c: Circuit, nm: NoiseModel, cfg: EnsembleConfig) -> np.ndarray:
    """Average the probability vectors of K sampled noisy circuits.

    Deterministic for fixed (seed, K) regardless of worker count: samples use
    independent streams and are accumulated in sample-index order.
    """
    if cfg.n_workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.n_workers) as pool:
            phis = list(pool.map(lambda k: _one_sample(c, nm, cfg.seed, k), range(cfg.K)))
    else:
        phis = [_one_sample(c, nm, cfg.seed, k) for k in range(cfg.K)]
    sigma = np.zeros(2**c.n_qubits, dtype=np.float64)
    for phi in phis:
        sigma += phi
    sigma /= cfg.K
    return sigma / sigma.sum()
