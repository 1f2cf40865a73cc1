"""Tensor-network QAOA simulator with bucket elimination, width-based
backend dispatch, and stochastic Kraus-operator noise."""

from .circuits import (
    Circuit,
    Gate,
    Graph,
    QaoaParams,
    qaoa_maxcut_circuit,
    random_regular_graph,
)
from .tensor_core import Backend, Bucket, BucketStats, Tensor, contract_bucket, memory_estimate, permute
from .tn_build import TensorNetwork, amplitude_network, extract_lightcone, qaoa_energy
from .ordering import contract_network, dry_run, greedy_order, suggest_slicing
from .noise import (
    EnsembleConfig,
    NoiseChannel,
    NoiseModel,
    bit_flip,
    depolarizing,
    sample_noisy_circuit,
    simulate_batch_ensemble,
)
from .oracle import (
    density_matrix_simulate,
    error_metric,
    sigma_exact,
    statevector_simulate,
)
from .error_model import RegressionFit, SweepRecord, fit, predict_circuits

__all__ = [
    "Backend", "Bucket", "BucketStats", "Circuit", "EnsembleConfig", "Gate",
    "Graph", "NoiseChannel", "NoiseModel", "QaoaParams", "RegressionFit",
    "SweepRecord", "Tensor", "TensorNetwork", "amplitude_network", "bit_flip",
    "contract_bucket", "contract_network", "density_matrix_simulate",
    "depolarizing", "dry_run", "error_metric", "extract_lightcone", "fit",
    "greedy_order", "memory_estimate", "permute", "predict_circuits",
    "qaoa_energy", "qaoa_maxcut_circuit", "random_regular_graph",
    "sample_noisy_circuit", "sigma_exact", "simulate_batch_ensemble",
    "statevector_simulate", "suggest_slicing",
]

__version__ = "0.1.0"
