"""Empirical error model Error = alpha * exp(delta*n - mu*ln K):
log-space least-squares fit and ensemble-size prediction."""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, asdict

import numpy as np


@dataclass(frozen=True)
class SweepRecord:
    n_qubits: int
    K: int
    error: float
    seed: int = 0
    d: int = 0
    p: int = 0
    lambda1: float = 0.0
    lambda2: float = 0.0


@dataclass(frozen=True)
class RegressionFit:
    alpha: float
    delta: float
    mu: float
    r_squared: float


class DegenerateSweepError(Exception):
    pass


def fit(records) -> RegressionFit:
    """OLS on ln(error) = ln(alpha) + delta*n - mu*ln(K).

    Zero-error records are excluded (ln 0 undefined) with a warning.
    """
    usable = [r for r in records if r.error > 0.0]
    if len(usable) < len(records):
        warnings.warn("excluding records with error = 0 from the fit")
    if len(usable) < 3:
        raise DegenerateSweepError("degenerate sweep: need >= 3 nonzero-error records")
    ns = np.array([r.n_qubits for r in usable], dtype=np.float64)
    ks = np.array([r.K for r in usable], dtype=np.float64)
    y = np.log(np.array([r.error for r in usable], dtype=np.float64))
    if len(set(ns)) < 2 or len(set(ks)) < 2:
        raise DegenerateSweepError("degenerate sweep: need >= 2 distinct n and K values")
    design = np.column_stack([np.ones_like(ns), ns, -np.log(ks)])
    if np.linalg.matrix_rank(design) < 3:
        raise DegenerateSweepError("degenerate sweep: rank-deficient design matrix")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    pred = design @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return RegressionFit(
        alpha=float(np.exp(coef[0])),
        delta=float(coef[1]),
        mu=float(coef[2]),
        r_squared=r2,
    )


def predict_circuits(f: RegressionFit, n: int, target_error: float) -> int:
    """Smallest ensemble size K whose modeled error meets the target."""
    if not (0.0 < target_error < 1.0):
        raise ValueError("target_error must be in (0, 1)")
    if f.mu <= 0:
        raise ValueError("non-decaying model")
    k = math.exp((math.log(f.alpha) + f.delta * n - math.log(target_error)) / f.mu)
    # absorb float round-off so an exactly-attainable target maps to that K
    return max(1, math.ceil(k * (1.0 - 1e-12)))


def model_error(f: RegressionFit, n: int, K: int) -> float:
    return f.alpha * math.exp(f.delta * n - f.mu * math.log(K))


SWEEP_COLUMNS = ["n", "K", "seed", "d", "p", "lambda1", "lambda2", "error"]


def write_sweep_csv(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for r in records:
            w.writerow(
                [r.n_qubits, r.K, r.seed, r.d, r.p, r.lambda1, r.lambda2, repr(r.error)]
            )


def read_sweep_csv(path):
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(
                SweepRecord(
                    n_qubits=int(row["n"]),
                    K=int(row["K"]),
                    seed=int(row["seed"]),
                    d=int(row["d"]),
                    p=int(row["p"]),
                    lambda1=float(row["lambda1"]),
                    lambda2=float(row["lambda2"]),
                    error=float(row["error"]),
                )
            )
    return records


def write_fit_json(path, f: RegressionFit):
    with open(path, "w") as fh:
        json.dump(asdict(f), fh, indent=2)
        fh.write("\n")
