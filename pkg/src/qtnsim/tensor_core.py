"""Dense complex tensors over binary indices and bucket contraction kernels.

Every index has dimension 2 (qubit wires).  Tensors are stored as numpy
complex128 arrays of shape (2,)*rank in C order, so the last listed index
varies fastest.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

REFERENCE = "reference"
FAST = "fast"
MIXED = "mixed"
DEFAULT_MIXED_THRESHOLD = 11


@dataclass(frozen=True)
class Backend:
    """Kernel selection policy for bucket contractions."""

    kind: str
    threshold: int = DEFAULT_MIXED_THRESHOLD

    def __post_init__(self):
        if self.kind not in (REFERENCE, FAST, MIXED):
            raise ValueError(f"unknown backend kind: {self.kind!r}")
        if self.threshold < 0:
            raise ValueError("mixed threshold must be >= 0")

    @classmethod
    def reference(cls) -> "Backend":
        return cls(REFERENCE)

    @classmethod
    def fast(cls) -> "Backend":
        return cls(FAST)

    @classmethod
    def mixed(cls, threshold: int = DEFAULT_MIXED_THRESHOLD) -> "Backend":
        return cls(MIXED, threshold)


class Tensor:
    """Immutable dense tensor over binary indices.

    indices: tuple of unique non-negative integer index ids.
    data: complex128 array of shape (2,)*len(indices).
    """

    __slots__ = ("indices", "data")

    def __init__(self, indices, data):
        indices = tuple(int(i) for i in indices)
        if len(set(indices)) != len(indices):
            raise ValueError("duplicate index id in tensor")
        data = np.asarray(data, dtype=np.complex128)
        if data.shape != (2,) * len(indices):
            data = data.reshape((2,) * len(indices))
        data.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "data", data)

    def __setattr__(self, *a):
        raise AttributeError("Tensor is immutable")

    @property
    def rank(self) -> int:
        return len(self.indices)

    def __repr__(self):
        return f"Tensor(indices={self.indices}, rank={self.rank})"


@dataclass(frozen=True)
class Bucket:
    """All tensors sharing ``bucket_index``, contracted by summing it out."""

    bucket_index: int
    tensors: tuple

    def __post_init__(self):
        object.__setattr__(self, "tensors", tuple(self.tensors))
        for t in self.tensors:
            if self.bucket_index not in t.indices:
                raise ValueError(
                    f"tensor {t!r} does not contain bucket index {self.bucket_index}"
                )


@dataclass(frozen=True)
class BucketStats:
    width: int
    elapsed_ns: int
    backend_used: str


def memory_estimate(width: int) -> int:
    """Bytes needed for a complex128 tensor of the given rank."""
    if width < 0:
        raise ValueError("width must be >= 0")
    return 16 * (1 << width)


def permute(t: Tensor, new_order) -> Tensor:
    """Reorder tensor indices; element values at joint assignments are kept."""
    new_order = tuple(int(i) for i in new_order)
    if sorted(new_order) != sorted(t.indices) or len(new_order) != t.rank:
        raise ValueError("new_order is not a permutation of the tensor's indices")
    src = {idx: ax for ax, idx in enumerate(t.indices)}
    axes = tuple(src[idx] for idx in new_order)
    return Tensor(new_order, np.transpose(t.data, axes))


def _result_indices(b: Bucket) -> tuple:
    union = set()
    for t in b.tensors:
        union.update(t.indices)
    union.discard(b.bucket_index)
    return tuple(sorted(union))


def reference_kernel(b: Bucket) -> Tensor:
    """Naive nested-assignment contraction: loop over every output element."""
    if not b.tensors:
        raise ValueError("empty bucket")
    result = _result_indices(b)
    pos = {idx: k for k, idx in enumerate(result)}
    members = []
    for t in b.tensors:
        slots = tuple(None if i == b.bucket_index else pos[i] for i in t.indices)
        members.append((t.data, slots))
    out = np.empty((2,) * len(result), dtype=np.complex128)
    for assign in np.ndindex(out.shape):
        total = 0j
        for bval in (0, 1):
            prod = 1 + 0j
            for data, slots in members:
                key = tuple(bval if s is None else assign[s] for s in slots)
                prod *= data[key]
            total += prod
        out[assign] = total
    return Tensor(result, out)


def fast_kernel(b: Bucket) -> Tensor:
    """Broadcast-product contraction in a flat buffer, summed over the bucket axis."""
    if not b.tensors:
        raise ValueError("empty bucket")
    result = _result_indices(b)
    axis = {b.bucket_index: 0}
    for k, idx in enumerate(result):
        axis[idx] = k + 1
    nfull = len(result) + 1
    buf = np.ones((2,) * nfull, dtype=np.complex128)
    for t in b.tensors:
        perm = sorted(range(t.rank), key=lambda a: axis[t.indices[a]])
        view = np.transpose(t.data, perm)
        present = {axis[i] for i in t.indices}
        shape = tuple(2 if k in present else 1 for k in range(nfull))
        buf *= view.reshape(shape)
    return Tensor(result, buf.sum(axis=0))


def contract_bucket(b: Bucket, backend: Backend):
    """Sum the bucket index out of the product of all member tensors.

    Returns (result tensor, stats).  Mixed routing sends result ranks above
    the threshold to the fast kernel, everything else to the reference one.
    """
    if not b.tensors:
        raise ValueError("empty bucket")
    width = len(_result_indices(b))
    if backend.kind == REFERENCE:
        kernel, used = reference_kernel, REFERENCE
    elif backend.kind == FAST:
        kernel, used = fast_kernel, FAST
    else:
        if width > backend.threshold:
            kernel, used = fast_kernel, FAST
        else:
            kernel, used = reference_kernel, REFERENCE
    t0 = time.perf_counter_ns()
    out = kernel(b)
    elapsed = time.perf_counter_ns() - t0
    return out, BucketStats(width=width, elapsed_ns=elapsed, backend_used=used)
