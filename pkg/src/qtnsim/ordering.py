"""Elimination ordering, symbolic dry runs, bucket-elimination contraction,
and greedy index slicing."""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .tensor_core import Backend, Bucket, Tensor, contract_bucket, memory_estimate
from .tn_build import TensorNetwork

DEFAULT_MEM_CAP = 4 << 30  # practical width wall ~29 motivates a hard pre-check

HEURISTICS = ("minfill", "mindegree")


class MemoryCapError(Exception):
    def __init__(self, width: int, needed: int, cap: int):
        self.width = width
        self.needed = needed
        self.cap = cap
        super().__init__(f"memory cap exceeded: width {width} needs {needed} bytes")


def line_graph(tn: TensorNetwork) -> dict:
    """Adjacency over index ids; two indices adjacent iff they share a tensor."""
    adj = {}
    for t in tn.tensors:
        for i in t.indices:
            adj.setdefault(i, set())
        for a in t.indices:
            for b in t.indices:
                if a != b:
                    adj[a].add(b)
    return adj


def _fill_score(adj, v) -> int:
    nbrs = list(adj[v])
    missing = 0
    for i in range(len(nbrs)):
        ni = adj[nbrs[i]]
        for j in range(i + 1, len(nbrs)):
            if nbrs[j] not in ni:
                missing += 1
    return missing


def greedy_order(tn: TensorNetwork, heuristic: str = "minfill") -> list:
    """Eliminate the lowest-scoring line-graph vertex first, forming a clique
    over its neighbors.  Ties break toward the smallest index id."""
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}")
    adj = line_graph(tn)
    open_set = set(tn.open_indices)
    alive = set(adj) - open_set
    minfill = heuristic == "minfill"

    def score(v):
        return _fill_score(adj, v) if minfill else len(adj[v])

    current = {v: score(v) for v in alive}
    heap = [(s, v) for v, s in current.items()]
    heapq.heapify(heap)
    order = []
    while alive:
        while True:
            s, v = heapq.heappop(heap)
            if v in alive and current[v] == s:
                break
        order.append(v)
        alive.discard(v)
        nbrs = [w for w in adj[v] if w in alive or w in open_set]
        for w in adj[v]:
            adj[w].discard(v)
        del adj[v]
        dirty = set(nbrs)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                a, b = nbrs[i], nbrs[j]
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
        if minfill:
            for w in nbrs:
                dirty.update(adj[w])
        for w in dirty:
            if w in alive:
                s = score(w)
                if s != current[w]:
                    current[w] = s
                    heapq.heappush(heap, (s, w))
    return order


@dataclass(frozen=True)
class WidthProfile:
    per_bucket_widths: tuple
    bucket_indices: tuple

    @property
    def contraction_width(self) -> int:
        return max(self.per_bucket_widths, default=0)


def _assign_buckets(index_sets, order_pos):
    """Place each tensor's index set in the bucket of its earliest index."""
    buckets = {idx: [] for idx in order_pos}
    for s in index_sets:
        closed = [i for i in s if i in order_pos]
        if not closed:
            continue  # fully-open or scalar input contributes no bucket work
        first = min(closed, key=order_pos.__getitem__)
        buckets[first].append(s)
    return buckets


def dry_run(tn: TensorNetwork, order, fixed=()) -> WidthProfile:
    """Symbolic bucket elimination on index sets only; no numeric work.

    ``fixed`` indices are treated as sliced out (removed from every tensor
    and skipped in the order).
    """
    fixed = set(fixed)
    active_order = [i for i in order if i not in fixed]
    order_pos = {idx: k for k, idx in enumerate(active_order)}
    missing = tn.all_indices() - set(order) - set(tn.open_indices) - fixed
    if missing:
        raise ValueError(f"order is missing indices: {sorted(missing)}")
    index_sets = [frozenset(t.indices) - fixed for t in tn.tensors]
    buckets = _assign_buckets(index_sets, order_pos)
    widths = []
    for idx in active_order:
        union = set()
        for s in buckets[idx]:
            union.update(s)
        union.discard(idx)
        widths.append(len(union))
        rest = frozenset(union)
        closed = [i for i in rest if i in order_pos]
        if closed:
            nxt = min(closed, key=order_pos.__getitem__)
            buckets[nxt].append(rest)
    return WidthProfile(tuple(widths), tuple(active_order))


def contract_network(
    tn: TensorNetwork,
    order,
    backend: Backend,
    mem_cap: int = DEFAULT_MEM_CAP,
):
    """Full bucket elimination; returns (scalar, per-bucket stats).

    The network must be closed.  A dry run is used as a memory pre-check
    before any large allocation happens.
    """
    if tn.open_indices:
        raise ValueError("contract_network requires a closed network")
    profile = dry_run(tn, order)
    worst = profile.contraction_width
    if memory_estimate(worst) > mem_cap:
        raise MemoryCapError(worst, memory_estimate(worst), mem_cap)
    order_pos = {idx: k for k, idx in enumerate(order)}
    buckets = {idx: [] for idx in order}
    scalar = 1.0 + 0.0j
    for t in tn.tensors:
        if t.rank == 0:
            scalar *= complex(t.data[()])
        else:
            first = min(t.indices, key=order_pos.__getitem__)
            buckets[first].append(t)
    stats = []
    for idx in order:
        members = buckets.pop(idx)
        if not members:
            # index already consumed into a scalar upstream; count as trivial
            stats.append(None)
            continue
        result, st = contract_bucket(Bucket(idx, members), backend)
        stats.append(st)
        if result.rank == 0:
            scalar *= complex(result.data[()])
        else:
            nxt = min(result.indices, key=order_pos.__getitem__)
            buckets[nxt].append(result)
    stats = [s for s in stats if s is not None]
    return scalar, stats


def suggest_slicing(tn: TensorNetwork, order, target_width: int) -> list:
    """Greedily pick indices out of the widest dry-run bucket until the
    profile's contraction width drops to the target."""
    if target_width < 1:
        raise ValueError("target_width must be >= 1")
    sliced = []
    while True:
        profile = dry_run(tn, order, fixed=sliced)
        if profile.contraction_width <= target_width:
            return sliced
        step = int(np.argmax(profile.per_bucket_widths))
        bucket_idx = profile.bucket_indices[step]
        # recover the widest bucket's index union by replaying the dry run
        union = _bucket_union(tn, order, sliced, step)
        candidates = sorted(i for i in union if i not in sliced)
        if not candidates:
            candidates = [bucket_idx]
        sliced.append(candidates[0])


def _bucket_union(tn: TensorNetwork, order, fixed, target_step):
    fixed = set(fixed)
    active_order = [i for i in order if i not in fixed]
    order_pos = {idx: k for k, idx in enumerate(active_order)}
    index_sets = [frozenset(t.indices) - fixed for t in tn.tensors]
    buckets = _assign_buckets(index_sets, order_pos)
    for step, idx in enumerate(active_order):
        union = set()
        for s in buckets[idx]:
            union.update(s)
        if step == target_step:
            return union
        union.discard(idx)
        rest = frozenset(union)
        closed = [i for i in rest if i in order_pos]
        if closed:
            nxt = min(closed, key=order_pos.__getitem__)
            buckets[nxt].append(rest)
    raise AssertionError("target step beyond profile length")


def slice_network(tn: TensorNetwork, assignment: dict) -> TensorNetwork:
    """Fix the given indices to constant values, removing them from tensors."""
    tensors = []
    for t in tn.tensors:
        hit = [i for i in t.indices if i in assignment]
        if not hit:
            tensors.append(t)
            continue
        data = t.data
        kept = list(t.indices)
        for i in hit:
            ax = kept.index(i)
            data = np.take(data, assignment[i], axis=ax)
            kept.pop(ax)
        tensors.append(Tensor(tuple(kept), data))
    return TensorNetwork(tensors, tn.open_indices)


def contract_sliced(
    tn: TensorNetwork,
    order,
    sliced,
    backend: Backend,
    mem_cap: int = DEFAULT_MEM_CAP,
):
    """Contract once per joint assignment of sliced indices and sum."""
    sliced = list(sliced)
    sub_order = [i for i in order if i not in sliced]
    total = 0.0 + 0.0j
    for bits in np.ndindex(*(2,) * len(sliced)):
        assignment = dict(zip(sliced, (int(b) for b in bits)))
        sub = slice_network(tn, assignment)
        value, _ = contract_network(sub, sub_order, backend, mem_cap)
        total += value
    return total


def write_width_profile_csv(path, profile: WidthProfile):
    with open(path, "w") as f:
        f.write("step,bucket_index,width\n")
        for step, (idx, w) in enumerate(
            zip(profile.bucket_indices, profile.per_bucket_widths)
        ):
            f.write(f"{step},{idx},{w}\n")
