"""Kernel timing on real workload buckets and mixed-threshold selection."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .tensor_core import Bucket, fast_kernel, reference_kernel
from .ordering import dry_run


@dataclass
class KernelTimings:
    """Per-width kernel timings gathered from real bucket contractions."""

    ref_ns: dict  # width -> list of ns (missing above the reference cap)
    fast_ns: dict  # width -> list of ns
    counts: dict  # width -> bucket count

    def mean(self, table, width):
        xs = table.get(width)
        return sum(xs) / len(xs) if xs else None

    def rows(self):
        out = []
        for w in sorted(self.counts):
            out.append((w, self.mean(self.ref_ns, w), self.mean(self.fast_ns, w)))
        return out


def profile_kernels(tn, order, max_reference_width: int = 18) -> KernelTimings:
    """Contract the network once, timing both kernels on every bucket.

    The fast kernel's result drives the contraction; the reference kernel is
    skipped above ``max_reference_width`` to bound the naive-loop cost.
    """
    profile = dry_run(tn, order)  # validates the order
    order_pos = {idx: k for k, idx in enumerate(order)}
    buckets = {idx: [] for idx in order}
    for t in tn.tensors:
        if t.rank == 0:
            continue
        first = min(t.indices, key=order_pos.__getitem__)
        buckets[first].append(t)
    timings = KernelTimings({}, {}, {})
    for idx in order:
        members = buckets.pop(idx)
        if not members:
            continue
        b = Bucket(idx, members)
        t0 = time.perf_counter_ns()
        result = fast_kernel(b)
        fast_elapsed = time.perf_counter_ns() - t0
        w = result.rank
        timings.counts[w] = timings.counts.get(w, 0) + 1
        timings.fast_ns.setdefault(w, []).append(fast_elapsed)
        if w <= max_reference_width:
            t0 = time.perf_counter_ns()
            reference_kernel(b)
            timings.ref_ns.setdefault(w, []).append(time.perf_counter_ns() - t0)
        if result.rank > 0:
            nxt = min(result.indices, key=order_pos.__getitem__)
            buckets[nxt].append(result)
    return timings


def merge_timings(parts) -> KernelTimings:
    out = KernelTimings({}, {}, {})
    for t in parts:
        for w, xs in t.ref_ns.items():
            out.ref_ns.setdefault(w, []).extend(xs)
        for w, xs in t.fast_ns.items():
            out.fast_ns.setdefault(w, []).extend(xs)
        for w, c in t.counts.items():
            out.counts[w] = out.counts.get(w, 0) + c
    return out


def projected_total(timings: KernelTimings, threshold: int) -> float:
    """Total kernel time if widths > threshold go fast and the rest reference.

    Widths with no reference measurement are charged their fast time when
    routed to reference (treated as unmeasurable, i.e. infinite) only if a
    reference sample exists; otherwise the projection is infinite.
    """
    total = 0.0
    for w, count in timings.counts.items():
        if w > threshold:
            mean = timings.mean(timings.fast_ns, w)
        else:
            mean = timings.mean(timings.ref_ns, w)
            if mean is None:
                return float("inf")
        total += mean * count
    return total


@dataclass
class ThresholdReport:
    best_threshold: int
    crossover: int | None  # smallest width where fast beats reference
    mixed_total_ns: float
    all_reference_total_ns: float
    all_fast_total_ns: float


def choose_threshold(timings: KernelTimings) -> ThresholdReport:
    widths = sorted(timings.counts)
    # -1 routes every bucket (including rank-0 results) to the fast kernel,
    # so the all-fast extreme is always among the candidates
    candidates = sorted({-1, 0, *widths})
    totals = {thr: projected_total(timings, thr) for thr in candidates}
    best = min(candidates, key=lambda thr: (totals[thr], thr))
    crossover = None
    for w in widths:
        ref = timings.mean(timings.ref_ns, w)
        fast = timings.mean(timings.fast_ns, w)
        if ref is not None and fast is not None and fast < ref:
            crossover = w
            break
    if crossover is None and any(timings.mean(timings.ref_ns, w) is None for w in widths):
        # reference was skipped as too slow above the cap: fast wins there
        crossover = min(w for w in widths if timings.mean(timings.ref_ns, w) is None)
    return ThresholdReport(
        best_threshold=best,
        crossover=crossover,
        mixed_total_ns=totals[best],
        all_reference_total_ns=projected_total(timings, max(widths)),
        all_fast_total_ns=projected_total(timings, -1),
    )


def write_crossover_csv(path, timings: KernelTimings):
    with open(path, "w") as f:
        f.write("width,mean_ns_reference,mean_ns_fast\n")
        for w, ref, fast in timings.rows():
            ref_s = "" if ref is None else f"{ref:.1f}"
            fast_s = "" if fast is None else f"{fast:.1f}"
            f.write(f"{w},{ref_s},{fast_s}\n")
