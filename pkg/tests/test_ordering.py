import numpy as np
import pytest

from qtnsim.circuits import Circuit, Gate
from qtnsim.ordering import (
    MemoryCapError,
    contract_network,
    contract_sliced,
    dry_run,
    greedy_order,
    line_graph,
    slice_network,
    suggest_slicing,
    write_width_profile_csv,
)
from qtnsim.tensor_core import Backend, Tensor
from qtnsim.tn_build import TensorNetwork, amplitude_network

from conftest import brute_force_network, random_circuit, random_tensor

FAST = Backend.fast()


def path_network(rng, n=5):
    """Matrix chain whose line graph is a path of n indices."""
    tensors = [random_tensor(rng, (0,))]
    for i in range(n - 1):
        tensors.append(random_tensor(rng, (i, i + 1)))
    tensors.append(random_tensor(rng, (n - 1,)))
    return TensorNetwork(tensors)


def test_line_graph_adjacency(rng):
    tn = TensorNetwork([random_tensor(rng, (0, 1)), random_tensor(rng, (1, 2))])
    adj = line_graph(tn)
    assert adj[0] == {1}
    assert adj[1] == {0, 2}
    assert adj[2] == {1}


def test_mindegree_on_path_eliminates_endpoint_first(rng):
    tn = path_network(rng, 5)
    order = greedy_order(tn, "mindegree")
    assert order[0] in (0, 4)
    profile = dry_run(tn, order)
    assert profile.contraction_width <= 2


def test_minfill_on_path_low_width(rng):
    tn = path_network(rng, 5)
    profile = dry_run(tn, greedy_order(tn, "minfill"))
    assert profile.contraction_width <= 2


def test_two_index_single_tensor_network(rng):
    t = random_tensor(rng, (0, 1))
    tn = TensorNetwork([t, random_tensor(rng, (0,)), random_tensor(rng, (1,))])
    for heuristic in ("minfill", "mindegree"):
        order = greedy_order(tn, heuristic)
        assert sorted(order) == [0, 1]
        profile = dry_run(tn, order)
        assert profile.per_bucket_widths[0] == 1


def test_order_determinism(rng):
    c = random_circuit(rng, 6, 25)
    tn = amplitude_network(c, [0] * 6)
    for heuristic in ("minfill", "mindegree"):
        assert greedy_order(tn, heuristic) == greedy_order(tn, heuristic)


def test_dry_run_missing_index_errors(rng):
    tn = path_network(rng, 4)
    with pytest.raises(ValueError, match="missing"):
        dry_run(tn, [0, 1])


def test_dry_run_widths_match_realized_ranks(rng):
    for _ in range(5):
        c = random_circuit(rng, 5, 18)
        tn = amplitude_network(c, [0] * 5)
        order = greedy_order(tn)
        profile = dry_run(tn, order)
        _, stats = contract_network(tn, order, FAST)
        assert len(stats) == len(profile.per_bucket_widths)
        for w, st in zip(profile.per_bucket_widths, stats):
            assert w == st.width


def test_contraction_matches_brute_force(rng):
    tn = path_network(rng, 5)
    order = greedy_order(tn)
    val, _ = contract_network(tn, order, FAST)
    assert abs(val - brute_force_network(tn.tensors)) < 1e-10


def test_order_independence(rng):
    c = random_circuit(rng, 6, 20)
    tn = amplitude_network(c, [0] * 6)
    v1, _ = contract_network(tn, greedy_order(tn, "minfill"), FAST)
    v2, _ = contract_network(tn, greedy_order(tn, "mindegree"), FAST)
    # hand-supplied order: plain sorted index order
    v3, _ = contract_network(tn, sorted(tn.all_indices()), FAST)
    assert abs(v1 - v2) < 1e-10
    assert abs(v1 - v3) < 1e-10


def test_backend_invariance_of_scalar(rng):
    c = random_circuit(rng, 5, 15)
    tn = amplitude_network(c, [1, 0, 1, 0, 0])
    order = greedy_order(tn)
    vals = [
        contract_network(tn, order, bk)[0]
        for bk in (Backend.reference(), FAST, Backend.mixed())
    ]
    assert abs(vals[0] - vals[1]) < 1e-12
    assert abs(vals[0] - vals[2]) < 1e-12


def test_memory_cap_precheck(rng):
    c = random_circuit(rng, 8, 30)
    tn = amplitude_network(c, [0] * 8)
    order = greedy_order(tn)
    with pytest.raises(MemoryCapError, match="memory cap exceeded"):
        contract_network(tn, order, FAST, mem_cap=16)


def test_suggest_slicing_noop_when_under_target(rng):
    tn = path_network(rng, 5)
    order = greedy_order(tn)
    assert suggest_slicing(tn, order, target_width=5) == []


def test_suggest_slicing_reduces_width(rng):
    c = random_circuit(rng, 7, 30)
    tn = amplitude_network(c, [0] * 7)
    order = greedy_order(tn)
    base = dry_run(tn, order).contraction_width
    if base < 2:
        pytest.skip("network too small to slice")
    target = base - 1
    picked = suggest_slicing(tn, order, target)
    assert len(picked) >= 1
    assert dry_run(tn, order, fixed=picked).contraction_width <= target


def test_sliced_sum_equals_unsliced(rng):
    for _ in range(5):
        c = random_circuit(rng, 6, 22)
        bits = [int(b) for b in rng.integers(0, 2, size=6)]
        tn = amplitude_network(c, bits)
        order = greedy_order(tn)
        unsliced, _ = contract_network(tn, order, FAST)
        all_indices = sorted(tn.all_indices())
        k = int(rng.integers(1, 4))
        sliced = [all_indices[i] for i in rng.choice(len(all_indices), size=k, replace=False)]
        total = contract_sliced(tn, order, sliced, FAST)
        assert abs(total - unsliced) < 1e-10


def test_slice_network_removes_indices(rng):
    t = random_tensor(rng, (0, 1, 2))
    tn = TensorNetwork([t])
    sub = slice_network(tn, {1: 1})
    assert sub.tensors[0].indices == (0, 2)
    np.testing.assert_array_equal(sub.tensors[0].data, t.data[:, 1, :])


def test_width_profile_csv(tmp_path, rng):
    tn = path_network(rng, 4)
    order = greedy_order(tn)
    profile = dry_run(tn, order)
    out = tmp_path / "widths.csv"
    write_width_profile_csv(out, profile)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "step,bucket_index,width"
    assert len(lines) == 1 + len(profile.per_bucket_widths)
