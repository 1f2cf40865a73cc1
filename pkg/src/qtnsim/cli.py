"""Command-line entry point: amplitude/energy simulation, ensemble noise
runs, width profiling, threshold tuning, and error-model sweeps.

Exit codes: 0 success, 2 usage/config error, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import error_model, noise, tuning
from .circuits import (
    DEFAULT_BETA,
    DEFAULT_GAMMA,
    QaoaParams,
    qaoa_maxcut_circuit,
    random_regular_graph,
    read_circuit,
    read_graph,
)
from .noise import EnsembleConfig, read_noise_config, simulate_batch_ensemble
from .oracle import (
    SimulationCapError,
    density_matrix_simulate,
    error_metric,
    sigma_exact,
)
from .ordering import (
    DEFAULT_MEM_CAP,
    MemoryCapError,
    dry_run,
    greedy_order,
    contract_network,
)
from .tensor_core import Backend
from .tn_build import amplitude_network, extract_lightcone, qaoa_energy_detailed

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class UsageError(Exception):
    pass


def _default_seed() -> int:
    env = os.environ.get("QTN_SEED")
    return int(env) if env else 0


def _parse_angles(text, p, default):
    if text is None:
        return (default,) * p
    vals = tuple(float(x) for x in text.split(","))
    if len(vals) == 1 and p > 1:
        vals = vals * p
    if len(vals) != p:
        raise UsageError(f"expected {p} comma-separated angles, got {len(vals)}")
    return vals


def _backend_from_args(args) -> Backend:
    if args.backend == "reference":
        return Backend.reference()
    if args.backend == "fast":
        return Backend.fast()
    return Backend.mixed(args.threshold)


def _add_backend_flags(p):
    p.add_argument("--backend", choices=["reference", "fast", "mixed"], default="mixed")
    p.add_argument("--threshold", type=int, default=11,
                   help="mixed-backend width threshold (result rank)")
    p.add_argument("--heuristic", choices=["minfill", "mindegree"], default="minfill")
    p.add_argument("--mem-cap", type=int, default=DEFAULT_MEM_CAP,
                   help="contraction memory cap in bytes")


def _load_qaoa(args):
    graph = read_graph(args.graph)
    params = QaoaParams(
        p=args.p,
        gammas=_parse_angles(args.gammas, args.p, DEFAULT_GAMMA),
        betas=_parse_angles(args.betas, args.p, DEFAULT_BETA),
    )
    return graph, params


def cmd_amplitude(args) -> int:
    circuit = read_circuit(args.circuit)
    bitstring = [int(ch) for ch in args.bitstring]
    tn = amplitude_network(circuit, bitstring)
    order = greedy_order(tn, args.heuristic)
    backend = _backend_from_args(args)
    value, stats = contract_network(tn, order, backend, args.mem_cap)
    print(f"{round(value.real, 8)} {round(value.imag, 8)}")
    if args.stats_out:
        with open(args.stats_out, "w") as f:
            f.write("step,bucket_index,width,elapsed_ns,backend\n")
            for step, (idx, st) in enumerate(zip(order, stats)):
                f.write(f"{step},{idx},{st.width},{st.elapsed_ns},{st.backend_used}\n")
    return EXIT_OK


def _aggregate_profile(per_cone_stats):
    """Aggregate bucket stats per (lightcone, width, backend)."""
    agg = {}
    for cone_id, stats in per_cone_stats:
        for step, st in enumerate(stats):
            key = (cone_id, st.width, st.backend_used)
            if key not in agg:
                agg[key] = [step, 0, 0]
            agg[key][1] += 1
            agg[key][2] += st.elapsed_ns
    return agg


def cmd_qaoa_energy(args) -> int:
    graph, params = _load_qaoa(args)
    backend = _backend_from_args(args)
    if args.dry_run:
        circuit = qaoa_maxcut_circuit(graph, params)
        all_widths = []
        rows = []
        for cone_id, edge in enumerate(graph.edges):
            lc = extract_lightcone(circuit, edge)
            order = greedy_order(lc.network, args.heuristic)
            profile = dry_run(lc.network, order)
            all_widths.extend(profile.per_bucket_widths)
            print(f"lightcone {edge}: contraction width {profile.contraction_width}")
            for step, (idx, w) in enumerate(
                zip(profile.bucket_indices, profile.per_bucket_widths)
            ):
                rows.append((cone_id, step, idx, w))
        small = sum(1 for w in all_widths if w < 5)
        print(f"buckets: {len(all_widths)}, width<5: {100.0 * small / len(all_widths):.1f}%")
        if args.profile:
            with open(args.profile, "w") as f:
                f.write("lightcone,step,bucket_index,width\n")
                for row in rows:
                    f.write(",".join(str(x) for x in row) + "\n")
            if args.plot:
                from .plots import plot_width_histogram

                plot_width_histogram(all_widths, Path(args.profile).with_suffix(".png"))
        return EXIT_OK
    detail = qaoa_energy_detailed(
        graph, params, backend, args.heuristic, args.mem_cap, args.threads
    )
    energy = sum(0.5 * (1.0 - zz) for _, zz, _ in detail)
    print(round(energy, 10))
    if args.profile:
        agg = _aggregate_profile(
            [(cone_id, stats) for cone_id, (_, _, stats) in enumerate(detail)]
        )
        with open(args.profile, "w") as f:
            f.write("lightcone,step,width,count,total_time_ns,mean_time_ns,backend\n")
            for (cone_id, width, bk), (step, count, total) in sorted(agg.items()):
                f.write(f"{cone_id},{step},{width},{count},{total},{total // count},{bk}\n")
        if args.plot:
            from .plots import plot_time_by_width, plot_width_histogram

            per_backend = {}
            widths = []
            for (_, width, bk), (_, count, total) in agg.items():
                cur = per_backend.setdefault(bk, {}).setdefault(width, [0, 0])
                cur[0] += count
                cur[1] += total
                widths.extend([width] * count)
            per_backend = {
                bk: {w: tuple(v) for w, v in d.items()} for bk, d in per_backend.items()
            }
            base = Path(args.profile)
            plot_time_by_width(per_backend, base.with_name(base.stem + "_mean_time.png"), True)
            plot_time_by_width(per_backend, base.with_name(base.stem + "_total_time.png"), False)
            plot_width_histogram(widths, base.with_name(base.stem + "_widths.png"))
    return EXIT_OK


def _write_probs(path, probs):
    with open(path, "w") as f:
        for p in probs:
            f.write(repr(float(p)) + "\n")


def cmd_ensemble(args) -> int:
    if args.circuit:
        circuit = read_circuit(args.circuit)
    elif args.graph:
        graph, params = _load_qaoa(args)
        circuit = qaoa_maxcut_circuit(graph, params)
    else:
        raise UsageError("ensemble needs --circuit or --graph")
    nm = read_noise_config(args.noise)
    cfg = EnsembleConfig(K=args.ensemble_size, seed=args.seed, n_workers=args.threads)
    sigma_approx = simulate_batch_ensemble(circuit, nm, cfg)
    _write_probs(args.out, sigma_approx)
    exact = None
    if args.compare_exact:
        rho = density_matrix_simulate(circuit, nm)
        exact = sigma_exact(rho)
        out = Path(args.out)
        _write_probs(out.with_suffix(out.suffix + ".exact"), exact)
        report = error_metric(sigma_approx, exact)
        report_path = out.with_suffix(out.suffix + ".report.json")
        with open(report_path, "w") as f:
            json.dump({"fidelity": report.fidelity, "error": report.error}, f, indent=2)
            f.write("\n")
        print(f"fidelity {report.fidelity!r} error {report.error!r}")
    if args.plot:
        from .plots import plot_distributions

        plot_distributions(sigma_approx, exact, Path(args.out).with_suffix(".png"))
    return EXIT_OK


def _parse_int_range(text):
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def cmd_sweep_fit(args) -> int:
    ns = _parse_int_range(args.ns)
    ks = _parse_int_range(args.ks)
    if not ns or not ks:
        raise UsageError("empty sweep grid")
    fitted = None
    records = []
    if args.fixed_fit:
        a, d, m = (float(x) for x in args.fixed_fit.split(","))
        fitted = error_model.RegressionFit(alpha=a, delta=d, mu=m, r_squared=float("nan"))
    else:
        nm = read_noise_config(args.noise)
        lam1 = nm.all_1q[0].param if nm.all_1q else 0.0
        lam2 = nm.all_2q[0].param if nm.all_2q else 0.0
        for n in ns:
            graph = random_regular_graph(n, args.d, seed=args.seed + 1000 * n)
            params = QaoaParams(
                p=args.p,
                gammas=_parse_angles(args.gammas, args.p, DEFAULT_GAMMA),
                betas=_parse_angles(args.betas, args.p, DEFAULT_BETA),
            )
            circuit = qaoa_maxcut_circuit(graph, params)
            rho = density_matrix_simulate(circuit, read_noise_config(args.noise))
            exact = sigma_exact(rho)
            for k in ks:
                for s in range(args.seeds):
                    seed = args.seed + 7919 * n + 104729 * k + s
                    cfg = EnsembleConfig(K=k, seed=seed, n_workers=args.threads)
                    sigma_approx = simulate_batch_ensemble(circuit, nm, cfg)
                    rep = error_metric(sigma_approx, exact)
                    records.append(
                        error_model.SweepRecord(
                            n_qubits=n, K=k, error=rep.error, seed=seed,
                            d=args.d, p=args.p, lambda1=lam1, lambda2=lam2,
                        )
                    )
        if args.out_csv:
            error_model.write_sweep_csv(args.out_csv, records)
        fitted = error_model.fit(records)
        if args.out_json:
            error_model.write_fit_json(args.out_json, fitted)
        print(
            f"alpha {fitted.alpha:.6g} delta {fitted.delta:.6g} "
            f"mu {fitted.mu:.6g} r_squared {fitted.r_squared:.6g}"
        )
        if args.plot and args.out_csv:
            from .plots import plot_sweep

            plot_sweep(records, fitted, Path(args.out_csv).with_suffix(".png"))
    for n_str, err_str in args.predict or []:
        k = error_model.predict_circuits(fitted, int(n_str), float(err_str))
        print(f"predict n={n_str} target_error={err_str}: K={k}")
    return EXIT_OK


def cmd_tune_threshold(args) -> int:
    graph, params = _load_qaoa(args)
    circuit = qaoa_maxcut_circuit(graph, params)
    edges = graph.edges[: args.edges] if args.edges else graph.edges
    parts = []
    for edge in edges:
        lc = extract_lightcone(circuit, edge)
        order = greedy_order(lc.network, args.heuristic)
        parts.append(tuning.profile_kernels(lc.network, order, args.max_ref_width))
    timings = tuning.merge_timings(parts)
    report = tuning.choose_threshold(timings)
    if args.out:
        tuning.write_crossover_csv(args.out, timings)
        if args.plot:
            from .plots import plot_kernel_crossover

            plot_kernel_crossover(timings.rows(), Path(args.out).with_suffix(".png"))
    print(f"crossover_width {report.crossover}")
    print(f"best_threshold {report.best_threshold}")
    print(f"mixed_total_ns {report.mixed_total_ns:.0f}")
    print(f"all_reference_total_ns {report.all_reference_total_ns:.0f}")
    print(f"all_fast_total_ns {report.all_fast_total_ns:.0f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtnsim")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitude", help="contract an amplitude network")
    p.add_argument("--circuit", required=True)
    p.add_argument("--bitstring", required=True)
    p.add_argument("--stats-out")
    _add_backend_flags(p)
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("qaoa-energy", help="MaxCut energy via lightcone contraction")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--gammas")
    p.add_argument("--betas")
    p.add_argument("--dry-run", action="store_true",
                   help="report contraction widths only, no numeric work")
    p.add_argument("--profile", help="per-bucket CSV output path")
    p.add_argument("--plot", action="store_true",
                   help="render figures next to the profile CSV")
    p.add_argument("--threads", type=int, default=1)
    _add_backend_flags(p)
    p.set_defaults(func=cmd_qaoa_energy)

    p = sub.add_parser("ensemble", help="stochastic noisy ensemble simulation")
    p.add_argument("--circuit")
    p.add_argument("--graph")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--gammas")
    p.add_argument("--betas")
    p.add_argument("--noise", required=True, help="noise config JSON path")
    p.add_argument("-K", "--ensemble-size", type=int, required=True)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", required=True)
    p.add_argument("--compare-exact", action="store_true")
    p.add_argument("--plot", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("sweep-fit", help="error-model sweep and regression fit")
    p.add_argument("--ns", default="3:8", help="qubit counts, e.g. 3:8 or 3,5,7")
    p.add_argument("--ks", default="10,30,100,300,1000")
    p.add_argument("--noise")
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--gammas")
    p.add_argument("--betas")
    p.add_argument("--seeds", type=int, default=1, help="ensembles per grid cell")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    p.add_argument("--predict", nargs=2, action="append", metavar=("N", "ERR"))
    p.add_argument("--fixed-fit", help="alpha,delta,mu (skip the sweep)")
    p.add_argument("--plot", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_sweep_fit)

    p = sub.add_parser("tune-threshold", help="time kernels and pick a width threshold")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--gammas")
    p.add_argument("--betas")
    p.add_argument("--edges", type=int, help="only sample the first N lightcones")
    p.add_argument("--max-ref-width", type=int, default=18)
    p.add_argument("--heuristic", choices=["minfill", "mindegree"], default="minfill")
    p.add_argument("--out", help="crossover CSV path")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_tune_threshold)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (MemoryCapError, SimulationCapError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, ValueError, OSError, error_model.DegenerateSweepError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
