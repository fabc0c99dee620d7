"""Command-line interface.

Subcommands: rm-info, metrics, bound-table, bound-trace, fourier-analyze,
exit-curve, looks, spread, transfer, verify.  Every command can also be
driven from a flat key=value config file via `rmnest run CONFIG`.

Exit status: 0 on success, 2 on a feasibility refusal, 1 on any other
error (including parse errors).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .bounds import TransferParams, rate_phi_bound, theorem_trace, tz_sasoglu_transfer
from .channels import make_channel
from .codes import RmParams, codes_equal, min_distance, project, rm_generator
from .decoders import bec_indicator_table, extrinsic_metrics
from .errors import FeasibilityError, ParameterError
from .fourier import BooleanFn, biased_transform, level_k_check, level_profile, noise_operator_check, pattern_measure
from .harness import (
    ExperimentConfig,
    estimate_theta,
    exit_curve,
    parse_code_spec,
    write_rows,
)
from .subspaces import multi_look_family, spread_family


def _channel_from(options):
    spec = options.get("channel")
    if spec is None:
        raise ParameterError("missing channel (use --channel 'bsc 0.1' or --channel bsc --p 0.1)")
    if spec.strip() in ("bec", "bsc") and "p" in options:
        spec = f"{spec} {options['p']}"
    return make_channel(spec)


def _int_opt(options, key, default=None):
    if key not in options:
        if default is None:
            raise ParameterError(f"missing required option {key!r}")
        return default
    try:
        return int(options[key])
    except ValueError as exc:
        raise ParameterError(f"option {key} must be an integer, got {options[key]!r}") from exc


def _float_opt(options, key, default=None):
    if key not in options:
        if default is None:
            raise ParameterError(f"missing required option {key!r}")
        return default
    try:
        return float(options[key])
    except ValueError as exc:
        raise ParameterError(f"option {key} must be a number, got {options[key]!r}") from exc


def cmd_rm_info(options):
    r = _int_opt(options, "r")
    m = _int_opt(options, "m")
    code = rm_generator(RmParams(r, m))
    rec = rate_phi_bound(r, m)
    row = {
        "r": r, "m": m, "n": code.length, "dim": code.dim,
        "rate": float(code.rate), "rate_exact": str(code.rate),
        "phi": rec.phi_value, "gap": rec.gap, "gap_bound": rec.gap_bound, "holds": rec.holds,
    }
    if code.dim <= 22:
        row["min_distance"] = min_distance(code)
    return [row], {"command": "rm-info"}


def cmd_metrics(options):
    code = parse_code_spec(options.get("code", ""))
    ch = _channel_from(options)
    target = _int_opt(options, "target", 0)
    mode = options.get("mode", "exact")
    met = extrinsic_metrics(
        code, ch, target, mode,
        samples=_int_opt(options, "samples", 0),
        seed=_int_opt(options, "seed", 0),
        workers=_int_opt(options, "workers", 1),
    )
    row = {
        "code": options.get("code"), "channel": options.get("channel"), "target": target,
        "mode": met.mode, "pe": met.pe if met.pe is not None else "",
        "pb": met.pb, "ber": met.ber, "mmse": met.mmse, "cond_entropy": met.cond_entropy,
        "e_g": met.e_g, "e_g2": met.e_g2,
    }
    meta = {"command": "metrics"}
    if met.mode == "mc":
        row["samples"] = met.samples
        for k, v in sorted((met.ci99 or {}).items()):
            row[f"ci99_{k}"] = v
        meta["seed"] = options.get("seed", "0")
        meta["workers"] = options.get("workers", "1")
    return [row], meta


def cmd_bound_table(options):
    max_m = _int_opt(options, "max-m", 10)
    rows = []
    for m in range(1, max_m + 1):
        for r in range(m + 1):
            rec = rate_phi_bound(r, m)
            rows.append({
                "r": r, "m": m, "rate": float(rec.rate),
                "phi": rec.phi_value, "gap": rec.gap, "holds": rec.holds,
            })
    return rows, {"command": "bound-table", "max_m": max_m}


def cmd_bound_trace(options):
    theorem = options.get("theorem")
    if theorem is None:
        raise ParameterError("missing --theorem (bec|bms|fast_bec|fast_bsc|corollary_bsc)")
    kwargs = {}
    for key in ("s", "t", "r", "m", "k"):
        if key in options:
            kwargs[key] = _int_opt(options, key)
    for key, dest in (("delta", "delta"), ("eta", "eta"), ("p", "p"), ("capacity", "capacity")):
        if key in options:
            kwargs[dest] = _float_opt(options, key)
    trace = theorem_trace(theorem, **kwargs)
    rows = [
        {"stage": s.index, "rule": s.rule, "m_plus": s.m_plus, "value": s.value}
        for s in trace.stages
    ]
    meta = {
        "command": "bound-trace", "theorem": theorem,
        "initial_delta": format(trace.initial_delta, ".17g"),
        "rho": trace.rho, "final_bound": format(trace.final_bound, ".17g"),
        "closed_form": format(trace.closed_form, ".17g"), "vacuous": trace.vacuous,
    }
    for name, ok in trace.constraints.items():
        meta[f"constraint[{name}]"] = ok
    if trace.r is not None:
        meta["r"] = trace.r
    return rows, meta


def cmd_fourier_analyze(options):
    code = parse_code_spec(options.get("code", ""))
    bias = _float_opt(options, "bias", _float_opt(options, "p", 0.5))
    target = _int_opt(options, "target", 0)
    table = bec_indicator_table(code, target)
    f = BooleanFn(n=code.length - 1, values=table, bias=bias)
    spec = biased_transform(f)
    prof = level_profile(spec)
    e_f2 = float((pattern_measure(f.n, bias) * table * table).sum())
    rows = [{"level": k, "mass": float(prof.level_mass[k])} for k in range(f.n + 1)]
    lk = level_k_check(f)
    nb = noise_operator_check(f)
    meta = {
        "command": "fourier-analyze", "bias": bias, "alpha": lk.alpha,
        "parseval_residual": abs(prof.mean_sq - e_f2),
        "variance": prof.variance,
        "level_k_threshold": lk.threshold, "level_k_mass": lk.low_mass,
        "level_k_bound": lk.bound, "level_k_holds": lk.passed,
        "noise_rho": nb.rho, "noise_mass": nb.noise_mass,
        "noise_bound": nb.bound, "noise_holds": nb.passed,
    }
    return rows, meta


def cmd_exit_curve(options):
    code = parse_code_spec(options.get("code", ""))
    ch = _channel_from(options)
    grid = _int_opt(options, "grid", 201)
    curve = exit_curve(code, ch, grid)
    rows = [
        {"t": float(t), "exit": float(v), "entropy": float(h)}
        for t, v, h in zip(curve.grid, curve.exit_values, curve.entropy_values)
    ]
    meta = {
        "command": "exit-curve",
        "area": format(curve.area, ".17g"),
        "mutual_info_per_bit": format(curve.mutual_info_per_bit, ".17g"),
        "area_gap": format(curve.area_gap, ".17g"),
        "transitive": curve.transitive,
    }
    return rows, meta


def cmd_looks(options):
    m = _int_opt(options, "m")
    s = _int_opt(options, "s")
    t = _int_opt(options, "t")
    fam = multi_look_family(m, s, t)
    r = _int_opt(options, "r", -1)
    rows = []
    small = None
    if r >= 0:
        small = rm_generator(RmParams(r, m - (s - 1) * t))
        big = rm_generator(RmParams(r, m))
    for i, lk in enumerate(fam.looks):
        row = {"look": i, "size": len(lk), "overlap": str(fam.pairwise_overlap)}
        if small is not None:
            row["projection_equals_rm"] = codes_equal(project(big, sorted(lk)), small)
        rows.append(row)
    meta = {"command": "looks", "m": m, "s": s, "t": t, "common_intersection_size": len(fam.common_intersection)}
    return rows, meta


def cmd_spread(options):
    s = _int_opt(options, "s")
    t = _int_opt(options, "t")
    fam = spread_family(s, t)
    covered = set()
    for sub in fam.subspaces:
        covered |= set(sub) - {0}
    rows = [
        {"index": i, "size": len(sub), "basis": ";".join(str(b) for b in fam.bases[i])}
        for i, sub in enumerate(fam.subspaces)
    ]
    meta = {
        "command": "spread", "s": s, "t": t, "count": fam.count,
        "partition_ok": len(covered) == (1 << fam.field_degree) - 1,
    }
    return rows, meta


def cmd_transfer(options):
    p = _float_opt(options, "p")
    if "theta" in options:
        theta = _float_opt(options, "theta")
        meta_extra = {}
    else:
        code = parse_code_spec(options.get("code", "rep 15"))
        est = estimate_theta(
            code,
            samples_per_probe=_int_opt(options, "samples", 20000),
            seed=_int_opt(options, "seed", 0),
        )
        theta = est.theta
        meta_extra = {"theta_probes": est.probes, "theta_samples_per_probe": est.samples_per_probe}
    n_block = _int_opt(options, "n")
    d = _int_opt(options, "d")
    delta = _float_opt(options, "delta", 1.0 / n_block**2)
    rec = tz_sasoglu_transfer(TransferParams(n_block=n_block, d=d, p=p, theta=theta), delta)
    row = {
        "n": n_block, "d": d, "p": p, "theta": theta, "delta": delta,
        "alpha": rec.alpha, "width": rec.width, "p_low": rec.p_low,
        "bms_capacity_threshold": rec.bms_capacity_threshold,
        "block_bound_statement": rec.block_bound_statement,
        "block_bound_proof": rec.block_bound_proof,
        "proof_simplification_valid": rec.proof_simplification_valid,
    }
    return [row], {"command": "transfer", **meta_extra}


def cmd_verify(options):
    from .verify import run_suite

    names = options.get("suite", "all").split(",")
    results = run_suite(tuple(n.strip() for n in names))
    for res in results:
        print(res.line())
    rows = [
        {"criterion": r.name, "passed": r.passed, "seconds": round(r.seconds, 2), "detail": r.detail}
        for r in results
    ]
    meta = {"command": "verify", "all_passed": all(r.passed for r in results)}
    return rows, meta


COMMANDS = {
    "rm-info": cmd_rm_info,
    "metrics": cmd_metrics,
    "bound-table": cmd_bound_table,
    "bound-trace": cmd_bound_trace,
    "fourier-analyze": cmd_fourier_analyze,
    "exit-curve": cmd_exit_curve,
    "looks": cmd_looks,
    "spread": cmd_spread,
    "transfer": cmd_transfer,
    "verify": cmd_verify,
}

_FLAGS = (
    "code", "channel", "p", "mode", "samples", "seed", "workers", "out", "format",
    "r", "m", "s", "t", "k", "delta", "eta", "capacity", "theorem", "target",
    "grid", "bias", "max-m", "n", "d", "theta", "suite",
)


def run_command(command: str, options: dict) -> str:
    """Execute one subcommand and return (and optionally write) its output."""
    if command not in COMMANDS:
        raise ParameterError(f"unknown command {command!r}")
    rows, meta = COMMANDS[command](options)
    meta["config_hash"] = ExperimentConfig(command=command, options={k: v for k, v in options.items() if k != "out"}).config_hash()
    if "seed" in options:
        meta.setdefault("seed", options["seed"])
    fmt = options.get("format", "csv")
    return write_rows(options.get("out"), rows, meta, fmt)


def run_experiment(config_path: str) -> int:
    """Run a key=value config file; returns the process exit status."""
    try:
        with open(config_path, "r", encoding="utf-8") as fh:
            cfg = ExperimentConfig.parse(fh.read())
        text = run_command(cfg.command, cfg.options)
        if "out" not in cfg.options:
            sys.stdout.write(text)
        return 0
    except FeasibilityError as exc:
        print(f"feasibility refusal: {exc}", file=sys.stderr)
        return 2
    except (ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser():
    parser = argparse.ArgumentParser(prog="rmnest", description=__doc__)
    parser.add_argument("--version", action="version", version=f"rmnest {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a key=value config file")
    runp.add_argument("config")
    for name in COMMANDS:
        p = sub.add_parser(name)
        for flag in _FLAGS:
            p.add_argument(f"--{flag}", dest=flag, default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return run_experiment(args.config)
    options = {flag: getattr(args, flag) for flag in _FLAGS if getattr(args, flag, None) is not None}
    try:
        text = run_command(args.command, options)
        if "out" not in options:
            sys.stdout.write(text)
        if args.command == "verify":
            import json as _json

            payload = _json.loads(text) if options.get("format") == "json" else None
            ok = payload["meta"]["all_passed"] if payload else "all_passed=True" in text
            return 0 if ok else 1
        return 0
    except FeasibilityError as exc:
        print(f"feasibility refusal: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
