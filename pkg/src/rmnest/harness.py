"""Monte Carlo engine with deterministic seeding, EXIT-curve computation,
experiment configs, and result-file writing.

Worker streams are counter-based (Philox keyed by (seed, worker)) with
sample ranges fixed a priori, so merged estimates are byte-identical across
reruns with the same (seed, samples, workers).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__ as _pkg_version
from . import _kernels
from .channels import ChannelModel, erasure_cascade
from .codes import BinaryCode, CoordPermutation, RmParams, is_automorphism, rm_generator
from .decoders import (
    ExtrinsicMetrics,
    SyndromeTable,
    _generator_columns,
    _half_codeword_bits,
    bms_posterior_sweep,
    bsc_decision_table,
    build_syndrome_table,
)
from .errors import FeasibilityError, ParameterError

_MC_CHUNK = 1 << 14


def worker_rng(seed: int, worker: int) -> np.random.Generator:
    """Counter-based per-worker stream; (seed, worker) is the Philox key."""
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(worker)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def split_samples(samples: int, workers: int) -> List[int]:
    if samples <= 0 or workers <= 0:
        raise ParameterError("need positive samples and workers")
    base, rem = divmod(samples, workers)
    return [base + (1 if w < rem else 0) for w in range(workers)]


def _ci99(mean: float, sq_mean: float, n: int) -> float:
    var = max(sq_mean - mean * mean, 0.0)
    return 2.576 * math.sqrt(var / n)


# ---------------------------------------------------------------------------
# Monte Carlo extrinsic metrics
# ---------------------------------------------------------------------------


def mc_extrinsic_metrics(
    code: BinaryCode,
    ch: ChannelModel,
    target: int,
    samples: int,
    seed: int,
    workers: int = 1,
) -> ExtrinsicMetrics:
    if ch.kind == "bec":
        return _mc_bec(code, ch, target, samples, seed, workers)
    return _mc_soft(code, ch, target, samples, seed, workers)


def _mc_bec(code, ch, target, samples, seed, workers) -> ExtrinsicMetrics:
    cols = _generator_columns(code)
    coords = [i for i in range(code.length) if i != target]
    basis_cols = cols[coords].astype(np.int64)
    target_col = int(cols[target])
    total = 0
    for w, n_w in enumerate(split_samples(samples, workers)):
        rng = worker_rng(seed, w)
        done = 0
        while done < n_w:
            b = min(_MC_CHUNK, n_w - done)
            erased = rng.random((b, len(coords))) < ch.p
            out = np.zeros(b, dtype=np.int64)
            _kernels.bec_unrec_mc(basis_cols, target_col, erased, out)
            total += int(out.sum())
            done += b
    pe = total / samples
    half = _ci99(pe, pe, samples)
    return ExtrinsicMetrics(
        pe=pe, pb=pe / 2.0, ber=pe / 2.0, mmse=pe, cond_entropy=pe,
        e_g=1.0 - pe, e_g2=1.0 - pe, mode="mc", samples=samples,
        ci99={"pe": half, "mmse": half, "ber": half / 2.0, "cond_entropy": half},
    )


def _entropy_arr(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    inside = (x > 0.0) & (x < 1.0)
    xi = x[inside]
    out[inside] = -(xi * np.log2(xi) + (1.0 - xi) * np.log2(1.0 - xi))
    return out


def _mc_soft(code, ch, target, samples, seed, workers) -> ExtrinsicMetrics:
    """BSC / discrete-BMS Monte Carlo: per-sample exact posteriors."""
    probs = np.array(ch.probs)
    values = np.array(ch.values)
    supp = np.flatnonzero(probs > 0.0)
    flip = np.array([int(np.flatnonzero(values == -values[i])[0]) for i in range(values.size)])
    u0, u1 = _half_codeword_bits(code, target)
    u0 = u0.astype(bool)
    u1 = u1.astype(bool)
    n = code.length - 1
    sums = {k: 0.0 for k in ("pb", "ber", "g", "g2", "h", "ber2", "h2")}
    for w, n_w in enumerate(split_samples(samples, workers)):
        rng = worker_rng(seed, w)
        done = 0
        while done < n_w:
            b = min(_MC_CHUNK, n_w - done)
            idx = supp[rng.choice(supp.size, size=(b, n), p=probs[supp])]
            a_like = probs[idx]
            b_like = probs[flip[idx]]
            s0 = np.zeros(b)
            s1 = np.zeros(b)
            for row in u0:
                s0 += np.where(row, b_like, a_like).prod(axis=1)
            for row in u1:
                s1 += np.where(row, b_like, a_like).prod(axis=1)
            tot = s0 + s1
            g = (s0 - s1) / tot
            post1 = s1 / tot
            tie = np.isclose(s0, s1, rtol=1e-12, atol=0.0)
            err = (s1 > s0).astype(np.float64)
            err[tie] = 0.5
            bermin = np.minimum(post1, 1.0 - post1)
            ent = _entropy_arr(post1)
            sums["pb"] += float(err.sum())
            sums["ber"] += float(bermin.sum())
            sums["ber2"] += float((bermin**2).sum())
            sums["g"] += float(g.sum())
            sums["g2"] += float((g * g).sum())
            sums["h"] += float(ent.sum())
            sums["h2"] += float((ent**2).sum())
            done += b
    inv = 1.0 / samples
    eg2 = sums["g2"] * inv
    ber = sums["ber"] * inv
    ent = sums["h"] * inv
    return ExtrinsicMetrics(
        pe=None, pb=sums["pb"] * inv, ber=ber, mmse=1.0 - eg2, cond_entropy=ent,
        e_g=sums["g"] * inv, e_g2=eg2, mode="mc", samples=samples,
        ci99={
            "ber": _ci99(ber, sums["ber2"] * inv, samples),
            "mmse": _ci99(eg2, eg2, samples),
            "cond_entropy": _ci99(ent, sums["h2"] * inv, samples),
        },
    )


# ---------------------------------------------------------------------------
# majority-vote looks and list-ball experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MajorityMcResult:
    majority_error: float
    single_look_error: float
    majority_ci99: float
    single_ci99: float
    samples: int
    rho: float


def mc_majority_looks(code, looks, ch, target, samples, seed, workers=1) -> MajorityMcResult:
    """Monte Carlo majority-of-three-looks decoding error under a BSC, using
    exact per-look decision tables."""
    if ch.kind != "bsc":
        raise ParameterError("the majority experiment runs on a BSC")
    from .codes import project

    tables = []
    coord_sets = []
    for look in looks.looks:
        coords = sorted(int(i) for i in look)
        sub = project(code, coords)
        sub_target = coords.index(target)
        tables.append(bsc_decision_table(sub, sub_target, ch.p))
        coord_sets.append(np.array([c for c in coords if c != target], dtype=np.int64))
    weights = [(1 << np.arange(len(cs), dtype=np.int64)) for cs in coord_sets]
    maj_sum = 0
    look_sum = 0
    for w, n_w in enumerate(split_samples(samples, workers)):
        rng = worker_rng(seed, w)
        done = 0
        while done < n_w:
            b = min(_MC_CHUNK, n_w - done)
            z = (rng.random((b, code.length)) < ch.p).astype(np.int64)
            votes = np.zeros(b, dtype=np.int64)
            for tbl, cs, wt in zip(tables, coord_sets, weights):
                idx = (z[:, cs] * wt).sum(axis=1)
                d = tbl[idx].astype(np.int64)
                votes += d
                look_sum += int(d.sum())
            maj_sum += int((votes >= 2).sum())
            done += b
    maj = maj_sum / samples
    single = look_sum / (3 * samples)
    return MajorityMcResult(
        majority_error=maj,
        single_look_error=single,
        majority_ci99=_ci99(maj, maj, samples),
        single_ci99=_ci99(single, single, 3 * samples),
        samples=samples,
        rho=float(looks.pairwise_overlap),
    )


@dataclass(frozen=True)
class ListBallMcResult:
    q_hat: float
    radius: float
    prob_exceed: float
    prob_ci99: float
    samples: int


def mc_list_ball(n_rep: int, p: float, samples: int, seed: int, workers: int = 1) -> ListBallMcResult:
    """Per-bit hard decisions on a repetition-n block: empirical check of
    Pr(Delta >= sqrt(Q)) <= sqrt(Q) with Q the measured bit error rate."""
    counts = np.zeros(n_rep + 1, dtype=np.int64)
    for w, n_w in enumerate(split_samples(samples, workers)):
        rng = worker_rng(seed, w)
        done = 0
        while done < n_w:
            b = min(_MC_CHUNK, n_w - done)
            flips = (rng.random((b, n_rep)) < p).sum(axis=1)
            counts += np.bincount(flips, minlength=n_rep + 1)
            done += b
    total_bits = samples * n_rep
    q_hat = float((counts * np.arange(n_rep + 1)).sum()) / total_bits
    radius = math.sqrt(q_hat)
    exceed = int(counts[np.arange(n_rep + 1) / n_rep >= radius].sum())
    prob = exceed / samples
    return ListBallMcResult(
        q_hat=q_hat, radius=radius, prob_exceed=prob,
        prob_ci99=_ci99(prob, prob, samples), samples=samples,
    )


# ---------------------------------------------------------------------------
# EXIT curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExitCurve:
    grid: np.ndarray
    exit_values: np.ndarray
    entropy_values: np.ndarray
    area: float
    mutual_info_per_bit: float
    transitive: Optional[bool]

    @property
    def area_gap(self) -> float:
        return abs(self.area - self.mutual_info_per_bit)


def _simpson(ys: np.ndarray, xs: np.ndarray) -> float:
    n = len(xs)
    if n < 3 or n % 2 == 0:
        raise ParameterError("composite Simpson needs an odd grid of >= 3 points")
    h = (xs[-1] - xs[0]) / (n - 1)
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-2:2].sum()))


def _check_transitive(code: BinaryCode) -> Optional[bool]:
    """Spot-check transitivity: translation group for 2^m lengths, cyclic
    shifts otherwise; None when neither family applies."""
    n = code.length
    if n & (n - 1) == 0 and n > 1:
        m = n.bit_length() - 1
        idx = np.arange(n, dtype=np.int64)
        ok = all(is_automorphism(code, CoordPermutation(idx ^ (1 << j))) for j in range(m))
        return bool(ok)
    shift = CoordPermutation(np.roll(np.arange(n, dtype=np.int64), 1))
    return bool(is_automorphism(code, shift)) or None


def mutual_information_per_bit(code: BinaryCode, ch: ChannelModel) -> float:
    """(1/N) I(X;Y) by exact joint enumeration: H(Y) - N H(Z)."""
    probs = np.array(ch.probs)
    values = np.array(ch.values)
    flip = np.array([int(np.flatnonzero(values == -values[i])[0]) for i in range(values.size)])
    # output alphabet: values reachable under either input sign
    ysupp = np.flatnonzero((probs > 0.0) | (probs[flip] > 0.0))
    if ysupp.size ** code.length > (1 << 24):
        raise FeasibilityError("joint output enumeration exceeds the exact budget")
    cw = code.codeword_bits()
    p_y = None
    q_plus = probs[ysupp]
    q_minus = probs[flip[ysupp]]
    for u in cw:
        dist = np.array(1.0)
        for i in range(code.length):
            dist = np.multiply.outer(dist, q_minus if u[i] else q_plus)
        p_y = dist if p_y is None else p_y + dist
    p_y = (p_y / cw.shape[0]).ravel()
    h_y = float(-(p_y[p_y > 0] * np.log2(p_y[p_y > 0])).sum())
    h_z = float(-(q_plus[q_plus > 0] * np.log2(q_plus[q_plus > 0])).sum())
    return (h_y - code.length * h_z) / code.length


def exit_curve(
    code: BinaryCode,
    base: ChannelModel,
    grid_points: int = 201,
    target: int = 0,
    transitive: Optional[bool] = None,
) -> ExitCurve:
    """EXIT integrand I(X_0; Y_0 | Y_~0(t)) on a uniform t-grid, its Simpson
    area, and the exact per-bit mutual information it should equal."""
    if transitive is None:
        transitive = _check_transitive(code)
    grid = np.linspace(0.0, 1.0, grid_points)
    base_probs = np.array(base.probs)
    base_values = np.array(base.values)
    base_flip = np.array([int(np.flatnonzero(base_values == -base_values[i])[0]) for i in range(base_values.size)])
    bsupp = np.flatnonzero(base_probs > 0.0)
    exit_vals = np.empty(grid_points)
    ent_vals = np.empty(grid_points)
    for gi, t in enumerate(grid):
        ch_t = erasure_cascade(base, float(t))
        h_ext = 0.0
        h_full = 0.0
        for mu, s0, s1 in bms_posterior_sweep(code, ch_t, target):
            tot = s0 + s1
            good = tot > 0.0
            mu, s0, s1, tot = mu[good], s0[good], s1[good], tot[good]
            post1 = s1 / tot
            h_ext += float((mu * _entropy_arr(post1)).sum())
            for a in bsupp:
                qa = base_probs[a]
                qf = base_probs[base_flip[a]]
                denom = s0 * qa + s1 * qf
                inner = np.where(denom > 0.0, s1 * qf / np.where(denom > 0.0, denom, 1.0), 0.0)
                h_full += qa * float((mu * _entropy_arr(inner)).sum())
        exit_vals[gi] = h_ext - h_full
        ent_vals[gi] = h_ext
    area = _simpson(exit_vals, grid)
    return ExitCurve(
        grid=grid,
        exit_values=exit_vals,
        entropy_values=ent_vals,
        area=area,
        mutual_info_per_bit=mutual_information_per_bit(code, base),
        transitive=transitive,
    )


# ---------------------------------------------------------------------------
# block-error curve and the transition midpoint
# ---------------------------------------------------------------------------


def block_error_mc(table: SyndromeTable, p: float, samples: int, seed: int, workers: int = 1) -> Tuple[float, float]:
    """Monte Carlo block error of syndrome decoding at BSC(p)."""
    n = table.length
    checks = np.array([[(h >> i) & 1 for i in range(n)] for h in table.checks], dtype=np.int64)
    weights = 1 << np.arange(n, dtype=np.int64)
    syn_w = 1 << np.arange(len(table.checks), dtype=np.int64)
    errs = 0
    for w, n_w in enumerate(split_samples(samples, workers)):
        rng = worker_rng(seed, w)
        done = 0
        while done < n_w:
            b = min(_MC_CHUNK, n_w - done)
            z = (rng.random((b, n)) < p).astype(np.int64)
            syn = ((z @ checks.T) & 1) @ syn_w
            zmask = z @ weights
            errs += int((zmask != table.leaders[syn]).sum())
            done += b
    est = errs / samples
    return est, _ci99(est, est, samples)


@dataclass(frozen=True)
class ThetaEstimate:
    theta: float
    probes: int
    samples_per_probe: int
    last_block_error: float
    last_ci99: float


def estimate_theta(
    code: BinaryCode,
    samples_per_probe: int = 20000,
    seed: int = 0,
    tol: float = 5e-3,
    max_probes: int = 40,
) -> ThetaEstimate:
    """Monte Carlo bisection for the block-error transition midpoint
    B^-1(1/2) of syndrome decoding on the BSC."""
    table = build_syndrome_table(code)
    lo, hi = 1e-9, 0.5
    est, half = 0.0, 0.0
    probes = 0
    while hi - lo > tol and probes < max_probes:
        mid = 0.5 * (lo + hi)
        est, half = block_error_mc(table, mid, samples_per_probe, seed, 1)
        probes += 1
        if est < 0.5:
            lo = mid
        else:
            hi = mid
        seed += 1
    theta = 0.5 * (lo + hi)
    return ThetaEstimate(theta=theta, probes=probes, samples_per_probe=samples_per_probe, last_block_error=est, last_ci99=half)


# ---------------------------------------------------------------------------
# experiment configuration and result files
# ---------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    """Flat key-value experiment description (keys match the CLI flags)."""

    command: str
    options: dict = field(default_factory=dict)
    raw_text: str = ""

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        options = {}
        command = None
        for ln_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"config line {ln_no}: expected key = value, got {raw!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if not key:
                raise ParameterError(f"config line {ln_no}: empty key")
            if key == "command":
                command = value
            else:
                options[key] = value
        if command is None:
            raise ParameterError("config is missing the 'command' key")
        return cls(command=command, options=options, raw_text=text)

    def config_hash(self) -> str:
        canon = "command=" + self.command + "\n" + "\n".join(
            f"{k}={self.options[k]}" for k in sorted(self.options)
        )
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def format_float(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_rows(path: Optional[str], rows: Sequence[dict], meta: dict, fmt: str = "csv") -> str:
    """Serialize rows with a provenance header; returns the text written."""
    meta = dict(meta)
    meta.setdefault("tool_version", _pkg_version)
    if fmt == "json":
        payload = {
            "meta": meta,
            "rows": [{k: (format_float(v) if isinstance(v, float) else v) for k, v in row.items()} for row in rows],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        lines = [f"# {k}={meta[k]}" for k in sorted(meta)]
        if rows:
            cols = list(rows[0].keys())
            lines.append(",".join(cols))
            for row in rows:
                lines.append(",".join(format_float(row[c]) for c in cols))
        text = "\n".join(lines) + "\n"
    else:
        raise ParameterError(f"unknown output format {fmt!r}")
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def run_experiment(config_path: str) -> int:
    """Dispatch a parsed config to the command handlers and write results;
    returns the process exit status (0 ok, 2 feasibility refusal, 1 error)."""
    from .cli import run_experiment as _impl

    return _impl(config_path)


def parse_code_spec(spec: str) -> BinaryCode:
    """'rm R M' | 'rep N' | 'spc N' | a path to a serialized code file."""
    parts = spec.strip().split()
    if parts and parts[0] == "rm" and len(parts) == 3:
        return rm_generator(RmParams(int(parts[1]), int(parts[2])))
    if parts and parts[0] == "rep" and len(parts) == 2:
        n = int(parts[1])
        return BinaryCode.from_generators(n, [(1 << n) - 1])
    if parts and parts[0] == "spc" and len(parts) == 2:
        n = int(parts[1])
        return BinaryCode.from_generators(n, [(1 << i) | (1 << (i + 1)) for i in range(n - 1)])
    if len(parts) == 1:
        with open(parts[0], "r", encoding="utf-8") as fh:
            return BinaryCode.from_text(fh.read())
    raise ParameterError(f"bad code spec {spec!r}")
