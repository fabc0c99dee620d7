"""Analytic bound calculators: rate lemma, recursion steps, theorem traces,
the list-ball bound, and the BSC-to-BMS transfer formulas.

All functions are pure; values above 1 are carried through and flagged
vacuous by the trace assembler instead of being clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional

from scipy.stats import norm

from .channels import binary_entropy
from .errors import ParameterError

# contraction constants used by the Reed-Muller chains: the overlap bound
# rho <= 1/2 gives odds factors 1/(2-rho) <= 2/3 and (1+rho)/2 <= 3/4
RM_RHO = 0.5


def phi(z: float) -> float:
    """Standard Gaussian CDF."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def phi_inv(q: float) -> float:
    if not (0.0 < q < 1.0):
        raise ParameterError("phi_inv needs an argument strictly inside (0,1)")
    return float(norm.ppf(q))


# ---------------------------------------------------------------------------
# rate lemma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatePhiRecord:
    r: int
    m: int
    rate: Fraction
    phi_value: float
    gap: float
    gap_bound: float
    holds: bool


def exact_rm_rate(r: int, m: int) -> Fraction:
    if not (0 <= r <= m):
        raise ParameterError("need 0 <= r <= m")
    return Fraction(sum(comb(m, i) for i in range(r + 1)), 1 << m)


def rate_phi_bound(r: int, m: int) -> RatePhiRecord:
    """|R - Phi((2r-m)/sqrt(m))| <= 1/sqrt(2 pi m) for the exact rate."""
    if m > 64:
        raise ParameterError("rate lemma capped at m <= 64")
    if m == 0:
        raise ParameterError("rate lemma needs m >= 1")
    rate = exact_rm_rate(r, m)
    pv = phi((2.0 * r - m) / math.sqrt(m))
    gap = abs(float(rate) - pv)
    bound = 1.0 / math.sqrt(2.0 * math.pi * m)
    return RatePhiRecord(r=r, m=m, rate=rate, phi_value=pv, gap=gap, gap_bound=bound, holds=gap <= bound)


@dataclass(frozen=True)
class RateFloorRecord:
    target_rate: float
    m: int
    r: int
    rate: Fraction
    lower: float
    upper: float
    holds: bool


def rate_floor_bounds(target_rate: float, m: int) -> RateFloorRecord:
    """With r = floor(m/2 + sqrt(m) PhiInv(R)/2), the exact rate lies in
    [R - 3/sqrt(2 pi m), R + 1/sqrt(2 pi m)]."""
    r = math.floor(m / 2.0 + math.sqrt(m) * phi_inv(target_rate) / 2.0)
    if not (0 <= r <= m):
        raise ParameterError(f"target rate {target_rate} gives r={r} outside [0,{m}]")
    rate = exact_rm_rate(r, m)
    slack = 1.0 / math.sqrt(2.0 * math.pi * m)
    lower, upper = target_rate - 3.0 * slack, target_rate + slack
    return RateFloorRecord(
        target_rate=target_rate, m=m, r=r, rate=rate,
        lower=lower, upper=upper, holds=lower <= float(rate) <= upper,
    )


def rate_telescope_gap(r: int, m: int, k: int) -> dict:
    """R(RM(r,m)) - R(RM(r,m+k)) <= k/(2 sqrt(m))."""
    r0 = exact_rm_rate(r, m)
    rk = exact_rm_rate(r, m + k)
    bound = k / (2.0 * math.sqrt(m))
    return {"rate0": r0, "rate_k": rk, "diff": float(r0 - rk), "bound": bound, "holds": float(r0 - rk) <= bound + 1e-15}


# ---------------------------------------------------------------------------
# recursion steps
# ---------------------------------------------------------------------------


def level_k_constant(p: float) -> float:
    """c = 1/(8 ln(1/lambda)) with lambda = min(p, 1-p)."""
    lam = min(p, 1.0 - p)
    if not (0.0 < lam <= 0.5):
        raise ParameterError("level-k constant needs p strictly inside (0,1)")
    return 1.0 / (8.0 * math.log(1.0 / lam))


def _check_unit(value: float, name: str):
    if not (0.0 < value < 1.0):
        raise ParameterError(f"{name} must lie in (0,1), got {value}")


def bec_two_look(pe: float, rho: float) -> float:
    """pe' = (1-rho) pe^2 + rho pe."""
    if not (0.0 <= pe <= 1.0) or not (0.0 <= rho < 1.0):
        raise ParameterError("bec_two_look needs pe in [0,1], rho in [0,1)")
    return (1.0 - rho) * pe * pe + rho * pe


def bec_odds(pe: float, rho: float) -> float:
    """Contract the odds pe/(1-pe) by 1/(2-rho) and solve back."""
    if not (0.0 <= rho < 1.0):
        raise ParameterError("bec_odds needs rho in [0,1)")
    if pe >= 1.0:
        return 1.0
    odds = pe / (1.0 - pe) / (2.0 - rho)
    return odds / (1.0 + odds)


def mmse_odds(mmse: float, rho: float) -> float:
    """Contract the odds M/(1-M) by (1+rho)/2 and solve back."""
    if not (0.0 <= rho < 1.0):
        raise ParameterError("mmse_odds needs rho in [0,1)")
    if mmse >= 1.0:
        return 1.0
    odds = mmse / (1.0 - mmse) * (1.0 + rho) / 2.0
    return odds / (1.0 + odds)


def bsc_three_look(pb: float, rho: float) -> float:
    """pb' = 3 rho pb + 3 (1-rho) pb^2 (may exceed 1; callers flag vacuous)."""
    if not (0.0 <= pb <= 1.0) or not (0.0 <= rho < 1.0):
        raise ParameterError("bsc_three_look needs pb in [0,1], rho in [0,1)")
    return 3.0 * rho * pb + 3.0 * (1.0 - rho) * pb * pb


def level_k_step(pe: float, ell: int, p: float) -> float:
    """pe' = pe (pe + 2^-ell pe^(1/6) + (c ln(1/pe))^-ell)."""
    _check_unit(pe, "pe")
    if ell < 1:
        raise ParameterError("level-k step needs ell >= 1")
    c = level_k_constant(p)
    return pe * (pe + 2.0**-ell * pe ** (1.0 / 6.0) + (c * math.log(1.0 / pe)) ** -ell)


def level_k_closed(pe: float, ell: int, p: float) -> float:
    """Closed forms pe (2/(c ln(1/pe)))^ell, stated for ell = 1 and 2."""
    _check_unit(pe, "pe")
    if ell not in (1, 2):
        raise ParameterError("closed level-k forms exist for ell in {1, 2}")
    c = level_k_constant(p)
    return pe * (2.0 / (c * math.log(1.0 / pe))) ** ell


def alpha_relation_margin(alpha: float, p: float) -> float:
    """RHS minus LHS of: alpha + alpha^(1/6)/2 + 1/(c ln(1/alpha))
    <= 2/(c ln(1/alpha)); nonnegative when the relation holds."""
    _check_unit(alpha, "alpha")
    c = level_k_constant(p)
    denom = c * math.log(1.0 / alpha)
    lhs = alpha + 0.5 * alpha ** (1.0 / 6.0) + 1.0 / denom
    return 2.0 / denom - lhs


RECURSION_KINDS = {
    "bec_two_look": lambda value, rho=RM_RHO, **_: bec_two_look(value, rho),
    "bec_odds": lambda value, rho=RM_RHO, **_: bec_odds(value, rho),
    "mmse_odds": lambda value, rho=RM_RHO, **_: mmse_odds(value, rho),
    "bsc_three_look": lambda value, rho=0.25, **_: bsc_three_look(value, rho),
    "level_k": lambda value, ell=1, p=0.5, **_: level_k_step(value, ell, p),
}


def recursion_step(kind: str, value: float, **params) -> float:
    if kind not in RECURSION_KINDS:
        raise ParameterError(f"unknown recursion kind {kind!r}; know {sorted(RECURSION_KINDS)}")
    return RECURSION_KINDS[kind](value, **params)


# ---------------------------------------------------------------------------
# theorem traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceStage:
    index: int
    rule: str
    m_plus: int
    value: float


@dataclass(frozen=True)
class BoundTrace:
    theorem: str
    params: dict
    initial_delta: float
    rho: float
    stages: tuple
    final_bound: float
    closed_form: float
    vacuous: bool
    constraints: dict
    r: Optional[int] = None

    def stage_values(self) -> List[float]:
        return [s.value for s in self.stages]


def _r_for_capacity(capacity: float, m: int) -> Optional[int]:
    target = capacity - 2.0 / math.sqrt(2.0 * math.pi * m)
    if not (0.0 < target < 1.0):
        return None
    r = math.floor(m / 2.0 + math.sqrt(m) * phi_inv(target) / 2.0)
    return r if 0 <= r <= m else None


def theorem_trace(theorem: str, **params) -> BoundTrace:
    """Compose a theorem's initialization with its per-stage recursions.

    bec/bms/fast_bec/corollary_bsc take (s, t) and optionally capacity (to
    report the order r) and p (the channel parameter fixing the level-k
    constant; default 1/2, the worst case).  fast_bsc takes (r, m, k,
    delta, eta) and p.
    """
    if theorem == "bec":
        return _trace_geometric(theorem, factor_kind="bec_odds", base=2.0 / 3.0, **params)
    if theorem == "bms":
        return _trace_geometric(theorem, factor_kind="mmse_odds", base=3.0 / 4.0, **params)
    if theorem == "fast_bec":
        return _trace_fast_bec(**params)
    if theorem == "fast_bsc":
        return _trace_fast_bsc(**params)
    if theorem == "corollary_bsc":
        return _trace_corollary_bsc(**params)
    raise ParameterError(f"unknown theorem {theorem!r}")


def _trace_geometric(theorem, factor_kind, base, s, t, capacity=None, **_):
    if s < 1 or t < 1:
        raise ParameterError("need positive s and t")
    m = (s * t) ** 2
    k = 2 * t
    delta = 1.0 / math.sqrt(2.0 * math.pi * m)
    step = bec_odds if factor_kind == "bec_odds" else mmse_odds
    value = 1.0 - delta
    stages = [TraceStage(0, "init", m, value)]
    for j in range(1, k + 1):
        value = step(value, RM_RHO)
        stages.append(TraceStage(j, factor_kind, m + j, value))
    closed = base**k * math.sqrt(2.0 * math.pi * m)
    final = value
    constraints = {"m=(st)^2": True, "k=2t": True}
    r = _r_for_capacity(capacity, m) if capacity is not None else None
    return BoundTrace(
        theorem=theorem, params={"s": s, "t": t, "capacity": capacity},
        initial_delta=delta, rho=RM_RHO, stages=tuple(stages),
        final_bound=final, closed_form=closed, vacuous=closed >= 1.0,
        constraints=constraints, r=r,
    )


def _trace_fast_bec(s, t, p=0.5, capacity=None, **_):
    if s < 1 or t < 1:
        raise ParameterError("need positive s and t")
    m = (s * t) ** 2
    delta = 1.0 / math.sqrt(2.0 * math.pi * m)
    c = level_k_constant(p)
    value = 1.0 - delta
    stages = [TraceStage(0, "init", m, value)]
    for j in range(1, t + 1):
        value = bec_odds(value, RM_RHO)
        stages.append(TraceStage(j, "bec_odds", m + j, value))
    mid = value
    level_ok = value < 1.0 and math.log(1.0 / value) >= t / 3.0
    for j in range(1, t + 1):
        value = level_k_closed(value, 1, p) if 0.0 < value < 1.0 else value
        stages.append(TraceStage(t + j, "level_k_l1", m + t + j, value))
    closed = math.exp(-(1.0 / (3.0 * s)) * math.sqrt(m) * math.log(math.e * m))
    constraints = {
        "ln(1/Pe_mid) >= t/3": level_ok,
        "t >= s^2 (6/c)^3": t >= s**2 * (6.0 / c) ** 3,
    }
    r = _r_for_capacity(capacity, m) if capacity is not None else None
    return BoundTrace(
        theorem="fast_bec", params={"s": s, "t": t, "p": p, "capacity": capacity},
        initial_delta=delta, rho=RM_RHO, stages=tuple(stages),
        final_bound=value, closed_form=closed, vacuous=value >= 1.0,
        constraints=constraints, r=r,
    )


def _trace_fast_bsc(r, m, k, delta, eta, p=0.5, **_):
    if k % 8 != 0 or k <= 0:
        raise ParameterError("fast_bsc needs k divisible by 8")
    if not (0.0 < delta <= 1.0 and 0.0 < eta <= 1.0):
        raise ParameterError("fast_bsc needs delta, eta in (0,1]")
    c = level_k_constant(p)
    value = 1.0 - delta
    stages = [TraceStage(0, "init", m, value)]
    for j in range(1, k // 2 + 1):
        value = mmse_odds(value, RM_RHO)
        stages.append(TraceStage(j, "mmse_odds", m + j, value))
    mid = value
    level_ok = value < 1.0 and math.log(1.0 / value) >= k / 8.0
    for j in range(1, k // 8 + 1):
        value = level_k_closed(value, 2, p) if 0.0 < value < 1.0 else value
        stages.append(TraceStage(k // 2 + j, "level_k_l2", m + k // 2 + 4 * j, value))
    closed = math.exp(-(k / 8.0) * math.log(math.e * k / (2.0 * eta)))
    constraints = {
        "k divisible by 8": True,
        "ln(1/Pb_mid) >= k/8": level_ok,
        "k >= (16/c)^2/(2 eta)": k >= (16.0 / c) ** 2 / (2.0 * eta),
    }
    return BoundTrace(
        theorem="fast_bsc", params={"r": r, "m": m, "k": k, "delta": delta, "eta": eta, "p": p},
        initial_delta=delta, rho=RM_RHO, stages=tuple(stages),
        final_bound=value, closed_form=closed, vacuous=value >= 1.0,
        constraints=constraints, r=r,
    )


def _trace_corollary_bsc(s, t, p=0.5, capacity=None, **_):
    if t % 4 != 0:
        raise ParameterError("corollary_bsc needs t divisible by 4")
    m = (s * t) ** 2
    k = 2 * t
    delta = 1.0 / math.sqrt(2.0 * math.pi * m)
    eta = 1.0 / s
    inner = _trace_fast_bsc(r=None, m=m, k=k, delta=delta, eta=eta, p=p)
    closed = math.exp(-(1.0 / (8.0 * s)) * math.sqrt(m) * math.log(math.e * m))
    r = _r_for_capacity(capacity, m) if capacity is not None else None
    return BoundTrace(
        theorem="corollary_bsc", params={"s": s, "t": t, "p": p, "capacity": capacity},
        initial_delta=delta, rho=RM_RHO, stages=inner.stages,
        final_bound=inner.final_bound, closed_form=closed, vacuous=inner.final_bound >= 1.0,
        constraints=dict(inner.constraints, **{"t divisible by 4": True}), r=r,
    )


# ---------------------------------------------------------------------------
# list-ball and transfer
# ---------------------------------------------------------------------------


def list_ball_bound(q: float) -> dict:
    """Markov pair: Pr(relative distance >= sqrt(Q)) <= sqrt(Q)."""
    if not (0.0 <= q <= 1.0):
        raise ParameterError("Q must lie in [0,1]")
    root = math.sqrt(q)
    return {"radius": root, "prob_bound": root, "vacuous": root >= 1.0}


@dataclass(frozen=True)
class TransferParams:
    """Block length, minimum distance, BSC parameter, and the estimated
    transition midpoint of the block error curve."""

    n_block: int
    d: int
    p: float
    theta: float
    kappa: float = None

    def __post_init__(self):
        if self.n_block <= 0 or self.d <= 0:
            raise ParameterError("need positive N and d")
        if not (0.0 < self.p <= 0.5) or not (0.0 < self.theta <= 0.5):
            raise ParameterError("need p, theta in (0, 1/2]")
        if self.kappa is None:
            object.__setattr__(self, "kappa", math.sqrt(self.d / math.log(self.n_block)))


@dataclass(frozen=True)
class TransferRecord:
    alpha: float
    width: float
    p_low: float
    bms_capacity_threshold: float
    block_bound_statement: float
    block_bound_proof: float
    proof_simplification_valid: bool
    p_low_positive: bool


def tz_sasoglu_transfer(params: TransferParams, delta: float) -> TransferRecord:
    """Evaluate the transfer formulas: the Gaussian argument alpha(p), the
    transition width at level delta, the shifted BSC parameter, the BMS
    capacity threshold, and both block-error bound formulas."""
    if not (0.0 < delta < 1.0):
        raise ParameterError("delta must lie in (0,1)")
    d, p, theta, n = params.d, params.p, params.theta, params.n_block
    alpha = math.sqrt(d) * (math.sqrt(-math.log(1.0 - theta)) - math.sqrt(-math.log(1.0 - p)))
    width = 4.0 * math.sqrt(2.0 * math.log(2.0)) * math.sqrt(math.log(1.0 / delta) / d)
    p_low = p - 8.0 * math.sqrt(math.log(2.0)) / params.kappa
    ok = p_low > 0.0
    threshold = 1.0 - binary_entropy(p_low) if ok else 1.0
    return TransferRecord(
        alpha=alpha,
        width=width,
        p_low=p_low,
        bms_capacity_threshold=threshold,
        block_bound_statement=2.0 / n**2,
        block_bound_proof=1.0 / n + binary_entropy(min(1.0, 1.0 / n**2)),
        proof_simplification_valid=n >= 8,
        p_low_positive=ok,
    )
