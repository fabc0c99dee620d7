"""BEC/BSC/discrete-BMS channel models via the multiplicative-noise view.

Every channel is represented by the law of the noise symbol Z with Y = X*Z,
inputs in {+1,-1}; a symbol value of 0 is an erasure.  The stored symbol
alphabet is closed under negation so transition probabilities are defined
over a sign-symmetric output alphabet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ParameterError, SymmetryError

_PROB_TOL = 1e-12


def binary_entropy(p: float) -> float:
    """h(p) in bits, with h(0) = h(1) = 0 by continuity."""
    if p < 0.0 or p > 1.0:
        raise ParameterError(f"entropy argument {p} outside [0,1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log(p) + (1.0 - p) * math.log(1.0 - p)) / math.log(2.0)


@dataclass(frozen=True)
class ChannelModel:
    """kind is 'bec', 'bsc' or 'bms'; symbols hold the law of Z."""

    kind: str
    p: float | None
    values: Tuple[float, ...]
    probs: Tuple[float, ...]
    capacity: float

    @property
    def symbols(self):
        return list(zip(self.values, self.probs))

    def prob_of(self, value: float) -> float:
        for v, q in zip(self.values, self.probs):
            if v == value:
                return q
        return 0.0

    def alphabet_size(self) -> int:
        return len(self.values)

    def __repr__(self):
        if self.kind in ("bec", "bsc"):
            return f"ChannelModel({self.kind} {self.p})"
        return f"ChannelModel(bms {len(self.values)} symbols)"


def _capacity_from_symbols(values, probs) -> float:
    """I(X;Y) with uniform X, by direct summation: H(Y) - H(Z), in bits."""
    py = {}
    for v, q in zip(values, probs):
        py[v] = py.get(v, 0.0) + 0.5 * q
        py[-v] = py.get(-v, 0.0) + 0.5 * q
    h_y = -sum(q * math.log2(q) for q in py.values() if q > 0.0)
    h_z = -sum(q * math.log2(q) for q in probs if q > 0.0)
    return h_y - h_z


def _normalize_symbols(pairs, check_closure: bool):
    merged = {}
    for v, q in pairs:
        v = float(v)
        q = float(q)
        if not math.isfinite(v) or not math.isfinite(q):
            raise ParameterError("symbol values and probabilities must be finite")
        if q < -_PROB_TOL:
            raise ParameterError(f"negative symbol probability {q}")
        if v == 0.0:
            v = 0.0  # fold -0.0
        merged[v] = merged.get(v, 0.0) + max(q, 0.0)
    total = sum(merged.values())
    if abs(total - 1.0) > _PROB_TOL:
        raise ParameterError(f"symbol probabilities sum to {total}, not 1")
    if check_closure:
        missing = [v for v in merged if -v not in merged]
        if missing:
            raise SymmetryError(f"symbol list not closed under negation: missing {[-v for v in missing]}")
    for v in list(merged):
        if -v not in merged:
            merged[-v] = 0.0
    values = tuple(sorted(merged))
    probs = tuple(merged[v] for v in values)
    return values, probs


def bec(p: float) -> ChannelModel:
    if not (0.0 <= p <= 1.0):
        raise ParameterError(f"erasure rate {p} outside [0,1]")
    values, probs = _normalize_symbols([(1.0, 1.0 - p), (0.0, p)], check_closure=False)
    return ChannelModel("bec", p, values, probs, 1.0 - p)


def bsc(p: float) -> ChannelModel:
    if not (0.0 <= p <= 1.0):
        raise ParameterError(f"crossover rate {p} outside [0,1]")
    values, probs = _normalize_symbols([(1.0, 1.0 - p), (-1.0, p)], check_closure=False)
    return ChannelModel("bsc", p, values, probs, 1.0 - binary_entropy(p))


def discrete_bms(pairs: Sequence[Tuple[float, float]]) -> ChannelModel:
    """A finite BMS channel from the law of Z; the value list must be
    closed under negation (pass both +v and -v, 0 is self-negated)."""
    values, probs = _normalize_symbols(pairs, check_closure=True)
    return ChannelModel("bms", None, values, probs, _capacity_from_symbols(values, probs))


def make_channel(spec: str) -> ChannelModel:
    """Parse 'bec p', 'bsc p', or 'bms z1:q1,z2:q2,...'."""
    parts = spec.strip().split(None, 1)
    if not parts:
        raise ParameterError("empty channel spec")
    kind = parts[0].lower()
    if kind in ("bec", "bsc"):
        if len(parts) != 2:
            raise ParameterError(f"channel spec '{spec}' is missing the parameter p")
        try:
            p = float(parts[1])
        except ValueError as exc:
            raise ParameterError(f"bad channel parameter {parts[1]!r}") from exc
        return bec(p) if kind == "bec" else bsc(p)
    if kind == "bms":
        if len(parts) != 2:
            raise ParameterError("bms spec needs a symbol list z1:q1,z2:q2,...")
        pairs = []
        for item in parts[1].split(","):
            try:
                v, q = item.split(":")
                pairs.append((float(v), float(q)))
            except ValueError as exc:
                raise ParameterError(f"bad bms symbol entry {item!r}") from exc
        return discrete_bms(pairs)
    raise ParameterError(f"unknown channel kind {kind!r}")


def erasure_cascade(ch: ChannelModel, t: float) -> ChannelModel:
    """Cascade with an erasure channel: Z(t) = Z w.p. 1-t, else the erasure 0."""
    if not (0.0 <= t <= 1.0):
        raise ParameterError(f"cascade erasure rate {t} outside [0,1]")
    pairs = [(v, (1.0 - t) * q) for v, q in zip(ch.values, ch.probs)]
    pairs.append((0.0, t))
    values, probs = _normalize_symbols(pairs, check_closure=False)
    return ChannelModel("bms", None, values, probs, _capacity_from_symbols(values, probs))


def sample_noise(ch: ChannelModel, rng: np.random.Generator, size=None) -> np.ndarray:
    """Draw Z from the channel's symbol law; callers form Y_i = X_i * Z_i."""
    values = np.array(ch.values)
    probs = np.array(ch.probs)
    if size is None:
        return float(rng.choice(values, p=probs))
    return rng.choice(values, p=probs, size=size)
