"""Exact extrinsic decoders and metrics over BEC/BSC/BMS channels.

All metrics are computed in the all-zero-codeword frame, which is exact by
the codeword-independence of extrinsic decoding for linear codes on
symmetric channels.  Tie-breaking is fixed everywhere to the
lexicographically-first minimal-weight coset leader; on a posterior tie the
decoded bit is read off the leader-shifted word, which keeps the error
indicator a function of the noise pattern alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .channels import ChannelModel
from .codes import BinaryCode, project
from .errors import FeasibilityError, ParameterError, StructureError

EXACT_OUTCOME_CAP = 1 << 24
BSC_CLASS_CAP = 1 << 22
TABLE_REDUNDANCY_CAP = 24


@dataclass(frozen=True)
class ErasurePattern:
    """Erasure indicator over the code coordinates (1 = erased)."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", np.asarray(self.bits, dtype=np.uint8))

    @classmethod
    def from_mask(cls, mask: int, length: int) -> "ErasurePattern":
        return cls(((mask >> np.arange(length)) & 1).astype(np.uint8))

    @property
    def mask(self) -> int:
        return int(sum(int(b) << i for i, b in enumerate(self.bits)))


# ---------------------------------------------------------------------------
# BEC
# ---------------------------------------------------------------------------


def _generator_columns(code: BinaryCode) -> np.ndarray:
    """Columns of the generator matrix as dim-bit int64 masks."""
    bits = code.generator_bits()
    weights = (1 << np.arange(code.dim, dtype=np.int64))[:, None]
    return (bits.astype(np.int64) * weights).sum(axis=0)


def bec_recoverable(code: BinaryCode, pattern: ErasurePattern, target: int) -> bool:
    """True iff bit `target` is determined by the unerased other positions.

    The target position itself is treated as erased regardless of the
    pattern (extrinsic convention).
    """
    if not (0 <= target < code.length):
        raise ParameterError(f"target {target} out of range")
    if pattern.bits.shape[0] != code.length:
        raise ParameterError("pattern length does not match code length")
    cols = _generator_columns(code)
    basis = []
    for i in range(code.length):
        if i == target or pattern.bits[i]:
            continue
        v = int(cols[i])
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    v = int(cols[target])
    for b in basis:
        v = min(v, v ^ b)
    return v == 0


def _codewords_through_target(code: BinaryCode, target: int) -> list:
    """Masks over the n = N-1 non-target coords of codewords with bit target = 1."""
    rows = code.generator_masks()
    tbit = 1 << target
    hot = [r for r in rows if r & tbit]
    if not hot:
        return []
    w = hot[0]
    sub = [r ^ w if (r & tbit) else r for r in rows if r != w]
    members = [w]
    for g in sub:
        members += [c ^ g for c in members]
    lo_mask = tbit - 1
    return [(c & lo_mask) | ((c >> (target + 1)) << target) for c in members]


def bec_unrec_weight_profile(code: BinaryCode, target: int) -> np.ndarray:
    """U[w] = number of erasure sets of size w (over the n = N-1 non-target
    coords) from which the target bit is not recoverable.

    Unrecoverability from erasure set E is equivalent to E covering the
    off-target support of some codeword through the target, so the profile
    is a subset-closure sweep seeded with those supports.
    """
    n = code.length - 1
    if n > 31:
        raise FeasibilityError(f"exact BEC sweep needs N-1 <= 31, got {n}")
    dual_words = code.parity_check_basis()
    use_dual = dual_words.shape[0] < code.dim
    if use_dual:
        seeds = _codewords_through_target(BinaryCode.from_generators(code.length, dual_words.copy()), target)
    else:
        seeds = _codewords_through_target(code, target)
    nwords = max(1, 1 << max(n - 6, 0))
    bitset = np.zeros(nwords, dtype=np.uint64)
    if seeds:
        arr = np.array(seeds, dtype=np.uint64)
        np.bitwise_or.at(bitset, (arr >> np.uint64(6)).astype(np.int64), np.uint64(1) << (arr & np.uint64(63)))
        _kernels.up_closure(bitset, n)
    prof = _kernels.weight_profile_bits(bitset, n)
    if use_dual:
        # seeds marked recoverable observation sets; complement to erasures
        full = np.array([math.comb(n, w) for w in range(n + 1)], dtype=object)
        rec = prof[::-1].astype(object)
        prof = np.array([int(full[w] - rec[w]) for w in range(n + 1)], dtype=np.int64)
    return prof


def bec_profile_eval(profile: np.ndarray, p) -> float:
    """Evaluate sum_w U[w] p^w (1-p)^(n-w); exact when p is a Fraction."""
    n = len(profile) - 1
    total = 0 * p
    for w, c in enumerate(profile):
        total += int(c) * p**w * (1 - p) ** (n - w)
    return total


def bec_pe_exact(code: BinaryCode, target: int, p) -> float:
    return bec_profile_eval(bec_unrec_weight_profile(code, target), p)


def bec_indicator_table(code: BinaryCode, target: int) -> np.ndarray:
    """The unrecoverability indicator over all 2^(N-1) erasure patterns."""
    n = code.length - 1
    if n > 22:
        raise FeasibilityError("indicator table needs N-1 <= 22")
    seeds = _codewords_through_target(code, target)
    nwords = max(1, 1 << max(n - 6, 0))
    bitset = np.zeros(nwords, dtype=np.uint64)
    if seeds:
        arr = np.array(seeds, dtype=np.uint64)
        np.bitwise_or.at(bitset, (arr >> np.uint64(6)).astype(np.int64), np.uint64(1) << (arr & np.uint64(63)))
        _kernels.up_closure(bitset, n)
    bits = np.unpackbits(bitset.view(np.uint8), bitorder="little")[: 1 << n]
    return bits.astype(np.float64)


# ---------------------------------------------------------------------------
# syndrome tables (block decoding and tie-break leaders)
# ---------------------------------------------------------------------------


def _lex_patterns(n: int, w: int):
    """Weight-w masks over n coords in bit-string lexicographic order,
    reading (b_0, b_1, ..., b_{n-1}) left to right."""
    if w == 0:
        yield 0
        return
    if n < w:
        return
    for m in _lex_patterns(n - 1, w):
        yield m << 1
    for m in _lex_patterns(n - 1, w - 1):
        yield (m << 1) | 1


@dataclass(frozen=True)
class SyndromeTable:
    """Coset leaders of a code: minimal weight, lexicographically first."""

    length: int
    dim: int
    checks: tuple
    leaders: np.ndarray

    def syndrome_of(self, mask: int) -> int:
        s = 0
        for j, h in enumerate(self.checks):
            s |= ((mask & h).bit_count() & 1) << j
        return s

    def leader_of(self, mask: int) -> int:
        return int(self.leaders[self.syndrome_of(mask)])


def build_syndrome_table(code: BinaryCode) -> SyndromeTable:
    redundancy = code.length - code.dim
    if redundancy > TABLE_REDUNDANCY_CAP:
        raise FeasibilityError(f"syndrome table needs N - dim <= {TABLE_REDUNDANCY_CAP}, got {redundancy}")
    if code.length > 63:
        raise FeasibilityError("syndrome table patterns must fit 63 bits")
    dual = code.parity_check_basis()
    checks = tuple(int(np.uint64(dual[i, 0])) for i in range(dual.shape[0]))
    nsyn = 1 << redundancy
    leaders = np.full(nsyn, -1, dtype=np.int64)
    filled = 0
    for w in range(code.length + 1):
        if filled == nsyn:
            break
        for mask in _lex_patterns(code.length, w):
            s = 0
            for j, h in enumerate(checks):
                s |= ((mask & h).bit_count() & 1) << j
            if leaders[s] < 0:
                leaders[s] = mask
                filled += 1
                if filled == nsyn:
                    break
    return SyndromeTable(code.length, code.dim, checks, leaders)


def decode_block(table: SyndromeTable, received_mask: int) -> int:
    """Minimum-distance decoding: strip the coset leader."""
    return received_mask ^ table.leader_of(received_mask)


def iter_leaders(table: SyndromeTable) -> Iterable[int]:
    return (int(m) for m in table.leaders)


def block_error_exact(table: SyndromeTable, p: float) -> float:
    """Block error of syndrome decoding at BSC(p), all-zero frame: the word
    is decoded correctly iff the noise equals its coset leader."""
    n = table.length
    ok = 0.0
    for mask in iter_leaders(table):
        w = mask.bit_count()
        ok += p**w * (1.0 - p) ** (n - w)
    return 1.0 - ok


# ---------------------------------------------------------------------------
# extrinsic BSC structure
# ---------------------------------------------------------------------------


class _ExtrinsicStructure:
    """Coset layout of a code as seen by the extrinsic decoder of one bit.

    P is the projection of the code onto the n = N-1 non-target coords and
    P0 the projection of the subcode whose target bit is 0.  Posterior
    splits are constant on P0-cosets, and the pair structure (z + P0,
    z + w1 + P0) carries everything the exact metrics need.
    """

    def __init__(self, code: BinaryCode, target: int):
        if not (0 <= target < code.length):
            raise ParameterError(f"target {target} out of range")
        self.code = code
        self.target = target
        self.n = code.length - 1
        self.coords = [i for i in range(code.length) if i != target]
        rows = code.generator_masks()
        tbit = 1 << target
        hot = [r for r in rows if r & tbit]
        if not hot:
            self.kind = "novalue"
            return
        if code.contains(tbit):
            self.kind = "uninformative"
            return
        self.kind = "regular"
        w = hot[0]
        sub = [r ^ w if (r & tbit) else r for r in rows if r != w]
        squeeze = lambda c: (c & (tbit - 1)) | ((c >> (target + 1)) << target)
        self.w1 = squeeze(w)
        self.p0_rows = [squeeze(r) for r in sub]
        p0_code = BinaryCode.from_generators(self.n, self.p0_rows) if self.p0_rows else BinaryCode.from_generators(self.n, [])
        p_code = BinaryCode.from_generators(self.n, self.p0_rows + [self.w1])
        self.p0_code = p0_code
        self.p_code = p_code
        ker_p = p_code.parity_check_basis()
        ker_p0 = p0_code.parity_check_basis()
        dual_p = BinaryCode.from_generators(self.n, ker_p.copy()) if ker_p.shape[0] else BinaryCode.from_generators(self.n, [])
        phi = None
        for i in range(ker_p0.shape[0]):
            if not dual_p.contains_words(ker_p0[i]):
                phi = int(np.uint64(ker_p0[i, 0])) if self.n <= 64 else None
                break
        if phi is None:
            raise RuntimeError("internal: separator functional not found")
        self.phi = phi
        self.checks = [phi] + [int(np.uint64(ker_p[i, 0])) for i in range(ker_p.shape[0])]
        self._aug = None

    def p_aug_rows(self):
        """Echelonized (mask, target-bit, pivot) rows for lifting a word of
        the punctured code back to its target bit."""
        if self._aug is None:
            aug = []
            for m, b in [(r, 0) for r in self.p0_rows] + [(self.w1, 1)]:
                v, vb = m, b
                for rm, rb, piv in aug:
                    if (v >> piv) & 1:
                        v ^= rm
                        vb ^= rb
                if v:
                    aug.append((v, vb, v.bit_length() - 1))
                    aug.sort(key=lambda t: -t[2])
            self._aug = aug
        return self._aug

    def class_counts(self) -> np.ndarray:
        """counts[class, weight] over all 2^n patterns; syndrome bit 0 is the
        P-vs-P0 separator so classes 2i and 2i+1 are the halves of a P-coset."""
        if self.n > 24:
            raise FeasibilityError(f"exact BSC sweep needs N-1 <= 24, got {self.n}")
        if (1 << len(self.checks)) > BSC_CLASS_CAP:
            raise FeasibilityError("too many cosets for the exact BSC sweep")
        checks = np.array(self.checks, dtype=np.uint64)
        return _kernels.syndrome_weight_counts(checks, self.n)


def _posterior_sums_bsc(structure: _ExtrinsicStructure, observed_mask: int, p: float):
    """Total BSC likelihood of the two half-cosets around the observation."""
    n = structure.n
    members = [0]
    for g in structure.p0_rows:
        members += [c ^ g for c in members]
    s0 = 0.0
    s1 = 0.0
    for c in members:
        d0 = (observed_mask ^ c).bit_count()
        s0 += p**d0 * (1.0 - p) ** (n - d0)
        d1 = (observed_mask ^ c ^ structure.w1).bit_count()
        s1 += p**d1 * (1.0 - p) ** (n - d1)
    return s0, s1


def bsc_extrinsic_bitmap(
    code: BinaryCode,
    table: Optional[SyndromeTable],
    received,
    target: int,
    p: float = 0.25,
) -> int:
    """Extrinsic bit-MAP estimate of the target bit from the other N-1 bits.

    `received` holds the observed bits in coordinate order with the target
    position skipped.  `table` is the syndrome table of the punctured code
    (built on the fly when None) and is consulted only to break posterior
    ties via the leader-shifted word, which makes the error event a
    function of the noise pattern alone.
    """
    if not (0.0 <= p < 0.5):
        raise ParameterError("bit-MAP decoding needs p in [0, 1/2)")
    st = _ExtrinsicStructure(code, target)
    if st.kind == "novalue":
        return 0
    if st.kind == "uninformative":
        return 0
    bits = np.asarray(received, dtype=np.uint8).ravel()
    if bits.shape[0] != st.n:
        raise ParameterError(f"received must have {st.n} bits")
    mask = int(sum(int(b) << i for i, b in enumerate(bits)))
    s0, s1 = _posterior_sums_bsc(st, mask, p)
    if s0 > s1:
        return 0
    if s1 > s0:
        return 1
    if table is None:
        table = build_syndrome_table(st.p_code)
    shifted = mask ^ table.leader_of(mask)
    return _target_bit_of_projection(st, shifted)


def _target_bit_of_projection(structure: _ExtrinsicStructure, proj_mask: int) -> int:
    """The target bit of the unique codeword whose off-target part is proj_mask."""
    v = proj_mask
    bit = 0
    for row_mask, row_bit, pivot in structure.p_aug_rows():
        if (v >> pivot) & 1:
            v ^= row_mask
            bit ^= row_bit
    if v:
        raise ParameterError("word is not in the punctured code")
    return bit


def bsc_error_indicator(code: BinaryCode, target: int, noise_mask: int, p: float) -> int:
    """Whether the extrinsic bit-MAP decoder errs on this noise pattern
    (all-zero frame); deterministic in the pattern by the leader tie-break."""
    st = _ExtrinsicStructure(code, target)
    if st.kind != "regular":
        raise ParameterError("error indicator needs a regular target bit")
    bits = ((noise_mask >> np.arange(st.n)) & 1).astype(np.uint8)
    return bsc_extrinsic_bitmap(code, None, bits, target, p)


# ---------------------------------------------------------------------------
# conditional mean (generic BMS)
# ---------------------------------------------------------------------------


def _half_codeword_bits(code: BinaryCode, target: int):
    """Codeword bit matrices over the non-target coords, split by target bit."""
    if code.dim > 22:
        raise FeasibilityError("codeword enumeration needs dim <= 22")
    cw = code.codeword_bits()
    coords = [i for i in range(code.length) if i != target]
    tcol = cw[:, target].astype(bool)
    ext = cw[:, coords]
    return ext[~tcol], ext[tcol]


def bms_conditional_mean(code: BinaryCode, ch: ChannelModel, observation, target: int) -> float:
    """E[X_target | Y_others = observation] for BPSK transmission over ch."""
    obs = np.asarray(observation, dtype=np.float64).ravel()
    n = code.length - 1
    if obs.shape[0] != n:
        raise ParameterError(f"observation must have {n} symbols")
    a = np.array([ch.prob_of(v) for v in obs])
    b = np.array([ch.prob_of(-v) for v in obs])
    u0, u1 = _half_codeword_bits(code, target)
    s0 = float(np.prod(np.where(u0.astype(bool), b, a), axis=1).sum())
    s1 = float(np.prod(np.where(u1.astype(bool), b, a), axis=1).sum()) if u1.size else 0.0
    total = s0 + s1
    if total <= 0.0:
        raise ParameterError("observation has zero likelihood under the channel")
    return (s0 - s1) / total


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtrinsicMetrics:
    """Exact or Monte Carlo extrinsic performance of one code bit."""

    pe: Optional[float]
    pb: float
    ber: float
    mmse: float
    cond_entropy: float
    e_g: float
    e_g2: float
    mode: str
    samples: Optional[int] = None
    ci99: Optional[dict] = None


def _entropy_vec(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    inside = (x > 0.0) & (x < 1.0)
    xi = x[inside]
    out[inside] = -(xi * np.log2(xi) + (1.0 - xi) * np.log2(1.0 - xi))
    return out


def _metrics_from_pair_masses(l0: np.ndarray, l1: np.ndarray) -> dict:
    tot = l0 + l1
    good = tot > 0.0
    l0, l1, tot = l0[good], l1[good], tot[good]
    ber = float(np.minimum(l0, l1).sum())
    eg2 = float(((l0 - l1) ** 2 / tot).sum())
    ent = float((tot * _entropy_vec(l1 / tot)).sum())
    return {"ber": ber, "pb": ber, "mmse": 1.0 - eg2, "cond_entropy": ent, "e_g": eg2, "e_g2": eg2}


def _exact_metrics_bec(code: BinaryCode, target: int, p: float) -> ExtrinsicMetrics:
    pe = float(bec_profile_eval(bec_unrec_weight_profile(code, target), p))
    return ExtrinsicMetrics(
        pe=pe, pb=pe / 2.0, ber=pe / 2.0, mmse=pe, cond_entropy=pe,
        e_g=1.0 - pe, e_g2=1.0 - pe, mode="exact",
    )


def _exact_metrics_bsc(code: BinaryCode, target: int, p: float) -> ExtrinsicMetrics:
    st = _ExtrinsicStructure(code, target)
    if st.kind == "novalue":
        return ExtrinsicMetrics(None, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, "exact")
    if st.kind == "uninformative":
        return ExtrinsicMetrics(None, 0.5, 0.5, 1.0, 1.0, 0.0, 0.0, "exact")
    counts = st.class_counts()
    n = st.n
    w = np.arange(n + 1, dtype=np.float64)
    logpw = w * math.log(p) + (n - w) * math.log1p(-p) if 0.0 < p < 1.0 else None
    if logpw is None:
        pw = np.where(w == 0, 1.0, 0.0) if p == 0.0 else np.where(w == n, 1.0, 0.0)
    else:
        pw = np.exp(logpw)
    masses = counts.astype(np.float64) @ pw
    l0 = masses[0::2]
    l1 = masses[1::2]
    vals = _metrics_from_pair_masses(l0, l1)
    return ExtrinsicMetrics(pe=None, mode="exact", samples=None, ci99=None, **vals)


def _exact_metrics_bms(code: BinaryCode, ch: ChannelModel, target: int) -> ExtrinsicMetrics:
    acc = {"ber": 0.0, "eg": 0.0, "eg2": 0.0, "ent": 0.0, "pb": 0.0}
    for mu, s0, s1 in bms_posterior_sweep(code, ch, target):
        tot = s0 + s1
        good = tot > 0.0
        mu, s0, s1, tot = mu[good], s0[good], s1[good], tot[good]
        g = (s0 - s1) / tot
        acc["ber"] += float((mu * np.minimum(s0, s1) / tot).sum())
        acc["eg"] += float((mu * g).sum())
        acc["eg2"] += float((mu * g * g).sum())
        acc["ent"] += float((mu * _entropy_vec(s1 / tot)).sum())
        acc["pb"] += float((mu * ((s1 > s0) + 0.5 * (s1 == s0))).sum())
    return ExtrinsicMetrics(
        pe=None, pb=acc["pb"], ber=acc["ber"], mmse=1.0 - acc["eg2"],
        cond_entropy=acc["ent"], e_g=acc["eg"], e_g2=acc["eg2"], mode="exact",
    )


def bms_posterior_sweep(code: BinaryCode, ch: ChannelModel, target: int, batch_exp: int = 16):
    """Yield (pattern probability, likelihood of X_t=0, of X_t=1) over all
    noise tuples of the channel's support alphabet, in batches."""
    n = code.length - 1
    probs = np.array(ch.probs)
    values = np.array(ch.values)
    supp = np.flatnonzero(probs > 0.0)
    q = supp.size
    if q**n > EXACT_OUTCOME_CAP:
        raise FeasibilityError(f"{q}^{n} noise tuples exceed the exact budget")
    flip = np.array([int(np.flatnonzero(values == -values[i])[0]) for i in range(values.size)])
    u0, u1 = _half_codeword_bits(code, target)
    u0 = u0.astype(bool)
    u1 = u1.astype(bool)
    # split coords into a python-level prefix and a vectorized suffix
    suffix = 0
    while suffix < n and q ** (suffix + 1) <= (1 << batch_exp):
        suffix += 1
    prefix = n - suffix
    tail = np.array(np.meshgrid(*([supp] * suffix), indexing="ij")).reshape(suffix, -1).T if suffix else np.zeros((1, 0), dtype=np.int64)

    def batches(prefix_idx):
        head = np.array(prefix_idx, dtype=np.int64)
        full = np.hstack([np.broadcast_to(head, (tail.shape[0], prefix)), tail]) if prefix else tail
        mu = probs[full].prod(axis=1) if n else np.ones(1)
        a = probs[full]
        b = probs[flip[full]]
        s0 = np.zeros(full.shape[0])
        s1 = np.zeros(full.shape[0])
        for row in u0:
            s0 += np.where(row, b, a).prod(axis=1)
        for row in u1:
            s1 += np.where(row, b, a).prod(axis=1)
        return mu, s0, s1

    if prefix == 0:
        yield batches(())
    else:
        for head in np.ndindex(*([q] * prefix)):
            yield batches(tuple(int(supp[i]) for i in head))


def extrinsic_metrics(
    code: BinaryCode,
    ch: ChannelModel,
    target: int = 0,
    mode: str = "exact",
    samples: int = 0,
    seed: int = 0,
    workers: int = 1,
) -> ExtrinsicMetrics:
    """Exact enumeration or Monte Carlo estimate of the extrinsic metrics."""
    if not (0 <= target < code.length):
        raise ParameterError(f"target {target} out of range")
    if mode == "exact":
        if ch.kind == "bec":
            if code.length - 1 > 31:
                raise FeasibilityError("exact BEC metrics need N-1 <= 31")
            return _exact_metrics_bec(code, target, ch.p)
        if ch.kind == "bsc":
            if ch.p >= 0.5:
                raise ParameterError("BSC metrics need p < 1/2")
            return _exact_metrics_bsc(code, target, ch.p)
        return _exact_metrics_bms(code, ch, target)
    if mode == "mc":
        from .harness import mc_extrinsic_metrics

        return mc_extrinsic_metrics(code, ch, target, samples, seed, workers)
    raise ParameterError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# majority combiner
# ---------------------------------------------------------------------------


def majority3(b1: int, b2: int, b3: int) -> int:
    return 1 if (int(b1) + int(b2) + int(b3)) >= 2 else 0


def majority_union_table():
    """All 8 rows of (a, b, c, Majority, ab+ac+bc); the union bound holds
    pointwise."""
    rows = []
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                rows.append((a, b, c, majority3(a, b, c), a * b + a * c + b * c))
    return rows


def multi_look_decode(code: BinaryCode, looks, ch: ChannelModel, observation, target: int = 0) -> int:
    """Majority vote of per-look extrinsic decoders over three nested looks."""
    if len(looks.looks) != 3:
        raise StructureError("majority decoding needs exactly 3 looks")
    obs = np.asarray(observation, dtype=np.float64).ravel()
    if obs.shape[0] != code.length:
        raise ParameterError("observation must cover all code coordinates")
    projected = []
    for look in looks.looks:
        coords = sorted(int(i) for i in look)
        if target not in coords:
            raise StructureError("every look must contain the target coordinate")
        projected.append((coords, project(code, coords)))
    base = projected[0][1]
    for coords, sub in projected[1:]:
        if not (sub.length == base.length and sub == base):
            raise StructureError("the three look projections are not equal codes")
    votes = []
    for coords, sub in projected:
        sub_target = coords.index(target)
        sub_obs = np.array([obs[i] for i in coords if i != target])
        if ch.kind == "bsc":
            bits = (sub_obs < 0).astype(np.uint8)
            votes.append(bsc_extrinsic_bitmap(sub, None, bits, sub_target, ch.p))
        else:
            g = bms_conditional_mean(sub, ch, sub_obs, sub_target)
            votes.append(0 if g >= 0.0 else 1)
    return majority3(*votes)


def bsc_decision_table(code: BinaryCode, target: int, p: float) -> np.ndarray:
    """Decoded target bit for every observation mask over the other N-1
    coords (small codes only); leader tie-break baked in."""
    st = _ExtrinsicStructure(code, target)
    if st.kind != "regular":
        raise ParameterError("decision table needs a regular target bit")
    if st.n > 20:
        raise FeasibilityError("decision table needs N-1 <= 20")
    table = build_syndrome_table(st.p_code)
    out = np.zeros(1 << st.n, dtype=np.uint8)
    for mask in range(1 << st.n):
        s0, s1 = _posterior_sums_bsc(st, mask, p)
        if s1 > s0:
            out[mask] = 1
        elif s1 == s0:
            out[mask] = _target_bit_of_projection(st, mask ^ table.leader_of(mask))
    return out
