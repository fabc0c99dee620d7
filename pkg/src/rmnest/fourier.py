"""Fourier analysis on the p-biased hypercube {0,1}^n.

The measure is mu(x) = p^|x| (1-p)^(n-|x|) and the orthonormal product
basis is u_S = prod_{i in S} r_i with r_i(0) = sqrt(p/(1-p)) and
r_i(1) = -sqrt((1-p)/p).  Subsets are n-bit masks; the transform is an
n-stage butterfly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import FeasibilityError, ParameterError, StructureError
from .subspaces import all_gl

TRANSFORM_ARITY_CAP = 24


@dataclass(frozen=True)
class BooleanFn:
    """A real-valued table over {0,1}^n with an i.i.d. bias p = Pr(X_i = 1)."""

    n: int
    values: np.ndarray
    bias: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (1 << self.n,):
            raise ParameterError(f"table must have 2^{self.n} entries")
        if not (0.0 < self.bias < 1.0):
            raise ParameterError("bias must be strictly inside (0,1)")
        object.__setattr__(self, "values", vals)
        vals.setflags(write=False)

    def mean(self) -> float:
        """E_mu[f], by direct weighting."""
        return float((pattern_measure(self.n, self.bias) * self.values).sum())

    def is_indicator(self) -> bool:
        return bool(np.all((self.values == 0.0) | (self.values == 1.0)))


def pattern_weights(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int64)


def pattern_measure(n: int, p: float) -> np.ndarray:
    w = pattern_weights(n)
    return np.exp(w * math.log(p) + (n - w) * math.log1p(-p))


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients indexed by subset mask."""

    n: int
    coeffs: np.ndarray
    bias: float

    def level_masses(self) -> np.ndarray:
        w = pattern_weights(self.n)
        out = np.zeros(self.n + 1)
        np.add.at(out, w, self.coeffs**2)
        return out

    def variance(self) -> float:
        return float((self.coeffs[1:] ** 2).sum())

    def total_mass(self) -> float:
        return float((self.coeffs**2).sum())


def biased_transform(f: BooleanFn) -> Spectrum:
    """coeffs(S) = <f, u_S>_mu by the tensor butterfly (cost n 2^n)."""
    if f.n > TRANSFORM_ARITY_CAP:
        raise FeasibilityError(f"transform arity capped at {TRANSFORM_ARITY_CAP}")
    coeffs = _kernels.butterfly(np.ascontiguousarray(f.values, dtype=np.float64), f.bias)
    return Spectrum(n=f.n, coeffs=coeffs, bias=f.bias)


def inverse_transform(s: Spectrum) -> BooleanFn:
    vals = _kernels.inverse_butterfly(np.ascontiguousarray(s.coeffs, dtype=np.float64), s.bias)
    return BooleanFn(n=s.n, values=vals, bias=s.bias)


def restrict_spectrum(f: BooleanFn, subset) -> Spectrum:
    """Spectrum of the conditional-expectation restriction f_A: the
    coefficients with S not contained in A are zeroed."""
    a_mask = _as_mask(subset, f.n)
    s = biased_transform(f)
    masks = np.arange(1 << f.n, dtype=np.int64)
    keep = (masks & ~a_mask) == 0
    coeffs = np.where(keep, s.coeffs, 0.0)
    return Spectrum(n=f.n, coeffs=coeffs, bias=f.bias)


def _as_mask(subset, n: int) -> int:
    if isinstance(subset, (int, np.integer)):
        mask = int(subset)
    else:
        mask = 0
        for i in subset:
            mask |= 1 << int(i)
    if mask >> n:
        raise ParameterError("subset contains an index outside [n]")
    return mask


@dataclass(frozen=True)
class LevelProfile:
    level_mass: np.ndarray
    variance: float
    mean_sq: float

    def noise_mass(self, rho: float) -> float:
        """sum_S coeffs(S)^2 rho^|S|, the squared 2-norm after noise."""
        if not (0.0 <= rho <= 1.0):
            raise ParameterError("noise parameter must lie in [0,1]")
        k = np.arange(self.level_mass.shape[0], dtype=np.float64)
        return float((self.level_mass * rho**k).sum())


def level_profile(s: Spectrum) -> LevelProfile:
    lm = s.level_masses()
    return LevelProfile(level_mass=lm, variance=float(lm[1:].sum()), mean_sq=float(lm.sum()))


# ---------------------------------------------------------------------------
# symmetry groups
# ---------------------------------------------------------------------------


@dataclass
class GroupSampler:
    """A distribution over Sym(f): either an explicit permutation list or a
    callable producing random group elements."""

    n: int
    perms: Optional[np.ndarray] = None
    sampler: Optional[Callable[[np.random.Generator], np.ndarray]] = None

    @classmethod
    def exhaustive(cls, perms) -> "GroupSampler":
        arr = np.asarray(perms, dtype=np.int64)
        return cls(n=arr.shape[1], perms=arr)

    @classmethod
    def sampled(cls, n: int, fn) -> "GroupSampler":
        return cls(n=n, sampler=fn)

    @property
    def is_exhaustive(self) -> bool:
        return self.perms is not None

    def draw(self, rng: np.random.Generator) -> np.ndarray:
        if self.perms is not None:
            return self.perms[rng.integers(self.perms.shape[0])]
        return self.sampler(rng)

    def verify_symmetry(self, f: BooleanFn, rng: np.random.Generator, checks: int = 100):
        """Spot-check f(pi x) = f(x) on random inputs for random elements."""
        for _ in range(checks):
            pi = self.draw(rng)
            x = int(rng.integers(1 << f.n))
            px = permute_mask(x, pi)
            if f.values[px] != f.values[x]:
                raise StructureError("group element is not a symmetry of f")


def permute_mask(mask: int, images: np.ndarray) -> int:
    """Relocate bit j of the mask to position images[j]."""
    out = 0
    j = 0
    m = mask
    while m:
        if m & 1:
            out |= 1 << int(images[j])
        m >>= 1
        j += 1
    return out


def symmetric_group(n: int) -> GroupSampler:
    if n > 8:
        raise FeasibilityError("exhaustive symmetric group capped at n <= 8")
    return GroupSampler.exhaustive(np.array(list(permutations(range(n))), dtype=np.int64))


def gl_shifted_group(m: int) -> GroupSampler:
    """All GL(m,2) elements acting on the n = 2^m - 1 nonzero indices via
    i <-> expansion of i+1 (the shifted extrinsic convention)."""
    maps = all_gl(m)
    perms = np.stack([mp.shifted_perm().images for mp in maps])
    return GroupSampler.exhaustive(perms)


def permuted_table(f: BooleanFn, images: np.ndarray) -> np.ndarray:
    """Table of x -> f(pi x)."""
    idx = np.empty(1 << f.n, dtype=np.int64)
    for x in range(1 << f.n):
        idx[x] = permute_mask(x, images)
    return f.values[idx]


# ---------------------------------------------------------------------------
# orbit probabilities and the restriction identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitProb:
    value: float
    exact: bool
    ci99: Optional[float] = None


def orbit_restriction_prob(
    g: GroupSampler,
    subset,
    inside,
    samples: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> OrbitProb:
    """Pr(Pi(S) is a subset of A) under the group distribution."""
    s_mask = _as_mask(subset, g.n)
    a_mask = _as_mask(inside, g.n)
    if s_mask == 0:
        raise ParameterError("S must be nonempty")
    if g.is_exhaustive:
        hits = sum(1 for pi in g.perms if permute_mask(s_mask, pi) & ~a_mask == 0)
        return OrbitProb(value=hits / g.perms.shape[0], exact=True)
    if not samples or rng is None:
        raise ParameterError("sampled mode needs a sample count and rng")
    hits = 0
    for _ in range(samples):
        pi = g.draw(rng)
        if permute_mask(s_mask, pi) & ~a_mask == 0:
            hits += 1
    est = hits / samples
    half = 2.576 * math.sqrt(max(est * (1.0 - est), 1e-300) / samples)
    return OrbitProb(value=est, exact=False, ci99=half)


def _subset_probabilities(g: GroupSampler, a_mask: int) -> np.ndarray:
    """Pr(Pi(S) subset of A) for every mask S, exhaustive groups only."""
    if not g.is_exhaustive:
        raise ParameterError("exact per-subset probabilities need an exhaustive group")
    n = g.n
    counts = np.zeros(1 << n, dtype=np.int64)
    for pi in g.perms:
        inv = np.empty(n, dtype=np.int64)
        inv[pi] = np.arange(n)
        b = permute_mask(a_mask, inv)  # pi^-1(A); Pi(S) in A iff S in B
        sub = b
        while True:
            counts[sub] += 1
            if sub == 0:
                break
            sub = (sub - 1) & b
    return counts / g.perms.shape[0]


@dataclass(frozen=True)
class RestrictionIdentityReport:
    levels: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    variance_lhs: float
    variance_rhs: float
    max_abs_diff: float
    passed: bool
    exact: bool
    rhs_ci99: Optional[np.ndarray] = None


def restriction_identity_check(
    f: BooleanFn,
    g: GroupSampler,
    subset,
    tol: float = 1e-9,
    samples: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> RestrictionIdentityReport:
    """Level-by-level check that the restricted spectrum mass equals the
    symmetry-weighted spectrum mass.  Exhaustive groups are checked as hard
    equalities; sampled groups only report CI consistency."""
    a_mask = _as_mask(subset, f.n)
    g.verify_symmetry(f, rng or np.random.default_rng(0), checks=50)
    spec = biased_transform(f)
    restricted = restrict_spectrum(f, a_mask)
    lhs = level_profile(restricted).level_mass
    weights = pattern_weights(f.n)
    if g.is_exhaustive:
        probs = _subset_probabilities(g, a_mask)
        rhs = np.zeros(f.n + 1)
        np.add.at(rhs, weights, spec.coeffs**2 * probs)
        diff = float(np.abs(lhs - rhs).max())
        return RestrictionIdentityReport(
            levels=np.arange(f.n + 1), lhs=lhs, rhs=rhs,
            variance_lhs=float(lhs[1:].sum()), variance_rhs=float(rhs[1:].sum()),
            max_abs_diff=diff, passed=diff <= tol, exact=True,
        )
    if not samples or rng is None:
        raise ParameterError("sampled mode needs a sample count and rng")
    draws = np.zeros((samples, f.n + 1))
    coeff_sq = spec.coeffs**2
    for it in range(samples):
        pi = g.draw(rng)
        inv = np.empty(f.n, dtype=np.int64)
        inv[pi] = np.arange(f.n)
        b = permute_mask(a_mask, inv)
        sub = b
        while True:
            draws[it, weights[sub]] += coeff_sq[sub]
            if sub == 0:
                break
            sub = (sub - 1) & b
    rhs = draws.mean(axis=0)
    half = 2.576 * draws.std(axis=0, ddof=1) / math.sqrt(samples)
    diff = float(np.abs(lhs - rhs).max())
    passed = bool(np.all(np.abs(lhs - rhs) <= half + tol))
    return RestrictionIdentityReport(
        levels=np.arange(f.n + 1), lhs=lhs, rhs=rhs,
        variance_lhs=float(lhs[1:].sum()), variance_rhs=float(rhs[1:].sum()),
        max_abs_diff=diff, passed=passed, exact=False, rhs_ci99=half,
    )


# ---------------------------------------------------------------------------
# level-k inequality and hypercontractive noise bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelKReport:
    alpha: float
    lam: float
    threshold: float
    low_mass: float
    bound: float
    passed: bool
    degenerate: bool
    epsilon_grid: tuple


def level_k_check(f: BooleanFn, epsilons: Sequence[float] = ()) -> LevelKReport:
    """Check that the Fourier mass at levels up to (1/8) ln(alpha)/ln(lambda)
    is at most alpha^(7/6); optionally report the general-epsilon form."""
    if not f.is_indicator():
        raise ParameterError("the level-k inequality applies to 0/1 indicators")
    alpha = f.mean()
    lam = min(f.bias, 1.0 - f.bias)
    if alpha <= 0.0 or alpha >= 1.0:
        return LevelKReport(alpha, lam, 0.0, alpha**2, max(alpha ** (7.0 / 6.0), 0.0), True, True, ())
    lm = level_profile(biased_transform(f)).level_mass
    thr = (1.0 / 8.0) * math.log(alpha) / math.log(lam)
    low = float(lm[: int(math.floor(thr)) + 1].sum())
    bound = alpha ** (7.0 / 6.0)
    grid = []
    for eps in epsilons:
        t_eps = (1.0 - eps) * math.log(alpha) / math.log(lam)
        mass = float(lm[: int(math.floor(t_eps)) + 1].sum())
        b_eps = alpha ** (2.0 * eps / (1.0 + lam))
        grid.append((float(eps), t_eps, mass, b_eps, mass <= b_eps + 1e-12))
    return LevelKReport(
        alpha=alpha, lam=lam, threshold=thr, low_mass=low, bound=bound,
        passed=low <= bound + 1e-12, degenerate=False, epsilon_grid=tuple(grid),
    )


@dataclass(frozen=True)
class NoiseBoundReport:
    alpha: float
    q: float
    rho: float
    noise_mass: float
    bound: float
    passed: bool


def noise_operator_check(f: BooleanFn) -> NoiseBoundReport:
    """Hypercontractive bound sum_S f^(S)^2 rho^|S| <= alpha^(2-2/q) at
    q = 1 + 1/lambda, rho = lambda^(1-2/q)/(q-1), for indicators."""
    if not f.is_indicator():
        raise ParameterError("the noise bound applies to 0/1 indicators")
    alpha = f.mean()
    lam = min(f.bias, 1.0 - f.bias)
    q = 1.0 + 1.0 / lam
    rho = (1.0 / (q - 1.0)) * lam ** (1.0 - 2.0 / q)
    prof = level_profile(biased_transform(f))
    nm = prof.noise_mass(rho)
    bound = alpha ** (2.0 - 2.0 / q)
    return NoiseBoundReport(alpha=alpha, q=q, rho=rho, noise_mass=nm, bound=bound, passed=nm <= bound + 1e-12)
