"""Multi-look coordinate families, spread (cyclic orbit) subspace codes,
Gaussian binomials, and GL(m,2) sampling.

Index convention: coordinate l of a length-2^m code corresponds to the
binary expansion of l with bit 0 least significant, so a subspace of
F_2^m is a set of coordinate indices containing 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

import numpy as np

from .codes import CoordPermutation
from .errors import ConstructionError, FeasibilityError, ParameterError

# Conway polynomials over F_2 for degrees 1..16, coefficient bitmasks with
# bit i = coefficient of x^i (degree bit included).
CONWAY_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1011011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10001101111,
    11: 0b100000000101,
    12: 0b1000011101011,
    13: 0b10000000011011,
    14: 0b100000010101001,
    15: 0b1000000000110101,
    16: 0b10000000000101101,
}

SPREAD_DEGREE_CAP = 16


def _gf_mul(a: int, b: int, poly: int, degree: int) -> int:
    """Carryless multiply modulo the field polynomial."""
    out = 0
    top = 1 << degree
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return out


def _gf_pow(a: int, e: int, poly: int, degree: int) -> int:
    out = 1
    while e:
        if e & 1:
            out = _gf_mul(out, a, poly, degree)
        a = _gf_mul(a, a, poly, degree)
        e >>= 1
    return out


def _prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_primitive(a: int, poly: int, degree: int) -> bool:
    order = (1 << degree) - 1
    if a == 0:
        return False
    if _gf_pow(a, order, poly, degree) != 1:
        return False
    return all(_gf_pow(a, order // q, poly, degree) != 1 for q in _prime_factors(order))


def gaussian_binomial(m: int, d: int) -> int:
    """Number of d-dimensional subspaces of F_2^m (exact integer)."""
    if m < 0 or d < 0:
        raise ParameterError("gaussian binomial needs nonnegative arguments")
    if m > 64:
        raise ParameterError("gaussian binomial capped at m <= 64")
    if d > m:
        return 0
    num = 1
    den = 1
    for i in range(d):
        num *= (1 << (m - i)) - 1
        den *= (1 << (d - i)) - 1
    assert num % den == 0
    return num // den


def set_dim(vectors: Sequence[int]) -> int:
    """GF(2) rank of a set of bit-vectors (ints or bit sequences)."""
    basis: List[int] = []
    for v in vectors:
        if not isinstance(v, int):
            v = int(sum(int(b) << i for i, b in enumerate(v)))
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


@dataclass(frozen=True)
class LookFamily:
    """Coordinate-index subsets from nested affine subspaces of F_2^m."""

    m: int
    s: int
    t: int
    looks: Tuple[Tuple[int, ...], ...]
    subspace_bases: Tuple[Tuple[int, ...], ...]
    pairwise_overlap: Fraction

    @property
    def common_intersection(self) -> Tuple[int, ...]:
        base = set(self.looks[0])
        for lk in self.looks[1:]:
            base &= set(lk)
        return tuple(sorted(base))


def _span_indices(basis_bits: Sequence[int]) -> Tuple[int, ...]:
    out = [0]
    for b in basis_bits:
        out += [x ^ b for x in out]
    return tuple(sorted(out))


def multi_look_family(m: int, s: int, t: int) -> LookFamily:
    """s looks of size 2^(m-(s-1)t) with pairwise fractional overlap 2^-t.

    Look i is the coordinate set of the subspace with the low m-st bits
    free, block i of t bits free, and everything else pinned to zero.
    """
    if s < 1 or t < 1 or m < 1:
        raise ParameterError("need positive m, s, t")
    if s * t > m:
        raise ParameterError(f"need s*t <= m, got {s}*{t} > {m}")
    free_low = [1 << j for j in range(m - s * t)]
    looks = []
    bases = []
    for i in range(s):
        block = [1 << (m - s * t + t * i + j) for j in range(t)]
        basis = free_low + block
        looks.append(_span_indices(basis))
        bases.append(tuple(basis))
    return LookFamily(
        m=m,
        s=s,
        t=t,
        looks=tuple(looks),
        subspace_bases=tuple(bases),
        pairwise_overlap=Fraction(1, 1 << t),
    )


@dataclass(frozen=True)
class SpreadFamily:
    """Pairwise-trivially-intersecting s-dim subspaces of F_2^(st) whose
    nonzero parts partition the nonzero vectors (a cyclic orbit code)."""

    s: int
    t: int
    field_degree: int
    count: int
    subspaces: Tuple[Tuple[int, ...], ...]
    bases: Tuple[Tuple[int, ...], ...]


def spread_family(s: int, t: int) -> SpreadFamily:
    if s < 1 or t < 1:
        raise ParameterError("need positive s, t")
    st = s * t
    if st > SPREAD_DEGREE_CAP:
        raise FeasibilityError(f"spread construction capped at s*t <= {SPREAD_DEGREE_CAP}")
    poly = CONWAY_POLYS[st]
    order = (1 << st) - 1
    m_count = order // ((1 << s) - 1)
    alpha = None
    for cand in range(2, 1 << st):
        if _is_primitive(cand, poly, st):
            alpha = cand
            break
    if alpha is None:
        raise ConstructionError(f"no primitive element found for degree {st}")
    beta = _gf_pow(alpha, m_count, poly, st)
    subspaces = []
    bases = []
    for i in range(m_count):
        lead = _gf_pow(alpha, i, poly, st)
        elems = {0, lead}
        cur = lead
        for _ in range((1 << s) - 2):
            cur = _gf_mul(cur, beta, poly, st)
            elems.add(cur)
        elems = tuple(sorted(elems))
        if len(elems) != (1 << s):
            raise ConstructionError("orbit subspace has wrong size")
        basis = []
        for v in elems:
            red = v
            for b in basis:
                red = min(red, red ^ b)
            if red:
                basis.append(red)
                basis.sort(reverse=True)
        if len(basis) != s:
            raise ConstructionError("orbit subspace has wrong dimension")
        subspaces.append(elems)
        bases.append(tuple(basis))
    return SpreadFamily(s=s, t=t, field_degree=st, count=m_count, subspaces=tuple(subspaces), bases=tuple(bases))


@dataclass(frozen=True)
class InvertibleMap:
    """An element of GL(m,2) with its induced coordinate permutation."""

    matrix: np.ndarray  # (m, m) 0/1 matrix; column i is the image of e_i
    m: int

    def apply(self, vector: int) -> int:
        """Image of a vector (bitmask) under the linear map."""
        out = 0
        v = vector
        i = 0
        while v:
            if v & 1:
                out ^= self._col(i)
            v >>= 1
            i += 1
        return out

    def _col(self, i: int) -> int:
        return int(sum(int(self.matrix[j, i]) << j for j in range(self.m)))

    @property
    def induced_perm(self) -> CoordPermutation:
        """Permutation on [2^m] sending index l to the index of M theta(l)."""
        images = np.empty(1 << self.m, dtype=np.int64)
        cols = [self._col(i) for i in range(self.m)]
        images[0] = 0
        for l in range(1, 1 << self.m):
            low = l & (-l)
            images[l] = images[l ^ low] ^ cols[low.bit_length() - 1]
        return CoordPermutation(images)

    def shifted_perm(self) -> CoordPermutation:
        """The on-nonzero-indices permutation pi(i) = sigma(i+1) - 1 used to
        turn a 0-fixing code automorphism into a decoding-function symmetry."""
        sigma = self.induced_perm.images
        return CoordPermutation(sigma[1:] - 1)


def rank_gf2(matrix: np.ndarray) -> int:
    rows = [int(sum(int(b) << j for j, b in enumerate(row))) for row in np.asarray(matrix, dtype=np.uint8)]
    return set_dim(rows)


def sample_gl(m: int, rng: np.random.Generator) -> InvertibleMap:
    """Uniform random element of GL(m,2) by rejection sampling."""
    if not (1 <= m <= 24):
        raise ParameterError("sample_gl supports 1 <= m <= 24")
    while True:
        mat = rng.integers(0, 2, size=(m, m), dtype=np.uint8)
        if rank_gf2(mat) == m:
            return InvertibleMap(matrix=mat, m=m)


def all_gl(m: int) -> List[InvertibleMap]:
    """Every element of GL(m,2); feasible for m <= 4."""
    if m > 4:
        raise FeasibilityError("exhaustive GL enumeration capped at m <= 4")
    out = []
    for code_ in range(1 << (m * m)):
        mat = np.array([[(code_ >> (i * m + j)) & 1 for j in range(m)] for i in range(m)], dtype=np.uint8)
        if rank_gf2(mat) == m:
            out.append(InvertibleMap(matrix=mat, m=m))
    return out
