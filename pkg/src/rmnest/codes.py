"""Binary linear codes: Reed-Muller construction, projection, equality, distance.

Generators are stored bit-packed in uint64 words and canonicalized to
reduced row echelon form on construction, so equality of row spaces is a
plain array comparison and all downstream enumeration starts from an
independent generator set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import FeasibilityError, ParameterError

ENUM_DIM_CAP = 24
RM_M_CAP = 24


def _nwords(n: int) -> int:
    return max(1, (n + 63) >> 6)


def bits_to_words(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, n) 0/1 matrix into (rows, ceil(n/64)) uint64 words."""
    bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    rows, n = bits.shape
    nbytes = _nwords(n) * 8
    packed = np.packbits(bits, axis=1, bitorder="little")
    if packed.shape[1] < nbytes:
        packed = np.pad(packed, ((0, 0), (0, nbytes - packed.shape[1])))
    return packed.view(np.uint64)


def words_to_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Unpack (rows, W) uint64 words into a (rows, n) 0/1 uint8 matrix."""
    words = np.atleast_2d(np.asarray(words, dtype=np.uint64))
    return np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")[:, :n]


def words_to_int(words: np.ndarray) -> int:
    out = 0
    for j, w in enumerate(np.asarray(words, dtype=np.uint64).ravel()):
        out |= int(w) << (64 * j)
    return out


def int_to_words(mask: int, n: int) -> np.ndarray:
    w = _nwords(n)
    out = np.zeros(w, dtype=np.uint64)
    for j in range(w):
        out[j] = (mask >> (64 * j)) & 0xFFFFFFFFFFFFFFFF
    return out


@dataclass(frozen=True)
class RmParams:
    """Order r and variable count m of a Reed-Muller code; length is 2^m."""

    r: int
    m: int

    def __post_init__(self):
        if not (0 <= self.r <= self.m):
            raise ParameterError(f"need 0 <= r <= m, got r={self.r}, m={self.m}")

    @property
    def length(self) -> int:
        return 1 << self.m


@dataclass(frozen=True)
class CoordPermutation:
    """A bijection on [N]; (pi x)_i = x_{pi^-1(i)}."""

    images: np.ndarray

    def __post_init__(self):
        images = np.asarray(self.images, dtype=np.int64)
        object.__setattr__(self, "images", images)
        n = images.shape[0]
        if not np.array_equal(np.sort(images), np.arange(n)):
            raise ParameterError("images is not a permutation")

    def __len__(self) -> int:
        return self.images.shape[0]

    @classmethod
    def identity(cls, n: int) -> "CoordPermutation":
        return cls(np.arange(n, dtype=np.int64))

    def inverse(self) -> "CoordPermutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(self), dtype=np.int64)
        return CoordPermutation(inv)

    def apply_to_vector(self, bits: np.ndarray) -> np.ndarray:
        out = np.empty_like(bits)
        out[self.images] = bits
        return out


class BinaryCode:
    """A binary linear code held as a canonical (RREF) generator matrix."""

    __slots__ = ("length", "words", "dim", "pivots")

    def __init__(self, length: int, words: np.ndarray, pivots: tuple):
        self.length = length
        self.words = words
        self.dim = words.shape[0]
        self.pivots = pivots
        words.setflags(write=False)

    @classmethod
    def from_generators(cls, length: int, rows) -> "BinaryCode":
        """Build from bit rows (0/1 matrix, sequences, or python int masks)."""
        if length <= 0:
            raise ParameterError("length must be positive")
        if isinstance(rows, np.ndarray) and rows.dtype == np.uint64 and rows.ndim == 2:
            words = rows.astype(np.uint64, copy=True)
        else:
            rows = list(rows)
            if rows and isinstance(rows[0], int):
                words = np.vstack([int_to_words(r, length) for r in rows]) if rows else np.zeros((0, _nwords(length)), dtype=np.uint64)
            else:
                bits = np.atleast_2d(np.asarray(rows, dtype=np.uint8)) if rows else np.zeros((0, length), dtype=np.uint8)
                if bits.size and bits.shape[1] != length:
                    raise ParameterError(f"generator width {bits.shape[1]} != length {length}")
                words = bits_to_words(bits) if bits.size else np.zeros((0, _nwords(length)), dtype=np.uint64)
        if words.size:
            pivots = np.full(words.shape[0], -1, dtype=np.int64)
            rank = int(_kernels.rref_words(words, length, pivots))
            words = words[:rank].copy()
            pivots = tuple(int(p) for p in pivots[:rank])
        else:
            words = np.zeros((0, _nwords(length)), dtype=np.uint64)
            pivots = ()
        return cls(length, words, pivots)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.dim, self.length)

    def generator_bits(self) -> np.ndarray:
        return words_to_bits(self.words, self.length)

    def generator_masks(self) -> list:
        return [words_to_int(self.words[i]) for i in range(self.dim)]

    def contains_words(self, row: np.ndarray) -> bool:
        v = row.astype(np.uint64, copy=True)
        for i, piv in enumerate(self.pivots):
            if (v[piv >> 6] >> np.uint64(piv & 63)) & np.uint64(1):
                v ^= self.words[i]
        return not v.any()

    def contains(self, vector) -> bool:
        """Membership test; accepts a bit sequence or an int mask."""
        if isinstance(vector, int):
            row = int_to_words(vector, self.length)
        else:
            row = bits_to_words(np.asarray(vector, dtype=np.uint8))[0]
        return self.contains_words(row)

    def codeword_bits(self) -> np.ndarray:
        """All 2^dim codewords as a (2^dim, N) uint8 matrix (doubling order)."""
        if self.dim > ENUM_DIM_CAP:
            raise FeasibilityError(f"codeword enumeration needs dim <= {ENUM_DIM_CAP}, got {self.dim}")
        gens = self.generator_bits()
        out = np.zeros((1, self.length), dtype=np.uint8)
        for i in range(self.dim):
            out = np.vstack([out, out ^ gens[i]])
        return out

    def codeword_masks(self) -> list:
        """All codewords as python int masks, message-index order."""
        if self.dim > ENUM_DIM_CAP:
            raise FeasibilityError(f"codeword enumeration needs dim <= {ENUM_DIM_CAP}, got {self.dim}")
        gens = self.generator_masks()
        out = [0]
        for g in gens:
            out += [c ^ g for c in out]
        return out

    def parity_check_basis(self) -> np.ndarray:
        """A basis of the dual code as a (N-dim, W) uint64 word matrix."""
        n, k = self.length, self.dim
        piv = set(self.pivots)
        free = [c for c in range(n) if c not in piv]
        bits = self.generator_bits()
        duals = np.zeros((len(free), n), dtype=np.uint8)
        for j, c in enumerate(free):
            duals[j, c] = 1
            for i, p in enumerate(self.pivots):
                duals[j, p] = bits[i, c]
        return bits_to_words(duals) if len(free) else np.zeros((0, _nwords(n)), dtype=np.uint64)

    def to_text(self) -> str:
        lines = [f"{self.length} {self.dim}"]
        bits = self.generator_bits()
        for i in range(self.dim):
            lines.append("".join("1" if b else "0" for b in bits[i]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BinaryCode":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        try:
            n, k = (int(x) for x in lines[0].split())
        except (IndexError, ValueError) as exc:
            raise ParameterError("bad code header, expected 'N dim'") from exc
        if len(lines) != k + 1:
            raise ParameterError(f"expected {k} generator lines, got {len(lines) - 1}")
        rows = []
        for ln in lines[1:]:
            if len(ln) != n or set(ln) - {"0", "1"}:
                raise ParameterError(f"bad generator line: {ln!r}")
            rows.append([int(ch) for ch in ln])
        return cls.from_generators(n, rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryCode)
            and self.length == other.length
            and self.dim == other.dim
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):
        return hash((self.length, self.dim, self.words.tobytes()))

    def __repr__(self):
        return f"BinaryCode(n={self.length}, dim={self.dim})"


def theta_map(m: int, index: int) -> np.ndarray:
    """Binary expansion of index as m bits, b_0 = least significant."""
    if not (0 <= index < (1 << m)):
        raise ParameterError(f"index {index} out of range for m={m}")
    return ((index >> np.arange(m)) & 1).astype(np.uint8)


def theta_inverse(bits: Sequence[int]) -> int:
    return int(sum(int(b) << i for i, b in enumerate(bits)))


def rm_generator(params: RmParams) -> BinaryCode:
    """RM(r,m): evaluations of all degree-<=r polynomials at the points theta_m(l)."""
    r, m = params.r, params.m
    if m > RM_M_CAP:
        raise ParameterError(f"m={m} exceeds the bit-vector width budget ({RM_M_CAP})")
    n = 1 << m
    ell = np.arange(n, dtype=np.uint32)
    rows = []
    for g in range(1 << m):
        if bin(g).count("1") <= r:
            rows.append(((ell & g) == g).astype(np.uint8))
    code = BinaryCode.from_generators(n, np.array(rows, dtype=np.uint8))
    expected = sum(comb(m, i) for i in range(r + 1))
    assert code.dim == expected
    return code


def rm_rate_exact(params: RmParams) -> Fraction:
    """Exact rate of RM(r,m): binomial tail sum over 2^m."""
    r, m = params.r, params.m
    return Fraction(sum(comb(m, i) for i in range(r + 1)), 1 << m)


def project(code: BinaryCode, coords: Iterable[int]) -> BinaryCode:
    """Projection onto a coordinate subset, given in increasing order."""
    coords = list(coords)
    if not coords:
        raise ParameterError("projection needs a nonempty coordinate set")
    if any(c < 0 or c >= code.length for c in coords):
        raise ParameterError("projection coordinate out of range")
    if len(set(coords)) != len(coords):
        raise ParameterError("duplicate projection coordinates")
    if coords != sorted(coords):
        raise ParameterError("projection coordinates must be increasing")
    bits = code.generator_bits()[:, coords]
    return BinaryCode.from_generators(len(coords), bits)


def codes_equal(a: BinaryCode, b: BinaryCode) -> bool:
    """True iff the row spaces coincide (canonical forms are unique)."""
    if a.length != b.length:
        raise ParameterError("codes_equal needs equal lengths")
    return a == b


def min_distance(code: BinaryCode) -> int:
    """Minimum Hamming weight over nonzero codewords, by Gray-code sweep."""
    if code.dim == 0:
        raise ParameterError("minimum distance is undefined for the zero-dimensional code")
    if code.dim > ENUM_DIM_CAP:
        raise FeasibilityError(f"distance enumeration needs dim <= {ENUM_DIM_CAP}, got {code.dim}")
    return int(_kernels.min_weight_words(np.ascontiguousarray(code.words)))


def is_automorphism(code: BinaryCode, perm: CoordPermutation) -> bool:
    """True iff permuting every generator lands back inside the code."""
    if len(perm) != code.length:
        raise ParameterError("permutation length does not match code length")
    bits = code.generator_bits()
    permuted = np.empty_like(bits)
    permuted[:, perm.images] = bits
    rows = bits_to_words(permuted)
    return all(code.contains_words(rows[i]) for i in range(rows.shape[0]))
