"""Hot numeric kernels: GF(2) elimination, pattern sweeps, biased transform.

Every kernel exists in two flavours: a loop version compiled with numba's
``@njit`` and a vectorized pure-numpy fallback.  Set ``RMNEST_NO_NUMBA=1``
to force the numpy path (used by the benchmark and as a safety hatch on
platforms where numba is unavailable).  ``benchmarks/bench_backends.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U4 = np.uint64(4)
_U6 = np.uint64(6)
_U56 = np.uint64(56)
_U63 = np.uint64(63)

# masks of the 64 in-word bit positions whose b-th index bit is zero
_SOS_MASKS = np.array(
    [
        0x5555555555555555,
        0x3333333333333333,
        0x0F0F0F0F0F0F0F0F,
        0x00FF00FF00FF00FF,
        0x0000FFFF0000FFFF,
        0x00000000FFFFFFFF,
    ],
    dtype=np.uint64,
)


def _env_no_numba() -> bool:
    return os.environ.get("RMNEST_NO_NUMBA", "").strip() not in ("", "0")


NUMBA_ENABLED = False
if not _env_no_numba():
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


# ---------------------------------------------------------------------------
# loop kernels (numba-compiled when enabled)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _popcount_u64(x):
    x = x - ((x >> _U1) & _M1)
    x = (x & _M2) + ((x >> _U2) & _M2)
    x = (x + (x >> _U4)) & _M4
    return np.int64((x * _H01) >> _U56)


@njit(cache=True)
def _rank_words_nb(mat, ncols):
    nrows = mat.shape[0]
    rank = 0
    for col in range(ncols):
        w = col >> 6
        bit = _U1 << np.uint64(col & 63)
        pivot = -1
        for r in range(rank, nrows):
            if mat[r, w] & bit:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for j in range(mat.shape[1]):
                tmp = mat[rank, j]
                mat[rank, j] = mat[pivot, j]
                mat[pivot, j] = tmp
        for r in range(nrows):
            if r != rank and (mat[r, w] & bit):
                for j in range(mat.shape[1]):
                    mat[r, j] ^= mat[rank, j]
        rank += 1
        if rank == nrows:
            break
    return rank


@njit(cache=True)
def _rref_words_nb(mat, ncols, pivots):
    nrows = mat.shape[0]
    rank = 0
    for col in range(ncols):
        w = col >> 6
        bit = _U1 << np.uint64(col & 63)
        pivot = -1
        for r in range(rank, nrows):
            if mat[r, w] & bit:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for j in range(mat.shape[1]):
                tmp = mat[rank, j]
                mat[rank, j] = mat[pivot, j]
                mat[pivot, j] = tmp
        for r in range(nrows):
            if r != rank and (mat[r, w] & bit):
                for j in range(mat.shape[1]):
                    mat[r, j] ^= mat[rank, j]
        pivots[rank] = col
        rank += 1
        if rank == nrows:
            break
    return rank


@njit(cache=True)
def _min_weight_nb(rows):
    k = rows.shape[0]
    nw = rows.shape[1]
    cw = np.zeros(nw, dtype=np.uint64)
    best = np.int64(1 << 62)
    for g in range(1, 1 << k):
        # Gray step: toggle the row indexed by the lowest set bit of g
        t = g
        idx = 0
        while not (t & 1):
            t >>= 1
            idx += 1
        w = np.int64(0)
        for j in range(nw):
            cw[j] ^= rows[idx, j]
            w += _popcount_u64(cw[j])
        if w < best:
            best = w
    return best


@njit(cache=True)
def _up_closure_nb(bits, n):
    # subset-sum OR sweep: after the pass, bit E is set iff some seed is a subset of E
    nwords = bits.shape[0]
    for b in range(min(n, 6)):
        m = _SOS_MASKS[b]
        sh = np.uint64(1 << b)
        for i in range(nwords):
            bits[i] |= (bits[i] & m) << sh
    for b in range(6, n):
        stride = 1 << (b - 6)
        step = stride << 1
        for base in range(0, nwords, step):
            for i in range(stride):
                bits[base + stride + i] |= bits[base + i]


@njit(cache=True)
def _weight_profile_bits_nb(bits, n):
    prof = np.zeros(n + 1, dtype=np.int64)
    pop6 = np.zeros(64, dtype=np.int64)
    for i in range(64):
        pop6[i] = _popcount_u64(np.uint64(i))
    nwords = bits.shape[0]
    for wi in range(nwords):
        v = bits[wi]
        if v == _U0:
            continue
        ph = _popcount_u64(np.uint64(wi))
        while v != _U0:
            low = v & (~v + _U1)
            b = _popcount_u64(low - _U1)
            prof[ph + pop6[b]] += 1
            v ^= low
    return prof


@njit(cache=True)
def _syndrome_weight_counts_nb(checks, n):
    nchecks = checks.shape[0]
    counts = np.zeros(((1 << nchecks), n + 1), dtype=np.int64)
    for z in range(1 << n):
        s = 0
        for j in range(nchecks):
            s |= (_popcount_u64(np.uint64(z) & checks[j]) & 1) << j
        counts[s, _popcount_u64(np.uint64(z))] += 1
    return counts


@njit(cache=True)
def _butterfly_nb(vals, p):
    n = 0
    size = vals.shape[0]
    while (1 << n) < size:
        n += 1
    out = vals.copy()
    s = np.sqrt(p * (1.0 - p))
    for i in range(n):
        stride = 1 << i
        step = stride << 1
        for base in range(0, size, step):
            for j in range(base, base + stride):
                a = out[j]
                b = out[j + stride]
                out[j] = (1.0 - p) * a + p * b
                out[j + stride] = s * (a - b)
    return out


@njit(cache=True)
def _inverse_butterfly_nb(coeffs, p):
    n = 0
    size = coeffs.shape[0]
    while (1 << n) < size:
        n += 1
    out = coeffs.copy()
    r0 = np.sqrt(p / (1.0 - p))
    r1 = np.sqrt((1.0 - p) / p)
    for i in range(n):
        stride = 1 << i
        step = stride << 1
        for base in range(0, size, step):
            for j in range(base, base + stride):
                c0 = out[j]
                c1 = out[j + stride]
                out[j] = c0 + c1 * r0
                out[j + stride] = c0 - c1 * r1
    return out


@njit(cache=True)
def _bec_unrec_mc_nb(basis_cols, target_col, erased, out):
    # basis_cols: generator columns as dim-bit masks, one per non-target coord
    n = basis_cols.shape[0]
    nsamp = erased.shape[0]
    work = np.zeros(n + 1, dtype=np.int64)
    for s in range(nsamp):
        nb = 0
        for i in range(n):
            if erased[s, i]:
                continue
            v = basis_cols[i]
            for j in range(nb):
                low = work[j] & (~work[j] + 1)
                if v & low:
                    v ^= work[j]
            if v:
                work[nb] = v
                nb += 1
        v = target_col
        for j in range(nb):
            low = work[j] & (~work[j] + 1)
            if v & low:
                v ^= work[j]
        out[s] = 1 if v else 0


# ---------------------------------------------------------------------------
# pure-numpy fallbacks
# ---------------------------------------------------------------------------


def _rank_words_np(mat, ncols):
    nrows = mat.shape[0]
    rank = 0
    for col in range(ncols):
        w = col >> 6
        bit = np.uint64(1 << (col & 63))
        hot = (mat[rank:, w] & bit) != 0
        idx = np.flatnonzero(hot)
        if idx.size == 0:
            continue
        pivot = rank + int(idx[0])
        if pivot != rank:
            mat[[rank, pivot]] = mat[[pivot, rank]]
        rows = (mat[:, w] & bit) != 0
        rows[rank] = False
        mat[rows] ^= mat[rank]
        rank += 1
        if rank == nrows:
            break
    return rank


def _rref_words_np(mat, ncols, pivots):
    nrows = mat.shape[0]
    rank = 0
    for col in range(ncols):
        w = col >> 6
        bit = np.uint64(1 << (col & 63))
        hot = (mat[rank:, w] & bit) != 0
        idx = np.flatnonzero(hot)
        if idx.size == 0:
            continue
        pivot = rank + int(idx[0])
        if pivot != rank:
            mat[[rank, pivot]] = mat[[pivot, rank]]
        rows = (mat[:, w] & bit) != 0
        rows[rank] = False
        mat[rows] ^= mat[rank]
        pivots[rank] = col
        rank += 1
        if rank == nrows:
            break
    return rank


def _min_weight_np(rows):
    k, nw = rows.shape
    h = min(k, 14)
    low = np.zeros((1, nw), dtype=np.uint64)
    for i in range(h):
        low = np.vstack([low, low ^ rows[i]])
    low_w = np.bitwise_count(low).sum(axis=1).astype(np.int64)
    best = int(low_w[1:].min())
    if k > h:
        hi = np.zeros(nw, dtype=np.uint64)
        for g in range(1, 1 << (k - h)):
            t, idx = g, 0
            while not (t & 1):
                t >>= 1
                idx += 1
            hi = hi ^ rows[h + idx]
            w = np.bitwise_count(low ^ hi).sum(axis=1).min()
            best = min(best, int(w))
    return best


def _up_closure_np(bits, n):
    for b in range(min(n, 6)):
        bits |= (bits & _SOS_MASKS[b]) << np.uint64(1 << b)
    nwords = bits.shape[0]
    for b in range(6, n):
        stride = 1 << (b - 6)
        view = bits.reshape(nwords >> (b - 5), 2, stride)
        view[:, 1, :] |= view[:, 0, :]


def _weight_profile_bits_np(bits, n):
    prof = np.zeros(n + 1, dtype=np.int64)
    nwords = bits.shape[0]
    idx_pc = np.bitwise_count(np.arange(nwords, dtype=np.uint32)).astype(np.int64)
    popmask = np.zeros(7, dtype=np.uint64)
    for b in range(64):
        popmask[bin(b).count("1")] |= np.uint64(1 << b)
    for h in range(int(idx_pc.max()) + 1 if nwords else 1):
        sel = bits[idx_pc == h]
        if sel.size == 0:
            continue
        for low in range(7):
            c = int(np.bitwise_count(sel & popmask[low]).sum())
            if c:
                prof[h + low] += c
    return prof


def _syndrome_weight_counts_np(checks, n):
    nchecks = checks.shape[0]
    counts = np.zeros(((1 << nchecks), n + 1), dtype=np.int64)
    chunk = 1 << 18
    for start in range(0, 1 << n, chunk):
        stop = min(start + chunk, 1 << n)
        z = np.arange(start, stop, dtype=np.uint64)
        s = np.zeros(z.shape, dtype=np.int64)
        for j in range(nchecks):
            s |= (np.bitwise_count(z & checks[j]).astype(np.int64) & 1) << j
        w = np.bitwise_count(z).astype(np.int64)
        np.add.at(counts, (s, w), 1)
    return counts


def _butterfly_np(vals, p):
    size = vals.shape[0]
    n = size.bit_length() - 1
    out = vals.astype(np.float64, copy=True)
    s = np.sqrt(p * (1.0 - p))
    for i in range(n):
        stride = 1 << i
        view = out.reshape(size >> (i + 1), 2, stride)
        a = view[:, 0, :].copy()
        b = view[:, 1, :].copy()
        view[:, 0, :] = (1.0 - p) * a + p * b
        view[:, 1, :] = s * (a - b)
    return out


def _inverse_butterfly_np(coeffs, p):
    size = coeffs.shape[0]
    n = size.bit_length() - 1
    out = coeffs.astype(np.float64, copy=True)
    r0 = np.sqrt(p / (1.0 - p))
    r1 = np.sqrt((1.0 - p) / p)
    for i in range(n):
        stride = 1 << i
        view = out.reshape(size >> (i + 1), 2, stride)
        c0 = view[:, 0, :].copy()
        c1 = view[:, 1, :].copy()
        view[:, 0, :] = c0 + c1 * r0
        view[:, 1, :] = c0 - c1 * r1
    return out


def _bec_unrec_mc_np(basis_cols, target_col, erased, out):
    nsamp = erased.shape[0]
    for s in range(nsamp):
        nb = 0
        work = []
        for v in basis_cols[~erased[s]]:
            v = int(v)
            for b in work:
                if v & (b & -b):
                    v ^= b
            if v:
                work.append(v)
        v = int(target_col)
        for b in work:
            if v & (b & -b):
                v ^= b
        out[s] = 1 if v else 0


if NUMBA_ENABLED:
    rank_words = _rank_words_nb
    rref_words = _rref_words_nb
    min_weight_words = _min_weight_nb
    up_closure = _up_closure_nb
    weight_profile_bits = _weight_profile_bits_nb
    syndrome_weight_counts = _syndrome_weight_counts_nb
    butterfly = _butterfly_nb
    inverse_butterfly = _inverse_butterfly_nb
    bec_unrec_mc = _bec_unrec_mc_nb
else:
    rank_words = _rank_words_np
    rref_words = _rref_words_np
    min_weight_words = _min_weight_np
    up_closure = _up_closure_np
    weight_profile_bits = _weight_profile_bits_np
    syndrome_weight_counts = _syndrome_weight_counts_np
    butterfly = _butterfly_np
    inverse_butterfly = _inverse_butterfly_np
    bec_unrec_mc = _bec_unrec_mc_np

BACKENDS = {
    "numba": {
        "rank_words": _rank_words_nb,
        "min_weight_words": _min_weight_nb,
        "up_closure": _up_closure_nb,
        "weight_profile_bits": _weight_profile_bits_nb,
        "syndrome_weight_counts": _syndrome_weight_counts_nb,
        "butterfly": _butterfly_nb,
    },
    "numpy": {
        "rank_words": _rank_words_np,
        "min_weight_words": _min_weight_np,
        "up_closure": _up_closure_np,
        "weight_profile_bits": _weight_profile_bits_np,
        "syndrome_weight_counts": _syndrome_weight_counts_np,
        "butterfly": _butterfly_np,
    },
}
