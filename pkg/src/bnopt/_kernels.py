"""Hot numeric kernels: contingency counting for scores and packed-bit-row
operations for the sparse parent store.

Each kernel has a numba @njit build and a pure-numpy fallback with identical
semantics. Set BNOPT_NO_NUMBA=1 to force the numpy path (the numpy path is
also used automatically when numba is not importable). The selected family
is exported under the plain names; tests and benchmarks/bench_kernels.py
reach both families directly.
"""

from __future__ import annotations

import os

import numpy as np

_WORD = 64
_ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


# ---------------------------------------------------------------- numpy path


def _np_mixed_radix_codes(data, cols, ars):
    if cols.size == 0:
        return np.zeros(data.shape[0], dtype=np.int64)
    strides = np.empty(cols.size, dtype=np.int64)
    acc = 1
    for j in range(cols.size):
        strides[j] = acc
        acc *= ars[j]
    return data[:, cols] @ strides


def _np_cond_entropy_bits(xcol, pacodes, rx, npa):
    joint = np.bincount(pacodes * rx + xcol, minlength=npa * rx)
    pa = joint.reshape(npa, rx).sum(axis=1)
    # sequential accumulation in index order: bit-identical to the numba
    # kernel regardless of which family is active
    s = 0.0
    for c in pa[pa > 1]:
        s += c * np.log2(np.float64(c))
    for c in joint[joint > 1]:
        s -= c * np.log2(np.float64(c))
    return float(s)


def _np_or_rows_firstbit(rows, idx, nbits):
    nwords = (nbits + _WORD - 1) >> 6
    if idx.size:
        acc = np.bitwise_or.reduce(rows[idx, :nwords], axis=0)
    else:
        acc = np.zeros(nwords, dtype=np.uint64)
    inv = ~acc
    tail = nbits & 63
    if tail:
        inv[-1] &= np.uint64((1 << tail) - 1)
    nz = np.nonzero(inv)[0]
    if nz.size == 0:
        return -1
    w = int(nz[0])
    v = int(inv[w])
    return (w << 6) + ((v & -v).bit_length() - 1)


def _np_andnot(valid, row):
    return valid & ~row


def _np_first_set_bit(words):
    nz = np.nonzero(words)[0]
    if nz.size == 0:
        return -1
    w = int(nz[0])
    v = int(words[w])
    return (w << 6) + ((v & -v).bit_length() - 1)


# ---------------------------------------------------------------- numba path

using_numba = False
if os.environ.get("BNOPT_NO_NUMBA", "0").lower() not in ("1", "true", "yes"):
    try:
        from numba import njit

        using_numba = True
    except ImportError:
        pass

if using_numba:

    @njit(cache=True)
    def _nb_mixed_radix_codes(data, cols, ars):
        nrows = data.shape[0]
        out = np.zeros(nrows, dtype=np.int64)
        stride = np.int64(1)
        for j in range(cols.shape[0]):
            c = cols[j]
            for r in range(nrows):
                out[r] += data[r, c] * stride
            stride *= ars[j]
        return out

    @njit(cache=True)
    def _nb_cond_entropy_bits(xcol, pacodes, rx, npa):
        joint = np.zeros(npa * rx, dtype=np.int64)
        pa = np.zeros(npa, dtype=np.int64)
        for r in range(xcol.shape[0]):
            p = pacodes[r]
            joint[p * rx + xcol[r]] += 1
            pa[p] += 1
        s = 0.0
        for i in range(npa):
            if pa[i] > 1:
                s += pa[i] * np.log2(np.float64(pa[i]))
        for i in range(npa * rx):
            if joint[i] > 1:
                s -= joint[i] * np.log2(np.float64(joint[i]))
        return s

    @njit(cache=True)
    def _nb_or_rows_firstbit(rows, idx, nbits):
        nwords = rows.shape[1]
        zero = np.uint64(0)
        one = np.uint64(1)
        for w in range(nwords):
            base = w << 6
            if base >= nbits:
                break
            acc = zero
            for j in range(idx.shape[0]):
                acc |= rows[idx[j], w]
            inv = ~acc
            hi = nbits - base
            if hi < _WORD:
                inv &= (one << np.uint64(hi)) - one
            if inv != zero:
                t = 0
                while inv & one == zero:
                    inv >>= one
                    t += 1
                return base + t
        return -1

    @njit(cache=True)
    def _nb_andnot(valid, row):
        out = np.empty_like(valid)
        for w in range(valid.shape[0]):
            out[w] = valid[w] & ~row[w]
        return out

    @njit(cache=True)
    def _nb_first_set_bit(words):
        zero = np.uint64(0)
        one = np.uint64(1)
        for w in range(words.shape[0]):
            v = words[w]
            if v != zero:
                t = 0
                while v & one == zero:
                    v >>= one
                    t += 1
                return (w << 6) + t
        return -1

    mixed_radix_codes = _nb_mixed_radix_codes
    cond_entropy_bits = _nb_cond_entropy_bits
    or_rows_firstbit = _nb_or_rows_firstbit
    andnot = _nb_andnot
    first_set_bit = _nb_first_set_bit
else:
    mixed_radix_codes = _np_mixed_radix_codes
    cond_entropy_bits = _np_cond_entropy_bits
    or_rows_firstbit = _np_or_rows_firstbit
    andnot = _np_andnot
    first_set_bit = _np_first_set_bit


def pack_bits(flags) -> np.ndarray:
    """Pack a boolean sequence into little-endian uint64 words (bit i of the
    row = element i)."""
    flags = np.asarray(flags, dtype=bool)
    nwords = max(1, (flags.size + _WORD - 1) >> 6)
    out = np.zeros(nwords, dtype=np.uint64)
    for i in np.nonzero(flags)[0]:
        out[i >> 6] |= np.uint64(1) << np.uint64(int(i) & 63)
    return out


def ones_row(nbits: int) -> np.ndarray:
    """All-ones packed row of the given width; padding bits cleared."""
    nwords = max(1, (nbits + _WORD - 1) >> 6)
    out = np.full(nwords, _ALL_ONES, dtype=np.uint64)
    tail = nbits & 63
    if nbits == 0:
        out[:] = 0
    elif tail:
        out[-1] = np.uint64((1 << tail) - 1)
    return out


def bit_string(words: np.ndarray, nbits: int) -> str:
    """Render bits 0..nbits-1 as a left-to-right string, bit 0 first."""
    return "".join(
        "1" if int(words[i >> 6]) >> (i & 63) & 1 else "0" for i in range(nbits)
    )
