# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse kernels over (Z/q)[y]/(M) with 64-bit packed exponent keys.

Same contract as ``_kernels_py``; the merge runs without the GIL so table
scans in worker threads overlap.
"""

from cython.operator cimport dereference as deref
from libc.stdint cimport uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

import numpy as np

NAME = "compiled"


cdef extern from *:
    """
    #include <cstdint>
    static inline uint64_t canlift_mulmod(uint64_t a, uint64_t b, uint64_t q) {
        return (uint64_t)(((unsigned __int128)a * b) % q);
    }
    """
    uint64_t canlift_mulmod(uint64_t a, uint64_t b, uint64_t q) nogil


cdef void _accumulate(
    const uint64_t[::1] ka, const uint64_t[:, ::1] ca,
    const uint64_t[::1] kb, const uint64_t[:, ::1] cb,
    int n, uint64_t q, bint dual, bint use_cap, uint64_t off, uint64_t guard, uint64_t ones,
    vector[uint64_t]& keys, vector[uint64_t]& acc,
) noexcept nogil:
    # dual: ka holds f (nonnegative), kb holds g (negated); keep kb - ka when every field >= 1
    cdef unordered_map[uint64_t, size_t] index
    cdef unordered_map[uint64_t, size_t].iterator it
    cdef size_t na = ka.shape[0], nb = kb.shape[0], i, j, slot
    cdef int w = 2 * n - 1, s, t
    cdef uint64_t k, x, y, v
    cdef bint small = q < (<uint64_t>1 << 32)
    index.reserve(na + nb)
    for i in range(na):
        for j in range(nb):
            if dual:
                if ((kb[j] + guard - ones - ka[i]) & guard) != guard:
                    continue
                k = kb[j] - ka[i]
            else:
                k = ka[i] + kb[j]
                if use_cap and ((k + off) & guard):
                    continue
            it = index.find(k)
            if it == index.end():
                slot = keys.size()
                index[k] = slot
                keys.push_back(k)
                acc.resize(acc.size() + w, 0)
            else:
                slot = deref(it).second
            slot *= w
            for s in range(n):
                x = ca[i, s]
                if x == 0:
                    continue
                for t in range(n):
                    y = cb[j, t]
                    if y == 0:
                        continue
                    if small:
                        v = (x * y) % q
                    else:
                        v = canlift_mulmod(x, y, q)
                    v += acc[slot + s + t]
                    if v >= q:
                        v -= q
                    acc[slot + s + t] = v


cdef void _reduce(vector[uint64_t]& acc, size_t nkeys, int n, uint64_t q,
                  const uint64_t[::1] tail) noexcept nogil:
    # fold degrees >= n with y^n = -tail(y), in place; entries already < q
    cdef int w = 2 * n - 1, d, i
    cdef size_t r, base
    cdef uint64_t c, sub
    if n == 1:
        return
    for r in range(nkeys):
        base = r * w
        for d in range(w - 1, n - 1, -1):
            c = acc[base + d]
            if c == 0:
                continue
            for i in range(n):
                sub = canlift_mulmod(c, tail[i], q)
                # acc[base + d - n + i] -= c * tail[i]
                if acc[base + d - n + i] >= sub:
                    acc[base + d - n + i] -= sub
                else:
                    acc[base + d - n + i] += q - sub


def _run(ka, ca, kb, cb, int n, uint64_t q, tail, bint dual, cap_off, uint64_t guard, uint64_t ones):
    cdef vector[uint64_t] keys
    cdef vector[uint64_t] acc
    cdef const uint64_t[::1] mka = ka
    cdef const uint64_t[:, ::1] mca = ca
    cdef const uint64_t[::1] mkb = kb
    cdef const uint64_t[:, ::1] mcb = cb
    cdef const uint64_t[::1] mtail = tail
    cdef bint use_cap = cap_off is not None
    cdef uint64_t off = cap_off if use_cap else 0
    cdef size_t r, m, i
    cdef int w = 2 * n - 1
    with nogil:
        _accumulate(mka, mca, mkb, mcb, n, q, dual, use_cap, off, guard, ones, keys, acc)
        _reduce(acc, keys.size(), n, q, mtail)
    m = keys.size()
    out_k = np.empty(m, dtype=np.uint64)
    out_c = np.empty((m, n), dtype=np.uint64)
    cdef uint64_t[::1] ok = out_k
    cdef uint64_t[:, ::1] oc = out_c
    for r in range(m):
        ok[r] = keys[r]
        for i in range(n):
            oc[r, i] = acc[r * w + i]
    return out_k, out_c


def _to_arrays(terms: dict, int n):
    keys = np.fromiter(terms.keys(), dtype=np.uint64, count=len(terms))
    if n == 1:
        coefs = np.fromiter(terms.values(), dtype=np.uint64, count=len(terms)).reshape(-1, 1)
    else:
        coefs = np.array(list(terms.values()), dtype=np.uint64).reshape(-1, n)
    return keys, coefs


def _from_arrays(keys, coefs, int n) -> dict:
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    coefs = coefs[order]
    nz = coefs.any(axis=1)
    keys = keys[nz].tolist()
    if n == 1:
        vals = coefs[nz, 0].tolist()
    else:
        vals = [tuple(r) for r in coefs[nz].tolist()]
    return dict(zip(keys, vals))


def supports(ring, layout) -> bool:
    return layout.fits_word and ring.q < (1 << 63)


def _tail(ring):
    if ring.n == 1:
        return np.zeros(1, dtype=np.uint64)
    return np.array(ring.modulus[:-1], dtype=np.uint64)


def mul(a: dict, b: dict, ring, layout, cap=None) -> dict:
    if not a or not b:
        return {}
    n = ring.n
    ka, ca = _to_arrays(a, n)
    kb, cb = _to_arrays(b, n)
    off = layout.cap_offset(cap) if cap is not None else None
    k, c = _run(ka, ca, kb, cb, n, ring.q, _tail(ring), False, off, layout.guard, layout.ones)
    return _from_arrays(k, c, n)


def dual_act(f: dict, g: dict, ring, layout) -> dict:
    if not f or not g:
        return {}
    n = ring.n
    kf, cf = _to_arrays(f, n)
    kg, cg = _to_arrays(g, n)
    k, c = _run(kf, cf, kg, cg, n, ring.q, _tail(ring), True, None, layout.guard, layout.ones)
    return _from_arrays(k, c, n)
