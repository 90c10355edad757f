# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dynamic-programming kernels.

Mirrors ``_kernels_py`` operation for operation; see that module for the
state layout.
"""
import numpy as np


cdef inline int _popcount(long t) nogil:
    cdef int k = 0
    while t:
        t &= t - 1
        k += 1
    return k


def ones_distribution(probs):
    cdef double[::1] p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef int n = p.shape[0]
    cdef long full = (1 << n) - 1
    cdef int width = n + 1
    out = np.zeros((1 << n) * width, dtype=np.float64)
    cdef double[::1] D = out
    cdef long t, src, dst
    cdef int i, j, m
    cdef double pi, qi
    D[full * width] = 1.0
    with nogil:
        for t in range(full - 1, -1, -1):
            i = 0
            while (t >> i) & 1:
                i += 1
            src = (t | (1 << i)) * width
            dst = t * width
            pi = p[i]
            qi = 1.0 - pi
            m = n - _popcount(t)
            D[dst] = qi * D[src]
            for j in range(1, m + 1):
                D[dst + j] = qi * D[src + j] + pi * D[src + j - 1]
    return out.reshape(1 << n, width)


def class_weight(dist, entries, int ell):
    cdef long long[::1] R = np.ascontiguousarray(entries, dtype=np.int64)
    cdef int n = R.shape[0] - 1
    cdef double[::1] D = np.ascontiguousarray(dist, dtype=np.float64).ravel()
    cdef int width = n + 1
    out = np.zeros((1 << n) * width, dtype=np.float64)
    cdef double[::1] W = out
    cdef long t, base
    cdef int k, m, n1, j
    cdef double s
    with nogil:
        for t in range(1 << n):
            k = _popcount(t)
            m = n - k
            base = t * width
            for n1 in range(k + 1):
                s = 0.0
                for j in range(m + 1):
                    if R[n1 + j] == ell:
                        s += D[base + j]
                W[base + n1] = s
    return out


def solve(costs, probs, block_id, weight=None):
    cdef double[::1] c = np.ascontiguousarray(costs, dtype=np.float64)
    cdef double[::1] p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef long long[::1] blk = np.ascontiguousarray(block_id, dtype=np.int64)
    cdef int n = c.shape[0]
    cdef int width = n + 1
    cdef long size = (1 << n) * width
    cdef bint unit = weight is None
    cdef double[::1] w
    if unit:
        w = np.ones(1, dtype=np.float64)
    else:
        w = np.ascontiguousarray(weight, dtype=np.float64)
    values = np.zeros(size, dtype=np.float64)
    choice = np.full(size, -1, dtype=np.int64)
    cdef double[::1] V = values
    cdef long long[::1] C = choice
    cdef long t, base, nxt
    cdef int k, n1, hi, i, arg
    cdef double wt, best, v
    with nogil:
        for t in range((1 << n) - 1, -1, -1):
            k = _popcount(t)
            base = t * width
            for n1 in range(k + 1):
                hi = n - (k - n1)
                if blk[n1] == blk[hi]:
                    continue
                wt = 1.0 if unit else w[base + n1]
                best = 0.0
                arg = -1
                for i in range(n):
                    if (t >> i) & 1:
                        continue
                    nxt = (t | (1 << i)) * width + n1
                    v = c[i] * wt + p[i] * V[nxt + 1] + (1.0 - p[i]) * V[nxt]
                    if arg < 0 or v < best:
                        best = v
                        arg = i
                V[base + n1] = best
                C[base + n1] = arg
    return values, choice


def evaluate_policy(costs, probs, block_id, choice, weight=None):
    cdef double[::1] c = np.ascontiguousarray(costs, dtype=np.float64)
    cdef double[::1] p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef long long[::1] blk = np.ascontiguousarray(block_id, dtype=np.int64)
    cdef long long[::1] ch = np.ascontiguousarray(choice, dtype=np.int64)
    cdef int n = c.shape[0]
    cdef int width = n + 1
    cdef bint unit = weight is None
    cdef double[::1] w
    if unit:
        w = np.ones(1, dtype=np.float64)
    else:
        w = np.ascontiguousarray(weight, dtype=np.float64)
    values = np.zeros((1 << n) * width, dtype=np.float64)
    cdef double[::1] V = values
    cdef long t, base, nxt
    cdef int k, n1, hi, i
    cdef double wt
    for t in range((1 << n) - 1, -1, -1):
        k = _popcount(t)
        base = t * width
        for n1 in range(k + 1):
            hi = n - (k - n1)
            if blk[n1] == blk[hi]:
                continue
            i = <int> ch[base + n1]
            if i < 0 or (t >> i) & 1:
                raise ValueError(f"policy has no valid test at state t={t}, n1={n1}")
            wt = 1.0 if unit else w[base + n1]
            nxt = (t | (1 << i)) * width + n1
            V[base + n1] = c[i] * wt + p[i] * V[nxt + 1] + (1.0 - p[i]) * V[nxt]
    return values
