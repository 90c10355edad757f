"""Pure-Python dynamic-programming kernels.

Reference implementation of the routines in ``_kernels.pyx``; the two must
produce bit-identical results, so the floating-point operation order here is
the contract.

State layout: a state is a pair ``(t, n1)`` where ``t`` is the bitmask of
tested variables and ``n1 <= popcount(t)`` the number of those that came up
1.  Tables are flat arrays indexed by ``t * (n + 1) + n1``.  Supersets of
``t`` are numerically larger than ``t``, so a descending sweep over ``t``
visits every successor state before its predecessor.
"""
import numpy as np


def ones_distribution(probs):
    """``D[t, j]``: probability that the variables outside ``t`` hold ``j`` ones."""
    n = len(probs)
    p = [float(v) for v in probs]
    full = (1 << n) - 1
    width = n + 1
    D = [0.0] * ((1 << n) * width)
    D[full * width] = 1.0
    for t in range(full - 1, -1, -1):
        # peel off the lowest untested variable
        i = 0
        while (t >> i) & 1:
            i += 1
        src = (t | (1 << i)) * width
        dst = t * width
        pi = p[i]
        qi = 1.0 - pi
        m = n - bin(t).count("1")  # untested count for t
        D[dst] = qi * D[src]
        for j in range(1, m + 1):
            D[dst + j] = qi * D[src + j] + pi * D[src + j - 1]
    return np.array(D, dtype=np.float64).reshape(1 << n, width)


def class_weight(dist, entries, ell):
    """``W[t, n1] = P(f(x) = ell | state (t, n1))`` as a flat table."""
    n = len(entries) - 1
    width = n + 1
    R = [int(r) for r in entries]
    D = dist.ravel().tolist()
    W = [0.0] * ((1 << n) * width)
    for t in range(1 << n):
        k = bin(t).count("1")
        m = n - k
        base = t * width
        for n1 in range(k + 1):
            s = 0.0
            for j in range(m + 1):
                if R[n1 + j] == ell:
                    s += D[base + j]
            W[base + n1] = s
    return np.array(W, dtype=np.float64)


def solve(costs, probs, block_id, weight=None):
    """Optimal cost-to-go for every state and the lowest-index argmin test.

    ``V(t, n1) = 0`` at certificates, otherwise
    ``min_i c_i * w(t, n1) + p_i * V(t+i, n1+1) + (1 - p_i) * V(t+i, n1)``
    with ``w = 1`` (expected cost) when ``weight`` is None.  Returns
    ``(values, choice)``; ``choice`` is -1 at certificates.
    """
    n = len(costs)
    c = [float(v) for v in costs]
    p = [float(v) for v in probs]
    blk = [int(v) for v in block_id]
    w = None if weight is None else [float(v) for v in weight]
    width = n + 1
    size = (1 << n) * width
    V = [0.0] * size
    C = [-1] * size
    for t in range((1 << n) - 1, -1, -1):
        k = bin(t).count("1")
        base = t * width
        for n1 in range(k + 1):
            hi = n - (k - n1)
            if blk[n1] == blk[hi]:
                continue
            wt = 1.0 if w is None else w[base + n1]
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
    return np.array(V, dtype=np.float64), np.array(C, dtype=np.int64)


def evaluate_policy(costs, probs, block_id, choice, weight=None):
    """Cost-to-go of a fixed policy table (same recursion, no minimization)."""
    n = len(costs)
    c = [float(v) for v in costs]
    p = [float(v) for v in probs]
    blk = [int(v) for v in block_id]
    ch = [int(v) for v in choice]
    w = None if weight is None else [float(v) for v in weight]
    width = n + 1
    V = [0.0] * ((1 << n) * width)
    for t in range((1 << n) - 1, -1, -1):
        k = bin(t).count("1")
        base = t * width
        for n1 in range(k + 1):
            hi = n - (k - n1)
            if blk[n1] == blk[hi]:
                continue
            i = ch[base + n1]
            if i < 0 or (t >> i) & 1:
                raise ValueError(f"policy has no valid test at state t={t}, n1={n1}")
            wt = 1.0 if w is None else w[base + n1]
            nxt = (t | (1 << i)) * width + n1
            V[base + n1] = c[i] * wt + p[i] * V[nxt + 1] + (1.0 - p[i]) * V[nxt]
    return np.array(V, dtype=np.float64)
