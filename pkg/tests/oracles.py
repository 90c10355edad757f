"""Brute-force reference computations used as test oracles.

Nothing here goes through the DP tables, the window arithmetic or the
edge-count formulas of the package: certificates are decided by checking
every completion, masses by summing over the cube, and goal values by
listing edges one by one.
"""
import itertools
import math
from functools import lru_cache

STAR = 2


def completions(b):
    free = [i for i, s in enumerate(b) if s == STAR]
    for bits in itertools.product((0, 1), repeat=len(free)):
        x = list(b)
        for i, v in zip(free, bits):
            x[i] = v
        yield tuple(x)


def f_of(x, R):
    return R[sum(x)]


def prob(x, probs):
    return math.prod(p if xi else 1 - p for xi, p in zip(x, probs))


def brute_certificate(b, R):
    values = {f_of(x, R) for x in completions(b)}
    return len(values) == 1


def brute_costs(costs, probs, R):
    """Optimal expected cost and ell-costs by recursion over all 3**n states.

    Memo keys are base-3 codes of the partial assignment.  Returns
    ``(E, L0, L1)`` with absolute (unconditioned) ell-masses.
    """
    n = len(costs)

    def code(b):
        return sum(s * 3 ** i for i, s in enumerate(b))

    def mass(b, ell):
        return sum(prob(x, probs) for x in completions(b) if f_of(x, R) == ell)

    @lru_cache(maxsize=None)
    def rec(key, ell):
        b = decode(key)
        if brute_certificate(b, R):
            return 0.0
        best = math.inf
        for i in range(n):
            if b[i] != STAR:
                continue
            b0 = b[:i] + (0,) + b[i + 1:]
            b1 = b[:i] + (1,) + b[i + 1:]
            if ell is None:
                v = costs[i] + probs[i] * rec(code(b1), None) + (1 - probs[i]) * rec(code(b0), None)
            else:
                v = costs[i] * mass(b, ell) + rec(code(b1), ell) + rec(code(b0), ell)
            best = min(best, v)
        return best

    def decode(key):
        out = []
        for _ in range(n):
            key, d = divmod(key, 3)
            out.append(d)
        return tuple(out)

    root = code((STAR,) * n)
    return rec(root, None), rec(root, 0), rec(root, 1)


def naive_goal_value(b, R):
    """g(b) by listing the cross-block edges and the covered vertices."""
    n = len(R) - 1
    blocks = []
    j = 0
    for pos in range(n + 1):
        if pos > 0 and R[pos] != R[pos - 1]:
            j += 1
        blocks.append(j)
    n1 = sum(1 for s in b if s == 1)
    n0 = sum(1 for s in b if s == 0)
    covered = {v for v in range(n + 1) if v < n1 or v > n - n0}
    edges = [(u, v) for u in range(n + 1) for v in range(u + 1, n + 1) if blocks[u] != blocks[v]]
    return sum(1 for u, v in edges if u in covered or v in covered)


def naive_edge_total(R):
    """Number of pairs of positions of R whose entries lie in different blocks."""
    n = len(R) - 1
    total = 0
    for u in range(n + 1):
        for v in range(u + 1, n + 1):
            # u and v are in different blocks iff R changes somewhere between them
            if any(R[t] != R[t + 1] for t in range(u, v)):
                total += 1
    return total
