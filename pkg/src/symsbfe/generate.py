"""Seeded random instances for sweeps and benchmarks."""
from __future__ import annotations

import numpy as np

from .core import Instance, InstanceError, ValueVector

FAMILIES = ("any", "kofn", "exactk")


def random_value_vector(n: int, blocks: int, rng: np.random.Generator) -> ValueVector:
    """Uniformly placed block boundaries, random leading bit."""
    if not 1 <= blocks <= n + 1:
        raise InstanceError(f"blocks: need 1 <= B <= n+1 = {n + 1}, got {blocks}")
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, n + 1), size=blocks - 1, replace=False))
    bit = int(rng.integers(2))
    entries = []
    bounds = [0] + cuts + [n + 1]
    for j in range(blocks):
        entries.extend([bit ^ (j % 2)] * (bounds[j + 1] - bounds[j]))
    return ValueVector(tuple(entries))


def random_instance(n: int, rng: np.random.Generator, cost_range=(1.0, 10.0),
                    prob_range=(0.05, 0.95)) -> Instance:
    lo, hi = cost_range
    if not 0 < lo <= hi:
        raise InstanceError(f"cost range must satisfy 0 < lo <= hi, got {cost_range}")
    plo, phi = prob_range
    if not plo <= phi:
        raise InstanceError(f"prob range must satisfy lo <= hi, got {prob_range}")
    costs = rng.uniform(lo, hi, size=n)
    probs = np.clip(rng.uniform(plo, phi, size=n), 0.01, 0.99)
    return Instance(tuple(float(c) for c in costs), tuple(float(p) for p in probs))


def generate(n: int, blocks: int | None, seed, cost_range=(1.0, 10.0),
             prob_range=(0.05, 0.95), family: str = "any") -> tuple[Instance, ValueVector]:
    """Random instance and value vector, fully determined by ``seed``.

    ``family`` "kofn" draws a k-of-n vector (``1 <= k <= n``) and "exactk"
    an exactly-k vector; both ignore ``blocks``.
    """
    if n < 1:
        raise InstanceError(f"n: must be a positive integer, got {n}")
    rng = np.random.default_rng(seed)
    if family == "any":
        if blocks is None:
            raise InstanceError("blocks: required for family 'any'")
        R = random_value_vector(n, blocks, rng)
    elif family == "kofn":
        R = ValueVector.k_of_n(n, int(rng.integers(1, n + 1)))
    elif family == "exactk":
        R = ValueVector.exactly_k(n, int(rng.integers(0, n + 1)))
    else:
        raise InstanceError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    return random_instance(n, rng, cost_range, prob_range), R
