"""Edge-coverage goal function and the Adaptive Greedy strategy built on it.

The goal graph has one vertex per position of R and an edge between every
pair of positions lying in different blocks (a complete multipartite
graph).  A partial assignment ``b`` covers the vertices outside the window
``[N_1(b), n - N_0(b)]``; ``g(b)`` counts edges with at least one covered
endpoint.  Edge counts are computed from block sizes, never by listing
edges.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import PartialAssignment, ValueVector
from .strategies import Done, Session, Step, Strategy, Test


def _cross_pairs(sizes) -> int:
    total = sum(sizes)
    return (total * total - sum(s * s for s in sizes)) // 2


@dataclass(frozen=True)
class GoalGraph:
    R: ValueVector

    @property
    def vertex_count(self) -> int:
        return self.R.n + 1

    @property
    def block_of_vertex(self) -> tuple[int, ...]:
        return tuple(self.R.block_index(v) for v in range(self.vertex_count))

    @property
    def Q(self) -> int:
        return _cross_pairs(self.R.sizes)

    def uncovered_edges(self, lo: int, hi: int) -> int:
        """Edges with both endpoints in positions ``lo..hi``."""
        if lo > hi:
            return 0
        overlaps = []
        for blk in self.R.blocks:
            w = min(blk.stop - 1, hi) - max(blk.start, lo) + 1
            if w > 0:
                overlaps.append(w)
        return _cross_pairs(overlaps)


def build_goal_graph(R: ValueVector) -> GoalGraph:
    return GoalGraph(R)


@dataclass(frozen=True)
class GoalFunction:
    graph: GoalGraph

    @classmethod
    def for_function(cls, R: ValueVector) -> GoalFunction:
        return cls(build_goal_graph(R))

    @property
    def Q(self) -> int:
        return self.graph.Q

    def window_value(self, lo: int, hi: int) -> int:
        """g of any partial assignment whose window is ``[lo, hi]``."""
        return self.graph.Q - self.graph.uncovered_edges(lo, hi)

    def __call__(self, b: PartialAssignment) -> int:
        return g_value(b, self)


def g_value(b: PartialAssignment, gf: GoalFunction) -> int:
    n = gf.graph.R.n
    if len(b) != n:
        raise ValueError(f"partial assignment has {len(b)} slots, function has n={n}")
    return gf.window_value(b.n1, n - b.n0)


def greedy_step(b: PartialAssignment, gf: GoalFunction, inst) -> Step:
    """Test maximizing expected gain in g per unit cost (lowest index on ties).

    Every untested variable moves the window the same way, so the two
    possible gains are computed once and only the weighting by ``p_i`` and
    ``c_i`` differs between candidates.
    """
    R = gf.graph.R
    n = R.n
    lo, hi = b.n1, n - b.n0
    g = gf.window_value(lo, hi)
    if g == gf.Q:
        return Done(R[lo])
    gain1 = gf.window_value(lo + 1, hi) - g
    gain0 = gf.window_value(lo, hi - 1) - g
    best, arg = 0.0, -1
    for i in range(n):
        if b.is_tested(i):
            continue
        p = inst.probs[i]
        score = (p * gain1 + (1.0 - p) * gain0) / inst.costs[i]
        if score > best:
            best, arg = score, i
    if arg < 0:
        raise RuntimeError(f"greedy: no test has positive expected gain at b={b} (g={g} < Q={gf.Q})")
    return Test(arg)


class _GreedySession(Session):
    def step(self):
        return greedy_step(self.b, self.strategy.goal, self.strategy.inst)


class GreedyStrategy(Strategy):
    name = "greedy"
    session_class = _GreedySession

    def __init__(self, inst, R):
        super().__init__(inst, R)
        self.goal = GoalFunction.for_function(R)


# -- parity ------------------------------------------------------------------

def parity_utility(b: PartialAssignment) -> int:
    """Number of tested variables; a goal function for parity with goal value n."""
    return b.n0 + b.n1


def parity_goal_value(f: int | ValueVector) -> int:
    """Goal value ``n`` of parity (or its complement) on ``n`` variables."""
    if isinstance(f, ValueVector):
        if not f.is_parity:
            raise ValueError(f"not a parity value vector: {list(f.entries)}")
        return f.n
    n = int(f)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return n
