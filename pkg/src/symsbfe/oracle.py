"""Exact and sampled costs: optimal DPs, strategy enumeration, Monte Carlo.

The optimal expected cost and the optimal ell-costs come from one backward
induction over states ``(tested set, number of ones seen)``; see
:mod:`symsbfe._kernels_py` for the recursion.  Two partial assignments with
the same tested set and the same ``N_1`` have the same future, so this is
equivalent to the recursion over all ``3**n`` partial assignments while
touching only ``2**n * (n + 1)`` table cells.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple, Union

import numpy as np

from . import kernels
from .core import (
    Instance,
    InstanceError,
    PartialAssignment,
    ValueVector,
    all_assignments,
    assignment_probability,
    evaluate,
)
from .goal import GreedyStrategy
from .strategies import (
    STRATEGY_NAMES,
    BinarySearchBlocksStrategy,
    Done,
    ExactlyKStrategy,
    KOfNStrategy,
    SequentialBlocksStrategy,
    Session,
    Strategy,
    StrategyError,
    Test,
    and_strategy,
    or_strategy,
    run,
)

DEFAULT_LIMIT = 14


class EnumerationLimitError(RuntimeError):
    pass


class ShapeError(ValueError):
    """The instance does not have the shape a specialised report needs."""


def check_limit(n: int, limit: int | None = None) -> None:
    limit = DEFAULT_LIMIT if limit is None else limit
    if n > limit:
        raise EnumerationLimitError(
            f"n={n} exceeds the exact enumeration limit {limit}; "
            "use monte_carlo_cost (--mode mc) or raise the limit (--limit)"
        )


# -- decision trees ------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    value: int


@dataclass(frozen=True)
class Node:
    var: int
    zero: DecisionTree
    one: DecisionTree


DecisionTree = Union[Leaf, Node]


def tree_walk(tree: DecisionTree, x) -> tuple[int, list[int]]:
    """Output label and tested variables along the path taken by ``x``."""
    path = []
    while isinstance(tree, Node):
        path.append(tree.var)
        tree = tree.one if x[tree.var] else tree.zero
    return tree.value, path


def tree_depth(tree: DecisionTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.zero), tree_depth(tree.one))


def tree_is_valid(tree: DecisionTree, R: ValueVector) -> bool:
    """No variable repeats on a path and every ``x`` reaches the leaf ``f(x)``."""
    for x in all_assignments(R.n):
        value, path = tree_walk(tree, x)
        if len(set(path)) != len(path) or value != evaluate(x, R):
            return False
    return True


def tree_costs(tree: DecisionTree, inst: Instance) -> tuple[float, float, float]:
    """``(expected, zero_cost, one_cost)`` summed over the leaves of ``tree``.

    The ell-costs group leaves by their label, which equals ``f(x)`` for
    every ``x`` reaching the leaf when the tree evaluates ``f``.
    """
    totals = [0.0, 0.0]

    def visit(node, prob, cost):
        if isinstance(node, Leaf):
            totals[node.value] += prob * cost
            return
        p = inst.probs[node.var]
        c = cost + inst.costs[node.var]
        visit(node.zero, prob * (1.0 - p), c)
        visit(node.one, prob * p, c)

    visit(tree, 1.0, 0.0)
    return totals[0] + totals[1], totals[0], totals[1]


def render_tree(tree: DecisionTree, indent: str = "") -> str:
    if isinstance(tree, Leaf):
        return f"{indent}-> {tree.value}\n"
    out = f"{indent}x{tree.var + 1}\n"
    out += f"{indent}  0:\n" + render_tree(tree.zero, indent + "    ")
    out += f"{indent}  1:\n" + render_tree(tree.one, indent + "    ")
    return out


# -- dynamic programming -------------------------------------------------------

def _block_ids(R: ValueVector) -> list[int]:
    return [R.block_index(j) for j in range(R.n + 1)]


def class_weights(inst: Instance, R: ValueVector, ell: int) -> np.ndarray:
    """Flat table of ``P(f(x) = ell | state)`` over all DP states."""
    dist = kernels.ones_distribution(inst.probs)
    return kernels.class_weight(dist, R.entries, ell)


@dataclass
class DPSolution:
    """Value and argmin tables of one backward induction.

    ``ell`` is None for expected cost, otherwise the class whose cost is
    minimized.
    """

    inst: Instance
    R: ValueVector
    ell: int | None
    values: np.ndarray
    choice: np.ndarray

    @property
    def n(self) -> int:
        return self.inst.n

    def index(self, tested_mask: int, n1: int) -> int:
        return tested_mask * (self.n + 1) + n1

    def value_at(self, b: PartialAssignment) -> float:
        """Optimal cost-to-go from ``b``, conditioned on reaching ``b``."""
        return float(self.values[self.index(b.tested_mask, b.n1)])

    def choice_at(self, b: PartialAssignment) -> int:
        return int(self.choice[self.index(b.tested_mask, b.n1)])

    @property
    def value(self) -> float:
        return float(self.values[0])

    @cached_property
    def _subtrees(self) -> dict[int, DecisionTree]:
        return {}

    def subtree(self, tested_mask: int, n1: int) -> DecisionTree:
        """Argmin tree from the state ``(tested_mask, n1)``.

        Paths reaching the same state share one subtree object.
        """
        memo = self._subtrees
        key = self.index(tested_mask, n1)
        if key not in memo:
            i = int(self.choice[key])
            if i < 0:
                memo[key] = Leaf(self.R[n1])
            else:
                t = tested_mask | (1 << i)
                memo[key] = Node(i, self.subtree(t, n1), self.subtree(t, n1 + 1))
        return memo[key]

    @property
    def tree(self) -> DecisionTree:
        return self.subtree(0, 0)

    def policy_value(self, ell: int | None = None) -> float:
        """Expected cost (``ell`` None) or ell-cost of this solution's policy."""
        weight = None if ell is None else class_weights(self.inst, self.R, ell)
        vals = kernels.evaluate_policy(
            self.inst.costs, self.inst.probs, _block_ids(self.R), self.choice, weight
        )
        return float(vals[0])


def solve(inst: Instance, R: ValueVector, ell: int | None = None,
          limit: int | None = None) -> DPSolution:
    if R.n != inst.n:
        raise InstanceError(f"value_vector: value vector must have n+1 entries ({inst.n + 1}), got {len(R)}")
    check_limit(inst.n, limit)
    weight = None if ell is None else class_weights(inst, R, ell)
    values, choice = kernels.solve(inst.costs, inst.probs, _block_ids(R), weight)
    return DPSolution(inst, R, ell, values, choice)


def opt_expected_cost(inst: Instance, R: ValueVector,
                      limit: int | None = None) -> tuple[float, DecisionTree]:
    """Minimum expected evaluation cost and an optimal tree (lowest-index ties)."""
    sol = solve(inst, R, None, limit)
    return sol.value, sol.tree


def l_optimal_cost(ell: int, inst: Instance, R: ValueVector,
                   limit: int | None = None) -> tuple[float, DecisionTree]:
    """Minimum ell-cost over all evaluation strategies and a tree attaining it."""
    if ell not in (0, 1):
        raise ValueError(f"ell must be 0 or 1, got {ell!r}")
    sol = solve(inst, R, ell, limit)
    return sol.value, sol.tree


def verification_cost(inst: Instance, R: ValueVector, limit: int | None = None) -> float:
    return l_optimal_cost(0, inst, R, limit)[0] + l_optimal_cost(1, inst, R, limit)[0]


class _TableSession(Session):
    def step(self):
        sol = self.strategy.solution
        i = sol.choice_at(self.b)
        if i < 0:
            return Done(self.strategy.R[self.b.n1])
        return Test(i)


class OptimalStrategy(Strategy):
    """Follows the argmin table of the expected-cost DP."""

    name = "opt"
    session_class = _TableSession

    def __init__(self, inst, R, limit: int | None = None, solution: DPSolution | None = None):
        super().__init__(inst, R)
        self.solution = solution if solution is not None else solve(inst, R, None, limit)


class _TreeSession(Session):
    def __init__(self, strategy):
        super().__init__(strategy)
        self.node = strategy.tree

    def step(self):
        if isinstance(self.node, Leaf):
            return Done(self.node.value)
        return Test(self.node.var)

    def observe(self, i, bit):
        if isinstance(self.node, Leaf) or self.node.var != i:
            raise StrategyError(f"tree strategy: observed x{i + 1} but the tree did not ask for it")
        super().observe(i, bit)
        self.node = self.node.one if bit else self.node.zero


class TreeStrategy(Strategy):
    """Steps through an explicit decision tree."""

    name = "tree"
    session_class = _TreeSession

    def __init__(self, inst, R, tree: DecisionTree, name: str = "tree"):
        super().__init__(inst, R)
        self.tree = tree
        self.name = name


_FACTORIES: dict[str, Callable[[Instance, ValueVector], Strategy]] = {
    "or": or_strategy,
    "and": and_strategy,
    "sbbd": KOfNStrategy,
    "exactk": ExactlyKStrategy,
    "b1": SequentialBlocksStrategy,
    "b1-binsearch": BinarySearchBlocksStrategy,
    "greedy": GreedyStrategy,
    "opt": OptimalStrategy,
}
assert tuple(_FACTORIES) == STRATEGY_NAMES


def make_strategy(name: str, inst: Instance, R: ValueVector,
                  solution: DPSolution | None = None) -> Strategy:
    """Strategy by its stable identifier; ``solution`` lets "opt" reuse a DP."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise StrategyError(
            f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}"
        ) from None
    if name == "opt" and solution is not None:
        return OptimalStrategy(inst, R, solution=solution)
    return factory(inst, R)


def _prepare(strategy, inst: Instance, R: ValueVector) -> Strategy:
    if isinstance(strategy, str):
        return make_strategy(strategy, inst, R)
    if isinstance(strategy, Strategy):
        if strategy.inst != inst or strategy.R != R:
            raise StrategyError(f"{strategy!r} was prepared for a different instance")
        return strategy
    return strategy(inst, R)


# -- cost reports --------------------------------------------------------------

@dataclass(frozen=True)
class CostReport:
    strategy: str
    expected_cost: float
    zero_cost: float
    one_cost: float
    tests_max: int
    n: int
    B: int

    FIELDS = ("strategy", "expected_cost", "zero_cost", "one_cost", "tests_max", "n", "B")

    def as_row(self) -> dict:
        return {f: getattr(self, f) for f in self.FIELDS}


def strategy_expected_cost(strategy, inst: Instance, R: ValueVector,
                           limit: int | None = None) -> CostReport:
    """Exact costs by running the strategy on all ``2**n`` assignments.

    Each assignment is charged the distinct tests it triggers and weighted
    by its probability; the sum runs in increasing assignment order.  A
    wrong output raises :class:`StrategyError` naming the assignment.
    """
    check_limit(inst.n, limit)
    strat = _prepare(strategy, inst, R)
    terms = ([], [])
    tests_max = 0
    for x in all_assignments(inst.n):
        res = run(strat, x)
        fx = evaluate(x, R)
        if res.value != fx:
            raise StrategyError(f"{strat.name}: output {res.value} but f(x)={fx} on x={x}")
        terms[fx].append(res.cost * assignment_probability(x, inst))
        tests_max = max(tests_max, len(res.tests))
    zero, one = math.fsum(terms[0]), math.fsum(terms[1])
    return CostReport(strat.name, math.fsum(terms[0] + terms[1]), zero, one, tests_max, inst.n, R.B)


def materialize_tree(strategy, inst: Instance, R: ValueVector,
                     limit: int | None = None) -> DecisionTree:
    """Decision tree whose paths replay the stepping strategy exactly."""
    check_limit(inst.n, limit)
    strat = _prepare(strategy, inst, R)

    def grow(session):
        step = session.step()
        if isinstance(step, Done):
            return Leaf(step.value)
        i = step.index
        if session.b.is_tested(i):
            raise StrategyError(f"{strat.name}: repeated test of x{i + 1} at b={session.b}")
        branches = []
        for bit in (0, 1):
            child = session.fork()
            child.observe(i, bit)
            branches.append(grow(child))
        return Node(i, branches[0], branches[1])

    return grow(strat.start())


class MonteCarloEstimate(NamedTuple):
    mean: float
    stderr: float
    zero_cost: float
    one_cost: float


def monte_carlo_cost(strategy, inst: Instance, R: ValueVector, trials: int,
                     seed: int) -> MonteCarloEstimate:
    """Sample mean and standard error of the cost over i.i.d. assignments.

    Assignments are drawn from the product distribution with
    ``numpy.random.default_rng(seed)``; the cost of each distinct sampled
    assignment is computed once.  ``zero_cost``/``one_cost`` estimate the
    ell-costs (cost times the indicator ``f(x) = ell``).
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    strat = _prepare(strategy, inst, R)
    rng = np.random.default_rng(seed)
    bits = rng.random((trials, inst.n)) < np.asarray(inst.probs)
    if inst.n <= 62:
        codes = bits.astype(np.int64) @ (np.int64(1) << np.arange(inst.n, dtype=np.int64))
    else:
        codes = np.array([sum(1 << i for i in np.flatnonzero(row)) for row in bits], dtype=object)
    uniq, inverse = np.unique(codes, return_inverse=True)
    cost_of = np.empty(len(uniq))
    class_of = np.empty(len(uniq), dtype=np.int64)
    for u, code in enumerate(uniq):
        x = tuple((int(code) >> i) & 1 for i in range(inst.n))
        res = run(strat, x)
        cost_of[u] = res.cost
        class_of[u] = res.value
    costs = cost_of[inverse]
    labels = class_of[inverse]
    mean = float(costs.mean())
    stderr = float(costs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    zero = float(np.where(labels == 0, costs, 0.0).mean())
    one = float(np.where(labels == 1, costs, 0.0).mean())
    return MonteCarloEstimate(mean, stderr, zero, one)


# -- two-level enumeration for the n = 4, B = 3 counterexample -----------------

@dataclass(frozen=True)
class PinnedTree:
    root: int
    left: int
    expected_cost: float


def check_table_shape(R: ValueVector) -> None:
    """The first two tests leave only k-of-n functions or negations."""
    n = R.n
    if n != 4 or R.B != 3:
        raise ShapeError(f"two-level enumeration needs n=4 and B=3, got n={n}, B={R.B}")
    reductions = {
        "root=1": R.entries[1:],
        "root=0, left=1": R.entries[1:n],
        "root=0, left=0": R.entries[: n - 1],
    }
    for label, sub in reductions.items():
        if ValueVector(sub).B > 2:
            raise ShapeError(f"after {label} the induced vector {list(sub)} is not k-of-n or a negation")
    if ValueVector(R.entries[: n]).B == 1:
        raise ShapeError("the root's 0-branch is already decided; no left child to choose")


def pinned_root_costs(inst: Instance, R: ValueVector) -> list[PinnedTree]:
    """Expected cost of the best tree for each (root, 0-branch child) pair.

    Both tests are fixed and every remaining subproblem is completed
    optimally; rows come in (root, left) lexicographic order.
    """
    check_table_shape(R)
    sol = solve(inst, R)
    c, p = inst.costs, inst.probs
    rows = []
    for r in range(inst.n):
        after_one = sol.values[sol.index(1 << r, 1)]
        for l in range(inst.n):
            if l == r:
                continue
            t = (1 << r) | (1 << l)
            left = c[l] + p[l] * sol.values[sol.index(t, 1)] + (1.0 - p[l]) * sol.values[sol.index(t, 0)]
            cost = c[r] + p[r] * after_one + (1.0 - p[r]) * left
            rows.append(PinnedTree(r, l, float(cost)))
    return rows
