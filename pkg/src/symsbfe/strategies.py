"""Adaptive evaluation strategies.

Every strategy is driven through the same stepping interface: a
:class:`Strategy` is prepared once per (instance, value vector) and hands
out :class:`Session` objects.  A session reports the next move with
:meth:`Session.step` (either ``Test(i)`` or ``Done(value)``) and is fed
outcomes through :meth:`Session.observe`.  Sessions can be forked, which
is how decision trees are materialized.

Step functions such as :func:`sbbd_step` are pure: they look only at the
partial assignment they are given.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, replace
from typing import Sequence, Union

from .core import Instance, InstanceError, PartialAssignment, ValueVector, is_certificate

STRATEGY_NAMES = ("or", "and", "sbbd", "exactk", "b1", "b1-binsearch", "greedy", "opt")


class StrategyError(RuntimeError):
    """A strategy cannot run on this input, or misbehaved while running."""


@dataclass(frozen=True)
class Test:
    index: int


@dataclass(frozen=True)
class Done:
    value: int


Step = Union[Test, Done]


def ratio_order_or(inst: Instance) -> list[int]:
    """Variables by nondecreasing ``c_i / p_i``; ties by index."""
    return list(inst.order_or)


def ratio_order_and(inst: Instance) -> list[int]:
    """Variables by nondecreasing ``c_i / (1 - p_i)``; ties by index."""
    return list(inst.order_and)


def _pick(first: Sequence[int], first_len: int, second: Sequence[int], second_len: int) -> int:
    window = set(second[:second_len])
    for i in first[:first_len]:
        if i in window:
            return i
    raise StrategyError(
        f"empty window intersection ({first_len} of {len(first)}, {second_len} of {len(second)})"
    )


def sbbd_step(k: int, b: PartialAssignment, inst: Instance) -> Step:
    """Next move of the k-of-n algorithm on the untested variables of ``b``.

    ``k`` is the number of 1s still needed among the untested variables.
    The test is taken from the first ``k`` variables of the ``c/p`` order
    and the first ``m - k + 1`` of the ``c/(1-p)`` order (``m`` untested);
    these windows always overlap.
    """
    m = len(b) - b.n_tested
    if k <= 0:
        return Done(1)
    if k > m:
        return Done(0)
    first = [i for i in inst.order_or if not b.is_tested(i)]
    second = [i for i in inst.order_and if not b.is_tested(i)]
    return Test(_pick(first, k, second, m - k + 1))


def exactly_k_step(k: int, b: PartialAssignment, inst: Instance) -> Step:
    """Next move for "exactly k of the untested variables are 1"."""
    m = len(b) - b.n_tested
    if k < 0 or k > m:
        return Done(0)
    if m == 0:
        return Done(1)
    first = [i for i in inst.order_or if not b.is_tested(i)]
    second = [i for i in inst.order_and if not b.is_tested(i)]
    return Test(_pick(first, min(k + 1, m), second, m - k + 1))


# -- threshold searches over the blocks -------------------------------------

@dataclass(frozen=True)
class BlockSearchState:
    """Bookkeeping for the block-by-block strategies.

    ``lo``/``hi`` bound the block index being searched for (sequential
    search only moves ``lo``).  ``local`` holds the outcomes consumed by the
    threshold run in progress; outcomes already in the global assignment are
    replayed into it instead of being tested again.
    """

    lo: int
    hi: int
    local: PartialAssignment
    results: tuple[tuple[int, int], ...] = ()
    probes: int = 0
    probing: bool = False

    @classmethod
    def initial(cls, R: ValueVector) -> BlockSearchState:
        return cls(lo=1, hi=R.B, local=PartialAssignment.empty(R.n))


def _threshold_run(k: int, local: PartialAssignment, b: PartialAssignment, inst: Instance):
    while True:
        step = sbbd_step(k - local.n1, local, inst)
        if isinstance(step, Done) or not b.is_tested(step.index):
            return step, local
        local = local.assign(step.index, b[step.index])


def _block_search(R, state, b, inst, next_probe, early_exit):
    if early_exit:
        done, value = is_certificate(b, R)
        if done:
            return Done(value), state
    while True:
        probe = next_probe(state)
        if probe is None:
            return Done(R[R.alphas[state.lo - 1]]), state
        if not state.probing:
            state = replace(state, probing=True, probes=state.probes + 1)
        step, local = _threshold_run(R.alphas[probe - 1], state.local, b, inst)
        if isinstance(step, Test):
            return step, replace(state, local=local)
        if step.value:
            lo, hi = probe, state.hi
        else:
            lo, hi = state.lo, probe - 1
        state = replace(
            state,
            lo=lo,
            hi=hi,
            local=PartialAssignment.empty(R.n),
            results=state.results + ((probe, step.value),),
            probing=False,
        )


def b_minus_1_step(R: ValueVector, state: BlockSearchState, b: PartialAssignment, inst: Instance,
                   early_exit: bool = True):
    """One move of the sequential block search; returns ``(step, new_state)``.

    The thresholds ``alpha_2 .. alpha_B`` are evaluated in turn with the
    k-of-n algorithm.  Afterwards the answer is ``R[alpha_{i*}]`` where
    ``i*`` is the largest block whose threshold is met (1 if none).  With
    ``early_exit`` the search stops as soon as ``b`` is a certificate.
    """
    def next_probe(st):
        i = len(st.results) + 2
        if i > R.B:
            return None
        return i

    step, state = _block_search(R, state, b, inst, next_probe, early_exit)
    if isinstance(step, Done) and len(state.results) == R.B - 1:
        met = [i for i, v in state.results if v]
        i_star = max(met, default=1)
        step = Done(R[R.alphas[i_star - 1]])
    return step, state


def b_binary_search_step(R: ValueVector, state: BlockSearchState, b: PartialAssignment,
                         inst: Instance, early_exit: bool = True):
    """Like :func:`b_minus_1_step` but binary-searches for the block index."""
    def next_probe(st):
        if st.lo >= st.hi:
            return None
        return (st.lo + st.hi + 1) // 2

    return _block_search(R, state, b, inst, next_probe, early_exit)


# -- sessions ----------------------------------------------------------------

class Session:
    """A single evaluation in progress."""

    def __init__(self, strategy: Strategy):
        self.strategy = strategy
        self.b = PartialAssignment.empty(strategy.inst.n)

    def step(self) -> Step:
        raise NotImplementedError

    def observe(self, i: int, bit: int) -> None:
        self.b = self.b.assign(i, bit)

    def fork(self) -> Session:
        # session state is immutable values only, a shallow copy is enough
        return copy.copy(self)


class Strategy:
    """Per-instance preparation shared by all sessions of one strategy."""

    name = "?"
    session_class = Session

    def __init__(self, inst: Instance, R: ValueVector):
        if R.n != inst.n:
            raise InstanceError(
                f"value_vector: value vector must have n+1 entries ({inst.n + 1}), got {len(R)}"
            )
        self.inst = inst
        self.R = R

    def start(self) -> Session:
        return self.session_class(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r} n={self.inst.n} B={self.R.B}>"


class _OrderSession(Session):
    def __init__(self, strategy):
        super().__init__(strategy)
        self.pos = 0

    def step(self):
        done, value = is_certificate(self.b, self.strategy.R)
        if done:
            return Done(value)
        order = self.strategy.order
        while self.b.is_tested(order[self.pos]):
            self.pos += 1
        return Test(order[self.pos])


class RatioOrderStrategy(Strategy):
    """Fixed test order, stopping as soon as the outcomes form a certificate."""

    session_class = _OrderSession

    def __init__(self, inst, R, order: Sequence[int], name: str = "order"):
        super().__init__(inst, R)
        if sorted(order) != list(range(inst.n)):
            raise StrategyError(f"not a permutation of the {inst.n} variables: {order!r}")
        self.order = tuple(order)
        self.name = name


def or_strategy(inst, R):
    return RatioOrderStrategy(inst, R, inst.order_or, "or")


def and_strategy(inst, R):
    return RatioOrderStrategy(inst, R, inst.order_and, "and")


class _KOfNSession(Session):
    def step(self):
        s = self.strategy
        if s.k is None:
            return Done(s.R[0])
        step = sbbd_step(s.k - self.b.n1, self.b, s.inst)
        if isinstance(step, Done):
            return Done(s.R[s.k] if step.value else s.R[0])
        return step


class KOfNStrategy(Strategy):
    """The k-of-n algorithm; also accepts negated k-of-n vectors."""

    name = "sbbd"
    session_class = _KOfNSession

    def __init__(self, inst, R):
        super().__init__(inst, R)
        if R.B > 2:
            raise StrategyError(f"sbbd needs a k-of-n value vector or its negation, got B={R.B}")
        self.k = R.k_of_n_threshold()


class _ExactlyKSession(Session):
    def step(self):
        s = self.strategy
        step = exactly_k_step(s.k - self.b.n1, self.b, s.inst)
        if isinstance(step, Done):
            return Done(s.R[s.k] if step.value else 1 - s.R[s.k])
        return step


class ExactlyKStrategy(Strategy):
    """Exactly-k functions (a single odd entry in R) and their negations."""

    name = "exactk"
    session_class = _ExactlyKSession

    def __init__(self, inst, R):
        super().__init__(inst, R)
        k = R.exactly_k_target()
        if k is None:
            raise StrategyError(
                f"exactk needs a value vector with exactly one odd entry, got {list(R.entries)}"
            )
        self.k = k


class _BlockSearchSession(Session):
    def __init__(self, strategy):
        super().__init__(strategy)
        self.state = BlockSearchState.initial(strategy.R)

    def step(self):
        s = self.strategy
        step, self.state = s.step_function(s.R, self.state, self.b, s.inst, s.early_exit)
        return step

    @property
    def probes(self) -> int:
        """Number of threshold runs started so far."""
        return self.state.probes


class SequentialBlocksStrategy(Strategy):
    """One k-of-n run per block boundary, outcomes shared between runs.

    ``early_exit=False`` runs every threshold to completion even when the
    outcomes seen so far already determine f.
    """

    name = "b1"
    session_class = _BlockSearchSession
    step_function = staticmethod(b_minus_1_step)

    def __init__(self, inst, R, early_exit: bool = True):
        super().__init__(inst, R)
        self.early_exit = early_exit


class BinarySearchBlocksStrategy(SequentialBlocksStrategy):
    name = "b1-binsearch"
    step_function = staticmethod(b_binary_search_step)


@dataclass
class RunResult:
    value: int
    tests: list[int]
    cost: float


def run(strategy: Strategy, x: Sequence[int]) -> RunResult:
    """Evaluate on the full assignment ``x``, checking the protocol as it goes."""
    n = strategy.inst.n
    if len(x) != n:
        raise InstanceError(f"assignment has {len(x)} entries, instance has n={n}")
    session = strategy.start()
    tests: list[int] = []
    cost = 0.0
    while True:
        step = session.step()
        if isinstance(step, Done):
            return RunResult(step.value, tests, cost)
        i = step.index
        if not 0 <= i < n:
            raise StrategyError(f"{strategy.name}: test index {i} out of range on x={tuple(x)}")
        if session.b.is_tested(i):
            raise StrategyError(f"{strategy.name}: repeated test of x{i + 1} on x={tuple(x)}")
        tests.append(i)
        cost += strategy.inst.costs[i]
        session.observe(i, x[i])
