import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symsbfe.core import Instance, PartialAssignment, ValueVector, all_assignments, evaluate
from symsbfe.oracle import make_strategy, opt_expected_cost, strategy_expected_cost
from symsbfe.strategies import (
    STRATEGY_NAMES,
    BinarySearchBlocksStrategy,
    BlockSearchState,
    Done,
    ExactlyKStrategy,
    KOfNStrategy,
    SequentialBlocksStrategy,
    StrategyError,
    Test as Probe,
    b_minus_1_step,
    exactly_k_step,
    ratio_order_and,
    ratio_order_or,
    run,
    sbbd_step,
)

from conftest import random_instance, random_vector


class TestOrders:
    def test_reference_or(self, ref):
        inst, _ = ref
        assert ratio_order_or(inst) == [2, 3, 1, 0]

    def test_reference_and(self, ref):
        inst, _ = ref
        assert ratio_order_and(inst) == [0, 1, 3, 2]

    def test_ties_keep_index_order(self):
        inst = Instance((1.0,) * 4, (0.5,) * 4)
        assert ratio_order_or(inst) == [0, 1, 2, 3]
        assert ratio_order_and(inst) == [0, 1, 2, 3]

    def test_small(self):
        assert ratio_order_or(Instance((1.0, 4.0), (0.5, 0.5))) == [0, 1]
        assert ratio_order_and(Instance((3.0, 1.0, 2.0), (0.4,) * 3)) == [1, 2, 0]
        assert ratio_order_and(Instance((1.0,), (0.3,))) == [0]


class TestSBBDStep:
    def test_reference_k2(self, ref):
        inst, _ = ref
        assert sbbd_step(2, PartialAssignment.empty(4), inst) == Probe(3)

    def test_base_cases(self, ref):
        inst, _ = ref
        assert sbbd_step(0, PartialAssignment.parse("1***"), inst) == Done(1)
        assert sbbd_step(3, PartialAssignment.parse("10**"), inst) == Done(0)

    @given(st.integers(1, 8), st.data())
    def test_windows_always_intersect(self, n, data):
        rnd = random.Random(data.draw(st.integers(0, 10 ** 6)))
        inst = random_instance(rnd, n)
        slots = tuple(data.draw(st.sampled_from((0, 1, 2))) for _ in range(n))
        b = PartialAssignment(slots)
        m = n - b.n_tested
        for k in range(1, m + 1):
            step = sbbd_step(k, b, inst)
            assert isinstance(step, Probe)
            i = step.index
            assert not b.is_tested(i)
            first = [j for j in inst.order_or if not b.is_tested(j)][:k]
            second = [j for j in inst.order_and if not b.is_tested(j)][:m - k + 1]
            assert i in first and i in second


class TestExactlyKStep:
    def test_negative_k(self):
        inst = Instance((1.0, 1.0), (0.5, 0.5))
        assert exactly_k_step(-1, PartialAssignment.empty(2), inst) == Done(0)

    def test_single_variable(self):
        inst = Instance((1.0,), (0.5,))
        assert exactly_k_step(1, PartialAssignment.empty(1), inst) == Probe(0)

    def test_forced_endgame(self):
        inst = Instance((1.0, 2.0, 3.0), (0.5, 0.5, 0.5))
        R = ValueVector.exactly_k(3, 3)
        b = PartialAssignment.parse("11*")
        assert exactly_k_step(3 - b.n1, b, inst) == Probe(2)
        for bit, want in ((1, 1), (0, 0)):
            after = b.assign(2, bit)
            assert exactly_k_step(3 - after.n1, after, inst) == Done(want)
            assert evaluate(after.slots, R) == want


def _drive(step_fn, R, inst, x, **kw):
    state = BlockSearchState.initial(R)
    b = PartialAssignment.empty(R.n)
    while True:
        step, state = step_fn(R, state, b, inst, **kw)
        if isinstance(step, Done):
            return step.value, state
        b = b.assign(step.index, x[step.index])


class TestBlockSearch:
    def test_one_one(self, ref):
        inst, R = ref
        value, state = _drive(b_minus_1_step, R, inst, (1, 0, 0, 0), early_exit=False)
        assert state.results == ((2, 1), (3, 0))
        assert value == 1

    def test_all_ones(self, ref):
        inst, R = ref
        value, state = _drive(b_minus_1_step, R, inst, (1, 1, 1, 1), early_exit=False)
        assert state.results == ((2, 1), (3, 1))
        assert value == 0

    def test_two_blocks_single_run(self):
        rng = random.Random(5)
        for n in range(1, 6):
            for k in range(1, n + 1):
                inst = random_instance(rng, n)
                R = ValueVector.k_of_n(n, k)
                b1 = SequentialBlocksStrategy(inst, R)
                sb = KOfNStrategy(inst, R)
                for x in all_assignments(n):
                    r = run(b1, x)
                    assert r.value == run(sb, x).value == evaluate(x, R)
                    assert r.tests == run(sb, x).tests

    def test_binary_search_equals_sequential_when_two_blocks(self):
        rng = random.Random(11)
        for n in range(1, 6):
            k = rng.randint(1, n)
            for R in (ValueVector.k_of_n(n, k), ValueVector(tuple(1 - r for r in ValueVector.k_of_n(n, k).entries))):
                inst = random_instance(rng, n)
                seq = SequentialBlocksStrategy(inst, R)
                bs = BinarySearchBlocksStrategy(inst, R)
                for x in all_assignments(n):
                    assert run(seq, x).tests == run(bs, x).tests

    def test_reference_probe_counts(self, ref):
        inst, R = ref
        for x in all_assignments(4):
            for cls in (SequentialBlocksStrategy, BinarySearchBlocksStrategy):
                s = cls(inst, R, early_exit=False)
                sess = s.start()
                while True:
                    step = sess.step()
                    if isinstance(step, Done):
                        break
                    sess.observe(step.index, x[step.index])
                assert sess.probes <= 2

    def test_binary_search_probe_bound(self):
        # [0,1,0,1,0]: B = 5, so the search needs ceil(log2 5) = 3 probes
        # in the worst case against 4 for the sequential scan
        R = ValueVector((0, 1, 0, 1, 0))
        rng = random.Random(2)
        worst_bs = worst_seq = 0
        for _ in range(5):
            inst = random_instance(rng, 4)
            for x in all_assignments(4):
                for cls in (SequentialBlocksStrategy, BinarySearchBlocksStrategy):
                    sess = cls(inst, R, early_exit=False).start()
                    while not isinstance(step := sess.step(), Done):
                        sess.observe(step.index, x[step.index])
                    assert step.value == evaluate(x, R)
                    if cls is BinarySearchBlocksStrategy:
                        worst_bs = max(worst_bs, sess.probes)
                    else:
                        worst_seq = max(worst_seq, sess.probes)
        assert worst_bs <= math.ceil(math.log2(R.B))
        assert worst_seq == R.B - 1

    def test_memoized_outcomes_are_not_retested(self):
        rng = random.Random(9)
        for _ in range(40):
            n = rng.randint(2, 6)
            inst, R = random_instance(rng, n), random_vector(rng, n)
            for cls in (SequentialBlocksStrategy, BinarySearchBlocksStrategy):
                for early in (True, False):
                    s = cls(inst, R, early_exit=early)
                    for x in all_assignments(n):
                        r = run(s, x)  # run raises on a repeated test
                        assert r.value == evaluate(x, R)


class TestStrategyRestrictions:
    def test_sbbd_rejects_three_blocks(self, ref):
        inst, R = ref
        with pytest.raises(StrategyError, match="B=3"):
            KOfNStrategy(inst, R)

    def test_exactk_rejects_non_exactk(self, ref):
        inst, R = ref
        with pytest.raises(StrategyError):
            ExactlyKStrategy(inst, R)

    def test_constant_function_needs_no_tests(self):
        inst = Instance((1.0, 2.0, 3.0), (0.5, 0.5, 0.5))
        R = ValueVector((1, 1, 1, 1))
        for name in ("or", "and", "sbbd", "b1", "b1-binsearch", "greedy", "opt"):
            r = run(make_strategy(name, inst, R), (0, 1, 0))
            assert r.value == 1 and r.tests == []

    def test_unknown_name(self, ref):
        inst, R = ref
        with pytest.raises(StrategyError, match="unknown strategy"):
            make_strategy("nope", inst, R)


def _applicable(name, R):
    if name == "sbbd":
        return R.B <= 2
    if name == "exactk":
        return R.exactly_k_target() is not None
    return True


@pytest.mark.parametrize("n", range(1, 7))
def test_all_strategies_correct_and_terminate(n):
    rng = random.Random(500 + n)
    for _ in range(6 if n < 6 else 3):
        inst, R = random_instance(rng, n), random_vector(rng, n)
        for name in STRATEGY_NAMES:
            if not _applicable(name, R):
                continue
            s = make_strategy(name, inst, R)
            for x in all_assignments(n):
                r = run(s, x)
                assert r.value == evaluate(x, R), (name, R, x)
                assert len(r.tests) <= n


@pytest.mark.parametrize("n", range(1, 7))
def test_sbbd_and_exactk_optimal(n):
    rng = random.Random(900 + n)
    for _ in range(10):
        inst = random_instance(rng, n)
        k = rng.randint(1, n)
        for R in (ValueVector.k_of_n(n, k), ValueVector.exactly_k(n, rng.randint(0, n))):
            name = "sbbd" if R.B <= 2 else "exactk"
            cost = strategy_expected_cost(name, inst, R).expected_cost
            opt = opt_expected_cost(inst, R)[0]
            assert cost == pytest.approx(opt, rel=1e-9)
        neg = ValueVector(tuple(1 - r for r in ValueVector.k_of_n(n, k).entries))
        assert strategy_expected_cost("sbbd", inst, neg).expected_cost == pytest.approx(
            opt_expected_cost(inst, neg)[0], rel=1e-9)


@pytest.mark.parametrize("n", range(2, 7))
def test_b1_within_b_minus_1(n):
    rng = random.Random(1300 + n)
    for _ in range(8):
        inst, R = random_instance(rng, n), random_vector(rng, n)
        if R.B < 2:
            continue
        opt = opt_expected_cost(inst, R)[0]
        for name in ("b1", "b1-binsearch"):
            cost = strategy_expected_cost(name, inst, R).expected_cost
            assert cost / opt <= R.B - 1 + 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2 ** 32 - 1))
def test_sbbd_tree_valid(n, seed):
    rnd = random.Random(seed)
    inst = random_instance(rnd, n)
    k = rnd.randint(0, n + 1)
    b = PartialAssignment.empty(n)
    x = [rnd.randint(0, 1) for _ in range(n)]
    # walk one path, checking every pick lies in both windows
    while True:
        step = sbbd_step(k - b.n1, b, inst)
        if isinstance(step, Done):
            assert step.value == int(sum(x) >= k)
            break
        b = b.assign(step.index, x[step.index])
