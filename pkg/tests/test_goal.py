import itertools
import math
import random

import pytest

from symsbfe.core import Instance, PartialAssignment, ValueVector, is_certificate, iter_value_vectors
from symsbfe.goal import (
    GoalFunction,
    build_goal_graph,
    g_value,
    greedy_step,
    parity_goal_value,
    parity_utility,
)
from symsbfe.oracle import materialize_tree, Node
from symsbfe.strategies import Done, Test as Probe, run

from oracles import naive_edge_total, naive_goal_value

REF_R = ValueVector((0, 1, 1, 0, 0))


class TestGoalValue:
    def test_reference(self):
        assert build_goal_graph(REF_R).Q == 8

    @pytest.mark.parametrize("n", [1, 2, 4, 7])
    def test_parity(self, n):
        assert build_goal_graph(ValueVector.parity(n)).Q == n * (n + 1) // 2

    def test_constant(self):
        assert build_goal_graph(ValueVector((0, 0, 0))).Q == 0

    @pytest.mark.parametrize("n", range(1, 8))
    def test_matches_pair_count(self, n):
        for R in iter_value_vectors(n):
            assert build_goal_graph(R).Q == naive_edge_total(R.entries)

    def test_vertex_blocks(self):
        g = build_goal_graph(REF_R)
        assert g.vertex_count == 5
        assert g.block_of_vertex == (1, 2, 2, 3, 3)


class TestGValue:
    gf = GoalFunction.for_function(REF_R)

    @pytest.mark.parametrize("b, want", [("****", 0), ("1***", 4), ("111*", 8)])
    def test_examples(self, b, want):
        assert g_value(PartialAssignment.parse(b), self.gf) == want

    def test_full_value_is_certificate(self):
        b = PartialAssignment.parse("111*")
        assert self.gf(b) == self.gf.Q and is_certificate(b, REF_R)[0]

    @pytest.mark.parametrize("n", range(1, 6))
    def test_fast_matches_naive(self, n):
        for R in iter_value_vectors(n):
            gf = GoalFunction.for_function(R)
            for code in range(3 ** n):
                b = PartialAssignment.from_base3(code, n)
                assert gf(b) == naive_goal_value(b.slots, R.entries)


def _states(n):
    return [PartialAssignment.from_base3(c, n) for c in range(3 ** n)]


@pytest.mark.parametrize("n", range(1, 5))
def test_monotone_submodular_and_goal(n):
    states = _states(n)
    for R in iter_value_vectors(n):
        gf = GoalFunction.for_function(R)
        g = {b.slots: gf(b) for b in states}
        assert g[(2,) * n] == 0
        for b in states:
            assert (g[b.slots] == gf.Q) == is_certificate(b, R)[0]
            for i in b.untested():
                for bit in (0, 1):
                    assert g[b.assign(i, bit).slots] >= g[b.slots]
        # submodularity: for b ⪯ b' and i untested in b', gains shrink
        for b in states:
            for bp in states:
                if not bp.extends(b):
                    continue
                for i in bp.untested():
                    for bit in (0, 1):
                        gain = g[b.assign(i, bit).slots] - g[b.slots]
                        gain_p = g[bp.assign(i, bit).slots] - g[bp.slots]
                        assert gain >= gain_p


def test_q_bounded_by_parity():
    for n in range(1, 9):
        bound = n * (n + 1) // 2
        assert max(build_goal_graph(R).Q for R in iter_value_vectors(n)) == bound


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_majority_goal_value(n):
    R = ValueVector.k_of_n(n, n // 2)
    h = n // 2
    assert build_goal_graph(R).Q == h * (h + 1)


class TestGreedy:
    def test_reference_first_test(self, ref):
        inst, R = ref
        gf = GoalFunction.for_function(R)
        assert greedy_step(PartialAssignment.empty(4), gf, inst) == Probe(2)

    def test_reference_scores(self, ref):
        inst, R = ref
        gf = GoalFunction.for_function(R)
        b = PartialAssignment.empty(4)
        assert gf.window_value(1, 4) - gf(b) == 4
        assert gf.window_value(0, 3) - gf(b) == 3
        scores = [(3 + p) / c for p, c in zip(inst.probs, inst.costs)]
        assert scores.index(max(scores)) == 2

    def test_constant_done(self):
        gf = GoalFunction.for_function(ValueVector((1, 1, 1)))
        inst = Instance((1.0, 1.0), (0.5, 0.5))
        assert greedy_step(PartialAssignment.empty(2), gf, inst) == Done(1)

    def test_single_variable(self):
        inst = Instance((2.0,), (0.3,))
        R = ValueVector((0, 1))
        tree = materialize_tree("greedy", inst, R)
        assert isinstance(tree, Node) and tree.var == 0

    def test_reference_tree_root(self, ref):
        inst, R = ref
        assert materialize_tree("greedy", inst, R).var == 2

    def test_stops_exactly_at_goal(self):
        rng = random.Random(4)
        for _ in range(30):
            n = rng.randint(1, 6)
            R = ValueVector(tuple(rng.randint(0, 1) for _ in range(n + 1)))
            inst = Instance(tuple(rng.uniform(1, 5) for _ in range(n)),
                            tuple(rng.uniform(0.1, 0.9) for _ in range(n)))
            gf = GoalFunction.for_function(R)
            for code in range(3 ** n):
                b = PartialAssignment.from_base3(code, n)
                step = greedy_step(b, gf, inst)
                assert isinstance(step, Done) == (gf(b) == gf.Q)


class TestParity:
    def test_goal_value(self):
        assert parity_goal_value(4) == 4
        assert parity_goal_value(1) == 1
        assert parity_goal_value(ValueVector.parity(5, negate=True)) == 5
        assert build_goal_graph(ValueVector.parity(4)).Q == 10

    def test_rejects_non_parity(self):
        with pytest.raises(ValueError):
            parity_goal_value(REF_R)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_utility_is_goal_function(self, n):
        R = ValueVector.parity(n)
        for b in _states(n):
            u = parity_utility(b)
            assert (u == n) == is_certificate(b, R)[0]
            for i in b.untested():
                # modular: every test adds exactly one
                assert parity_utility(b.assign(i, 0)) == u + 1
