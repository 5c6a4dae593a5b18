import itertools

import numpy as np
import pytest

from autopt.autgroup import automorphism_group
from autopt.codes import builtin
from autopt.logical import conjugate_automorphism, logical_action
from autopt.monomial import MonomialOp, random_op, swap_count
from autopt.optimizer import (METRIC1, METRIC2, Metric, OptimizeError, brute_min_cliffords,
                              brute_oracle, candidates, canonical_form, classify_automorphisms,
                              conjugator_to, full_table,
                              min_cliffords_over_conjugation, optimize, signature, verify_result)

from conftest import CAL_L


def test_metric_numbers(pi46):
    assert METRIC1.cost(pi46) == 25
    assert METRIC2.cost(pi46) == 4
    assert METRIC1.cost(MonomialOp.from_perm([2, 1, 3, 4], ["I", "I", "HSH", "HSH"])) == 9
    assert Metric.number(1, swap_weight=3).swap_weight == 3
    with pytest.raises(ValueError):
        Metric.number(3)
    with pytest.raises(ValueError):
        Metric("controlled_clifford", -1)


def test_min_cliffords_examples(pi46):
    # one 4-cycle whose ordered product is HSH^4 = I
    assert min_cliffords_over_conjugation(pi46) == 0
    assert min_cliffords_over_conjugation(MonomialOp.identity(3)) == 0
    assert min_cliffords_over_conjugation(MonomialOp.from_perm([1, 2], ["H", "SH"])) == 2
    assert min_cliffords_over_conjugation(MonomialOp.from_perm([2, 1], ["H", "H"])) == 0
    assert min_cliffords_over_conjugation(MonomialOp.from_perm([2, 1], ["H", "S"])) == 1


def test_min_cliffords_vs_brute_exhaustive_n2():
    for perm in itertools.permutations(range(2)):
        for rho in itertools.product(range(6), repeat=2):
            op = MonomialOp(perm, rho)
            assert min_cliffords_over_conjugation(op) == brute_min_cliffords(op)


def test_min_cliffords_vs_brute_random(rng):
    for _ in range(100):
        op = random_op(int(rng.integers(1, 5)), rng)
        assert min_cliffords_over_conjugation(op) == brute_min_cliffords(op)


def test_canonical_form_and_conjugator(rng):
    for _ in range(300):
        op = random_op(int(rng.integers(1, 8)), rng)
        c = canonical_form(op)
        assert signature(c) == signature(op)
        assert METRIC2.cost(c) == min_cliffords_over_conjugation(op)
        assert swap_count(c) == swap_count(op)
        g = conjugator_to(op, c)
        assert conjugate_automorphism(g, op) == c
    assert canonical_form(MonomialOp.identity(3)) == MonomialOp.identity(3)


def test_conjugator_rejects_other_signature():
    a = MonomialOp.from_perm([2, 1], ["I", "I"])
    b = MonomialOp.from_perm([2, 1], ["H", "I"])
    with pytest.raises(OptimizeError):
        conjugator_to(a, b)


def test_classify_422(c422):
    groups = classify_automorphisms(c422)
    assert {c: len(v) for c, v in groups.items()} == {1: 4, 2: 24, 4: 16, 5: 16, 6: 36, 9: 48}


def test_levels_class6(c422, pi46, pi30):
    fixed = candidates(c422, 6, METRIC1, "fixed", target=CAL_L)
    assert (25, pi46) in fixed
    assert min(c for c, _ in fixed) == 11
    basis = candidates(c422, 6, METRIC1, "basis")
    assert (11, pi30) in basis and min(c for c, _ in basis) == 11
    full = candidates(c422, 6, METRIC1, "full")
    assert (9, pi30) in full and min(c for c, _ in full) == 9


def test_fixed_needs_target(c422):
    with pytest.raises(ValueError):
        candidates(c422, 6, METRIC1, "fixed")
    with pytest.raises(ValueError):
        candidates(c422, 6, METRIC1, "sideways")
    with pytest.raises(OptimizeError):
        optimize(c422, 3, METRIC1)


@pytest.mark.parametrize("level,cost", [("fixed", 11), ("basis", 11), ("full", 9)])
def test_optimize_levels(c422, level, cost):
    target = CAL_L if level == "fixed" else None
    res = optimize(c422, 6, METRIC1, level=level, target=target)
    assert res.cost == cost and res.cls == 6
    assert res.exhaustive and not res.upper_bound
    act = logical_action(res.circuit, res.code_out)
    assert np.array_equal(act.L, res.realized.L)


def test_optimize_deterministic(c422):
    a = optimize(c422, 9, METRIC1)
    b = optimize(c422, 9, METRIC1)
    assert a.circuit == b.circuit and a.tau == b.tau and np.array_equal(a.A, b.A)


def test_tampered_result_rejected(c422):
    res = optimize(c422, 6, METRIC1)
    res.cost += 1
    with pytest.raises(AssertionError):
        verify_result(res, metric=METRIC1)
    res.cost -= 1
    res.circuit = MonomialOp.identity(4)
    with pytest.raises(AssertionError):
        verify_result(res)


def test_identity_class_costs_zero(c422):
    assert optimize(c422, 1, METRIC1).cost == 0
    assert brute_oracle(c422, 1, METRIC1) == 0


@pytest.mark.parametrize("name", ["4_1_2", "4_2_2", "5_2_1"])
def test_metric2_not_above_metric1(name):
    c = builtin(name)
    aut = automorphism_group(c)
    one = {r.cls: r.cost for r in full_table(c, METRIC1, aut=aut)}
    two = {r.cls: r.cost for r in full_table(c, METRIC2, aut=aut)}
    assert one.keys() == two.keys()
    assert all(two[c] <= one[c] for c in one)


def test_swap_weight_changes_table(c422):
    aut = automorphism_group(c422)
    for w in (0, 1, 7, 20):
        m = Metric("controlled_clifford", w)
        for res in full_table(c422, m, aut=aut, cross_check=True):
            assert res.cost == brute_oracle(c422, res.cls, m, aut)


def test_include_identity(c422):
    rows = full_table(c422, METRIC1, include_identity=True)
    assert rows[0].cls == 1 and rows[0].cost == 0


def test_sampled_path_n7():
    c = builtin("7_1_3")
    res = optimize(c, 3, METRIC1, cross_check=False, samples=200)
    assert res.cost == 7 and not res.exhaustive
