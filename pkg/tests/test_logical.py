import numpy as np
import pytest

from autopt.autgroup import automorphism_group, code_orbit, is_automorphism
from autopt.codes import FIXTURES, CodeError, builtin, validate
from autopt.gf4 import format_gf4, inv2, matmul2
from autopt.logical import (NotAnAutomorphism, basis_change, conjugate_automorphism,
                            logical_action, logical_matrix, transform_code)
from autopt.monomial import MonomialOp, compose, random_op
from autopt.symplectic import class_of, conjugate_by, enumerate_sp

from conftest import A_ANTI, CAL_L, L_PI30

WORKED_L = [[1, 1, 1, 1], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 1, 1]]


def test_worked_example_trace():
    c = builtin("4_2_2.m1c6")
    pi = MonomialOp.from_perm([2, 1, 3, 4], ["I", "I", "HSH", "HSH"])
    act = logical_action(pi, c)
    assert act.L.tolist() == WORKED_L


def test_identity_action(c422):
    act = logical_action(MonomialOp.identity(4), c422)
    assert np.array_equal(act.L, np.eye(4)) and act.cls == 1


def test_pi46_and_pi30(c422, pi46, pi30):
    assert np.array_equal(logical_action(pi46, c422).L, CAL_L)
    act = logical_action(pi30, c422)
    assert np.array_equal(act.L, L_PI30) and act.cls == 6


def test_not_an_automorphism(c422):
    with pytest.raises(NotAnAutomorphism):
        logical_action(MonomialOp.local(4, 0, "H"), c422)


def test_basis_change_worked(c422):
    out = basis_change(c422, A_ANTI)
    assert format_gf4(out.B) == ["1 0 1 0", "w 0 w 0", "w w 0 0", "1 1 0 0"]
    assert np.array_equal(basis_change(c422, np.eye(4, dtype=np.uint8)).B, c422.B)
    with pytest.raises(CodeError):
        basis_change(c422, np.ones((4, 4), np.uint8))


def test_transform_worked(c422):
    tau = MonomialOp.local(4, 0, "HSH")
    out = transform_code(basis_change(c422, A_ANTI), tau)
    assert format_gf4(out.G) == ["1 1 1 1", "W w w w"]
    assert [r.split()[0] for r in format_gf4(out.B)] == ["1", "W", "W", "1"]
    assert transform_code(c422, MonomialOp.identity(4)) == c422


def test_conjugate_worked(c422, pi30):
    tau = MonomialOp.local(4, 0, "HSH")
    p = conjugate_automorphism(tau, pi30)
    assert p == MonomialOp.from_perm([2, 1, 3, 4], ["I", "I", "HSH", "HSH"])
    code = transform_code(basis_change(c422, A_ANTI), tau)
    assert np.array_equal(logical_action(p, code).L, CAL_L)
    assert conjugate_automorphism(MonomialOp.identity(4), pi30) == pi30


def test_basis_change_conjugates_all_A(c422, pi30):
    L = logical_matrix(pi30, c422)
    for A in enumerate_sp(2).elements:
        got = logical_action(pi30, basis_change(c422, A)).L
        assert np.array_equal(got, conjugate_by(L, A))
        assert np.array_equal(got, matmul2(matmul2(inv2(A).T, L), A.T))


def test_basis_changes_fill_class(c422, pi30):
    G = enumerate_sp(2)
    seen = {logical_action(pi30, basis_change(c422, A)).L.tobytes() for A in G.elements}
    cls6 = {M.tobytes() for M in G.elements if class_of(M) == 6}
    assert seen == cls6


def test_equivalence_invariance_exhaustive_422(c422):
    aut = automorphism_group(c422).elements
    base = {pi: logical_matrix(pi, c422, check=False) for pi in aut}
    for tau in code_orbit(c422):
        code = transform_code(c422, tau)
        for pi in aut:
            got = logical_matrix(conjugate_automorphism(tau, pi), code)
            assert np.array_equal(got, base[pi])


@pytest.mark.parametrize("name", FIXTURES)
def test_random_transforms_valid(name, rng):
    c = builtin(name)
    for _ in range(1000):
        validate(transform_code(c, random_op(c.n, rng)))


@pytest.mark.parametrize("name", ["4_2_2", "5_1_3", "6_1_3", "7_1_3"])
def test_conjugated_automorphisms(name, rng):
    c = builtin(name)
    aut = automorphism_group(c).elements
    for _ in range(1000 if c.n <= 5 else 200):
        pi = aut[rng.integers(len(aut))]
        tau = random_op(c.n, rng)
        assert is_automorphism(conjugate_automorphism(tau, pi), transform_code(c, tau))


def test_action_is_homomorphism(rng):
    for name in ("4_2_2", "5_2_2", "5_1_3"):
        c = builtin(name)
        aut = automorphism_group(c).elements
        for _ in range(200):
            a, b = aut[rng.integers(len(aut))], aut[rng.integers(len(aut))]
            La, Lb = logical_matrix(a, c), logical_matrix(b, c)
            Lab = logical_matrix(compose(a, b), c)
            assert np.array_equal(Lab, matmul2(La, Lb))
