import numpy as np
import pytest

from autopt.gf4 import inv2, is_symplectic, matmul2
from autopt.symplectic import (REP_SIZES, GroupError, class_of, conjugacy_classes, conjugate_by,
                               enumerate_sp, find_conjugator, group_order, pack, rep_matrix,
                               transvections, unpack)

from conftest import A_ANTI, CAL_L, L_PI30


def test_orders():
    assert enumerate_sp(1).order == 6
    assert enumerate_sp(2).order == 720
    assert group_order(3) == 1451520
    with pytest.raises(GroupError):
        enumerate_sp(4)
    with pytest.raises(GroupError):
        enumerate_sp(3)


@pytest.mark.parametrize("k", [1, 2])
def test_class_sizes(k):
    G = enumerate_sp(k)
    sizes = tuple(G.class_sizes[c] for c in sorted(G.class_sizes))
    assert sizes == REP_SIZES[k]
    assert sum(sizes) == G.order
    assert all(is_symplectic(M) for M in G.elements)


def test_identity_is_class_one():
    for k in (1, 2):
        assert class_of(np.eye(2 * k, dtype=np.uint8)) == 1
        assert enumerate_sp(k).class_sizes[1] == 1


def test_k1_classes_by_local_name():
    from autopt.monomial import LOCAL_INDEX, LOCAL_MATRIX
    by = {n: class_of(LOCAL_MATRIX[LOCAL_INDEX[n]]) for n in ("I", "H", "S", "HSH", "SH", "HS")}
    assert by == {"I": 1, "H": 3, "S": 3, "HSH": 3, "SH": 2, "HS": 2}


def test_tabulated_representatives_located():
    G = enumerate_sp(2)
    labels = set()
    for label in range(1, 12):
        R = G.representative(label)
        assert is_symplectic(R)
        assert class_of(R) == label
        labels.add(label)
    assert labels == set(range(1, 12))
    # two printed matrices are not symplectic and are placed by class size
    assert G.placed_by_size == (3, 4)
    assert not is_symplectic(rep_matrix(2, 3))
    assert not is_symplectic(rep_matrix(2, 4))


def test_transpose_stays_in_class():
    for k in (1, 2):
        G = enumerate_sp(k)
        for M in G.elements:
            assert class_of(M.T.copy()) == class_of(M)


def test_conjugation_invariance(rng):
    G = enumerate_sp(2)
    E = G.elements
    for _ in range(1000):
        g, L = E[rng.integers(720)], E[rng.integers(720)]
        assert class_of(matmul2(matmul2(inv2(g), L), g)) == class_of(L)


def test_worked_example_classes():
    assert class_of(CAL_L) == 6
    assert class_of(L_PI30) == 6
    assert class_of(np.array([[1, 1], [0, 1]], np.uint8)) == 3


def test_find_conjugator():
    A = find_conjugator(L_PI30, CAL_L)
    assert A is not None and is_symplectic(A)
    assert np.array_equal(conjugate_by(L_PI30, A), CAL_L)
    assert np.array_equal(conjugate_by(L_PI30, A_ANTI), CAL_L)
    I = np.eye(4, dtype=np.uint8)
    assert np.array_equal(conjugate_by(I, find_conjugator(I, I)), I)
    assert find_conjugator(rep_matrix(1, 2), rep_matrix(1, 3)) is None


def test_find_conjugator_all_pairs_k1():
    G = enumerate_sp(1)
    for L1 in G.elements:
        for L2 in G.elements:
            A = find_conjugator(L1, L2)
            if class_of(L1) == class_of(L2):
                assert np.array_equal(conjugate_by(L1, A), L2)
            else:
                assert A is None


def test_non_symplectic_rejected():
    with pytest.raises(GroupError):
        class_of(np.array([[1, 1], [1, 1]], np.uint8))


def test_pack_round_trip(rng):
    for _ in range(50):
        M = rng.integers(0, 2, (4, 4)).astype(np.uint8)
        assert np.array_equal(unpack(pack(M), 4), M)


def test_transvections_symplectic():
    for k in (1, 2):
        Ts = transvections(k)
        assert len(Ts) == 4 ** k - 1
        assert all(is_symplectic(T) for T in Ts)


def test_conjugacy_classes_partition():
    G = enumerate_sp(2)
    parts = conjugacy_classes(G)
    allkeys = np.concatenate(list(parts.values()))
    assert len(allkeys) == 720 and len(np.unique(allkeys)) == 720


@pytest.mark.slow
def test_sp6_order_and_class_count():
    G = enumerate_sp(3, allow_k3=True)
    assert G.order == 1451520
    assert sum(G.class_sizes.values()) == G.order
    assert len(G.class_sizes) == 30
