"""The binary symplectic group Sp(2k,2) and its conjugacy classes.

Matrices are packed into one integer per matrix: row ``i`` occupies bits
``2k*i .. 2k*i + 2k - 1`` and column ``j`` of that row is bit ``j``.
Right multiplication by a fixed matrix then acts row by row, so it is a
table lookup on the packed rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .gf4 import inv2, is_symplectic, matmul2, omega, rank2


class GroupError(ValueError):
    pass


# Class representatives, listed in label order. Labels are 1-based.
REPS = {
    1: (
        ("1", "10", "01"),
        ("2", "01", "11"),
        ("3", "01", "10"),
    ),
    2: (
        ("1", "1000", "0100", "0010", "0001"),
        ("2", "0001", "0010", "0100", "1000"),
        ("3", "0001", "0010", "0100", "1001"),
        ("4", "0001", "0011", "0110", "1000"),
        ("5", "0010", "0011", "1111", "0110"),
        ("6", "0001", "0011", "1100", "1000"),
        ("7", "0001", "0010", "0100", "1010"),
        ("8", "0001", "0011", "1101", "1000"),
        ("9", "0001", "0010", "0101", "1010"),
        ("10", "0001", "0011", "1100", "1011"),
        ("11", "0001", "0011", "1101", "1011"),
    ),
}
REP_SIZES = {
    1: (1, 2, 3),
    2: (1, 15, 15, 40, 40, 45, 90, 90, 120, 120, 144),
}


def rep_matrix(k: int, label: int) -> np.ndarray:
    """The tabulated representative of class ``label`` (k = 1, 2)."""
    if k not in REPS or not 1 <= label <= len(REPS[k]):
        raise GroupError(f"no tabulated class {label} for k={k}")
    rows = REPS[k][label - 1][1:]
    return np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)


def group_order(k: int) -> int:
    out = 2 ** (k * k)
    for i in range(1, k + 1):
        out *= 4 ** i - 1
    return out


# -- packing --------------------------------------------------------------


def pack(M) -> int:
    M = np.asarray(M, dtype=np.int64)
    m = M.shape[0]
    key = 0
    for i in range(m):
        for j in range(m):
            if M[i, j]:
                key |= 1 << (m * i + j)
    return key


def unpack(keys, m: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    bits = (keys[..., None] >> np.arange(m * m, dtype=np.int64)) & 1
    return bits.reshape(keys.shape + (m, m)).astype(np.uint8)


def _row_table(T: np.ndarray) -> np.ndarray:
    # table[r] = packed row vector r times T
    m = T.shape[0]
    rows = np.arange(1 << m, dtype=np.int64)
    bits = (rows[:, None] >> np.arange(m)) & 1
    prod = (bits @ T.astype(np.int64)) % 2
    return (prod << np.arange(m)).sum(axis=1)


def _right_mul(keys: np.ndarray, table: np.ndarray, m: int) -> np.ndarray:
    mask = (1 << m) - 1
    out = np.zeros_like(keys)
    for i in range(m):
        r = (keys >> (m * i)) & mask
        out |= table[r] << (m * i)
    return out


def _transpose(keys: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros_like(keys)
    for i in range(m):
        for j in range(m):
            out |= ((keys >> (m * i + j)) & 1) << (m * j + i)
    return out


def transvections(k: int) -> list[np.ndarray]:
    """``T_v = I + Omega v^T v`` for every nonzero v in GF(2)^{2k}."""
    m = 2 * k
    Om = omega(k).astype(np.int64)
    out = []
    for v in range(1, 1 << m):
        vec = ((v >> np.arange(m)) & 1).astype(np.int64)[None, :]
        T = (np.eye(m, dtype=np.int64) + Om @ vec.T @ vec) % 2
        out.append(T.astype(np.uint8))
    return out


# -- group ------------------------------------------------------------------


@dataclass
class SpGroup:
    k: int
    keys: np.ndarray  # sorted packed elements
    class_of_index: np.ndarray = field(repr=False)  # class label per element
    class_sizes: dict = field(default_factory=dict)
    labels_from_table: bool = True
    placed_by_size: tuple = ()

    @property
    def order(self) -> int:
        return len(self.keys)

    @property
    def elements(self) -> np.ndarray:
        return unpack(self.keys, 2 * self.k)

    def index(self, L) -> int:
        key = pack(L)
        i = int(np.searchsorted(self.keys, key))
        if i == len(self.keys) or self.keys[i] != key:
            raise GroupError("matrix is not in Sp(2k,2)")
        return i

    def classes(self) -> dict[int, np.ndarray]:
        """Label -> packed members."""
        return {c: self.keys[self.class_of_index == c] for c in sorted(self.class_sizes)}

    def representative(self, label: int) -> np.ndarray:
        """The tabulated matrix, or the smallest packed member if none is usable."""
        if self.labels_from_table and label not in self.placed_by_size:
            return rep_matrix(self.k, label)
        members = self.keys[self.class_of_index == label]
        if not members.size:
            raise GroupError(f"no class {label} for k={self.k}")
        return unpack(members[0], 2 * self.k)


def _closure(k: int, limit: int) -> np.ndarray:
    m = 2 * k
    tables = [_row_table(T) for T in transvections(k)]
    seen = np.array([pack(np.eye(m, dtype=np.uint8))], dtype=np.int64)
    frontier = seen
    while frontier.size:
        new = np.unique(np.concatenate([_right_mul(frontier, t, m) for t in tables]))
        new = new[~np.isin(new, seen, assume_unique=True)]
        seen = np.union1d(seen, new)
        if seen.size > limit:
            raise GroupError(f"closure exceeded {limit} elements")
        frontier = new
    return seen


def _conjugation_orbits(keys: np.ndarray, k: int) -> np.ndarray:
    """Component id (smallest member index) of every element under conjugation."""
    m = 2 * k
    labels = np.arange(len(keys))
    perms = []
    for T in transvections(k):  # involutions, so T x T^{-1} = T x T
        right = _right_mul(keys, _row_table(T), m)
        # T x = (x^T T^T)^T and T^T is again a transvection table
        both = _transpose(_right_mul(_transpose(right, m), _row_table(T.T), m), m)
        perms.append(np.searchsorted(keys, both))
    while True:
        old = labels
        for p in perms:
            labels = np.minimum(labels, labels[p])
            labels = labels[labels]  # pointer jumping
        if np.array_equal(labels, old):
            return labels


@lru_cache(maxsize=None)
def enumerate_sp(k: int, allow_k3: bool = False) -> SpGroup:
    if not 1 <= k <= 3:
        raise GroupError(f"k={k} out of range 1..3")
    if k == 3 and not allow_k3:
        raise GroupError("k=3 needs allow_k3=True (1451520 elements)")
    m = 2 * k
    keys = _closure(k, group_order(k))
    comp = _conjugation_orbits(keys, k)
    roots, inv, counts = np.unique(comp, return_inverse=True, return_counts=True)

    if k in REPS:
        # Locate each tabulated matrix; a few printed ones are not symplectic
        # and are placed afterwards by their tabulated class size.
        label_of_root = {}
        keyset = set(keys.tolist())
        unplaced = []
        for label in range(1, len(REPS[k]) + 1):
            key = pack(rep_matrix(k, label))
            if key not in keyset:
                unplaced.append(label)
                continue
            root = int(comp[int(np.searchsorted(keys, key))])
            if root in label_of_root:
                raise GroupError(f"representatives {label_of_root[root]} and {label} "
                                 "fall in the same class")
            label_of_root[root] = label
        size_of_root = dict(zip(roots.tolist(), counts.tolist()))
        for label in unplaced:
            want = REP_SIZES[k][label - 1]
            free = [r for r in roots.tolist()
                    if r not in label_of_root and size_of_root[r] == want]
            if len(free) != 1:
                raise GroupError(f"cannot place class {label}: {len(free)} free classes "
                                 f"of size {want}")
            label_of_root[free[0]] = label
        if len(label_of_root) != len(roots):
            raise GroupError("computed classes not covered by the representative table")
        root_labels = np.array([label_of_root[int(r)] for r in roots])
        from_table = True
    else:
        unplaced = []
        # no table beyond k=2: order classes by (size, trace, rank(L+I), first member)
        eye = np.eye(m, dtype=np.uint8)
        fps = []
        for r in roots:
            L = unpack(keys[r], m)
            fps.append((int(counts[len(fps)]), int(np.trace(L) % 2), rank2(L ^ eye), int(keys[r])))
        order = sorted(range(len(roots)), key=lambda i: fps[i])
        root_labels = np.empty(len(roots), dtype=np.int64)
        for pos, i in enumerate(order):
            root_labels[i] = pos + 1
        from_table = False

    class_of_index = root_labels[inv]
    sizes = {int(root_labels[i]): int(counts[i]) for i in range(len(roots))}
    if k in REP_SIZES and tuple(sizes[c] for c in sorted(sizes)) != REP_SIZES[k]:
        raise GroupError(f"class sizes {sizes} disagree with the table")
    return SpGroup(k, keys, class_of_index, sizes, from_table, tuple(unplaced))


def conjugacy_classes(G: SpGroup) -> dict[int, np.ndarray]:
    return G.classes()


def _k_of(L) -> int:
    L = np.asarray(L, dtype=np.uint8)
    if not is_symplectic(L):
        raise GroupError("matrix is not symplectic")
    return L.shape[0] // 2


def class_of(L, allow_k3: bool = False) -> int:
    k = _k_of(L)
    G = enumerate_sp(k, allow_k3 or k < 3)
    return int(G.class_of_index[G.index(L)])


def conjugate_by(L, A) -> np.ndarray:
    """``(A^{-1})^T L A^T``."""
    return matmul2(matmul2(inv2(A).T, L), np.asarray(A).T)


def find_conjugator(L1, L2):
    """First A (in packed order) with ``(A^{-1})^T L1 A^T = L2``, or ``None``."""
    k1, k2 = _k_of(L1), _k_of(L2)
    if k1 != k2 or k1 > 2:
        raise GroupError("find_conjugator needs two matrices of the same k <= 2")
    G = enumerate_sp(k1)
    if G.class_of_index[G.index(L1)] != G.class_of_index[G.index(L2)]:
        return None
    # (A^{-1})^T L1 A^T = L2  <=>  L1 A^T = A^T L2
    As = G.elements.astype(np.int64)
    At = As.transpose(0, 2, 1)
    lhs = np.einsum("ij,njk->nik", np.asarray(L1, np.int64), At) % 2
    rhs = np.einsum("nij,jk->nik", At, np.asarray(L2, np.int64)) % 2
    hits = np.nonzero((lhs == rhs).all(axis=(1, 2)))[0]
    return As[hits[0]].astype(np.uint8)
