"""Arithmetic over GF(4) and GF(2).

GF(4) elements are stored as 2-bit integers ``x | (z << 1)`` so that the
element ``x + w*z`` *is* its binary pair ``(x|z)``::

    0 -> 0b00    1 -> 0b01    w -> 0b10    w^2 = w + 1 -> 0b11

Addition is XOR. Matrices over GF(4) are ``uint8`` numpy arrays with
entries in ``{0, 1, 2, 3}``; binary matrices are ``uint8`` arrays of bits.
"""

from __future__ import annotations

import numpy as np

ZERO, ONE, W, W2 = 0, 1, 2, 3

TOKENS = ("0", "1", "w", "W")
TOKEN_VALUE = {t: i for i, t in enumerate(TOKENS)}
NAMES = ("0", "1", "ω", "ω²")

# log table with w as primitive element: w^0 = 1, w^1 = w, w^2 = w^2
_LOG = {ONE: 0, W: 1, W2: 2}
_EXP = (ONE, W, W2)

MUL = np.zeros((4, 4), dtype=np.uint8)
for _a in (ONE, W, W2):
    for _b in (ONE, W, W2):
        MUL[_a, _b] = _EXP[(_LOG[_a] + _LOG[_b]) % 3]

CONJ = np.array([ZERO, ONE, W2, W], dtype=np.uint8)
TRACE = np.array([0, 0, 1, 1], dtype=np.uint8)


def gf4_add(a: int, b: int) -> int:
    return a ^ b


def gf4_mul(a: int, b: int) -> int:
    return int(MUL[a, b])


def gf4_conj(a: int) -> int:
    return int(CONJ[a])


def gf4_trace(a: int) -> int:
    """Field trace ``a + a^2``; equals the z bit of the encoding."""
    return int(TRACE[a])


def as_gf4(M) -> np.ndarray:
    """Coerce a nested list / array of GF(4) values (ints or tokens) to a 2-D array."""
    if isinstance(M, np.ndarray):
        A = M.astype(np.uint8, copy=True)
    else:
        rows = [[TOKEN_VALUE[v] if isinstance(v, str) else int(v) for v in row] for row in M]
        width = len(rows[0]) if rows else 0
        A = np.array(rows, dtype=np.uint8).reshape(len(rows), width)
    if A.ndim == 1:
        A = A[None, :]
    if A.size and A.max() > 3:
        raise ValueError("GF(4) entries must lie in {0,1,2,3}")
    return A


def omega(m: int) -> np.ndarray:
    """The symplectic form ``[[0, I_m], [I_m, 0]]`` of size 2m."""
    I = np.eye(m, dtype=np.uint8)
    Z = np.zeros((m, m), dtype=np.uint8)
    return np.block([[Z, I], [I, Z]])


def phi(M) -> np.ndarray:
    """Map an r x n GF(4) matrix to its r x 2n binary image ``(x|z)``."""
    M = as_gf4(M)
    return np.concatenate([M & 1, (M >> 1) & 1], axis=1).astype(np.uint8)


def phi_inv(B) -> np.ndarray:
    B = np.asarray(B, dtype=np.uint8)
    if B.ndim == 1:
        B = B[None, :]
    if B.shape[1] % 2:
        raise ValueError("binary width must be even")
    n = B.shape[1] // 2
    return (B[:, :n] | (B[:, n:] << 1)).astype(np.uint8)


def symp_product(u, v) -> int:
    u = np.asarray(u, dtype=np.int64).ravel()
    v = np.asarray(v, dtype=np.int64).ravel()
    if u.shape != v.shape or u.size % 2:
        raise ValueError(f"length mismatch: {u.size} vs {v.size}")
    n = u.size // 2
    return int((u[:n] @ v[n:] + u[n:] @ v[:n]) % 2)


def trace_product(U, V) -> np.ndarray:
    """``[U (.) V^T]_{ij} = Tr(u_i . conj(v_j))`` as an r x s binary matrix."""
    U = as_gf4(U)
    V = as_gf4(V)
    if U.shape[1] != V.shape[1]:
        raise ValueError(f"shape mismatch: {U.shape} vs {V.shape}")
    prod = MUL[U[:, None, :], CONJ[V][None, :, :]]
    return (TRACE[prod].sum(axis=2) % 2).astype(np.uint8)


def matmul2(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    return ((A @ B) % 2).astype(np.uint8)


def rref2(M) -> np.ndarray:
    """Reduced row-echelon form over GF(2); zero rows are kept at the bottom.

    Pivots are taken in increasing column order, each from the lowest-index
    remaining row that has a 1 there, so the output is a pure function of
    the row space and the input shape.
    """
    A = np.array(M, dtype=np.uint8, copy=True)
    if A.ndim == 1:
        A = A[None, :]
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(A[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        mask = A[:, c].astype(bool)
        mask[r] = False
        A[mask] ^= A[r]
        r += 1
    return A


def rank2(M) -> int:
    R = rref2(M)
    return int(np.count_nonzero(R.any(axis=1)))


def inv2(M) -> np.ndarray:
    """Inverse of a square binary matrix; raises ``ValueError`` if singular."""
    M = np.asarray(M, dtype=np.uint8)
    m = M.shape[0]
    R = rref2(np.concatenate([M, np.eye(m, dtype=np.uint8)], axis=1))
    if not np.array_equal(R[:, :m], np.eye(m, dtype=np.uint8)):
        raise ValueError("matrix is singular over GF(2)")
    return R[:, m:].copy()


def is_symplectic(F) -> bool:
    F = np.asarray(F, dtype=np.uint8)
    if F.ndim != 2 or F.shape[0] != F.shape[1] or F.shape[0] % 2:
        return False
    Om = omega(F.shape[0] // 2)
    return bool(np.array_equal(matmul2(matmul2(F, Om), F.T), Om))


# -- packed rows ------------------------------------------------------------
#
# Search kernels pack a binary row (x_1..x_n | z_1..z_n) into one int:
# bit j is x_{j+1}, bit n+j is z_{j+1}. With n <= 7 this fits 14 bits.


def pack_rows(B) -> list[int]:
    B = np.asarray(B, dtype=np.uint8)
    if B.ndim == 1:
        B = B[None, :]
    weights = 1 << np.arange(B.shape[1], dtype=np.int64)
    return [int(v) for v in (B.astype(np.int64) * weights).sum(axis=1)]


def unpack_rows(rows, width: int) -> np.ndarray:
    rows = np.asarray(list(rows), dtype=np.int64)
    return ((rows[:, None] >> np.arange(width)) & 1).astype(np.uint8)


def pack_gf4_row(row, n: int) -> int:
    v = 0
    for j, a in enumerate(row):
        a = int(a)
        v |= (a & 1) << j
        v |= ((a >> 1) & 1) << (n + j)
    return v


def format_gf4(M) -> list[str]:
    """Rows of a GF(4) matrix as token strings, e.g. ``"1 w 0 W"``."""
    return [" ".join(TOKENS[a] for a in row) for row in as_gf4(M)]


def format_bits(M) -> list[str]:
    return ["".join(str(int(b)) for b in row) for row in np.atleast_2d(M)]
