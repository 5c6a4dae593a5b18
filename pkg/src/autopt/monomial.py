"""SWAP-transversal circuits as elements of the wreath product S3 wr S_n.

A :class:`MonomialOp` is a qubit permutation ``sigma`` (destination
semantics: qubit ``i`` moves to position ``sigma[i]``) preceded by a local
Clifford ``rho[i]`` on every qubit. Internally ``sigma`` is 0-based; the
text form and the S_{3n} form are 1-based.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf4 import as_gf4, is_symplectic

# Local Cliffords in serialization order I < H < S < HS < SH < HSH.
# Each entry: name, S3 block pattern (image positions mod 3), 2x2 symplectic matrix.
LOCAL_TABLE = (
    ("I", (1, 2, 0), ((1, 0), (0, 1))),
    ("H", (2, 1, 0), ((0, 1), (1, 0))),
    ("S", (0, 2, 1), ((1, 0), (1, 1))),
    ("HS", (0, 1, 2), ((1, 1), (1, 0))),
    ("SH", (2, 0, 1), ((0, 1), (1, 1))),
    ("HSH", (1, 0, 2), ((1, 1), (0, 1))),
)
LOCAL_NAMES = tuple(row[0] for row in LOCAL_TABLE)
LOCAL_INDEX = {name: i for i, name in enumerate(LOCAL_NAMES)}
I_, H_, S_, HS_, SH_, HSH_ = range(6)

LOCAL_MATRIX = np.array([row[2] for row in LOCAL_TABLE], dtype=np.uint8)


def _action(F) -> np.ndarray:
    # phi(rho(v)) = phi(v) F^T on the four GF(4) values
    out = np.zeros(4, dtype=np.uint8)
    for v in range(4):
        xz = np.array([v & 1, v >> 1])
        x, z = (xz @ np.asarray(F).T) % 2
        out[v] = x | (z << 1)
    return out


# LOCAL_ACT[r, v]: image of GF(4) value v under local r
LOCAL_ACT = np.stack([_action(F) for F in LOCAL_MATRIX])


def _index_of_action(act) -> int:
    for i in range(6):
        if np.array_equal(LOCAL_ACT[i], act):
            return i
    raise AssertionError("not a local Clifford")


# LOCAL_MUL[a, b]: local for "b first, then a"
LOCAL_MUL = np.array([[_index_of_action(LOCAL_ACT[a][LOCAL_ACT[b]]) for b in range(6)]
                      for a in range(6)], dtype=np.int8)
LOCAL_INV = np.array([int(np.nonzero(LOCAL_MUL[a] == I_)[0][0]) for a in range(6)],
                     dtype=np.int8)


def local_pattern(r: int) -> tuple[int, int, int]:
    """S3 block pattern of a local: block positions 1, 2, 3 hold 1, w, w^2."""
    return tuple(int(LOCAL_ACT[r][e]) % 3 for e in (1, 2, 3))


_PATTERN_INDEX = {row[1]: i for i, row in enumerate(LOCAL_TABLE)}


class OpError(ValueError):
    pass


@dataclass(frozen=True, order=False)
class MonomialOp:
    sigma: tuple[int, ...]
    rho: tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(s) for s in self.sigma)
        rho = tuple(LOCAL_INDEX[r] if isinstance(r, str) else int(r) for r in self.rho)
        if sorted(sigma) != list(range(len(sigma))):
            raise OpError(f"sigma {sigma} is not a permutation of 0..{len(sigma) - 1}")
        if len(rho) != len(sigma) or any(not 0 <= r < 6 for r in rho):
            raise OpError(f"bad local list {rho}")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "rho", rho)

    @property
    def n(self) -> int:
        return len(self.sigma)

    @classmethod
    def identity(cls, n: int) -> "MonomialOp":
        return cls(tuple(range(n)), (I_,) * n)

    @classmethod
    def from_perm(cls, perm1: Sequence[int], locals_: Iterable = None) -> "MonomialOp":
        """Build from a 1-based one-line permutation and local names."""
        perm1 = list(perm1)
        rho = list(locals_) if locals_ is not None else ["I"] * len(perm1)
        return cls(tuple(p - 1 for p in perm1), tuple(rho))

    @classmethod
    def local(cls, n: int, qubit: int, r) -> "MonomialOp":
        rho = [I_] * n
        rho[qubit] = LOCAL_INDEX[r] if isinstance(r, str) else r
        return cls(tuple(range(n)), tuple(rho))

    def is_identity(self) -> bool:
        return self.sigma == tuple(range(self.n)) and not any(self.rho)

    def sort_key(self) -> tuple:
        return (self.sigma, self.rho)

    def __lt__(self, other: "MonomialOp"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        perm = ",".join(str(s + 1) for s in self.sigma)
        locs = ",".join(LOCAL_NAMES[r] for r in self.rho)
        return f"perm=[{perm}] locals=[{locs}]"

    def to_dict(self) -> dict:
        return {"perm": [s + 1 for s in self.sigma], "locals": [LOCAL_NAMES[r] for r in self.rho]}

    @classmethod
    def from_dict(cls, d: dict) -> "MonomialOp":
        return cls.from_perm(d["perm"], d["locals"])


_TEXT_RE = re.compile(r"^\s*perm=\[([0-9,\s]*)\]\s+locals=\[([A-Z,\s]*)\]\s*$")


def parse_op(text: str) -> MonomialOp:
    m = _TEXT_RE.match(text)
    if not m:
        raise OpError(f"cannot parse circuit {text!r}")
    perm = [int(t) for t in m.group(1).split(",") if t.strip()]
    locs = [t.strip() for t in m.group(2).split(",") if t.strip()]
    if any(t not in LOCAL_INDEX for t in locs):
        raise OpError(f"unknown local in {text!r}")
    return MonomialOp.from_perm(perm, locs)


def _check_same(a: MonomialOp, b: MonomialOp):
    if a.n != b.n:
        raise OpError(f"size mismatch: {a.n} vs {b.n}")


def compose(a: MonomialOp, b: MonomialOp) -> MonomialOp:
    """``b`` first, then ``a``."""
    _check_same(a, b)
    sigma = tuple(a.sigma[s] for s in b.sigma)
    rho = tuple(int(LOCAL_MUL[a.rho[b.sigma[j]], b.rho[j]]) for j in range(b.n))
    return MonomialOp(sigma, rho)


def inverse(a: MonomialOp) -> MonomialOp:
    sigma = [0] * a.n
    rho = [0] * a.n
    for j, s in enumerate(a.sigma):
        sigma[s] = j
        rho[s] = int(LOCAL_INV[a.rho[j]])
    return MonomialOp(tuple(sigma), tuple(rho))


def apply(op: MonomialOp, M) -> np.ndarray:
    """Act on the columns of a GF(4) matrix: locals first, then the permutation."""
    M = as_gf4(M)
    if M.shape[1] != op.n:
        raise OpError(f"matrix has {M.shape[1]} columns, op acts on {op.n}")
    out = np.empty_like(M)
    for j in range(op.n):
        out[:, op.sigma[j]] = LOCAL_ACT[op.rho[j]][M[:, j]]
    return out


def lift_symplectic(op: MonomialOp) -> np.ndarray:
    """``F = N M`` with ``phi(apply(op, V)) = phi(V) F^T``."""
    n = op.n
    M = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for i, r in enumerate(op.rho):
        (a, b), (c, d) = LOCAL_MATRIX[r]
        M[i, i], M[i, n + i], M[n + i, i], M[n + i, n + i] = a, b, c, d
    P = np.zeros((n, n), dtype=np.uint8)
    for j, s in enumerate(op.sigma):
        P[s, j] = 1  # P_{sigma^{-1}}: row sigma(j) has its 1 in column j
    Z = np.zeros_like(P)
    N = np.block([[P, Z], [Z, P]])
    F = (N.astype(np.int64) @ M) % 2
    F = F.astype(np.uint8)
    assert is_symplectic(F)
    return F


def swap_count(op: MonomialOp) -> int:
    return op.n - cycle_count(op.sigma)


def clifford_count(op: MonomialOp) -> int:
    return sum(1 for r in op.rho if r != I_)


def cycles(sigma: Sequence[int]) -> list[list[int]]:
    """Disjoint cycles (fixed points included) in order of their smallest element."""
    seen = [False] * len(sigma)
    out = []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = sigma[j]
        out.append(cyc)
    return out


def cycle_count(sigma: Sequence[int]) -> int:
    return len(cycles(sigma))


# -- S_{3n} form ----------------------------------------------------------------


def to_s3n(op: MonomialOp) -> tuple[int, ...]:
    """One-line 1-based permutation of {1..3n}; block i holds qubit i's 1, w, w^2."""
    out = []
    for i in range(op.n):
        for e in (1, 2, 3):
            out.append(3 * op.sigma[i] + int(LOCAL_ACT[op.rho[i]][e]))
    return tuple(out)


def from_s3n(p: Sequence[int]) -> MonomialOp:
    p = [int(v) for v in p]
    if len(p) % 3 or sorted(p) != list(range(1, len(p) + 1)):
        raise OpError("not a permutation of {1..3n}")
    n = len(p) // 3
    sigma, rho = [], []
    for i in range(n):
        block = p[3 * i: 3 * i + 3]
        dests = {(v - 1) // 3 for v in block}
        if len(dests) != 1:
            raise OpError(f"block {i + 1} {tuple(block)} is split across destination blocks")
        pattern = tuple(v % 3 for v in block)
        if pattern not in _PATTERN_INDEX:
            raise OpError(f"block {i + 1} pattern {pattern} is not in the local table")
        sigma.append(dests.pop())
        rho.append(_PATTERN_INDEX[pattern])
    return MonomialOp(tuple(sigma), tuple(rho))


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Disjoint-cycle notation like ``(1,5,3)(7,8)`` to a one-line 1-based permutation."""
    img = list(range(1, degree + 1))
    for grp in re.findall(r"\(([^)]*)\)", text):
        pts = [int(t) for t in grp.replace(" ", "").split(",") if t]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b
    return tuple(img)


# -- enumeration --------------------------------------------------------------


def hamming_order(n: int) -> int:
    out = 6 ** n
    for i in range(2, n + 1):
        out *= i
    return out


def hamming_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All 6^n n! ops as ``(sigma, rho)`` int8 arrays of shape (N, n).

    Order: permutations lexicographically, then local tuples lexicographically.
    """
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8).reshape(-1, n)
    locs = np.array(list(itertools.product(range(6), repeat=n)), dtype=np.int8).reshape(-1, n)
    sig = np.repeat(perms, len(locs), axis=0)
    rho = np.tile(locs, (len(perms), 1))
    return sig, rho


def iter_hamming(n: int):
    for perm in itertools.permutations(range(n)):
        for rho in itertools.product(range(6), repeat=n):
            yield MonomialOp(perm, rho)


def compose_arrays(sa, ra, sb, rb):
    """Vectorised :func:`compose`; any argument may be a single row (broadcast)."""
    sa, ra, sb, rb = (np.atleast_2d(x) for x in (sa, ra, sb, rb))
    N = max(len(sa), len(sb))
    sa, ra = np.broadcast_to(sa, (N, sa.shape[1])), np.broadcast_to(ra, (N, ra.shape[1]))
    sb, rb = np.broadcast_to(sb, (N, sb.shape[1])), np.broadcast_to(rb, (N, rb.shape[1]))
    s = np.take_along_axis(sa, sb.astype(np.intp), axis=1)
    r = LOCAL_MUL[np.take_along_axis(ra, sb.astype(np.intp), axis=1), rb]
    return s.astype(np.int8), r.astype(np.int8)


def inverse_arrays(s, r):
    s = np.atleast_2d(s).astype(np.intp)
    r = np.atleast_2d(r)
    N, n = s.shape
    rows = np.arange(N)[:, None]
    si = np.empty_like(s)
    ri = np.empty_like(r)
    si[rows, s] = np.arange(n)[None, :]
    ri[rows, s] = LOCAL_INV[r]
    return si.astype(np.int8), ri.astype(np.int8)


def random_op(n: int, rng: np.random.Generator) -> MonomialOp:
    return MonomialOp(tuple(int(v) for v in rng.permutation(n)),
                      tuple(int(v) for v in rng.integers(0, 6, n)))
