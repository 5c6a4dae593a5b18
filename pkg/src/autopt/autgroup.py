"""Automorphism groups of additive codes and orbits under the Hamming group.

``automorphism_group`` is a depth-first search over (destination, local)
choices per qubit. After each choice, every generator image restricted to
the destination columns fixed so far must lie in the projection of the code
onto those columns, and the two projections must have equal rank; otherwise
the branch is cut.

``code_orbit`` enumerates the equivalent codes tau(C) breadth-first under
the Hamming generators, deduplicating on the reduced row-echelon form of
phi(tau(G)). Cosets of the automorphism group are in bijection with these
codes, so the orbit size is 6^n n! / |Aut|.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .codes import StabCode
from .gf4 import as_gf4, phi, rank2
from .monomial import (HSH_, LOCAL_ACT, SH_, MonomialOp, OpError, apply, compose_arrays,
                       hamming_arrays, hamming_order)

NODE_LIMIT = 10 ** 9
ENTRY_LIMIT = 10 ** 7
MATERIALIZE_LIMIT = 10 ** 6


class BudgetExceeded(RuntimeError):
    """A search or enumeration hit its configured cap."""


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("AUTOPT_THREADS", "1")))
    except ValueError:
        return 1


# -- membership ---------------------------------------------------------------


def _base4(M: np.ndarray) -> np.ndarray:
    """Row index ``sum_j M[:, j] * 4**j`` into a table of size 4**n."""
    w = 4 ** np.arange(M.shape[1], dtype=np.int64)
    return (M.astype(np.int64) * w).sum(axis=1)


def codeword_table(G) -> np.ndarray:
    """Boolean table over all 4**n words marking the additive span of G."""
    G = as_gf4(G)
    n = G.shape[1]
    words = np.zeros(1, dtype=np.int64)
    for g in _base4(G):
        # XOR of base-4 digits is XOR of the integers since digits are 2-bit fields
        words = np.concatenate([words, words ^ g])
    table = np.zeros(4 ** n, dtype=bool)
    table[words] = True
    return table


def is_automorphism(op: MonomialOp, code: StabCode) -> bool:
    if op.n != code.n:
        raise OpError(f"op acts on {op.n} qubits, code has {code.n}")
    if code.G.shape[0] == 0:
        return True
    img = apply(op, code.G)
    return rank2(np.concatenate([phi(code.G), phi(img)])) == code.G.shape[0]


def hamming_generators(n: int) -> list[MonomialOp]:
    """Qubit swap 1<->2 and the n-cycle, then w-scaling and conjugation on each qubit."""
    gens = []
    if n >= 2:
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        gens.append(MonomialOp(tuple(swap), (0,) * n))
        cyc = MonomialOp(tuple((i - 1) % n for i in range(n)), (0,) * n)
        if cyc not in gens:
            gens.append(cyc)
    for q in range(n):
        gens.append(MonomialOp.local(n, q, SH_))
        gens.append(MonomialOp.local(n, q, HSH_))
    return gens


# -- automorphism search ----------------------------------------------------------


@dataclass
class AutGroup:
    code: StabCode
    order: int
    sigma: np.ndarray = field(repr=False)  # (order, n) int8, serialization order
    rho: np.ndarray = field(repr=False)
    nodes: int = 0
    complete: bool = True  # False when a node budget cut the search short

    @property
    def elements(self) -> list[MonomialOp]:
        return [MonomialOp(tuple(s), tuple(r)) for s, r in zip(self.sigma.tolist(), self.rho.tolist())]

    def __len__(self):
        return self.order

    def __contains__(self, op: MonomialOp) -> bool:
        hit = (self.sigma == np.array(op.sigma)).all(1) & (self.rho == np.array(op.rho)).all(1)
        return bool(hit.any())


def _sorted_ops(sig: np.ndarray, rho: np.ndarray):
    keys = np.concatenate([sig, rho], axis=1)
    order = np.lexsort(keys.T[::-1])
    return sig[order], rho[order]


class _Projections:
    """Reduced bases of the code projected onto each set of destination columns."""

    def __init__(self, G: np.ndarray):
        self.n = G.shape[1]
        self.rows = [int(v) for v in _pack_xz(G)]
        self._cache: dict[int, tuple[list[tuple[int, int]], int]] = {}

    def colmask(self, mask: int) -> int:
        return mask | (mask << self.n)

    def basis(self, mask: int):
        hit = self._cache.get(mask)
        if hit is None:
            cm = self.colmask(mask)
            hit = _echelon([r & cm for r in self.rows])
            self._cache[mask] = hit
        return hit


def _pack_xz(G: np.ndarray) -> np.ndarray:
    n = G.shape[1]
    x = (G & 1).astype(np.int64)
    z = ((G >> 1) & 1).astype(np.int64)
    w = 1 << np.arange(n, dtype=np.int64)
    return (x * w).sum(1) | ((z * w).sum(1) << n)


def _echelon(vecs):
    basis: list[tuple[int, int]] = []  # (pivot bit, vector), pivot = highest bit
    for v in vecs:
        v = _reduce(v, basis)
        if v:
            basis.append((v.bit_length() - 1, v))
            basis.sort(reverse=True)
    return basis, len(basis)


def _reduce(v: int, basis) -> int:
    for piv, b in basis:
        if (v >> piv) & 1:
            v ^= b
    return v


class _Search:
    def __init__(self, code: StabCode, node_limit: int):
        self.n = code.n
        self.G = code.G
        self.node_limit = node_limit
        self.nodes = 0
        self.proj = _Projections(code.G)
        # most-constrained first: columns with the most distinct nonzero entries
        distinct = [len(set(code.G[:, j].tolist()) - {0}) for j in range(self.n)]
        self.order = sorted(range(self.n), key=lambda j: (-distinct[j], j))
        # image bits of column j under local r placed at destination d
        self.contrib = {}
        for j in range(self.n):
            for r in range(6):
                col = LOCAL_ACT[r][code.G[:, j]]
                for d in range(self.n):
                    self.contrib[j, r, d] = [((int(v) & 1) << d) | (((int(v) >> 1) & 1) << (self.n + d))
                                             for v in col]
        self.found: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def ok(self, img_rows, mask) -> bool:
        basis, rk = self.proj.basis(mask)
        if any(_reduce(v, basis) for v in img_rows):
            return False
        return _echelon(img_rows)[1] == rk

    def run(self, prefix=()):
        m = self.G.shape[0]
        img = [0] * m
        sigma = [-1] * self.n
        rho = [0] * self.n
        used = 0
        for depth, (d, r) in enumerate(prefix):
            j = self.order[depth]
            img = [a | b for a, b in zip(img, self.contrib[j, r, d])]
            sigma[j], rho[j] = d, r
            used |= 1 << d
        self._dfs(len(prefix), img, sigma, rho, used)
        return self.found, self.nodes

    def _dfs(self, depth, img, sigma, rho, used):
        if depth == self.n:
            self.found.append((tuple(sigma), tuple(rho)))
            return
        j = self.order[depth]
        for d in range(self.n):
            if used >> d & 1:
                continue
            mask = used | (1 << d)
            for r in range(6):
                self.nodes += 1
                if self.nodes > self.node_limit:
                    raise BudgetExceeded(f"automorphism search exceeded {self.node_limit} nodes")
                new = [a | b for a, b in zip(img, self.contrib[j, r, d])]
                if not self.ok(new, mask):
                    continue
                sigma[j], rho[j] = d, r
                self._dfs(depth + 1, new, sigma, rho, mask)
            sigma[j] = -1


def _branch(args):
    code, prefix, node_limit = args
    s = _Search(code, node_limit)
    found, nodes = s.run(prefix)
    return found, nodes


def automorphism_group(code: StabCode, node_limit: int = NODE_LIMIT,
                       workers: int | None = None, partial: bool = False) -> AutGroup:
    """Aut(code) by backtracking.

    With ``partial`` a node-budget overrun returns the elements found so far
    flagged ``complete=False`` instead of raising.
    """
    if code.n > 7:
        raise ValueError("automorphism search supports n <= 7")
    workers = default_workers() if workers is None else workers
    complete = True
    if code.G.shape[0] == 0:
        sig, rho = hamming_arrays(code.n)
        return AutGroup(code, len(sig), sig, rho, 0)
    if workers > 1:
        tops = [((d, r),) for d in range(code.n) for r in range(6)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_branch, [(code, t, node_limit) for t in tops]))
        found = [f for part, _ in parts for f in part]
        nodes = sum(nd for _, nd in parts)
        if nodes > node_limit:
            raise BudgetExceeded(f"automorphism search exceeded {node_limit} nodes")
    else:
        search = _Search(code, node_limit)
        try:
            found, nodes = search.run()
        except BudgetExceeded:
            if not partial:
                raise
            found, nodes = search.found, search.nodes
            complete = False
    sig = np.array([f[0] for f in found], dtype=np.int8).reshape(-1, code.n)
    rho = np.array([f[1] for f in found], dtype=np.int8).reshape(-1, code.n)
    sig, rho = _sorted_ops(sig, rho)
    return AutGroup(code, len(sig), sig, rho, nodes, complete)


def automorphism_mask(code: StabCode, sig: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Vectorised membership test of many ops (rows of sig/rho) in Aut(code)."""
    table = codeword_table(code.G)
    n = code.n
    ok = np.ones(len(sig), dtype=bool)
    sig64 = sig.astype(np.int64)
    for g in code.G:
        idx = np.zeros(len(sig), dtype=np.int64)
        for j in range(n):
            idx |= LOCAL_ACT[rho[:, j], g[j]].astype(np.int64) << (2 * sig64[:, j])
        ok &= table[idx]
    return ok


def brute_automorphisms(code: StabCode) -> AutGroup:
    """Filter all 6^n n! monomial ops; only sensible for n <= 5."""
    if code.n > 5:
        raise ValueError("brute-force filter needs n <= 5")
    sig, rho = hamming_arrays(code.n)
    keep = automorphism_mask(code, sig, rho)
    sig, rho = _sorted_ops(sig[keep], rho[keep])
    return AutGroup(code, len(sig), sig, rho, hamming_order(code.n))


def closure_order(gens: list[MonomialOp], limit: int = 10 ** 7) -> int:
    """Order of the group generated by ``gens`` (vectorised BFS)."""
    n = gens[0].n
    gs = np.array([g.sigma for g in gens], dtype=np.int8)
    gr = np.array([g.rho for g in gens], dtype=np.int8)
    ident = (np.arange(n, dtype=np.int8)[None], np.zeros((1, n), np.int8))

    def key(s, r):
        k = np.zeros(len(s), dtype=np.int64)
        for j in range(n):
            k = k * 64 + s[:, j].astype(np.int64) * 8 + r[:, j]
        return k

    seen = key(*ident)
    fs, fr = ident
    while len(fs):
        cs, cr = [], []
        for i in range(len(gs)):
            s, r = compose_arrays(gs[i], gr[i], fs, fr)
            cs.append(s)
            cr.append(r)
        s, r = np.concatenate(cs), np.concatenate(cr)
        k, idx = np.unique(key(s, r), return_index=True)
        new = ~np.isin(k, seen, assume_unique=True)
        fs, fr = s[idx[new]], r[idx[new]]
        seen = np.union1d(seen, k[new])
        if len(seen) > limit:
            raise BudgetExceeded(f"closure exceeded {limit} elements")
    return len(seen)


# -- orbit ---------------------------------------------------------------------


def _batch_rref(rows: np.ndarray, width: int) -> np.ndarray:
    """Row-reduce a batch of packed binary matrices; pivots in increasing bit order.

    ``rows`` is (N, r) int64 with bit c = column c. Matches ``gf4.rref2`` on phi(G).
    """
    A = rows.copy()
    N, r = A.shape
    p = np.zeros(N, dtype=np.int64)
    ridx = np.arange(r)[None, :]
    all_n = np.arange(N)
    for c in range(width):
        has = ((A >> c) & 1).astype(bool)
        cand = has & (ridx >= p[:, None])
        anyc = cand.any(axis=1)
        if not anyc.any():
            continue
        q = np.argmax(cand, axis=1)
        sel = all_n[anyc]
        pq, pp = q[anyc], p[anyc]
        rq = A[sel, pq].copy()
        A[sel, pq] = A[sel, pp]
        A[sel, pp] = rq
        piv = np.zeros_like(A)
        piv[sel] = rq[:, None]
        hit = ((A >> c) & 1).astype(bool)
        hit[sel, pp] = False
        hit[~anyc] = False
        A ^= np.where(hit, piv, 0)
        p += anyc
    return A


def _orbit_key(rows: np.ndarray, width: int) -> np.ndarray:
    """Packed RREF rows folded into a structured (hi, lo) key."""
    R = _batch_rref(rows, width)
    r = R.shape[1]
    per = max(1, 62 // width)
    lo = np.zeros(len(R), dtype=np.int64)
    hi = np.zeros(len(R), dtype=np.int64)
    for i in range(r):
        if i < per:
            lo |= R[:, i] << (width * i)
        else:
            hi |= R[:, i] << (width * (i - per))
    if r > 2 * per:
        raise ValueError("code too large for orbit keys")
    out = np.empty(len(R), dtype=[("hi", "<i8"), ("lo", "<i8")])
    out["hi"], out["lo"] = hi, lo
    return out


def _image_rows(G: np.ndarray, sig: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """phi-packed rows of tau(G) for a batch of ops: (N, r) int64."""
    N, n = sig.shape
    out = np.zeros((N, G.shape[0]), dtype=np.int64)
    s64 = sig.astype(np.int64)
    for i, g in enumerate(G):
        for j in range(n):
            v = LOCAL_ACT[rho[:, j], g[j]].astype(np.int64)
            out[:, i] |= ((v & 1) << s64[:, j]) | (((v >> 1) & 1) << (s64[:, j] + n))
    return out


@dataclass
class Orbit:
    code: StabCode
    sigma: np.ndarray = field(repr=False)  # witnesses tau, BFS order
    rho: np.ndarray = field(repr=False)
    layer: np.ndarray = field(repr=False)
    complete: bool = True

    def __len__(self):
        return len(self.sigma)

    def witness(self, i: int) -> MonomialOp:
        return MonomialOp(tuple(self.sigma[i].tolist()), tuple(self.rho[i].tolist()))

    def __iter__(self):
        for i in range(len(self)):
            yield self.witness(i)


def code_orbit(code: StabCode, entry_limit: int = ENTRY_LIMIT, strict: bool = True) -> Orbit:
    """All distinct codes tau(C) with one witness each.

    Within a BFS layer the witness for each new code is the serialization-minimal
    candidate, and entries are listed in witness order. With ``strict`` a budget
    overrun raises; otherwise the partial orbit comes back with ``complete=False``.
    """
    n = code.n
    width = 2 * n
    G = code.G
    gens = hamming_generators(n)
    gs = np.array([g.sigma for g in gens], dtype=np.int8)
    gr = np.array([g.rho for g in gens], dtype=np.int8)

    fs = np.arange(n, dtype=np.int8)[None]
    fr = np.zeros((1, n), dtype=np.int8)
    if G.shape[0] == 0:
        return Orbit(code, fs, fr, np.zeros(1, np.int64))
    seen = np.sort(_orbit_key(_image_rows(G, fs, fr), width))
    out_s, out_r, out_l = [fs], [fr], [np.zeros(1, np.int64)]
    total = 1
    depth = 0
    while len(fs):
        depth += 1
        cs, cr = [], []
        for i in range(len(gs)):
            s, r = compose_arrays(gs[i], gr[i], fs, fr)
            cs.append(s)
            cr.append(r)
        s, r = np.concatenate(cs), np.concatenate(cr)
        keys = _orbit_key(_image_rows(G, s, r), width)
        pos = np.searchsorted(seen, keys)
        pos = np.minimum(pos, len(seen) - 1)
        fresh = seen[pos] != keys
        s, r, keys = s[fresh], r[fresh], keys[fresh]
        if not len(s):
            break
        # minimal witness per key: sort by key, then sigma, then rho
        cols = [r[:, j] for j in range(n - 1, -1, -1)] + [s[:, j] for j in range(n - 1, -1, -1)]
        order = np.lexsort(cols + [keys["lo"], keys["hi"]])
        s, r, keys = s[order], r[order], keys[order]
        first = np.ones(len(keys), dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        s, r, keys = s[first], r[first], keys[first]
        # list the layer in witness order
        order = np.lexsort([r[:, j] for j in range(n - 1, -1, -1)] +
                           [s[:, j] for j in range(n - 1, -1, -1)])
        s, r = s[order], r[order]
        if total + len(s) > entry_limit:
            if strict:
                raise BudgetExceeded(f"orbit exceeded {entry_limit} entries")
            room = entry_limit - total
            out_s.append(s[:room])
            out_r.append(r[:room])
            out_l.append(np.full(room, depth))
            return Orbit(code, np.concatenate(out_s), np.concatenate(out_r),
                         np.concatenate(out_l), complete=False)
        total += len(s)
        out_s.append(s)
        out_r.append(r)
        out_l.append(np.full(len(s), depth))
        seen = np.sort(np.concatenate([seen, keys]))
        fs, fr = s, r
    return Orbit(code, np.concatenate(out_s), np.concatenate(out_r), np.concatenate(out_l))


def generating_set(aut: AutGroup, limit: int = 10 ** 5) -> list[MonomialOp]:
    """Greedy generators: walk the elements in order, keep any not yet generated."""
    if aut.order > limit:
        raise BudgetExceeded(f"generating set needs |Aut| <= {limit}")
    from .monomial import compose

    elements = aut.elements
    ident = MonomialOp.identity(aut.code.n)
    group = {ident}
    gens: list[MonomialOp] = []
    for op in elements:
        if op in group:
            continue
        gens.append(op)
        frontier = list(group)
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    x = compose(g, h)
                    if x not in group:
                        group.add(x)
                        nxt.append(x)
            frontier = nxt
        if len(group) == aut.order:
            break
    return gens
