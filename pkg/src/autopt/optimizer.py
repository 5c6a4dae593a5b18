"""Cheapest SWAP-transversal circuit per conjugacy class.

A circuit pi in Aut(C) realising class c can be traded for g pi g^{-1} on the
equivalent code g(C), for any monomial g. Conjugation keeps the cycle type
of the permutation and the S3 conjugacy class of each cycle's ordered local
product, and nothing else matters: a cycle whose product is trivial can be
cleared completely, and any other cycle keeps exactly one non-identity
local. So

    min_g cliffords(g pi g^{-1}) = #cycles with non-trivial local product

and the metric minimum is taken over pi in the class. ``brute_oracle``
recomputes the same numbers by conjugating with every one of the 6^n n!
monomial ops (n <= 5).
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .autgroup import AutGroup, automorphism_group, default_workers
from .codes import StabCode
from .logical import (LogicalAction, basis_change, conjugate_automorphism, logical_action,
                      logical_matrix, transform_code)
from .monomial import (H_, HS_, I_, LOCAL_INV, LOCAL_MUL, MonomialOp, clifford_count,
                       compose, cycles, hamming_arrays, inverse_arrays,
                       random_op, swap_count)
from .symplectic import class_of, enumerate_sp, find_conjugator

LEVELS = ("fixed", "basis", "full")


class OptimizeError(ValueError):
    pass


@dataclass(frozen=True)
class Metric:
    kind: str = "controlled_clifford"
    swap_weight: int = 7

    def __post_init__(self):
        if self.kind not in ("controlled_clifford", "local_clifford"):
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if self.swap_weight < 0:
            raise ValueError("swap weight must be non-negative")

    @classmethod
    def number(cls, m: int, swap_weight: int | None = None) -> "Metric":
        if m == 1:
            return cls("controlled_clifford", 7 if swap_weight is None else swap_weight)
        if m == 2:
            return cls("local_clifford", 0 if swap_weight is None else swap_weight)
        raise ValueError(f"metric must be 1 or 2, got {m}")

    def cost(self, op: MonomialOp) -> int:
        return self.swap_weight * swap_count(op) + clifford_count(op)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "swap_weight": self.swap_weight}


METRIC1 = Metric.number(1)
METRIC2 = Metric.number(2)


@dataclass
class OptResult:
    cls: int
    cost: int
    circuit: MonomialOp
    tau: MonomialOp
    A: np.ndarray
    code_out: StabCode
    realized: LogicalAction
    source: MonomialOp = field(default=None, repr=False)  # automorphism of the input code
    exhaustive: bool = False
    upper_bound: bool = False


# -- cycle products ---------------------------------------------------------------

# S3 conjugacy class of a local: 0 identity, 1 involution, 2 order three
LOCAL_CLASS = np.array([0, 1, 1, 2, 2, 1], dtype=np.int8)
# smallest local (serialization order) in each class
CLASS_MIN_LOCAL = (I_, H_, HS_)


def cycle_products(op: MonomialOp) -> list[tuple[list[int], int]]:
    """(cycle, local product) per cycle; the product starts at the cycle's first qubit."""
    out = []
    for cyc in cycles(op.sigma):
        prod = I_
        for j in cyc:
            prod = int(LOCAL_MUL[op.rho[j], prod])
        out.append((cyc, prod))
    return out


def min_cliffords_over_conjugation(op: MonomialOp) -> int:
    return sum(1 for _, p in cycle_products(op) if p != I_)


def conj_cost(op: MonomialOp, metric: Metric) -> int:
    """Best metric value over all conjugates of ``op``."""
    return metric.swap_weight * swap_count(op) + min_cliffords_over_conjugation(op)


def signature(op: MonomialOp) -> tuple:
    """Conjugation invariant: sorted (cycle length, product class) pairs."""
    return tuple(sorted((len(c), int(LOCAL_CLASS[p])) for c, p in cycle_products(op)))


# -- brute conjugation ---------------------------------------------------------------


class _Conjugator:
    """All 6^n n! monomial ops g with their inverses, for direct conjugation."""

    _cache: dict[int, "_Conjugator"] = {}

    def __init__(self, n: int):
        if n > 5:
            raise OptimizeError("brute conjugation needs n <= 5")
        self.n = n
        gs, gr = hamming_arrays(n)
        is_, ir = inverse_arrays(gs, gr)
        N = len(gs)
        self.offset = (np.arange(N, dtype=np.int64) * n)[:, None]
        self.gs_flat = gs.astype(np.int64).ravel()
        self.gr_flat = gr.astype(np.int64).ravel()
        self.is_ = is_.astype(np.int64)
        self.ir = ir.astype(np.int64)
        # cycle count of every map {0..n-1} -> {0..n-1}, indexed in base n
        self.radix = n ** np.arange(n, dtype=np.int64)
        table = np.zeros(n ** n, dtype=np.int64)
        for perm in itertools.permutations(range(n)):
            table[int(np.dot(perm, self.radix))] = len(cycles(perm))
        self.cycle_table = table

    @classmethod
    def get(cls, n: int) -> "_Conjugator":
        if n not in cls._cache:
            cls._cache[n] = cls(n)
        return cls._cache[n]

    def conjugates(self, op: MonomialOp):
        """(sigma, rho) of g op g^{-1} for every g, in hamming_arrays order."""
        sigma = np.array(op.sigma, dtype=np.int64)
        rho = np.array(op.rho, dtype=np.int64)
        # x = op after g^{-1}
        xs = sigma[self.is_]
        xr = LOCAL_MUL[rho[self.is_], self.ir]
        # y = g after x
        idx = self.offset + xs
        ys = self.gs_flat[idx]
        yr = LOCAL_MUL[self.gr_flat[idx], xr]
        return ys, yr

    def swap_clifford_counts(self, op: MonomialOp):
        s, r = self.conjugates(op)
        swaps = self.n - self.cycle_table[s @ self.radix]
        cliff = (r != I_).sum(axis=1)
        return swaps, cliff


def _cycle_counts(s: np.ndarray) -> np.ndarray:
    """Number of cycles of each row permutation."""
    n = s.shape[1]
    return _Conjugator.get(n).cycle_table[s.astype(np.int64) @ (n ** np.arange(n, dtype=np.int64))]


def brute_min_cliffords(op: MonomialOp) -> int:
    """min over every monomial g of clifford_count(g op g^{-1}); n <= 5."""
    _, r = _Conjugator.get(op.n).conjugates(op)
    return int((r != I_).sum(axis=1).min())


# -- grouping ----------------------------------------------------------------------


def classify_automorphisms(code: StabCode, aut: AutGroup | None = None) -> dict[int, list[MonomialOp]]:
    aut = automorphism_group(code) if aut is None else aut
    out: dict[int, list[MonomialOp]] = defaultdict(list)
    for op in aut.elements:
        L = logical_matrix(op, code, check=False)
        out[class_of(L, allow_k3=True)].append(op)
    return {c: out[c] for c in sorted(out)}


def _class_rep(k: int, cls: int) -> np.ndarray:
    return enumerate_sp(k, allow_k3=True).representative(cls)


def _basis_witness(L: np.ndarray, target: np.ndarray) -> np.ndarray:
    if np.array_equal(L, target):
        return np.eye(len(L), dtype=np.uint8)
    A = find_conjugator(L, target)
    if A is None:
        raise OptimizeError("target is not conjugate to the realised action")
    return A


# -- optimal conjugate construction ------------------------------------------------


def _lexmin_perm(cycle_type: tuple[int, ...], n: int) -> tuple[int, ...]:
    want = tuple(sorted(cycle_type))
    for p in itertools.permutations(range(n)):
        if tuple(sorted(len(c) for c in cycles(p))) == want:
            return p
    raise AssertionError("unreachable")


def canonical_form(op: MonomialOp) -> MonomialOp:
    """Serialization-minimal circuit among the cheapest conjugates of ``op``."""
    sig = signature(op)
    sigma = _lexmin_perm(tuple(L for L, _ in sig), op.n)
    by_len: dict[int, list[int]] = defaultdict(list)
    for L, c in sig:
        by_len[L].append(c)
    rho = [I_] * op.n
    groups: dict[int, list[list[int]]] = defaultdict(list)
    for cyc in cycles(sigma):
        groups[len(cyc)].append(cyc)
    for L, cycs in groups.items():
        # trivial products first on the cycles whose last qubit comes earliest
        for cyc, c in zip(sorted(cycs, key=max), sorted(by_len[L])):
            rho[max(cyc)] = CLASS_MIN_LOCAL[c]
    return MonomialOp(sigma, tuple(rho))


def conjugator_to(op: MonomialOp, target: MonomialOp) -> MonomialOp:
    """Some g with ``g op g^{-1} == target``; the two must share a signature.

    g is a local layer lambda followed by a qubit permutation p. Along each
    cycle j_0 -> j_1 -> ... of op, lambda_{j_{i+1}} = lambda_{j_i} rho_{j_i}^{-1}
    clears every local except the one on j_{L-1}; lambda_{j_0} picks which
    conjugate of the cycle product is left there. p then lays the cycle onto
    a target cycle so that j_{L-1} lands on the target's non-identity qubit.
    """
    n = op.n
    dst = cycle_products(target)
    used = [False] * len(dst)
    lam = [I_] * n
    perm = [-1] * n
    for cyc, prod in cycle_products(op):
        for t, (tcyc, tprod) in enumerate(dst):
            if not used[t] and len(tcyc) == len(cyc) and LOCAL_CLASS[tprod] == LOCAL_CLASS[prod]:
                used[t] = True
                break
        else:
            raise OptimizeError("signatures differ")
        L = len(cyc)
        hot = [j for j in tcyc if target.rho[j] != I_]
        if len(hot) > 1:
            raise OptimizeError("target is not in cheapest form")
        start = tcyc.index(hot[0]) if hot else 0
        tord = tcyc[start:] + tcyc[:start]
        want = target.rho[tord[0]]
        for l0 in range(6):
            cur = l0
            for j in cyc:
                lam[j] = cur
                cur = int(LOCAL_MUL[cur, LOCAL_INV[op.rho[j]]])
            last = cyc[-1]
            left = int(LOCAL_MUL[LOCAL_MUL[lam[op.sigma[last]], op.rho[last]], LOCAL_INV[lam[last]]])
            if left == want:
                break
        else:
            raise OptimizeError("could not align cycle")
        for m in range(L):
            perm[cyc[(m - 1) % L]] = tord[m]
    g = compose(MonomialOp(tuple(perm), (I_,) * n), MonomialOp(tuple(range(n)), tuple(lam)))
    if conjugate_automorphism(g, op) != target:
        raise AssertionError("conjugator construction failed")
    return g


# -- optimisation --------------------------------------------------------------------


def candidates(code: StabCode, cls: int, metric: Metric, level: str = "full",
               target: np.ndarray | None = None, aut: AutGroup | None = None):
    """(cost, pi) for every automorphism admissible at ``level``.

    ``fixed``: pi must realise ``target`` exactly on the given basis and code,
    cost = metric(pi). ``basis``: any pi in the class, cost = metric(pi).
    ``full``: any pi in the class, cost = best metric over its conjugates.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    groups = classify_automorphisms(code, aut)
    if cls not in groups:
        raise OptimizeError(f"class {cls} is not realised by any automorphism")
    out = []
    for pi in groups[cls]:
        if level == "fixed":
            if target is None:
                raise ValueError("level 'fixed' needs a target matrix")
            if not np.array_equal(logical_matrix(pi, code, check=False), target):
                continue
            out.append((metric.cost(pi), pi))
        elif level == "basis":
            out.append((metric.cost(pi), pi))
        else:
            out.append((conj_cost(pi, metric), pi))
    return out


def optimize(code: StabCode, cls: int, metric: Metric = METRIC1, level: str = "full",
             target=None, aut: AutGroup | None = None, cross_check: bool | None = None,
             samples: int = 2000, seed: int = 0) -> OptResult:
    aut = automorphism_group(code) if aut is None else aut
    k = code.k
    if target is None and level != "fixed":
        target = _class_rep(k, cls)
    target = np.asarray(target, dtype=np.uint8)
    cands = candidates(code, cls, metric, level, target, aut)
    if not cands:
        raise OptimizeError("no automorphism realises the target")
    best = min(c for c, _ in cands)
    tied = sorted(pi for c, pi in cands if c == best)

    if level == "full":
        circ = {pi: canonical_form(pi) for pi in tied}
        pi = min(tied, key=lambda p: (circ[p].sort_key(), p.sort_key()))
        circuit = circ[pi]
        tau = conjugator_to(pi, circuit)
    else:
        pi = tied[0]
        circuit = pi
        tau = MonomialOp.identity(code.n)
    L = logical_matrix(pi, code, check=False)
    A = _basis_witness(L, target) if level != "fixed" else np.eye(2 * k, dtype=np.uint8)
    code_out = transform_code(basis_change(code, A), tau)
    realized = logical_action(circuit, code_out)

    exhaustive = False
    if level == "full":
        if cross_check is None:
            cross_check = code.n <= 5
        if cross_check:
            brute = brute_oracle(code, cls, metric, aut)
            if brute != best:
                raise AssertionError(f"search {best} disagrees with brute oracle {brute}")
            exhaustive = True
        else:
            _sample_check(pi, metric, best, samples, seed)
    else:
        exhaustive = True
    res = OptResult(realized.cls, best, circuit, tau, A, code_out, realized, pi, exhaustive,
                    upper_bound=not aut_complete(aut))
    verify_result(res, target=target, metric=metric)
    return res


def aut_complete(aut: AutGroup) -> bool:
    return getattr(aut, "complete", True)


def _sample_check(pi: MonomialOp, metric: Metric, best: int, samples: int, seed: int):
    """Random conjugates can never beat the cycle-product bound."""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        g = random_op(pi.n, rng)
        if metric.cost(conjugate_automorphism(g, pi)) < best:
            raise AssertionError("sampled conjugate beats the cycle-product bound")


def verify_result(res: OptResult, target=None, metric: Metric | None = None) -> None:
    """Raise unless the witnesses reproduce the reported action, class and cost."""
    again = logical_action(res.circuit, res.code_out)
    if not np.array_equal(again.L, res.realized.L) or again.cls != res.cls:
        raise AssertionError("witness does not reproduce the logical action")
    if target is not None and not np.array_equal(again.L, target):
        raise AssertionError("realised action differs from the requested target")
    if metric is not None and metric.cost(res.circuit) != res.cost:
        raise AssertionError("circuit cost differs from the reported cost")


def full_table(code: StabCode, metric: Metric = METRIC1, include_identity: bool = False,
               aut: AutGroup | None = None, cross_check: bool | None = None) -> list[OptResult]:
    aut = automorphism_group(code) if aut is None else aut
    groups = classify_automorphisms(code, aut)
    if cross_check is None:
        cross_check = code.n <= 5
    oracle = brute_table(code, metric, aut, groups) if cross_check else None
    rows = []
    for cls in groups:
        if cls == 1 and not include_identity:
            continue
        res = optimize(code, cls, metric, aut=aut, cross_check=False)
        if oracle is not None:
            if oracle[cls] != res.cost:
                raise AssertionError(f"class {cls}: search {res.cost} vs brute {oracle[cls]}")
            res.exhaustive = True
        rows.append(res)
    return rows


# -- brute oracle ------------------------------------------------------------------


def _brute_one(args):
    op, weights = args
    swaps, cliff = _Conjugator.get(op.n).swap_clifford_counts(op)
    return [int((w * swaps + cliff).min()) for w in weights]


_BRUTE_CACHE: dict[tuple, list[int]] = {}
# both default metrics are computed in one pass and cached per op
_DEFAULT_WEIGHTS = (7, 0)


def brute_costs(ops: list[MonomialOp], weights: tuple[int, ...], workers: int | None = None):
    """Per op, min over all monomial g of w*swaps + cliffords of g op g^{-1}, per weight."""
    workers = default_workers() if workers is None else workers
    allw = tuple(sorted(set(weights) | set(_DEFAULT_WEIGHTS)))
    todo = [op for op in ops if (op, allw) not in _BRUTE_CACHE]
    jobs = [(op, allw) for op in todo]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            done = list(ex.map(_brute_one, jobs))
    else:
        done = [_brute_one(j) for j in jobs]
    for op, vals in zip(todo, done):
        _BRUTE_CACHE[op, allw] = vals
    pos = [allw.index(w) for w in weights]
    return [[_BRUTE_CACHE[op, allw][i] for i in pos] for op in ops]


def brute_table(code: StabCode, metric: Metric, aut: AutGroup | None = None,
                groups=None) -> dict[int, int]:
    if code.n > 5:
        raise OptimizeError("brute oracle needs n <= 5")
    groups = classify_automorphisms(code, aut) if groups is None else groups
    out = {}
    for cls, ops in groups.items():
        out[cls] = min(c[0] for c in brute_costs(ops, (metric.swap_weight,)))
    return out


def brute_oracle(code: StabCode, cls: int, metric: Metric, aut: AutGroup | None = None) -> int:
    """Minimum metric over g pi g^{-1} for all g and all pi in the class (n <= 5)."""
    groups = classify_automorphisms(code, aut)
    if cls not in groups:
        raise OptimizeError(f"class {cls} is not realised by any automorphism")
    if code.n > 5:
        raise OptimizeError("brute oracle needs n <= 5")
    return min(c[0] for c in brute_costs(groups[cls], (metric.swap_weight,)))
