"""Logical action of automorphisms, basis change, and code equivalence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autgroup import is_automorphism
from .codes import CodeError, StabCode, dual_basis
from .gf4 import as_gf4, is_symplectic, phi, phi_inv, matmul2, trace_product
from .monomial import MonomialOp, OpError, apply, compose, inverse
from .symplectic import class_of


class NotAnAutomorphism(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LogicalAction:
    L: np.ndarray
    cls: int

    def __eq__(self, other):
        return (isinstance(other, LogicalAction) and self.cls == other.cls
                and np.array_equal(self.L, other.L))

    def __hash__(self):
        return hash((self.cls, self.L.tobytes()))


def logical_matrix(op: MonomialOp, code: StabCode, check: bool = True) -> np.ndarray:
    """``D_B (.) op(B)^T`` without class lookup."""
    if check and not is_automorphism(op, code):
        raise NotAnAutomorphism(f"{op} is not an automorphism of the code")
    return trace_product(dual_basis(code.B), apply(op, code.B))


def logical_action(op: MonomialOp, code: StabCode) -> LogicalAction:
    L = logical_matrix(op, code)
    if not is_symplectic(L):
        raise AssertionError("logical action is not symplectic")
    return LogicalAction(L, class_of(L, allow_k3=True))


def basis_change(code: StabCode, A) -> StabCode:
    """New basis rows are GF(2) combinations ``A B`` of the old ones."""
    A = np.asarray(A, dtype=np.uint8)
    if A.shape != (2 * code.k, 2 * code.k) or not is_symplectic(A):
        raise CodeError("basis change needs a binary symplectic 2k x 2k matrix")
    B = phi_inv(matmul2(A, phi(code.B)))
    return code.replace(B=B)


def transform_code(code: StabCode, tau: MonomialOp) -> StabCode:
    if tau.n != code.n:
        raise OpError(f"op acts on {tau.n} qubits, code has {code.n}")
    G = apply(tau, code.G) if code.G.size else code.G
    B = apply(tau, code.B) if code.B.size else code.B
    return code.replace(G=G, B=B)


def conjugate_automorphism(tau: MonomialOp, pi: MonomialOp) -> MonomialOp:
    """``tau pi tau^{-1}``: the automorphism of ``tau(C)`` matching ``pi`` on ``C``."""
    return compose(tau, compose(pi, inverse(tau)))


def transform_matrix(M, tau: MonomialOp) -> np.ndarray:
    return apply(tau, as_gf4(M))
