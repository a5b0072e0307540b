"""Completely positive maps given by Kraus families.

A map from the m-by-m to the n-by-n matrices is stored as a stack of n-by-m
Kraus matrices.  Application is offered in both pictures: `apply` acts on
states, `adjoint_apply` on observables, each extended entrywise to level-k
composites.  The Kraus family is not canonicalized; representation
independence is a property demonstrated by tests through `kraus_mix`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tolerance
from .errors import PreconditionError, ValidationError
from .matrix import Projection, as_complex_matrix, hs_norm, join, kron, range_projection

__all__ = [
    "CPMap",
    "backward_projection",
    "classical_channel",
    "compose",
    "identity_channel",
    "kraus_mix",
]


@dataclass(frozen=True)
class CPMap:
    kraus: np.ndarray  # (d, out_dim, in_dim)
    trace_preserving: bool = False

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.kraus, dtype=np.complex128)
        if arr.ndim != 3 or arr.shape[0] == 0:
            raise ValidationError("kraus must be a nonempty stack of matrices")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValidationError("kraus contains non-finite entries")
        object.__setattr__(self, "kraus", arr)
        arr.setflags(write=False)
        if self.trace_preserving:
            total = np.einsum("dni,dnj->ij", arr.conj(), arr)
            m = self.in_dim
            if not get_tolerance().is_zero(
                hs_norm(total - np.eye(m)), max(np.sqrt(m), 1.0)
            ):
                raise ValidationError(
                    "kraus family is not trace preserving: sum K*K differs from I"
                )

    @property
    def in_dim(self) -> int:
        return self.kraus.shape[2]

    @property
    def out_dim(self) -> int:
        return self.kraus.shape[1]

    @property
    def kraus_count(self) -> int:
        return self.kraus.shape[0]

    def apply(self, state, k: int = 1) -> np.ndarray:
        """State picture: sum_i (K_i x I_k) rho (K_i* x I_k)."""
        rho = as_complex_matrix(state, "state")
        m, n = self.in_dim, self.out_dim
        if k < 1:
            raise ValidationError("level k must be at least 1")
        if rho.shape != (m * k, m * k):
            raise ValidationError(f"state shape {rho.shape} is not ({m * k}, {m * k})")
        blocks = rho.reshape(m, k, m, k)
        out = np.einsum("dac,cpeq,dbe->apbq", self.kraus, blocks, self.kraus.conj())
        return np.ascontiguousarray(out.reshape(n * k, n * k))

    def adjoint_apply(self, observable, k: int = 1) -> np.ndarray:
        """Observable picture: sum_i (K_i* x I_k) A (K_i x I_k); unital when trace preserving."""
        obs = as_complex_matrix(observable, "observable")
        m, n = self.in_dim, self.out_dim
        if k < 1:
            raise ValidationError("level k must be at least 1")
        if obs.shape != (n * k, n * k):
            raise ValidationError(f"observable shape {obs.shape} is not ({n * k}, {n * k})")
        blocks = obs.reshape(n, k, n, k)
        out = np.einsum("dca,cpeq,deb->apbq", self.kraus.conj(), blocks, self.kraus)
        return np.ascontiguousarray(out.reshape(m * k, m * k))

    def adjoint(self) -> "CPMap":
        """The CP map with every Kraus matrix adjointed (not trace preserving in general)."""
        flipped = np.ascontiguousarray(np.conj(np.transpose(self.kraus, (0, 2, 1))))
        return CPMap(kraus=flipped, trace_preserving=False)


def identity_channel(m: int) -> CPMap:
    return CPMap(kraus=np.eye(m, dtype=np.complex128).reshape(1, m, m), trace_preserving=True)


def compose(second: CPMap, first: CPMap) -> CPMap:
    """Composition second(first(.)); Kraus family is all pairwise products."""
    if first.out_dim != second.in_dim:
        raise ValidationError(
            f"inner dimensions do not match: {first.out_dim} vs {second.in_dim}"
        )
    products = np.einsum("aij,bjk->abik", second.kraus, first.kraus)
    stacked = products.reshape(-1, second.out_dim, first.in_dim)
    return CPMap(
        kraus=stacked,
        trace_preserving=first.trace_preserving and second.trace_preserving,
    )


def classical_channel(transition) -> CPMap:
    """Embed a column-stochastic transition matrix as a channel on diagonals.

    Rows index outputs, columns inputs; the Kraus family enumerates the
    nonzero transitions input-major, so diag(p) maps to diag(T p).
    """
    t = np.asarray(transition, dtype=np.float64)
    if t.ndim != 2:
        raise ValidationError("transition matrix must be 2-dimensional")
    if not np.all(np.isfinite(t)):
        raise ValidationError("transition matrix contains non-finite entries")
    n, m = t.shape
    tol = get_tolerance()
    if np.any(t < -tol.cutoff(1.0)):
        raise PreconditionError("transition matrix has negative entries")
    sums = t.sum(axis=0)
    if not np.all(np.abs(sums - 1.0) <= tol.cutoff(np.sqrt(n))):
        raise PreconditionError("transition matrix columns must sum to one")
    kraus = []
    for i in range(m):
        for j in range(n):
            if t[j, i] > 0:
                mat = np.zeros((n, m), np.complex128)
                mat[j, i] = np.sqrt(t[j, i])
                kraus.append(mat)
    return CPMap(kraus=np.stack(kraus), trace_preserving=True)


def kraus_mix(channel: CPMap, mix) -> CPMap:
    """Re-express the channel through an isometry acting on the Kraus index.

    `mix` is a d'-by-d matrix with mix* mix = I; the resulting family
    represents the same map.
    """
    u = as_complex_matrix(mix, "mix")
    d = channel.kraus_count
    if u.shape[1] != d:
        raise ValidationError(f"mix must have {d} columns, got {u.shape[1]}")
    if u.shape[0] < d:
        raise PreconditionError("mix must have at least as many rows as columns")
    if not get_tolerance().is_zero(
        hs_norm(u.conj().T @ u - np.eye(d)), max(np.sqrt(d), 1.0)
    ):
        raise PreconditionError("mix is not an isometry")
    mixed = np.einsum("ab,bnm->anm", u, channel.kraus)
    return CPMap(kraus=mixed, trace_preserving=channel.trace_preserving)


def backward_projection(channel: CPMap, proj: Projection, k: int = 1) -> Projection:
    """Pull a projection back through the observable picture of the channel.

    Returns the join of the range projections of (K_i x I_k) P.  A positive
    A is killed by the adjoint map against P exactly when A is killed by the
    returned projection, which is how hereditary cones transport.
    """
    m = channel.in_dim
    if k < 1:
        raise ValidationError("level k must be at least 1")
    if proj.dim != m * k:
        raise ValidationError(f"projection dimension {proj.dim} is not {m * k}")
    eye = np.eye(k)
    lifted = [range_projection(kron(ki, eye) @ proj.matrix) for ki in channel.kraus]
    return join(lifted)
