"""Shared random generators for the test suite.

Everything here is oracle-side scaffolding: it deliberately leans on
numpy.linalg (QR, eigh) rather than the package's own kernels, so library
results are always checked against an independent path.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import block_diag

from qrel import (
    CPMap,
    Projection,
    StarAlgebra,
    algebra_closure,
    bimodule_closure,
    diagonal_algebra,
    diagonal_relation,
    full_matrix_algebra,
    scalar_algebra,
)

ALGEBRA_KINDS = ("full", "scalar", "diagonal", "block")


def rand_complex(rng, *shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def rand_hermitian(rng, n) -> np.ndarray:
    g = rand_complex(rng, n, n)
    return (g + g.conj().T) / 2


def rand_psd(rng, n, rank=None) -> np.ndarray:
    rank = n if rank is None else rank
    g = rand_complex(rng, n, max(rank, 1))
    if rank == 0:
        return np.zeros((n, n), complex)
    return g @ g.conj().T


def rand_unitary(rng, n) -> np.ndarray:
    q, r = np.linalg.qr(rand_complex(rng, n, n))
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def rand_isometry(rng, rows, cols) -> np.ndarray:
    q, _ = np.linalg.qr(rand_complex(rng, rows, cols))
    return q[:, :cols]


def rand_projection(rng, dim, rank=None) -> Projection:
    rank = int(rng.integers(0, dim + 1)) if rank is None else rank
    cols = rand_isometry(rng, dim, max(rank, 1))[:, :rank]
    return Projection(matrix=cols @ cols.conj().T, rank=rank)


def rand_cptp(rng, m, n, d) -> CPMap:
    """Random trace-preserving channel; pads d so that sum K*K can be I."""
    d = max(d, -(-m // n))
    g = rand_complex(rng, d, n, m)
    total = np.einsum("dni,dnj->ij", g.conj(), g)
    values, vectors = np.linalg.eigh(total)
    inv_root = vectors @ np.diag(1.0 / np.sqrt(values)) @ vectors.conj().T
    return CPMap(kraus=np.einsum("dnm,ml->dnl", g, inv_root), trace_preserving=True)


def rand_unital_cptp(rng, m, d) -> CPMap:
    """Random mixture of unitaries: trace preserving and unital, so both
    transport directions preserve operator systems."""
    probs = rng.random(d) + 0.1
    probs /= probs.sum()
    kraus = np.stack([np.sqrt(p) * rand_unitary(rng, m) for p in probs])
    return CPMap(kraus=kraus, trace_preserving=True)


def rand_stochastic(rng, n, m, density=0.7) -> np.ndarray:
    """Column-stochastic matrix with exact structural zeros."""
    t = rng.random((n, m)) * (rng.random((n, m)) < density)
    for col in range(m):
        if t[:, col].sum() == 0.0:
            t[int(rng.integers(0, n)), col] = 1.0
    return t / t.sum(axis=0)


def rand_subalgebra(rng, m, kind=None) -> StarAlgebra:
    kind = kind or ALGEBRA_KINDS[int(rng.integers(0, len(ALGEBRA_KINDS)))]
    if kind == "full":
        return full_matrix_algebra(m)
    if kind == "scalar":
        return scalar_algebra(m)
    if kind == "diagonal":
        return diagonal_algebra(m)
    parts = []
    left = m
    while left > 0:
        size = int(rng.integers(1, left + 1))
        parts.append(size)
        left -= size
    basis_change = rand_unitary(rng, m)
    gens = []
    for _ in range(2):
        blocks = [rand_complex(rng, s, s) for s in parts]
        gens.append(basis_change @ block_diag(*blocks) @ basis_change.conj().T)
    return algebra_closure(gens)


def rand_level_element(rng, algebra: StarAlgebra, k: int) -> np.ndarray:
    """Random Hermitian element of the k-th matrix level of the algebra."""
    m = algebra.dim_ambient
    coeffs = rand_complex(rng, algebra.dim, k, k)
    h = np.einsum("tij,tpq->ipjq", algebra.space.basis, coeffs).reshape(m * k, m * k)
    return h + h.conj().T


def rand_level_projection(rng, algebra: StarAlgebra, k: int) -> Projection:
    """Random projection inside the k-th matrix level.

    Takes a spectral projector of a random Hermitian level element, cutting
    only at spectral gaps so the result genuinely lies in the level.
    """
    h = rand_level_element(rng, algebra, k)
    values, vectors = np.linalg.eigh(h)
    gap = 1e-6 * max(1.0, float(np.max(np.abs(values))))
    cuts = [0] + [r for r in range(1, len(values)) if values[r] - values[r - 1] > gap]
    cuts.append(len(values))
    rank = cuts[int(rng.integers(0, len(cuts)))]
    cols = vectors[:, :rank]
    return Projection(matrix=cols @ cols.conj().T, rank=rank)


def rand_bimodule(rng, algebra: StarAlgebra, n_gens=1):
    if n_gens == 0:
        return diagonal_relation(algebra)
    m = algebra.dim_ambient
    return bimodule_closure([rand_complex(rng, m, m) for _ in range(n_gens)], algebra)


def projector_onto(vectors) -> Projection:
    """Projection onto the span of explicit column vectors (oracle-side)."""
    stacked = np.stack([np.asarray(v, dtype=complex) for v in vectors], axis=1)
    q, _ = np.linalg.qr(stacked)
    q = q[:, : np.linalg.matrix_rank(stacked)]
    return Projection(matrix=q @ q.conj().T, rank=q.shape[1])


def bit_flip_channel(p0=0.7, p1=0.1, p2=0.1, p3=0.1) -> CPMap:
    """Three-qubit bit-flip channel with Kraus proportional to I, X1, X2, X3."""
    eye2 = np.eye(2, dtype=complex)
    flip = np.array([[0, 1], [1, 0]], dtype=complex)
    ops = [
        np.eye(8, dtype=complex),
        np.kron(flip, np.kron(eye2, eye2)),
        np.kron(eye2, np.kron(flip, eye2)),
        np.kron(eye2, np.kron(eye2, flip)),
    ]
    probs = (p0, p1, p2, p3)
    return CPMap(
        kraus=np.stack([np.sqrt(p) * op for p, op in zip(probs, ops)]),
        trace_preserving=True,
    )


def basis_state(dim, index) -> np.ndarray:
    v = np.zeros(dim)
    v[index] = 1.0
    return v
