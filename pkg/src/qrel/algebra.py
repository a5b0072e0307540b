"""Unital *-subalgebras of the m-by-m matrices.

An algebra is held as the operator space it spans; construction validates
that the span contains the identity and is closed under adjoints and
products.  The commutant is computed as the eigen-nullspace of the Hermitian
normal matrix of the stacked commutator operators, reusing the one
eigensolver, and is cached on the instance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tolerance
from .errors import PreconditionError, ValidationError
from .matrix import Projection, as_complex_matrix, hermitian_eig, hs_norm
from .spaces import OperatorSpace, adjoint_space, contains, equals, is_subspace_of, span

__all__ = [
    "Compression",
    "StarAlgebra",
    "algebra_closure",
    "ampliate",
    "commutant",
    "compress",
    "diagonal_algebra",
    "full_matrix_algebra",
    "in_matrix_level",
    "scalar_algebra",
]


@dataclass(frozen=True)
class StarAlgebra:
    dim_ambient: int
    space: OperatorSpace

    def __post_init__(self) -> None:
        m = self.dim_ambient
        if (self.space.row_dim, self.space.col_dim) != (m, m):
            raise ValidationError("algebra span must consist of square ambient matrices")
        if not contains(self.space, np.eye(m)):
            raise PreconditionError("algebra does not contain the identity")
        if not is_subspace_of(adjoint_space(self.space), self.space):
            raise PreconditionError("algebra is not closed under adjoints")
        if not _products_stay_inside(self.space):
            raise PreconditionError("algebra is not closed under products")

    @property
    def dim(self) -> int:
        return self.space.dim


def _products_stay_inside(space: OperatorSpace) -> bool:
    """Check b_i b_j lies in the span for every basis pair, batched."""
    d = space.dim
    if d == 0:
        return False
    products = np.einsum("aij,bjk->abik", space.basis, space.basis).reshape(d * d, -1)
    flat = space.basis.reshape(d, -1)
    residual = products - (products @ flat.conj().T) @ flat
    tol = get_tolerance()
    norms = np.sqrt(np.sum(np.abs(residual) ** 2, axis=1))
    scales = np.sqrt(np.sum(np.abs(products) ** 2, axis=1))
    return bool(np.all(norms <= np.maximum(tol.rel_eps * scales, tol.cutoff(1.0))))


def full_matrix_algebra(m: int) -> StarAlgebra:
    """The full matrix algebra, spanned by the matrix units."""
    basis = np.eye(m * m, dtype=np.complex128).reshape(m * m, m, m)
    return StarAlgebra(m, OperatorSpace(m, m, basis))


def diagonal_algebra(m: int) -> StarAlgebra:
    """The algebra of diagonal matrices."""
    basis = np.zeros((m, m, m), np.complex128)
    for i in range(m):
        basis[i, i, i] = 1.0
    return StarAlgebra(m, OperatorSpace(m, m, basis))


def scalar_algebra(m: int) -> StarAlgebra:
    """The scalar multiples of the identity."""
    basis = (np.eye(m, dtype=np.complex128) / np.sqrt(m)).reshape(1, m, m)
    return StarAlgebra(m, OperatorSpace(m, m, basis))


def algebra_closure(generators, dim: int | None = None) -> StarAlgebra:
    """Smallest unital *-algebra whose span contains the generators.

    Repeatedly adjoins the identity, adjoints, and pairwise products until
    the span dimension stabilizes.
    """
    mats = [as_complex_matrix(g, "generator") for g in generators]
    if mats:
        m = mats[0].shape[0]
    elif dim is not None:
        m = dim
    else:
        raise ValidationError("algebra_closure of no generators needs an explicit dim")
    for g in mats:
        if g.shape != (m, m):
            raise ValidationError(f"generators must be square of dimension {m}")
    seed = [np.eye(m, dtype=np.complex128)]
    for g in mats:
        seed.append(g)
        seed.append(g.conj().T)
    current = span(seed, shape=(m, m))
    while True:
        products = np.einsum("aij,bjk->abik", current.basis, current.basis)
        grown = span(
            np.concatenate([current.basis, products.reshape(-1, m, m)]), shape=(m, m)
        )
        if grown.dim == current.dim:
            break
        current = grown
    return StarAlgebra(m, current)


def commutant(algebra: StarAlgebra) -> StarAlgebra:
    """All matrices commuting with the algebra.

    Solves the stacked commutator equations b_i B - B b_i = 0 through the
    Hermitian normal matrix on vec(B), taking the eigen-nullspace under the
    global rank cutoff.  The result is cached on the instance.
    """
    cached = getattr(algebra, "_commutant_cache", None)
    if cached is not None:
        return cached
    m = algebra.dim_ambient
    eye = np.eye(m)
    normal = np.zeros((m * m, m * m), np.complex128)
    for b in algebra.space.basis:
        op = np.kron(b, eye) - np.kron(eye, b.T)
        normal += op.conj().T @ op
    values, vectors = hermitian_eig(normal)
    tol = get_tolerance()
    cutoff = tol.cutoff(float(values.max(initial=0.0)))
    null_vectors = vectors[:, values <= cutoff]
    mats = np.ascontiguousarray(null_vectors.T).reshape(-1, m, m)
    result = StarAlgebra(m, span(mats, shape=(m, m)))
    object.__setattr__(algebra, "_commutant_cache", result)
    return result


def in_matrix_level(algebra: StarAlgebra, candidate, k: int) -> bool:
    """Membership of a (k*m)-dimensional matrix in the k-th matrix level of the algebra.

    The level is the algebra tensored with the full k-by-k matrices, in the
    package kron order; membership is tested through the block coefficient
    residual, without materializing the level basis.
    """
    mat = as_complex_matrix(candidate, "candidate")
    m = algebra.dim_ambient
    if k < 1:
        raise ValidationError("matrix level k must be at least 1")
    if mat.shape != (m * k, m * k):
        raise ValidationError(f"candidate shape {mat.shape} is not ({m * k}, {m * k})")
    blocks = mat.reshape(m, k, m, k)
    coeffs = np.einsum("tij,ipjq->tpq", algebra.space.basis.conj(), blocks)
    recon = np.einsum("tij,tpq->ipjq", algebra.space.basis, coeffs)
    residual = float(np.linalg.norm(blocks - recon))
    return get_tolerance().is_zero(residual, hs_norm(mat))


@dataclass(frozen=True)
class Compression:
    """An algebra compressed to the range of a projection, plus the isometry back."""

    algebra: StarAlgebra
    isometry: np.ndarray  # (m, r): columns span the range of the projection

    def __post_init__(self) -> None:
        self.isometry.setflags(write=False)


def compress(algebra: StarAlgebra, proj: Projection) -> Compression:
    """Represent the compression E M E on the range of E, identified with M_r.

    The projection must lie in the algebra or commute with it (either makes
    the compression an algebra).  The isometry columns are the eigenvalue-one
    eigenvectors of E in descending eigenvalue-then-index order.
    """
    m = algebra.dim_ambient
    if proj.dim != m:
        raise ValidationError(f"projection dimension {proj.dim} does not match {m}")
    if proj.rank == 0:
        raise PreconditionError("cannot compress by a rank-zero projection")
    tol = get_tolerance()
    commutes = all(
        tol.is_zero(hs_norm(proj.matrix @ b - b @ proj.matrix), hs_norm(proj.matrix))
        for b in algebra.space.basis
    )
    if not commutes and not contains(algebra.space, proj.matrix):
        raise PreconditionError("projection neither lies in nor commutes with the algebra")
    values, vectors = hermitian_eig(proj.matrix)
    isometry = np.ascontiguousarray(vectors[:, : proj.rank])
    compressed = np.einsum(
        "mr,tmn,ns->trs", isometry.conj(), algebra.space.basis, isometry
    )
    small = StarAlgebra(proj.rank, span(compressed, shape=(proj.rank, proj.rank)))
    return Compression(algebra=small, isometry=isometry)


def ampliate(space: OperatorSpace, k: int) -> OperatorSpace:
    """Tensor a square operator space with the full k-by-k matrices."""
    if not space.is_square:
        raise ValidationError("ampliation requires a square operator space")
    if k < 1:
        raise ValidationError("ampliation level must be at least 1")
    m = space.row_dim
    out = np.zeros((space.dim, k, k, m * k, m * k), np.complex128)
    for t, b in enumerate(space.basis):
        for p in range(k):
            for q in range(k):
                unit = np.zeros((k, k), np.complex128)
                unit[p, q] = 1.0
                out[t, p, q] = np.kron(b, unit)
    return OperatorSpace(m * k, m * k, out.reshape(-1, m * k, m * k))
