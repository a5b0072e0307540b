"""Dense complex matrix kernel.

Matrices are plain complex128 ndarrays.  This module supplies the
Hilbert-Schmidt geometry, the Hermitian eigensolver, range projections and
joins, and the Kronecker product convention used everywhere else:
``kron(A, B)[(i, p), (j, q)] = A[i, j] * B[p, q]`` with the row index
``(i, p) = i * B.rows + p`` (row-major block order, first factor major).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_eigh
from .config import Tolerance, get_tolerance
from .errors import PreconditionError, ValidationError

__all__ = [
    "Projection",
    "Tolerance",
    "as_complex_matrix",
    "hermitian_eig",
    "hs_inner",
    "hs_norm",
    "is_hermitian",
    "join",
    "kron",
    "range_projection",
]


def as_complex_matrix(value, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    arr = np.asarray(value, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(a* b), conjugate-linear in `a`."""
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_norm(a: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(a))


def is_hermitian(a: np.ndarray, tol: Tolerance | None = None) -> bool:
    tol = tol or get_tolerance()
    if a.shape[0] != a.shape[1]:
        return False
    return tol.is_zero(hs_norm(a - a.conj().T), hs_norm(a))


def hermitian_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition a = V diag(w) V* of a Hermitian matrix.

    Eigenvalues come back real and sorted descending; V is unitary with
    eigenvectors as columns.  Rejects non-square or non-Hermitian input.
    """
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a):
        raise PreconditionError("matrix is not Hermitian within tolerance")
    return jacobi_eigh((a + a.conj().T) / 2.0)


@dataclass(frozen=True)
class Projection:
    """An orthogonal projection together with its rank."""

    matrix: np.ndarray
    rank: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", as_complex_matrix(self.matrix))
        self.matrix.setflags(write=False)

    @classmethod
    def from_matrix(cls, candidate) -> "Projection":
        """Validate idempotence and self-adjointness, then infer the rank."""
        mat = as_complex_matrix(candidate, "projection")
        if mat.shape[0] != mat.shape[1]:
            raise PreconditionError("a projection must be square")
        tol = get_tolerance()
        norm = hs_norm(mat)
        scale = max(norm, norm * norm)
        if not tol.is_zero(hs_norm(mat - mat.conj().T), scale):
            raise PreconditionError("matrix is not self-adjoint within tolerance")
        if not tol.is_zero(hs_norm(mat @ mat - mat), scale):
            raise PreconditionError("matrix is not idempotent within tolerance")
        trace = float(np.trace(mat).real)
        rank = int(round(trace))
        if abs(trace - rank) > tol.cutoff(max(scale, 1.0)):
            raise PreconditionError("projection trace is not close to an integer")
        return cls(matrix=mat, rank=rank)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def zero(cls, dim: int) -> "Projection":
        return cls(matrix=np.zeros((dim, dim), np.complex128), rank=0)

    @classmethod
    def identity(cls, dim: int) -> "Projection":
        return cls(matrix=np.eye(dim, dtype=np.complex128), rank=dim)


def range_projection(a: np.ndarray) -> Projection:
    """Orthogonal projection [a] onto the range of `a`.

    Hermitian input is eigendecomposed directly; anything else goes through
    [a] = [a a*].  Eigenvalues count toward the rank when their magnitude
    exceeds rel_eps * max(lambda_max, abs_floor); the zero matrix yields the
    zero projection.
    """
    a = as_complex_matrix(a)
    tol = get_tolerance()
    if a.shape[0] == a.shape[1] and is_hermitian(a):
        values, vectors = hermitian_eig(a)
        magnitudes = np.abs(values)
    else:
        gram = a @ a.conj().T
        values, vectors = hermitian_eig(gram)
        magnitudes = values
    top = float(magnitudes.max(initial=0.0))
    keep = magnitudes > tol.cutoff(top)
    cols = vectors[:, keep]
    return Projection(matrix=cols @ cols.conj().T, rank=int(keep.sum()))


def join(projections) -> Projection:
    """Smallest projection dominating every operand: [sum of the P_i]."""
    projections = list(projections)
    if not projections:
        raise ValidationError("join requires at least one projection")
    dim = projections[0].dim
    total = np.zeros((dim, dim), np.complex128)
    for proj in projections:
        if proj.dim != dim:
            raise ValidationError(f"dimension mismatch in join: {proj.dim} vs {dim}")
        total += proj.matrix
    return range_projection(total)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product in the package-wide row-major block order."""
    return np.kron(as_complex_matrix(a, "a"), as_complex_matrix(b, "b"))
