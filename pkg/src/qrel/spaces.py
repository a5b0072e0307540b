"""Operator spaces: subspaces of the n-by-m complex matrices.

A space is stored as a Hilbert-Schmidt-orthonormal basis, built by modified
Gram-Schmidt in input order with one re-orthogonalization pass.  Generators
whose orthogonal residual falls below rel_eps times the largest generator
norm are dropped as dependent, so the zero-dimensional space is a first-class
value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import orthonormal_rows
from .config import get_tolerance
from .errors import ValidationError
from .matrix import as_complex_matrix, hs_norm

__all__ = [
    "OperatorSpace",
    "adjoint_space",
    "contains",
    "equals",
    "intersect_space",
    "is_subspace_of",
    "orthogonal_complement",
    "product_space",
    "project_onto",
    "span",
    "subspace_residual",
    "sum_space",
]


@dataclass(frozen=True)
class OperatorSpace:
    row_dim: int
    col_dim: int
    basis: np.ndarray = field(repr=False)  # (dim, row_dim, col_dim), HS-orthonormal

    def __post_init__(self) -> None:
        basis = np.ascontiguousarray(self.basis, dtype=np.complex128)
        if basis.ndim != 3 or basis.shape[1:] != (self.row_dim, self.col_dim):
            raise ValidationError(
                f"basis shape {basis.shape} does not match "
                f"({self.row_dim}, {self.col_dim}) matrices"
            )
        if basis.shape[0] > self.row_dim * self.col_dim:
            raise ValidationError("basis is larger than the ambient dimension")
        flat = basis.reshape(basis.shape[0], self.row_dim * self.col_dim)
        gram = flat.conj() @ flat.T
        if not get_tolerance().is_zero(
            float(np.linalg.norm(gram - np.eye(basis.shape[0]))), max(basis.shape[0], 1)
        ):
            raise ValidationError("basis is not HS-orthonormal within tolerance")
        object.__setattr__(self, "basis", basis)
        basis.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_square(self) -> bool:
        return self.row_dim == self.col_dim

    def _flat(self) -> np.ndarray:
        return self.basis.reshape(self.dim, self.row_dim * self.col_dim)


def span(generators, shape: tuple[int, int] | None = None) -> OperatorSpace:
    """HS-orthonormal basis of the linear span of `generators`.

    `shape` is required when the generator sequence is empty.
    """
    mats = [as_complex_matrix(g, "generator") for g in generators]
    if mats:
        rows, cols = mats[0].shape
        for g in mats[1:]:
            if g.shape != (rows, cols):
                raise ValidationError(f"generator shape mismatch: {g.shape} vs {(rows, cols)}")
        if shape is not None and (rows, cols) != tuple(shape):
            raise ValidationError(f"generators have shape {(rows, cols)}, expected {shape}")
    elif shape is None:
        raise ValidationError("span of an empty sequence needs an explicit shape")
    else:
        rows, cols = shape
    if not mats:
        return OperatorSpace(rows, cols, np.zeros((0, rows, cols), np.complex128))
    stacked = np.stack(mats).reshape(len(mats), -1)
    largest = float(np.max(np.sqrt(np.sum(np.abs(stacked) ** 2, axis=1))))
    basis = orthonormal_rows(stacked, get_tolerance().cutoff(largest))
    return OperatorSpace(rows, cols, basis.reshape(-1, rows, cols))


def _check_shape(space: OperatorSpace, mat: np.ndarray, name: str = "matrix") -> None:
    if mat.shape != (space.row_dim, space.col_dim):
        raise ValidationError(
            f"{name} shape {mat.shape} does not match space shape "
            f"({space.row_dim}, {space.col_dim})"
        )


def project_onto(space: OperatorSpace, mat) -> np.ndarray:
    """HS-orthogonal projection of `mat` onto `space`."""
    mat = as_complex_matrix(mat)
    _check_shape(space, mat)
    if space.dim == 0:
        return np.zeros_like(mat)
    flat = space._flat()
    coeffs = flat.conj() @ mat.reshape(-1)
    return (coeffs @ flat).reshape(mat.shape)


def contains(space: OperatorSpace, mat) -> bool:
    """Membership up to tolerance: the projection residual must vanish."""
    mat = as_complex_matrix(mat)
    _check_shape(space, mat)
    residual = hs_norm(mat - project_onto(space, mat))
    return get_tolerance().is_zero(residual, hs_norm(mat))


def _residual_rows(flat: np.ndarray, target: OperatorSpace) -> np.ndarray:
    """Per-row norms of the components orthogonal to `target`."""
    if flat.shape[0] == 0:
        return np.zeros(0)
    if target.dim == 0:
        return np.sqrt(np.sum(np.abs(flat) ** 2, axis=1))
    tflat = target._flat()
    coeffs = flat @ tflat.conj().T
    resid = flat - coeffs @ tflat
    return np.sqrt(np.sum(np.abs(resid) ** 2, axis=1))


def is_subspace_of(inner: OperatorSpace, outer: OperatorSpace) -> bool:
    if (inner.row_dim, inner.col_dim) != (outer.row_dim, outer.col_dim):
        raise ValidationError("subspace test requires spaces of the same shape")
    residuals = _residual_rows(inner._flat(), outer)
    tol = get_tolerance()
    return bool(np.all(residuals <= tol.cutoff(1.0)))


def subspace_residual(inner: OperatorSpace, outer: OperatorSpace) -> float:
    """Largest residual of an `inner` basis element against `outer` (0 if empty)."""
    if (inner.row_dim, inner.col_dim) != (outer.row_dim, outer.col_dim):
        raise ValidationError("residual requires spaces of the same shape")
    residuals = _residual_rows(inner._flat(), outer)
    return float(residuals.max(initial=0.0))


def equals(left: OperatorSpace, right: OperatorSpace) -> bool:
    if (left.row_dim, left.col_dim) != (right.row_dim, right.col_dim):
        raise ValidationError("equality test requires spaces of the same shape")
    return (
        left.dim == right.dim
        and is_subspace_of(left, right)
        and is_subspace_of(right, left)
    )


def adjoint_space(space: OperatorSpace) -> OperatorSpace:
    """Space of Hermitian adjoints; an involution, and an isometry on bases."""
    flipped = np.conj(np.transpose(space.basis, (0, 2, 1)))
    return OperatorSpace(space.col_dim, space.row_dim, np.ascontiguousarray(flipped))


def product_space(left: OperatorSpace, right: OperatorSpace) -> OperatorSpace:
    """Span of all pairwise products of basis elements."""
    if left.col_dim != right.row_dim:
        raise ValidationError(
            f"inner dimensions do not match: {left.col_dim} vs {right.row_dim}"
        )
    shape = (left.row_dim, right.col_dim)
    if left.dim == 0 or right.dim == 0:
        return span([], shape=shape)
    products = np.einsum("aij,bjk->abik", left.basis, right.basis)
    return span(products.reshape(-1, *shape), shape=shape)


def sum_space(left: OperatorSpace, right: OperatorSpace) -> OperatorSpace:
    if (left.row_dim, left.col_dim) != (right.row_dim, right.col_dim):
        raise ValidationError("sum requires spaces of the same shape")
    shape = (left.row_dim, left.col_dim)
    combined = np.concatenate([left.basis, right.basis], axis=0)
    return span(combined, shape=shape)


def orthogonal_complement(space: OperatorSpace) -> OperatorSpace:
    """HS-orthogonal complement inside the full matrix space."""
    n, m = space.row_dim, space.col_dim
    ambient = n * m
    candidates = np.concatenate([space._flat(), np.eye(ambient, dtype=np.complex128)])
    basis = orthonormal_rows(candidates, get_tolerance().cutoff(1.0))
    return OperatorSpace(n, m, basis[space.dim :].reshape(-1, n, m))


def intersect_space(left: OperatorSpace, right: OperatorSpace) -> OperatorSpace:
    """Intersection computed through orthogonal complements."""
    if (left.row_dim, left.col_dim) != (right.row_dim, right.col_dim):
        raise ValidationError("intersection requires spaces of the same shape")
    return orthogonal_complement(
        sum_space(orthogonal_complement(left), orthogonal_complement(right))
    )
