"""Constructive separation of a matrix from an operator space.

Given B outside V, produce a vector pair at level k = m whose pairing
vanishes on all of V but not on B, and (for a quantum relation) a pair of
projections in the m-th matrix level of the algebra with the same property.
Collecting such projection pairs for a basis of the orthogonal complement
recovers the relation from its connection behavior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import commutant, in_matrix_level
from .config import get_tolerance
from .errors import PreconditionError
from .matrix import Projection, as_complex_matrix, hermitian_eig, hs_norm, range_projection
from .relation import QuantumRelation
from .spaces import OperatorSpace, adjoint_space, orthogonal_complement, project_onto, span

__all__ = [
    "WitnessProjections",
    "WitnessVectors",
    "recover_space",
    "separate_projections",
    "separate_vectors",
]


@dataclass(frozen=True)
class WitnessVectors:
    k: int
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self) -> None:
        self.alpha.setflags(write=False)
        self.beta.setflags(write=False)


@dataclass(frozen=True)
class WitnessProjections:
    k: int
    left: Projection
    right: Projection


def _dual_element(space: OperatorSpace, target: np.ndarray) -> np.ndarray:
    """A unit matrix C with Tr(AC) = 0 on the space but Tr(target C) != 0.

    Primary construction: the adjoint of the orthogonal residual of the
    target.  If the pairing check fails, fall back to scanning the
    complement of the adjoint space for the best-paired element.
    """
    tol = get_tolerance()
    residual = target - project_onto(space, target)
    scale = max(hs_norm(target), 1.0)
    if tol.is_zero(hs_norm(residual), scale):
        raise PreconditionError("matrix lies in the space; no separating witness exists")
    dual = residual.conj().T
    dual = dual / hs_norm(dual)
    pair_ok = all(
        tol.is_zero(abs(np.trace(b @ dual)), 1.0) for b in space.basis
    ) and not tol.is_zero(abs(np.trace(target @ dual)), scale)
    if pair_ok:
        return dual
    candidates = orthogonal_complement(adjoint_space(space)).basis
    pairings = np.array([abs(np.trace(target @ c)) for c in candidates])
    best = int(np.argmax(pairings))
    if tol.is_zero(float(pairings[best]), scale):
        raise PreconditionError("no dual element pairs nontrivially with the matrix")
    return candidates[best]


def separate_vectors(space: OperatorSpace, target) -> WitnessVectors:
    """Vector pair at level k = m separating `target` from the space.

    With C the dual element, alpha is the flattened identity and beta the
    flattened C, so the pairing of alpha and beta against any A tensored
    with the level identity equals Tr(AC) exactly.
    """
    target = as_complex_matrix(target, "target")
    m = space.row_dim
    if not space.is_square or target.shape != (m, m):
        raise PreconditionError("vector separation needs a square space and matching matrix")
    dual = _dual_element(space, target)
    alpha = np.eye(m, dtype=np.complex128).reshape(-1)
    beta = dual.reshape(-1).copy()
    return WitnessVectors(k=m, alpha=alpha, beta=beta)


def _orbit_projection(side_basis: np.ndarray, vec_matrix: np.ndarray) -> Projection:
    """Projection onto the orbit of a level-m vector under commutant tensor identity.

    A level-m vector is the flattening of an m-by-m matrix X, and the orbit
    vectors (A tensor I) vec(X) = vec(A X) are flattened products.
    """
    columns = np.stack([(a @ vec_matrix).reshape(-1) for a in side_basis], axis=1)
    return range_projection(columns @ columns.conj().T)


def separate_projections(relation: QuantumRelation, target) -> WitnessProjections:
    """Projection pair in the m-th matrix level separating `target` from the relation."""
    target = as_complex_matrix(target, "target")
    m = relation.dim_ambient
    vectors = separate_vectors(relation.space, target)
    side = commutant(relation.algebra).space.basis
    left = _orbit_projection(side, vectors.alpha.reshape(m, m))
    right = _orbit_projection(side, vectors.beta.reshape(m, m))
    assert in_matrix_level(relation.algebra, left.matrix, m)
    assert in_matrix_level(relation.algebra, right.matrix, m)
    return WitnessProjections(k=m, left=left, right=right)


def recover_space(relation: QuantumRelation) -> OperatorSpace:
    """Rebuild the relation from the projection pairs separating its complement.

    For each basis element of the orthogonal complement, collect the witness
    pair and return the common nullspace of A -> P (A tensor I_m) Q.  The
    result equals the original space.
    """
    m = relation.dim_ambient
    complement = orthogonal_complement(relation.space)
    if complement.dim == 0:
        return relation.space
    witnesses = [separate_projections(relation, b) for b in complement.basis]
    normal = np.zeros((m * m, m * m), np.complex128)
    for wit in witnesses:
        p = wit.left.matrix
        q = wit.right.matrix
        columns = np.empty((m * m * m * m, m * m), np.complex128)
        col = 0
        for u in range(m):
            p_block = p[:, u * m : (u + 1) * m]
            for v in range(m):
                q_block = q[v * m : (v + 1) * m, :]
                columns[:, col] = (p_block @ q_block).reshape(-1)
                col += 1
        normal += columns.conj().T @ columns
    values, vectors = hermitian_eig(normal)
    cutoff = get_tolerance().cutoff(float(values.max(initial=0.0)))
    null_vectors = vectors[:, values <= cutoff]
    mats = np.ascontiguousarray(null_vectors.T).reshape(-1, m, m)
    return span(mats, shape=(m, m))
