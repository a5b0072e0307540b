"""Quantum relations: bimodules over the commutant of a *-algebra.

A quantum relation on an algebra M is an operator space V with
M' V M' contained in V.  The diagonal relation is M' itself; reflexivity,
symmetry, antisymmetry and transitivity mirror the classical definitions,
and relations on the diagonal algebra correspond one-to-one with ordinary
relations on {0, ..., m-1} (indices are 0-based throughout).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Compression, StarAlgebra, commutant, compress, diagonal_algebra, in_matrix_level
from .config import get_tolerance
from .errors import PreconditionError, ValidationError
from .matrix import Projection, as_complex_matrix, hs_norm, kron
from .spaces import (
    OperatorSpace,
    adjoint_space,
    contains,
    equals,
    intersect_space,
    is_subspace_of,
    product_space,
    span,
)

__all__ = [
    "ClassicalRelation",
    "QuantumRelation",
    "RelationProperties",
    "bimodule_closure",
    "check_properties",
    "classical_properties",
    "classical_to_quantum",
    "connects",
    "diagonal_relation",
    "is_bimodule",
    "is_independent",
    "is_quantum_graph",
    "quantum_to_classical",
    "restrict",
]


def is_bimodule(space: OperatorSpace, algebra: StarAlgebra) -> bool:
    """Whether M' . space . M' stays inside the space."""
    if (space.row_dim, space.col_dim) != (algebra.dim_ambient,) * 2:
        raise ValidationError("space and algebra live on different ambient dimensions")
    side = commutant(algebra).space
    if side.dim == 1:
        return True  # bimodule over the scalars is any subspace
    if space.dim == 0:
        return True
    triple = np.einsum("aij,gjk,ckl->agcil", side.basis, space.basis, side.basis)
    m = algebra.dim_ambient
    flat = triple.reshape(-1, m * m)
    target = space.basis.reshape(space.dim, -1)
    residual = flat - (flat @ target.conj().T) @ target
    tol = get_tolerance()
    norms = np.sqrt(np.sum(np.abs(residual) ** 2, axis=1))
    scales = np.sqrt(np.sum(np.abs(flat) ** 2, axis=1))
    return bool(np.all(norms <= np.maximum(tol.rel_eps * scales, tol.cutoff(1.0))))


@dataclass(frozen=True)
class QuantumRelation:
    algebra: StarAlgebra
    space: OperatorSpace

    def __post_init__(self) -> None:
        if not is_bimodule(self.space, self.algebra):
            raise PreconditionError("space is not a bimodule over the commutant")

    @property
    def dim_ambient(self) -> int:
        return self.algebra.dim_ambient


@dataclass(frozen=True)
class RelationProperties:
    reflexive: bool
    symmetric: bool
    antisymmetric: bool
    transitive: bool


@dataclass(frozen=True)
class ClassicalRelation:
    """A set of ordered pairs on {0, ..., size-1}."""

    size: int
    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        normalized = frozenset((int(i), int(j)) for i, j in self.pairs)
        for i, j in normalized:
            if not (0 <= i < self.size and 0 <= j < self.size):
                raise ValidationError(f"pair ({i}, {j}) out of range for size {self.size}")
        object.__setattr__(self, "pairs", normalized)

    @classmethod
    def diagonal(cls, size: int) -> "ClassicalRelation":
        return cls(size, frozenset((i, i) for i in range(size)))


def classical_properties(rel: ClassicalRelation) -> RelationProperties:
    pairs = rel.pairs
    reflexive = all((i, i) in pairs for i in range(rel.size))
    symmetric = all((j, i) in pairs for i, j in pairs)
    antisymmetric = all(i == j for i, j in pairs if (j, i) in pairs)
    transitive = all(
        (i, l) in pairs for i, j in pairs for k, l in pairs if j == k
    )
    return RelationProperties(reflexive, symmetric, antisymmetric, transitive)


def diagonal_relation(algebra: StarAlgebra) -> QuantumRelation:
    """The commutant, viewed as the diagonal quantum relation on the algebra."""
    return QuantumRelation(algebra, commutant(algebra).space)


def check_properties(relation: QuantumRelation) -> RelationProperties:
    side = commutant(relation.algebra).space
    space = relation.space
    reflexive = is_subspace_of(side, space)
    symmetric = equals(adjoint_space(space), space)
    antisymmetric = is_subspace_of(intersect_space(space, adjoint_space(space)), side)
    transitive = is_subspace_of(product_space(space, space), space)
    return RelationProperties(reflexive, symmetric, antisymmetric, transitive)


def is_quantum_graph(relation: QuantumRelation) -> bool:
    """Reflexive and symmetric: the graph case of a quantum relation."""
    flags = check_properties(relation)
    return flags.reflexive and flags.symmetric


def bimodule_closure(generators, algebra: StarAlgebra) -> QuantumRelation:
    """Smallest quantum relation on the algebra containing the generators.

    One pass of commutant-basis products on both sides suffices because the
    commutant is product-closed.
    """
    m = algebra.dim_ambient
    seed = span(generators, shape=(m, m))
    side = commutant(algebra).space
    if seed.dim == 0:
        return QuantumRelation(algebra, seed)
    if side.dim == 1:
        return QuantumRelation(algebra, seed)
    triple = np.einsum("aij,gjk,ckl->agcil", side.basis, seed.basis, side.basis)
    return QuantumRelation(algebra, span(triple.reshape(-1, m, m), shape=(m, m)))


def connects(relation: QuantumRelation, p: Projection, q: Projection, k: int) -> bool:
    """Whether some element of the relation joins the projection pair at level k.

    Requires both projections to lie in the k-th matrix level of the algebra;
    by linearity it is enough to test the basis elements.
    """
    m = relation.dim_ambient
    if p.dim != m * k or q.dim != m * k:
        raise ValidationError(
            f"projections must act on dimension {m * k}, got {p.dim} and {q.dim}"
        )
    if not in_matrix_level(relation.algebra, p.matrix, k):
        raise PreconditionError("left projection is not in the matrix level of the algebra")
    if not in_matrix_level(relation.algebra, q.matrix, k):
        raise PreconditionError("right projection is not in the matrix level of the algebra")
    tol = get_tolerance()
    eye = np.eye(k)
    p_norm = hs_norm(p.matrix)
    q_norm = hs_norm(q.matrix)
    for b in relation.space.basis:
        value = hs_norm(p.matrix @ kron(b, eye) @ q.matrix)
        if not tol.is_zero(value, p_norm * q_norm):
            return True
    return False


def restrict(relation: QuantumRelation, proj: Projection) -> QuantumRelation:
    """Induced relation on the compression of the algebra by a projection in it.

    The result lives on the compressed algebra; the isometry from
    :func:`qrel.algebra.compress` maps it back to the ambient picture.
    """
    if not contains(relation.algebra.space, proj.matrix):
        raise PreconditionError("projection does not lie in the algebra")
    comp = compress(relation.algebra, proj)
    w = comp.isometry
    squeezed = np.einsum("mr,tmn,ns->trs", w.conj(), relation.space.basis, w)
    r = proj.rank
    return QuantumRelation(comp.algebra, span(squeezed, shape=(r, r)))


def is_independent(relation: QuantumRelation, proj: Projection) -> bool:
    """Whether the restriction to the projection is the diagonal relation there.

    This is the graph-theoretic notion of an independent set; on the full
    matrix algebra it is exactly the Knill-Laflamme condition for a code.
    """
    if not is_quantum_graph(relation):
        raise PreconditionError("independence is defined for quantum graphs only")
    restricted = restrict(relation, proj)
    return equals(restricted.space, diagonal_relation(restricted.algebra).space)


def classical_to_quantum(rel: ClassicalRelation) -> QuantumRelation:
    """Span of the matrix units named by the pairs, over the diagonal algebra."""
    m = rel.size
    mats = []
    for i, j in sorted(rel.pairs):
        unit = np.zeros((m, m), np.complex128)
        unit[i, j] = 1.0
        mats.append(unit)
    return QuantumRelation(diagonal_algebra(m), span(mats, shape=(m, m)))


def quantum_to_classical(relation: QuantumRelation) -> ClassicalRelation:
    """Inverse of :func:`classical_to_quantum` for relations on the diagonal algebra."""
    m = relation.dim_ambient
    if not equals(relation.algebra.space, diagonal_algebra(m).space):
        raise PreconditionError("relation does not live on the diagonal algebra")
    pairs = set()
    for i in range(m):
        for j in range(m):
            unit = np.zeros((m, m), np.complex128)
            unit[i, j] = 1.0
            if contains(relation.space, unit):
                pairs.add((i, j))
    if len(pairs) != relation.space.dim:
        raise PreconditionError("relation is not spanned by matrix units")
    return ClassicalRelation(m, frozenset(pairs))
