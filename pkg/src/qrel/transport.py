"""Moving relations along channels: pushforward, pullback, confusability.

The pushforward of V along a channel with Kraus family {K_i} is the bimodule
generated by {K_i A K_j*}; the pullback of W is the bimodule generated by
{K_i* B K_j}.  The confusability graph is the pullback of the diagonal
relation on the output side, and a projection is a Knill-Laflamme code
exactly when it is independent in that graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import StarAlgebra, full_matrix_algebra
from .channel import CPMap
from .config import get_tolerance
from .errors import PreconditionError, ValidationError
from .matrix import Projection, as_complex_matrix, hermitian_eig, hs_norm, kron
from .relation import QuantumRelation, bimodule_closure, diagonal_relation
from .spaces import OperatorSpace, contains, is_subspace_of, span

__all__ = [
    "MorphismVerdict",
    "KrausCodeReport",
    "bipartite_connects",
    "bipartite_graph",
    "confusability",
    "dual_confusability",
    "is_cp_morphism",
    "kl_check",
    "pullback",
    "pushforward",
]


def pushforward(
    relation: QuantumRelation, channel: CPMap, codomain: StarAlgebra | None = None
) -> QuantumRelation:
    """Transport a relation forward along a channel.

    The codomain algebra defaults to the full matrix algebra on the output
    side, where the result is just the span of the generators.
    """
    m, n = channel.in_dim, channel.out_dim
    if relation.dim_ambient != m:
        raise ValidationError(
            f"relation lives on dimension {relation.dim_ambient}, channel expects {m}"
        )
    codomain = codomain if codomain is not None else full_matrix_algebra(n)
    if codomain.dim_ambient != n:
        raise ValidationError("codomain algebra does not match the channel output")
    gens = np.einsum(
        "inm,tml,jrl->tijnr", channel.kraus, relation.space.basis, channel.kraus.conj()
    )
    return bimodule_closure(gens.reshape(-1, n, n), codomain)


def pullback(
    relation: QuantumRelation, channel: CPMap, domain: StarAlgebra | None = None
) -> QuantumRelation:
    """Transport a relation on the output side back along a channel."""
    m, n = channel.in_dim, channel.out_dim
    if relation.dim_ambient != n:
        raise ValidationError(
            f"relation lives on dimension {relation.dim_ambient}, channel outputs {n}"
        )
    domain = domain if domain is not None else full_matrix_algebra(m)
    if domain.dim_ambient != m:
        raise ValidationError("domain algebra does not match the channel input")
    gens = np.einsum(
        "inm,tnr,jrl->tijml", channel.kraus.conj(), relation.space.basis, channel.kraus
    )
    return bimodule_closure(gens.reshape(-1, m, m), domain)


def confusability(channel: CPMap, domain: StarAlgebra | None = None) -> QuantumRelation:
    """Pullback of the diagonal relation on the output: the span of {K_i* K_j}
    over the full matrix algebra, and its bimodule closure otherwise."""
    target = diagonal_relation(full_matrix_algebra(channel.out_dim))
    return pullback(target, channel, domain)


def dual_confusability(channel: CPMap, codomain: StarAlgebra | None = None) -> QuantumRelation:
    """Pushforward of the diagonal relation on the input side."""
    source = diagonal_relation(full_matrix_algebra(channel.in_dim))
    return pushforward(source, channel, codomain)


def bipartite_graph(channel: CPMap) -> OperatorSpace:
    """Span of the Kraus matrices: a rectangular relation from input to output."""
    return span(channel.kraus, shape=(channel.out_dim, channel.in_dim))


def _require_positive(mat: np.ndarray, name: str) -> None:
    values, _ = hermitian_eig(mat)
    if values.size and values[-1] < -get_tolerance().cutoff(hs_norm(mat)):
        raise PreconditionError(f"{name} is not positive semidefinite")


def bipartite_connects(channel: CPMap, state_in, state_out, k: int = 1) -> bool:
    """Whether the Kraus span joins two positive composites at level k.

    Equivalent to the image of the input state overlapping the output state:
    apply(state_in) . state_out is nonzero.
    """
    a = as_complex_matrix(state_in, "state_in")
    c = as_complex_matrix(state_out, "state_out")
    m, n = channel.in_dim, channel.out_dim
    if a.shape != (m * k, m * k):
        raise ValidationError(f"state_in shape {a.shape} is not ({m * k}, {m * k})")
    if c.shape != (n * k, n * k):
        raise ValidationError(f"state_out shape {c.shape} is not ({n * k}, {n * k})")
    _require_positive(a, "state_in")
    _require_positive(c, "state_out")
    tol = get_tolerance()
    eye = np.eye(k)
    a_norm, c_norm = hs_norm(a), hs_norm(c)
    for b in bipartite_graph(channel).basis:
        if not tol.is_zero(hs_norm(c @ kron(b, eye) @ a), a_norm * c_norm):
            return True
    return False


@dataclass(frozen=True)
class KrausCodeReport:
    """Outcome of the Knill-Laflamme check; coefficients are present only for codes."""

    is_code: bool
    lambda_matrix: np.ndarray | None


def kl_check(channel: CPMap, code: Projection) -> KrausCodeReport:
    """Knill-Laflamme conditions: E K_i* K_j E must be a scalar multiple of E.

    The scalar is extracted by the trace formula; equivalently the projection
    is independent in the confusability graph on the full matrix algebra.
    """
    m = channel.in_dim
    if code.dim != m:
        raise ValidationError(f"projection dimension {code.dim} is not {m}")
    if code.rank == 0:
        raise PreconditionError("Knill-Laflamme check needs a nonzero projection")
    tol = get_tolerance()
    d = channel.kraus_count
    coeffs = np.zeros((d, d), np.complex128)
    e = code.matrix
    ok = True
    for i in range(d):
        for j in range(d):
            pair = channel.kraus[i].conj().T @ channel.kraus[j]
            squeezed = e @ pair @ e
            lam = np.trace(squeezed) / code.rank
            coeffs[i, j] = lam
            if not tol.is_zero(hs_norm(squeezed - lam * e), hs_norm(pair)):
                ok = False
    return KrausCodeReport(is_code=ok, lambda_matrix=coeffs if ok else None)


@dataclass(frozen=True)
class MorphismVerdict:
    """Strong: pushforward lands inside the target.  Weak: source lies in the pullback."""

    strong: bool
    weak: bool
    witness_generator: np.ndarray | None


def is_cp_morphism(
    channel: CPMap, source: QuantumRelation, target: QuantumRelation
) -> MorphismVerdict:
    """Test both morphism notions; strong implies weak for trace-preserving maps.

    On failure of the strong condition the verdict carries the first source
    basis element, in basis order, with a transported generator escaping the
    target.
    """
    if source.dim_ambient != channel.in_dim or target.dim_ambient != channel.out_dim:
        raise ValidationError("relation dimensions do not match the channel")
    pushed = pushforward(source, channel, target.algebra)
    strong = is_subspace_of(pushed.space, target.space)
    pulled = pullback(target, channel, source.algebra)
    weak = is_subspace_of(source.space, pulled.space)
    witness = None
    if not strong:
        for b in source.space.basis:
            escaped = False
            for ki in channel.kraus:
                for kj in channel.kraus:
                    if not contains(target.space, ki @ b @ kj.conj().T):
                        escaped = True
                        break
                if escaped:
                    break
            if escaped:
                witness = b
                break
    return MorphismVerdict(strong=strong, weak=weak, witness_generator=witness)
