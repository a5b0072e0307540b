"""Quantum relations and noncommutative graphs on finite-dimensional *-algebras.

Construct operator-space bimodules, channels, confusability graphs,
restrictions, pushforwards, pullbacks, and Knill-Laflamme codes, with a
tolerance-controlled numerical core (numba-accelerated, with a pure-numpy
fallback selected by QREL_BACKEND=numpy).
"""

from ._backend import backend_name
from .algebra import (
    Compression,
    StarAlgebra,
    algebra_closure,
    ampliate,
    commutant,
    compress,
    diagonal_algebra,
    full_matrix_algebra,
    in_matrix_level,
    scalar_algebra,
)
from .channel import (
    CPMap,
    backward_projection,
    classical_channel,
    compose,
    identity_channel,
    kraus_mix,
)
from .config import Tolerance, get_tolerance, set_tolerance, tolerance
from .documents import Document, emit, parse
from .errors import ConvergenceError, PreconditionError, QrelError, ValidationError
from .matrix import (
    Projection,
    hermitian_eig,
    hs_inner,
    hs_norm,
    is_hermitian,
    join,
    kron,
    range_projection,
)
from .relation import (
    ClassicalRelation,
    QuantumRelation,
    RelationProperties,
    bimodule_closure,
    check_properties,
    classical_properties,
    classical_to_quantum,
    connects,
    diagonal_relation,
    is_bimodule,
    is_independent,
    is_quantum_graph,
    quantum_to_classical,
    restrict,
)
from .spaces import (
    OperatorSpace,
    adjoint_space,
    contains,
    equals,
    intersect_space,
    is_subspace_of,
    orthogonal_complement,
    product_space,
    project_onto,
    span,
    subspace_residual,
    sum_space,
)
from .transport import (
    KrausCodeReport,
    MorphismVerdict,
    bipartite_connects,
    bipartite_graph,
    confusability,
    dual_confusability,
    is_cp_morphism,
    kl_check,
    pullback,
    pushforward,
)
from .witness import (
    WitnessProjections,
    WitnessVectors,
    recover_space,
    separate_projections,
    separate_vectors,
)

__version__ = "0.1.0"
