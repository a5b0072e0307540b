import numpy as np
import pytest

from qrel import (
    PreconditionError,
    Projection,
    StarAlgebra,
    algebra_closure,
    ampliate,
    commutant,
    compress,
    diagonal_algebra,
    equals,
    full_matrix_algebra,
    in_matrix_level,
    is_bimodule,
    kron,
    scalar_algebra,
    span,
)
from util import rand_complex, rand_level_projection, rand_subalgebra, rand_unitary


def unit(i, j, m=2):
    out = np.zeros((m, m), complex)
    out[i, j] = 1.0
    return out


class TestClosure:
    def test_no_generators_gives_scalars(self):
        alg = algebra_closure([], dim=2)
        assert alg.dim == 1
        assert equals(alg.space, scalar_algebra(2).space)

    def test_distinct_eigenvalues_span_diagonal(self):
        # oracle: powers I, D, D^2 of diag(1,2) are linearly independent only
        # up to dimension 2, so the closure is exactly the diagonals
        d = np.diag([1.0, 2.0]).astype(complex)
        powers = np.stack([np.eye(2), d]).reshape(2, 4)
        assert np.linalg.matrix_rank(powers) == 2
        alg = algebra_closure([d])
        assert alg.dim == 2
        assert equals(alg.space, diagonal_algebra(2).space)

    def test_nilpotent_generates_everything(self):
        # oracle: brute-force closure of {I, E01, E10, products}
        gens = [np.eye(2), unit(0, 1), unit(1, 0), unit(0, 1) @ unit(1, 0), unit(1, 0) @ unit(0, 1)]
        assert np.linalg.matrix_rank(np.stack(gens).reshape(-1, 4)) == 4
        alg = algebra_closure([unit(0, 1)])
        assert alg.dim == 4

    def test_validation_rejects_open_span(self):
        with pytest.raises(PreconditionError):
            StarAlgebra(2, span([unit(0, 1)]))  # no identity, not star-closed


class TestCommutant:
    def test_full_algebra_has_scalar_commutant(self):
        assert commutant(full_matrix_algebra(3)).dim == 1

    def test_diagonal_is_self_commutant(self):
        m = 4
        alg = diagonal_algebra(m)
        assert equals(commutant(alg).space, alg.space)

    def test_scalars_have_full_commutant(self):
        assert commutant(scalar_algebra(3)).dim == 9

    def test_double_commutant(self, rng):
        for _ in range(8):
            m = int(rng.integers(2, 5))
            alg = rand_subalgebra(rng, m)
            again = commutant(commutant(alg))
            assert equals(again.space, alg.space)

    def test_commutant_is_valid_algebra(self, rng):
        alg = rand_subalgebra(rng, 4, kind="block")
        side = commutant(alg)
        assert isinstance(side, StarAlgebra)  # construction re-validates closure

    def test_commutes_elementwise(self, rng):
        alg = rand_subalgebra(rng, 3)
        for a in alg.space.basis:
            for b in commutant(alg).space.basis:
                np.testing.assert_allclose(a @ b, b @ a, atol=1e-10)


class TestMatrixLevel:
    def test_full_algebra_accepts_everything(self, rng):
        assert in_matrix_level(full_matrix_algebra(3), rand_complex(rng, 6, 6), 2)

    def test_scalar_tensor_full(self, rng):
        b = rand_complex(rng, 2, 2)
        assert in_matrix_level(scalar_algebra(2), kron(np.eye(2), b), 2)

    def test_off_diagonal_rejected_for_diagonals(self):
        candidate = kron(unit(0, 1), unit(0, 0))
        # oracle: E01 is not diagonal
        assert not in_matrix_level(diagonal_algebra(2), candidate, 2)

    def test_level_one_is_membership(self, rng):
        alg = rand_subalgebra(rng, 3, kind="block")
        for b in alg.space.basis:
            assert in_matrix_level(alg, b, 1)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(Exception):
            in_matrix_level(diagonal_algebra(2), rand_complex(rng, 3, 3), 2)


class TestCompress:
    def test_identity_projection_is_basis_change(self, rng):
        alg = rand_subalgebra(rng, 3)
        comp = compress(alg, Projection.identity(3))
        assert comp.algebra.dim == alg.dim

    def test_rank_one_compression_of_full(self):
        comp = compress(full_matrix_algebra(2), Projection.from_matrix(np.diag([1.0, 0.0])))
        assert comp.algebra.dim_ambient == 1
        assert comp.algebra.dim == 1

    def test_isometry_reconstructs_projection(self, rng):
        alg = full_matrix_algebra(4)
        proj = rand_level_projection(rng, alg, 1)
        while proj.rank == 0:
            proj = rand_level_projection(rng, alg, 1)
        comp = compress(alg, proj)
        w = comp.isometry
        np.testing.assert_allclose(w @ w.conj().T, proj.matrix, atol=1e-10)
        np.testing.assert_allclose(w.conj().T @ w, np.eye(proj.rank), atol=1e-12)

    def test_commutant_commutes_with_compression(self, rng):
        for _ in range(8):
            m = int(rng.integers(2, 5))
            alg = rand_subalgebra(rng, m)
            proj = rand_level_projection(rng, alg, 1)
            if proj.rank == 0:
                continue
            lhs = commutant(compress(alg, proj).algebra)
            rhs = compress(commutant(alg), proj)
            assert equals(lhs.space, rhs.algebra.space)

    def test_rejects_unrelated_projection(self, rng):
        alg = diagonal_algebra(3)
        v = rand_complex(rng, 3)
        v = v / np.linalg.norm(v)
        skew = Projection.from_matrix(np.outer(v, v.conj()))
        with pytest.raises(PreconditionError):
            compress(alg, skew)

    def test_rejects_rank_zero(self):
        with pytest.raises(PreconditionError):
            compress(full_matrix_algebra(2), Projection.zero(2))

    def test_compression_map_is_unital_and_star(self, rng):
        alg = rand_subalgebra(rng, 4, kind="block")
        proj = rand_level_projection(rng, alg, 1)
        while proj.rank == 0:
            proj = rand_level_projection(rng, alg, 1)
        w = compress(alg, proj).isometry
        np.testing.assert_allclose(
            w.conj().T @ np.eye(4) @ w, np.eye(proj.rank), atol=1e-12
        )
        a = rand_complex(rng, 4, 4)
        lhs = w.conj().T @ a.conj().T @ w
        rhs = (w.conj().T @ a @ w).conj().T
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestAmpliate:
    def test_level_one_identity(self, rng):
        alg = rand_subalgebra(rng, 2)
        assert equals(ampliate(alg.space, 1), alg.space)

    def test_scalars_give_identity_tensor_full(self):
        out = ampliate(scalar_algebra(3).space, 2)
        assert out.dim == 4
        assert in_matrix_level(scalar_algebra(3), out.basis[1], 2)

    def test_v1_ampliation_dimension(self):
        v1 = span([np.eye(2), unit(0, 1), unit(1, 0)])
        out = ampliate(v1, 2)
        # oracle: 3 x 4 independent tensor factors
        stacked = out.basis.reshape(out.dim, -1)
        assert np.linalg.matrix_rank(stacked) == 12
        assert out.dim == 12

    def test_ampliated_bimodule(self, rng):
        # V (x) M_k is a bimodule over (M (x) I_k)' = M' (x) M_k
        m, k = 3, 2
        alg = rand_subalgebra(rng, m, kind="block")
        from util import rand_bimodule

        rel = rand_bimodule(rng, alg, 1)
        lifted_alg = algebra_closure([kron(b, np.eye(k)) for b in alg.space.basis])
        assert is_bimodule(ampliate(rel.space, k), lifted_alg)
