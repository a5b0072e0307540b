"""Hot numeric kernels: cyclic Jacobi eigensolver and Gram-Schmidt.

Each kernel has a loop implementation (compiled with numba on the numba
backend) and a vectorized pure-numpy fallback with identical sweep order, so
both backends produce the same results up to rounding.  The wrappers at the
bottom pick the active variant; `benchmarks/bench_kernels.py` times the two
against each other.
"""

from __future__ import annotations

import numpy as np

from ._backend import NUMBA_ENABLED, compile_kernel

_MAX_SWEEPS = 64
_OFF_REL = 1e-14


def jacobi_sweeps_loops(a, v, off_tol, max_sweeps):
    """Cyclic Jacobi on Hermitian `a`, accumulating the unitary in `v`.

    Mutates `a` toward diagonal form and returns the number of sweeps used,
    or -1 if the off-diagonal mass did not fall below `off_tol`.  Pivots are
    visited in fixed row-major order for reproducibility.
    """
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += abs(a[p, q]) ** 2
        if np.sqrt(2.0 * off) <= off_tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                phase_c = np.conj(phase)
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * phase_c * aiq
                    a[i, q] = s * aip + c * phase_c * aiq
                for j in range(n):
                    apj = a[p, j]
                    aqj = a[q, j]
                    a[p, j] = c * apj - s * phase * aqj
                    a[q, j] = s * apj + c * phase * aqj
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = complex(a[p, p].real, 0.0)
                a[q, q] = complex(a[q, q].real, 0.0)
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * phase_c * viq
                    v[i, q] = s * vip + c * phase_c * viq
    return -1


def jacobi_sweeps_numpy(a, v, off_tol, max_sweeps):
    """Vectorized fallback for :func:`jacobi_sweeps_loops` (same pivot order)."""
    n = a.shape[0]
    off_mask = ~np.eye(n, dtype=bool)
    for sweep in range(max_sweeps):
        off_sq = float(np.sum(np.abs(a[off_mask]) ** 2))
        if np.sqrt(off_sq) <= off_tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                phase_c = np.conj(phase)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * phase_c * col_q
                a[:, q] = s * col_p + c * phase_c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * row_p + c * phase * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v_p = v[:, p].copy()
                v_q = v[:, q].copy()
                v[:, p] = c * v_p - s * phase_c * v_q
                v[:, q] = s * v_p + c * phase_c * v_q
    return -1


def mgs_rows_loops(gens, out, drop_tol):
    """Modified Gram-Schmidt on the rows of `gens` with one re-orthogonalization pass.

    Orthonormal rows are written into `out` (preallocated, same shape); rows
    whose residual norm is at most `drop_tol` are dropped as dependent.
    Returns the number of rows kept.  Input order is preserved.
    """
    g, width = gens.shape
    kept = 0
    for r in range(g):
        row = gens[r].copy()
        for _ in range(2):
            for t in range(kept):
                coeff = 0.0 + 0.0j
                for c in range(width):
                    coeff += np.conj(out[t, c]) * row[c]
                for c in range(width):
                    row[c] -= coeff * out[t, c]
        norm_sq = 0.0
        for c in range(width):
            norm_sq += row[c].real ** 2 + row[c].imag ** 2
        norm = np.sqrt(norm_sq)
        if norm > drop_tol:
            for c in range(width):
                out[kept, c] = row[c] / norm
            kept += 1
    return kept


def mgs_rows_numpy(gens, out, drop_tol):
    """Vectorized fallback for :func:`mgs_rows_loops`."""
    g, _ = gens.shape
    kept = 0
    for r in range(g):
        row = gens[r].copy()
        for _ in range(2):
            if kept:
                coeffs = out[:kept].conj() @ row
                row = row - coeffs @ out[:kept]
        norm = np.sqrt(float(np.sum(row.real**2 + row.imag**2)))
        if norm > drop_tol:
            out[kept] = row / norm
            kept += 1
    return kept


if NUMBA_ENABLED:
    _jacobi_sweeps = compile_kernel(jacobi_sweeps_loops)
    _mgs_rows = compile_kernel(mgs_rows_loops)
else:
    _jacobi_sweeps = jacobi_sweeps_numpy
    _mgs_rows = mgs_rows_numpy


def jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted descending and
    eigenvectors as the matching columns of a unitary.  The caller is
    responsible for Hermiticity; the strict upper triangle drives the sweeps.
    """
    n = matrix.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), np.complex128)
    work = np.ascontiguousarray(matrix, dtype=np.complex128).copy()
    vecs = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(work))
    if scale > 0.0:
        swept = _jacobi_sweeps(work, vecs, _OFF_REL * scale, _MAX_SWEEPS)
        if swept < 0:
            from .errors import ConvergenceError

            raise ConvergenceError(f"Jacobi eigensolver did not converge for n={n}")
    values = np.diagonal(work).real.copy()
    order = np.argsort(-values, kind="stable")
    return values[order], np.ascontiguousarray(vecs[:, order])


def orthonormal_rows(gens: np.ndarray, drop_tol: float) -> np.ndarray:
    """Orthonormal basis for the row span of `gens`, in input order."""
    if gens.shape[0] == 0:
        return gens.astype(np.complex128).reshape(0, gens.shape[1])
    work = np.ascontiguousarray(gens, dtype=np.complex128)
    out = np.empty_like(work)
    kept = _mgs_rows(work, out, drop_tol)
    return out[:kept].copy()
