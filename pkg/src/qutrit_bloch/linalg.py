"""Dense complex Hermitian linear algebra used as the reference oracle.

Everything here works on plain ``numpy`` arrays. Functions that make sense on
stacks accept arrays of shape ``(..., n, n)`` and broadcast over the leading
axes, which keeps the large randomized checks fast without any compiled code.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
_TINY = 1e-290
_NEGLIGIBLE = 1e-20


class DimensionError(ValueError):
    """Raised when array shapes do not fit the operation."""


class NotHermitianError(ValueError):
    """Raised when a matrix that must be Hermitian is not."""


def as_matrix(m, *, stacked: bool = False) -> np.ndarray:
    """Return ``m`` as a complex square array, validating the shape."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim < 2 or (a.ndim > 2 and not stacked) or a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[-1] == 0:
        raise DimensionError("empty matrix")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_residual(m) -> np.ndarray:
    """Largest elementwise ``|m - m^dagger|`` (per matrix for stacks)."""
    a = as_matrix(m, stacked=True)
    return np.max(np.abs(a - dagger(a)), axis=(-2, -1))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.all(hermiticity_residual(m) <= tol))


def _require_hermitian(a: np.ndarray, tol: float) -> None:
    res = hermiticity_residual(a)
    if np.any(res > tol):
        raise NotHermitianError(
            f"matrix is not Hermitian: max |m - m^dagger| = {float(np.max(res)):.3e} > {tol:g}"
        )


def trace_inner(a, b) -> complex:
    """Hilbert-Schmidt product ``Tr(a^dagger b)``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    # Tr(a^dagger b) = sum_ij conj(a_ij) b_ij
    return complex(np.sum(np.conj(a) * b))


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi on a stack ``(N, n, n)`` of Hermitian matrices.

    Each rotation zeroes one off-diagonal pair (p, q). The plane rotation is
    preceded by a phase on column q that makes ``a[p, q]`` real, after which
    the classical real symmetric update applies.
    """
    nb, n, _ = a.shape
    a = a.copy()
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), (nb, n, n)).copy()
    fro = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    threshold = tol * np.maximum(1.0, fro)
    offmask = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        if np.all(off <= threshold):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                r = np.abs(apq)
                app = a[:, p, p].real
                aqq = a[:, q, q].real
                # negligible entries are left alone; also keeps 1/r finite
                active = r > np.maximum(_TINY, _NEGLIGIBLE * (np.abs(app) + np.abs(aqq)))
                safe_r = np.where(active, r, 1.0)
                phase = np.where(active, apq / safe_r, 1.0)
                theta = (aqq - app) / (2.0 * safe_r)
                with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                    t = np.where(
                        np.abs(theta) > 1e150,
                        0.5 / theta,
                        np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)),
                    )
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G restricted to (p, q) = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                gpp = c[:, None]
                gpq = s[:, None]
                gqp = (-s * np.conj(phase))[:, None]
                gqq = (c * np.conj(phase))[:, None]

                col_p = a[:, :, p].copy()
                col_q = a[:, :, q].copy()
                a[:, :, p] = col_p * gpp + col_q * gqp
                a[:, :, q] = col_p * gpq + col_q * gqq
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :].copy()
                a[:, p, :] = np.conj(gpp) * row_p + np.conj(gqp) * row_q
                a[:, q, :] = np.conj(gpq) * row_p + np.conj(gqq) * row_q
                a[:, p, q] = np.where(active, 0.0, a[:, p, q])
                a[:, q, p] = np.where(active, 0.0, a[:, q, p])
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real

                vp = v[:, :, p].copy()
                vq = v[:, :, q].copy()
                v[:, :, p] = vp * gpp + vq * gqp
                v[:, :, q] = vp * gpq + vq * gqq

    w = np.real(np.diagonal(a, axis1=1, axis2=2)).copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v


def eigh(
    m,
    *,
    tol: float = JACOBI_TOL,
    herm_tol: float = HERMITIAN_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix (or stack) by cyclic Jacobi.

    Returns ``(w, v)`` with eigenvalues ascending and eigenvectors in the
    columns of ``v`` so that ``m = v @ diag(w) @ v^dagger``.
    """
    a = as_matrix(m, stacked=True)
    _require_hermitian(a, herm_tol)
    shape = a.shape
    flat = a.reshape((-1,) + shape[-2:])
    flat = 0.5 * (flat + dagger(flat))
    w, v = _jacobi(flat, tol, max_sweeps)
    return w.reshape(shape[:-1]), v.reshape(shape)


def eigenvalues_hermitian(m, **kwargs) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in nondecreasing order."""
    return eigh(m, **kwargs)[0]


def determinant(m) -> complex | np.ndarray:
    """Determinant by LU factorisation with partial pivoting.

    Returns a Python complex for a single matrix and an array for a stack.
    """
    a = as_matrix(m, stacked=True)
    single = a.ndim == 2
    shape = a.shape
    n = shape[-1]
    lu = a.reshape((-1, n, n)).copy()
    nb = lu.shape[0]
    rows = np.arange(nb)
    det = np.ones(nb, dtype=np.complex128)
    for k in range(n):
        piv = k + np.argmax(np.abs(lu[:, k:, k]), axis=1)
        swap = piv != k
        if np.any(swap):
            top = lu[rows, k, :].copy()
            lu[rows, k, :] = lu[rows, piv, :]
            lu[rows, piv, :] = top
            det = np.where(swap, -det, det)
        pivot = lu[:, k, k]
        det = det * pivot
        nonzero = pivot != 0
        if k + 1 < n:
            safe = np.where(nonzero, pivot, 1.0)
            factors = lu[:, k + 1 :, k] / safe[:, None]
            factors[~nonzero] = 0.0
            lu[:, k + 1 :, k:] -= factors[:, :, None] * lu[:, None, k, k:]
    if single:
        return complex(det[0])
    return det.reshape(shape[:-2])


def principal_submatrix(m, indices: Sequence[int]) -> np.ndarray:
    a = as_matrix(m, stacked=True)
    idx = list(indices)
    n = a.shape[-1]
    if not idx:
        raise IndexError("index set must be non-empty")
    if any(not 0 <= i < n for i in idx):
        raise IndexError(f"index set {idx} out of range for dimension {n}")
    if any(b <= a_ for a_, b in zip(idx, idx[1:])):
        raise IndexError(f"index set {idx} must be strictly increasing")
    sel = np.asarray(idx)
    return a[..., sel[:, None], sel[None, :]]


def principal_minor(m, indices: Sequence[int]) -> float | np.ndarray:
    """Determinant of the principal submatrix on ``indices`` (0-based).

    The imaginary part of a Hermitian minor is roundoff and is dropped.
    """
    return determinant(principal_submatrix(m, indices)).real


def matrix_exp_unitary(g, theta: float, *, decomposition=None) -> np.ndarray:
    """``exp(i theta g)`` for Hermitian ``g`` via its spectral decomposition.

    A precomputed ``(w, v)`` pair can be passed as ``decomposition`` to skip
    the eigen-solve when the same generator is exponentiated repeatedly.
    """
    if decomposition is None:
        decomposition = eigh(g)
    w, v = decomposition
    return (v * np.exp(1j * theta * w)[..., None, :]) @ dagger(v)
