"""Random matrix ensembles for the randomized checks and experiment scripts."""

from __future__ import annotations

import numpy as np

from .linalg import dagger


def _cnormal(rng: np.random.Generator, size) -> np.ndarray:
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def hermitian(rng: np.random.Generator, n: int, d: int = 3) -> np.ndarray:
    x = _cnormal(rng, (n, d, d))
    return 0.5 * (x + dagger(x))


def hermitian_trace_one(rng: np.random.Generator, n: int, d: int = 3) -> np.ndarray:
    """Random Hermitian matrices shifted along the identity to unit trace."""
    h = hermitian(rng, n, d) / np.sqrt(d)
    tr = np.trace(h, axis1=1, axis2=2).real
    return h + ((1.0 - tr) / d)[:, None, None] * np.eye(d)


def gram_states(rng: np.random.Generator, n: int, d: int = 3, rank: int | None = None) -> np.ndarray:
    """``V V^dagger / Tr`` with ``V`` of shape d x rank; PSD by construction."""
    v = _cnormal(rng, (n, d, rank or d))
    m = v @ dagger(v)
    m = 0.5 * (m + dagger(m))
    return m / np.trace(m, axis1=1, axis2=2).real[:, None, None]


def pure_vectors(rng: np.random.Generator, n: int, d: int = 3) -> np.ndarray:
    v = _cnormal(rng, (n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def unitaries(rng: np.random.Generator, n: int, d: int = 3) -> np.ndarray:
    """Haar-random unitaries from the phase-corrected QR of complex Gaussians."""
    q, r = np.linalg.qr(_cnormal(rng, (n, d, d)))
    ph = np.diagonal(r, axis1=1, axis2=2)
    return q * (ph / np.abs(ph))[:, None, :]


def with_spectrum(rng: np.random.Generator, spectra: np.ndarray) -> np.ndarray:
    """``U diag(w) U^dagger`` for each row ``w`` of ``spectra``, random unitary ``U``."""
    n, d = spectra.shape
    u = unitaries(rng, n, d)
    m = (u * spectra[:, None, :]) @ dagger(u)
    return 0.5 * (m + dagger(m))


def indefinite_states(rng: np.random.Generator, n: int, d: int = 3) -> np.ndarray:
    """Unit-trace Hermitian matrices with at least one clearly negative eigenvalue."""
    w = rng.uniform(0.05, 1.0, size=(n, d))
    neg = rng.integers(1, d, size=n)
    for k in range(1, d):
        w[neg >= k, k - 1] *= -1.0
    w = rng.permuted(w, axis=1)
    total = w.sum(axis=1)
    w = w[total > 0.2] / total[total > 0.2, None]
    return with_spectrum(rng, w)


def boundary_indefinite(rng: np.random.Generator, n: int) -> np.ndarray:
    """Qutrit matrices with spectrum ``(-a, 0, 1 + a)``: zero determinant, not PSD."""
    a = rng.uniform(0.01, 0.5, size=n)
    return with_spectrum(rng, np.column_stack([-a, np.zeros(n), 1.0 + a]))


def near_boundary_states(rng: np.random.Generator, n: int, d: int = 3) -> np.ndarray:
    """Unit-trace matrices whose smallest eigenvalue is slightly negative.

    The negative eigenvalue has magnitude log-uniform in [1e-8, 1e-2], so
    these sit just outside the PSD cone where a weak criterion would slip.
    """
    w = rng.uniform(0.0, 1.0, size=(n, d))
    w[:, 0] = -(10.0 ** rng.uniform(-8.0, -2.0, size=n))
    w[:, 1:] /= w[:, 1:].sum(axis=1, keepdims=True) / (1.0 - w[:, :1])
    return with_spectrum(rng, rng.permuted(w, axis=1))


def probe_ensemble(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """Thirds of Gram-PSD, near-boundary indefinite and Gaussian trace-one matrices."""
    k = n // 3
    parts = [gram_states(rng, k, d, int(rng.integers(1, d + 1))),
             near_boundary_states(rng, k, d),
             hermitian_trace_one(rng, n - 2 * k, d)]
    out = np.concatenate(parts)
    return out[rng.permutation(n)]


def mixed_qutrit_ensemble(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Mix of PSD, rank-deficient PSD, indefinite and zero-determinant indefinite matrices.

    Returns ``(matrices, kind)`` where ``kind`` labels the construction:
    0 full-rank Gram, 1 rank-2 Gram, 2 rank-1 Gram, 3 generic trace-one
    Hermitian, 4 indefinite with prescribed spectrum, 5 spectrum (-a, 0, 1+a).
    """
    parts, kinds = [], []
    share = n // 6
    sizes = [share] * 5 + [n - 5 * share]
    makers = [
        lambda m: gram_states(rng, m, 3, 3),
        lambda m: gram_states(rng, m, 3, 2),
        lambda m: gram_states(rng, m, 3, 1),
        lambda m: hermitian_trace_one(rng, m, 3),
        lambda m: _exactly(rng, m, indefinite_states),
        lambda m: boundary_indefinite(rng, m),
    ]
    for kind, (size, make) in enumerate(zip(sizes, makers)):
        block = make(size)
        parts.append(block)
        kinds.append(np.full(len(block), kind))
    mats = np.concatenate(parts)
    kind = np.concatenate(kinds)
    order = rng.permutation(len(mats))
    return mats[order], kind[order]


def _exactly(rng, n, maker):
    out = maker(rng, n)
    while len(out) < n:
        out = np.concatenate([out, maker(rng, n - len(out))])
    return out[:n]
