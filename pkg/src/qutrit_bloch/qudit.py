"""d-level generalisation: coefficients, pairwise Bloch vectors, principal-minor checks.

For ``d > 3`` nonnegative principal minors are only reported as necessary
conditions; nothing here claims they characterise the state space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bloch import TRACE_TOL, QutritCoefficients, TraceError
from .linalg import (
    HERMITIAN_TOL,
    DimensionError,
    NotHermitianError,
    as_matrix,
    determinant,
    hermiticity_residual,
)

MIN_DIM = 2
MAX_DIM = 8
MINOR_TOL = 1e-10


def pairs(d: int) -> list[tuple[int, int]]:
    """1-based level pairs in lexicographic order."""
    return list(combinations(range(1, d + 1), 2))


def subsets(d: int) -> list[tuple[int, ...]]:
    """Non-empty 1-based level subsets, by size and then lexicographically."""
    return [s for n in range(1, d + 1) for s in combinations(range(1, d + 1), n)]


def _check_dim(d: int) -> None:
    if not MIN_DIM <= d <= MAX_DIM:
        raise DimensionError(f"dimension must be between {MIN_DIM} and {MAX_DIM}, got {d}")


@dataclass(frozen=True)
class QuditCoefficients:
    d: int
    omega: tuple[float, ...]
    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        _check_dim(self.d)
        npairs = self.d * (self.d - 1) // 2
        for name, size in (("omega", self.d), ("alpha", npairs), ("beta", npairs)):
            vals = tuple(float(x) for x in getattr(self, name))
            if len(vals) != size:
                raise DimensionError(f"{name} needs {size} entries for d={self.d}, got {len(vals)}")
            object.__setattr__(self, name, vals)

    @property
    def trace(self) -> float:
        return math.fsum(self.omega)

    @property
    def size(self) -> int:
        return len(self.omega) + len(self.alpha) + len(self.beta)

    @classmethod
    def from_qutrit(cls, c: QutritCoefficients) -> "QuditCoefficients":
        return cls(3, c.omega, c.alpha, c.beta)

    def to_qutrit(self) -> QutritCoefficients:
        if self.d != 3:
            raise DimensionError(f"not a qutrit record (d={self.d})")
        return QutritCoefficients(self.omega, self.alpha, self.beta)


def free_parameters(d: int) -> int:
    return d * d - 1


def decompose_qudit(rho, d: int | None = None, *, herm_tol: float = HERMITIAN_TOL,
                    trace_tol: float = TRACE_TOL) -> QuditCoefficients:
    m = as_matrix(rho)
    if d is None:
        d = m.shape[0]
    if m.shape != (d, d):
        raise DimensionError(f"expected a {d}x{d} matrix, got {m.shape}")
    res = float(hermiticity_residual(m))
    if res > herm_tol:
        raise NotHermitianError(f"matrix is not Hermitian (residual {res:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > trace_tol:
        raise TraceError(f"trace is {tr}, expected 1")
    ps = pairs(d)
    return QuditCoefficients(
        d,
        tuple(float(m[k, k].real) for k in range(d)),
        tuple(2.0 * float(m[i - 1, j - 1].real) for i, j in ps),
        tuple(-2.0 * float(m[i - 1, j - 1].imag) for i, j in ps),
    )


def reconstruct_qudit(c: QuditCoefficients) -> np.ndarray:
    m = np.diag(np.array(c.omega, dtype=np.complex128))
    for s, (i, j) in enumerate(pairs(c.d)):
        z = 0.5 * complex(c.alpha[s], -c.beta[s])
        m[i - 1, j - 1] = z
        m[j - 1, i - 1] = z.conjugate()
    return m


@dataclass(frozen=True)
class MinorEntry:
    subset: tuple[int, ...]
    value: float
    passed: bool

    @property
    def label(self) -> str:
        if not self.subset:
            return "normalization"
        return "minor{" + ",".join(map(str, self.subset)) + "}"


@dataclass(frozen=True)
class MinorReport:
    d: int
    entries: tuple[MinorEntry, ...]
    tol: float

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def sufficient(self) -> bool:
        """Whether the verdict is a full characterisation (only proven up to d = 3)."""
        return self.d <= 3

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "overall": self.overall,
            "necessary_only": not self.sufficient,
            "tol": self.tol,
            "entries": [{"id": e.label, "value": e.value, "pass": e.passed} for e in self.entries],
        }


def minor_values(m, d: int | None = None) -> np.ndarray:
    """All non-empty principal minors of a matrix or stack, in :func:`subsets` order."""
    a = as_matrix(m, stacked=True)
    d = a.shape[-1] if d is None else d
    cols = []
    for s in subsets(d):
        sel = np.asarray(s) - 1
        sub = a[..., sel[:, None], sel[None, :]]
        cols.append(np.real(determinant(sub)))
    return np.stack(cols, axis=-1)


def necessary_conditions(c: QuditCoefficients, tol: float = MINOR_TOL) -> MinorReport:
    """Normalisation plus every principal minor of the reconstructed matrix (2**d entries)."""
    norm = -abs(c.trace - 1.0)
    entries = [MinorEntry((), norm, norm >= -tol)]
    values = minor_values(reconstruct_qudit(c), c.d)
    for s, v in zip(subsets(c.d), values.tolist()):
        entries.append(MinorEntry(s, v, v >= -tol))
    return MinorReport(c.d, tuple(entries), tol)


@dataclass(frozen=True)
class SubspaceVector:
    """Bloch vector ``(alpha_ij, beta_ij, omega_i - omega_j)`` of one qubit subspace."""

    pair: tuple[int, int]
    vector: tuple[float, float, float]
    radius: float

    @property
    def length(self) -> float:
        return math.hypot(*self.vector)


def subspace_bloch_vectors(c: QuditCoefficients, tol: float = MINOR_TOL) -> list[SubspaceVector]:
    """One vector per level pair with bound ``omega_i + omega_j``.

    The bound is what the 2x2 principal minor allows; for ``d = 3`` it equals
    the sphere radius ``1 - omega_k``.
    """
    if not necessary_conditions(c, tol).overall:
        raise ValueError("subspace vectors are only defined for valid states")
    out = []
    for s, (i, j) in enumerate(pairs(c.d)):
        v = (c.alpha[s], c.beta[s], c.omega[i - 1] - c.omega[j - 1])
        out.append(SubspaceVector((i, j), v, c.omega[i - 1] + c.omega[j - 1]))
    return out


@dataclass(frozen=True)
class ConverseProbe:
    """Counts from comparing the all-minors verdict with the eigenvalue oracle."""

    d: int
    trials: int
    oracle_psd: int
    minors_pass: int
    minors_pass_not_psd: int
    psd_minors_fail: int
    strict_pass_not_psd: int


def converse_probe(mats, tol: float = MINOR_TOL) -> ConverseProbe:
    """Tally verdicts for a stack of Hermitian matrices.

    ``minors_pass_not_psd`` counts matrices that clear every principal minor
    at ``-tol`` yet have an eigenvalue below ``-tol``. A k x k minor scales
    like the product of k eigenvalues, so an absolute tolerance on it is far
    looser than the same tolerance on an eigenvalue and such hits are
    expected near the boundary. ``strict_pass_not_psd`` repeats the count
    with the minors required to be >= 0 exactly.
    """
    from .linalg import eigenvalues_hermitian

    a = as_matrix(mats, stacked=True)
    d = a.shape[-1]
    _check_dim(d)
    psd = eigenvalues_hermitian(a)[:, 0] >= -tol
    minors = minor_values(a, d)
    ok = np.all(minors >= -tol, axis=1)
    strict = np.all(minors >= 0.0, axis=1)
    return ConverseProbe(
        d, int(a.shape[0]), int(psd.sum()), int(ok.sum()),
        int(np.sum(ok & ~psd)), int(np.sum(psd & ~ok)), int(np.sum(strict & ~psd)),
    )
