"""Coefficient and three-Bloch-vector representation of a qutrit state.

A qutrit density matrix is written as::

    rho = sum_i omega_i O_i + sum_{i<j} (alpha_ij A_ij + beta_ij B_ij) / 2

so that ``rho[i, j] = (alpha_ij - i beta_ij) / 2`` above the diagonal. Each
qubit subspace (i, j) then carries a vector ``u_ij = (alpha_ij, beta_ij,
gamma_ij)`` with ``gamma_ij = omega_i - omega_j`` inside a sphere of radius
``R_ij = 1 - omega_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import PAIRS3
from .linalg import HERMITIAN_TOL, DimensionError, NotHermitianError, as_matrix, hermiticity_residual

TRACE_TOL = 1e-12


class TraceError(ValueError):
    """Raised when coefficients or a matrix are not normalised to trace one."""


def complement(i: int, j: int) -> int:
    """Level ``k`` not in the pair ``(i, j)`` (1-based)."""
    return 6 - i - j


def pair_slot(i: int, j: int) -> int:
    """Position of pair (i, j) in the (12, 13, 23) ordering."""
    if i > j:
        i, j = j, i
    return PAIRS3.index((i, j))


def wrap_angle(x: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    r = math.remainder(x, 2 * math.pi)
    return math.pi if r == -math.pi else r


@dataclass(frozen=True)
class QutritCoefficients:
    """Expansion coefficients ``omega``, ``alpha``, ``beta``; pairs ordered 12, 13, 23."""

    omega: tuple[float, float, float]
    alpha: tuple[float, float, float] = (0.0, 0.0, 0.0)
    beta: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        for name in ("omega", "alpha", "beta"):
            vals = tuple(float(x) for x in getattr(self, name))
            if len(vals) != 3:
                raise DimensionError(f"{name} needs 3 entries, got {len(vals)}")
            object.__setattr__(self, name, vals)

    @property
    def trace(self) -> float:
        return math.fsum(self.omega)

    def pair(self, i: int, j: int) -> tuple[float, float]:
        s = pair_slot(i, j)
        return self.alpha[s], self.beta[s]

    def as_vector(self) -> np.ndarray:
        return np.array(self.omega + self.alpha + self.beta)

    @classmethod
    def from_vector(cls, x) -> "QutritCoefficients":
        x = [float(v) for v in x]
        return cls(tuple(x[0:3]), tuple(x[3:6]), tuple(x[6:9]))


@dataclass(frozen=True)
class BlochTriple:
    """The three vectors ``u_ij`` and sphere radii ``R_ij`` (order 12, 13, 23)."""

    u: tuple[tuple[float, float, float], ...]
    radii: tuple[float, float, float]

    @property
    def gamma(self) -> tuple[float, float, float]:
        return tuple(v[2] for v in self.u)

    @property
    def lengths(self) -> tuple[float, float, float]:
        return tuple(math.hypot(*v) for v in self.u)


@dataclass(frozen=True)
class DerivedGeometry:
    """Relative lengths ``d`` (``None`` where undefined), phases ``phi`` and total phase ``Phi``."""

    d: tuple[float | None, float | None, float | None]
    phi: tuple[float, float, float]
    Phi: float

    @property
    def defined(self) -> bool:
        return all(x is not None for x in self.d)


def _check_trace(c: QutritCoefficients, tol: float) -> None:
    if abs(c.trace - 1.0) > tol:
        raise TraceError(f"omega sums to {c.trace!r}, expected 1")


def decompose(rho, *, herm_tol: float = HERMITIAN_TOL, trace_tol: float = TRACE_TOL) -> QutritCoefficients:
    """Read the coefficients off a 3x3 Hermitian, trace-one matrix."""
    m = as_matrix(rho)
    if m.shape != (3, 3):
        raise DimensionError(f"expected a 3x3 matrix, got {m.shape}")
    res = float(hermiticity_residual(m))
    if res > herm_tol:
        raise NotHermitianError(f"matrix is not Hermitian (residual {res:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > trace_tol:
        raise TraceError(f"trace is {tr}, expected 1")
    omega = tuple(float(m[k, k].real) for k in range(3))
    alpha = tuple(2.0 * float(m[i - 1, j - 1].real) for i, j in PAIRS3)
    beta = tuple(-2.0 * float(m[i - 1, j - 1].imag) for i, j in PAIRS3)
    return QutritCoefficients(omega, alpha, beta)


def reconstruct(c: QutritCoefficients) -> np.ndarray:
    """Hermitian matrix for any coefficient record, valid state or not."""
    m = np.diag(np.array(c.omega, dtype=np.complex128))
    for s, (i, j) in enumerate(PAIRS3):
        z = 0.5 * complex(c.alpha[s], -c.beta[s])
        m[i - 1, j - 1] = z
        m[j - 1, i - 1] = z.conjugate()
    return m


def gammas(c: QutritCoefficients) -> tuple[float, float, float]:
    return tuple(c.omega[i - 1] - c.omega[j - 1] for i, j in PAIRS3)


def radii(c: QutritCoefficients) -> tuple[float, float, float]:
    return tuple(1.0 - c.omega[complement(i, j) - 1] for i, j in PAIRS3)


def radius_from_gammas(g: tuple[float, float, float], i: int, j: int) -> float:
    """``R_ij`` from the gamma values alone (valid for normalised records).

    ``R_ij = (2 + (-1)**(i+1) gamma_ik + (-1)**j gamma_jk) / 3`` with reversed
    subscripts read in increasing order.
    """
    k = complement(i, j)
    g_ik = g[pair_slot(i, k)]
    g_jk = g[pair_slot(j, k)]
    return (2.0 + (-1) ** (i + 1) * g_ik + (-1) ** j * g_jk) / 3.0


def bloch_triple(c: QutritCoefficients, *, trace_tol: float = TRACE_TOL) -> BlochTriple:
    _check_trace(c, trace_tol)
    g = gammas(c)
    u = tuple((c.alpha[s], c.beta[s], g[s]) for s in range(3))
    return BlochTriple(u, radii(c))


def relative_length(c: QutritCoefficients, i: int, j: int) -> float | None:
    """``|v_ij| / (2 sqrt(omega_i omega_j))``; ``None`` unless both omegas are positive."""
    wi, wj = c.omega[i - 1], c.omega[j - 1]
    if not (wi > 0.0 and wj > 0.0):
        return None
    a, b = c.pair(i, j)
    return math.hypot(a, b) / (2.0 * math.sqrt(wi * wj))


def derived_geometry(c: QutritCoefficients) -> DerivedGeometry:
    d = tuple(relative_length(c, i, j) for i, j in PAIRS3)
    # atan2(0, 0) == 0, which is the convention for a null v_ij
    phi = tuple(math.atan2(c.beta[s], c.alpha[s]) for s in range(3))
    Phi = wrap_angle(phi[0] - phi[1] + phi[2])
    return DerivedGeometry(d, phi, Phi)


def purity(c: QutritCoefficients) -> float:
    """``Tr(rho^2)`` from the coefficients."""
    return math.fsum(w * w for w in c.omega) + 0.5 * math.fsum(
        a * a + b * b for a, b in zip(c.alpha, c.beta)
    )


def determinant_factor(geo: DerivedGeometry) -> float:
    """``1 - sum d^2 + 2 d12 d13 d23 cos(Phi)``; requires all ``d`` defined."""
    d12, d13, d23 = geo.d
    return 1.0 - (d12 * d12 + d13 * d13 + d23 * d23) + 2.0 * d12 * d13 * d23 * math.cos(geo.Phi)


def det_formula(c: QutritCoefficients) -> float | None:
    """Determinant through relative lengths and total phase.

    Returns ``None`` when some ``omega_k`` is not positive, where the formula
    has no meaning; use the direct determinant then.
    """
    if not all(w > 0.0 for w in c.omega):
        return None
    geo = derived_geometry(c)
    w1, w2, w3 = c.omega
    return w1 * w2 * w3 * determinant_factor(geo)
