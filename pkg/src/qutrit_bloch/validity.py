"""Physical-validity constraints on qutrit coefficients, sampling and orthogonality.

A coefficient record is a state iff every entry of :func:`check_constraints`
has a nonnegative residual. For trace-one 3x3 matrices this is equivalent to
positive semidefiniteness; the test-suite checks that against eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import PAIRS3
from .bloch import (
    QutritCoefficients,
    complement,
    derived_geometry,
    determinant_factor,
    gammas,
    purity,
    radii,
    radius_from_gammas,
    reconstruct,
    wrap_angle,
)
from .linalg import determinant, eigenvalues_hermitian, trace_inner

VALIDITY_TOL = 1e-10
PURE_TOL = 1e-9
ORTHO_TOL = 1e-9
MAX_PHASE_DRAWS = 10_000
# Below this the relative-length factor loses more than the tolerance to roundoff,
# so constraint (vi) is evaluated through the direct determinant instead.
FACTOR_OMEGA_FLOOR = 1e-6


class DomainError(ValueError):
    """Raised when a function's precondition on the state does not hold."""


@dataclass(frozen=True)
class ConstraintResult:
    id: str
    residual: float
    passed: bool


@dataclass(frozen=True)
class ValidityReport:
    entries: tuple[ConstraintResult, ...]
    tol: float

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, key: str) -> ConstraintResult:
        for e in self.entries:
            if e.id == key:
                return e
        raise KeyError(key)

    def failed(self) -> list[ConstraintResult]:
        return [e for e in self.entries if not e.passed]

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "tol": self.tol,
            "entries": [{"id": e.id, "residual": e.residual, "pass": e.passed} for e in self.entries],
        }


def _minor_label(levels) -> str:
    return "minor{" + ",".join(str(k) for k in levels) + "}"


def constraint_residuals(c: QutritCoefficients) -> list[tuple[str, float]]:
    """Signed residuals (>= 0 means satisfied) of every constraint."""
    omega = c.omega
    g = gammas(c)
    R = radii(c)
    out = []

    # (i) sum R = 2 and 0 <= R <= 1
    res_i = min(-abs(math.fsum(R) - 2.0), *R, *(1.0 - r for r in R))
    out.append(("i", res_i))

    # (ii) |u_ij| <= R_ij
    lengths = [math.sqrt(c.alpha[s] ** 2 + c.beta[s] ** 2 + g[s] ** 2) for s in range(3)]
    out.append(("ii", min(R[s] - lengths[s] for s in range(3))))

    # (iii) gamma_ij = R_ik - R_jk
    res_iii = 0.0
    for s, (i, j) in enumerate(PAIRS3):
        k = complement(i, j)
        r_ik = R[PAIRS3.index(tuple(sorted((i, k))))]
        r_jk = R[PAIRS3.index(tuple(sorted((j, k))))]
        res_iii = min(res_iii, -abs(g[s] - (r_ik - r_jk)))
    out.append(("iii", res_iii))

    # (iv) radius from the gammas
    res_iv = min(-abs(R[s] - radius_from_gammas(g, i, j)) for s, (i, j) in enumerate(PAIRS3))
    out.append(("iv", res_iv))

    # (v) gamma cycle
    out.append(("v", -abs(g[0] - g[1] + g[2])))

    # (vi) determinant factor
    out.append(("vi", _factor_residual(c)))

    for k in range(3):
        out.append((_minor_label((k + 1,)), omega[k]))
    for s, (i, j) in enumerate(PAIRS3):
        out.append((_minor_label((i, j)), 4.0 * omega[i - 1] * omega[j - 1] - c.alpha[s] ** 2 - c.beta[s] ** 2))
    out.append((_minor_label((1, 2, 3)), determinant(reconstruct(c)).real))
    return out


def _factor_residual(c: QutritCoefficients) -> float:
    if min(c.omega) >= FACTOR_OMEGA_FLOOR:
        return determinant_factor(derived_geometry(c))
    return determinant(reconstruct(c)).real


def check_constraints(c: QutritCoefficients, tol: float = VALIDITY_TOL) -> ValidityReport:
    """Evaluate constraints (i)-(vi) and all seven principal minors. Never raises."""
    entries = tuple(ConstraintResult(name, float(r), bool(r >= -tol)) for name, r in constraint_residuals(c))
    return ValidityReport(entries, tol)


def is_valid_state(c: QutritCoefficients, tol: float = VALIDITY_TOL) -> bool:
    return check_constraints(c, tol).overall


def oracle_is_psd(rho, tol: float = VALIDITY_TOL) -> bool:
    """Eigenvalue test: smallest eigenvalue >= -tol."""
    return bool(eigenvalues_hermitian(rho)[0] >= -tol)


def _all_d(c: QutritCoefficients) -> tuple[float, float, float]:
    geo = derived_geometry(c)
    if not geo.defined:
        raise DomainError("relative lengths are undefined when some omega is zero")
    return geo.d


def all_phi_valid(c: QutritCoefficients, tol: float = VALIDITY_TOL) -> bool:
    """True when no choice of the total phase can make the state invalid.

    The worst case is ``cos(Phi) = -1``.
    """
    d12, d13, d23 = _all_d(c)
    return 1.0 - (d12**2 + d13**2 + d23**2) - 2.0 * d12 * d13 * d23 >= -tol


def boundary_phase_constraint(c: QutritCoefficients, tol: float = PURE_TOL) -> bool:
    """Condition on a state with some relative length equal to one.

    With ``d_ij = 1`` the determinant factor reduces to
    ``-(a - b)**2 - 2 a b (1 - cos Phi)`` for the other two lengths ``a, b``,
    so a valid state needs ``a == b`` and, unless ``a b == 0``,
    ``Phi == 0 (mod 2 pi)``. Returns whether both hold.
    """
    d = _all_d(c)
    hits = [s for s in range(3) if abs(d[s] - 1.0) <= tol]
    if not hits:
        raise DomainError(f"no relative length equals 1 (d = {d})")
    geo = derived_geometry(c)
    s = hits[0]
    a, b = (d[t] for t in range(3) if t != s)
    if abs(a - b) > tol:
        return False
    return a * b * (1.0 - math.cos(geo.Phi)) <= tol


def coefficients_from_geometry(omega, d, phi) -> QutritCoefficients:
    """Coefficients from populations, relative lengths and phases (order 12, 13, 23)."""
    alpha, beta = [], []
    for s, (i, j) in enumerate(PAIRS3):
        r = 2.0 * math.sqrt(max(omega[i - 1] * omega[j - 1], 0.0)) * d[s]
        alpha.append(r * math.cos(phi[s]))
        beta.append(r * math.sin(phi[s]))
    return QutritCoefficients(tuple(omega), tuple(alpha), tuple(beta))


def _factor(d12: float, d13: float, d23: float, Phi: float) -> float:
    return 1.0 - (d12 * d12 + d13 * d13 + d23 * d23) + 2.0 * d12 * d13 * d23 * math.cos(Phi)


def _draw_phases(rng, d12, d13, d23, phi12, max_draws, block=256):
    """Uniform ``(phi_13, phi_23)`` pairs until the factor is nonnegative, or ``None``."""
    drawn = 0
    while drawn < max_draws:
        n = min(block, max_draws - drawn)
        ph = rng.uniform(-math.pi, math.pi, size=(n, 2))
        Phi = phi12 - ph[:, 0] + ph[:, 1]
        ok = 1.0 - (d12 * d12 + d13 * d13 + d23 * d23) + 2.0 * d12 * d13 * d23 * np.cos(Phi) >= 0.0
        if ok.any():
            k = int(np.argmax(ok))
            return float(ph[k, 0]), float(ph[k, 1])
        drawn += n
    return None


def sample_valid(seed, *, tol: float = 1e-12, max_phase_draws: int = MAX_PHASE_DRAWS) -> QutritCoefficients:
    """Draw a valid state by the three-step Bloch-vector construction.

    1. ``R_12`` uniform on [0, 1] and ``u_12`` uniform in the ball of that
       radius; this fixes every omega.
    2. Relative lengths of ``v_13`` and ``v_23`` uniform on [0, 1].
    3. Phases ``phi_13``, ``phi_23`` uniform, redrawn until the determinant
       factor is nonnegative. After ``max_phase_draws`` failures the phases
       are set so that ``Phi = 0``; if even that fails step 2 is redrawn.

    The resulting distribution is not the Hilbert-Schmidt or Bures measure.
    ``seed`` may be anything ``numpy.random.default_rng`` accepts, e.g.
    ``(base_seed, index)`` for independent streams.
    """
    rng = np.random.default_rng(seed)
    while True:
        r12 = rng.uniform()
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        a12, b12, g12 = (r12 * np.cbrt(rng.uniform()) * direction).tolist()
        w1, w2, w3 = 0.5 * (r12 + g12), 0.5 * (r12 - g12), 1.0 - r12
        omega = (w1, w2, w3)
        phi12 = math.atan2(b12, a12)
        d12 = math.hypot(a12, b12) / (2.0 * math.sqrt(w1 * w2)) if w1 * w2 > 0 else 0.0

        for _ in range(64):
            d13, d23 = rng.uniform(size=2).tolist()
            # cos(Phi) = 1 maximises the factor, so Phi = 0 infeasible means no phase works
            if _factor(d12, d13, d23, 0.0) < 0.0:
                continue
            phases = _draw_phases(rng, d12, d13, d23, phi12, max_phase_draws)
            if phases is None:
                phi13 = rng.uniform(-math.pi, math.pi)
                phases = (phi13, wrap_angle(phi13 - phi12))
            phi13, phi23 = phases
            break
        else:
            continue

        base = coefficients_from_geometry(omega, (0.0, d13, d23), (0.0, phi13, phi23))
        c = QutritCoefficients(omega, (a12,) + base.alpha[1:], (b12,) + base.beta[1:])
        if is_valid_state(c, tol):
            return c


def sample_many(seed: int, count: int) -> list[QutritCoefficients]:
    """``count`` samples on the independent streams ``(seed, 0) .. (seed, count - 1)``."""
    return [sample_valid((seed, idx)) for idx in range(count)]


@dataclass(frozen=True)
class OrthogonalityTerms:
    """Right-hand sides of the orthogonality criteria and the direct trace."""

    via_populations: float
    via_radii: float
    via_angles: float | None
    trace: float


def _require_pure(c: QutritCoefficients, name: str) -> None:
    p = purity(c)
    if abs(p - 1.0) > PURE_TOL:
        raise DomainError(f"{name} is not pure (purity {p!r})")


def _vec(c: QutritCoefficients) -> list[tuple[float, float, float]]:
    g = gammas(c)
    return [(c.alpha[s], c.beta[s], g[s]) for s in range(3)]


def orthogonality_terms(p: QutritCoefficients, q: QutritCoefficients) -> OrthogonalityTerms:
    """Evaluate every orthogonality expression for the pair ``(p, q)``.

    ``via_populations = 2 sum omega omega' + sum v.v'`` and
    ``via_radii = 2 - sum R R' + sum u.u'`` both equal ``2 Tr(rho rho')``.
    ``via_angles = 2 - sum |u||u'|(1 - cos theta)`` is only filled in when
    both states are pure.
    """
    pops = 2.0 * math.fsum(a * b for a, b in zip(p.omega, q.omega)) + math.fsum(
        p.alpha[s] * q.alpha[s] + p.beta[s] * q.beta[s] for s in range(3)
    )
    up, uq = _vec(p), _vec(q)
    Rp, Rq = radii(p), radii(q)
    dots = [sum(x * y for x, y in zip(up[s], uq[s])) for s in range(3)]
    via_radii = 2.0 - math.fsum(a * b for a, b in zip(Rp, Rq)) + math.fsum(dots)

    via_angles = None
    if abs(purity(p) - 1.0) <= PURE_TOL and abs(purity(q) - 1.0) <= PURE_TOL:
        terms = []
        for s in range(3):
            n1, n2 = math.sqrt(sum(x * x for x in up[s])), math.sqrt(sum(x * x for x in uq[s]))
            if n1 == 0.0 or n2 == 0.0:
                terms.append(0.0)
                continue
            cos_theta = min(1.0, max(-1.0, dots[s] / (n1 * n2)))
            terms.append(n1 * n2 * (1.0 - cos_theta))
        via_angles = 2.0 - math.fsum(terms)

    tr = trace_inner(reconstruct(p), reconstruct(q)).real
    return OrthogonalityTerms(pops, via_radii, via_angles, tr)


def orthogonal_pure_mixed(p: QutritCoefficients, q: QutritCoefficients, tol: float = ORTHO_TOL) -> bool:
    """Orthogonality of a pure ``p`` and an arbitrary ``q``."""
    _require_pure(p, "first state")
    t = orthogonality_terms(p, q)
    return abs(t.via_populations) <= tol and abs(t.via_radii) <= tol


def orthogonal_pure_pure(p: QutritCoefficients, q: QutritCoefficients, tol: float = ORTHO_TOL) -> bool:
    """Orthogonality of two pure states from the angles between their Bloch vectors."""
    _require_pure(p, "first state")
    _require_pure(q, "second state")
    return abs(orthogonality_terms(p, q).via_angles) <= tol
