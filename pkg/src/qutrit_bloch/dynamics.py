"""Unitary evolution of qutrit coefficients under single basis generators.

Evolution is done exactly in the matrix picture, ``rho -> U rho U^dagger``
with ``U = exp(i theta G)``, and then read back into coefficients.

Rotation sense: a "rotation of ``u_ij`` by angle x" below means
``alpha_ij - i beta_ij -> exp(i x) (alpha_ij - i beta_ij)``, i.e. the
``(alpha, beta)`` projection turns clockwise by ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import GeneratorId, _basis_operator, generator_decomposition
from .bloch import (
    BlochTriple,
    QutritCoefficients,
    bloch_triple,
    complement,
    decompose,
    gammas,
    pair_slot,
    purity,
    radii,
    reconstruct,
)
from .linalg import dagger, matrix_exp_unitary
from .validity import DomainError, is_valid_state

# Rotation multiples of the (12, 13, 23) vectors under exp(i theta C_ij).
C_ROTATION_MULTIPLES = {
    (1, 2): (2, 1, -1),
    (1, 3): (1, 2, 1),
    (2, 3): (-1, 1, 2),
}


@dataclass(frozen=True)
class TrajectoryPoint:
    theta: float
    coefficients: QutritCoefficients
    radii: tuple[float, float, float]
    bloch: BlochTriple

    @property
    def purity(self) -> float:
        return purity(self.coefficients)


@dataclass(frozen=True)
class OscillationFit:
    """Least-squares fit of ``offset + sign * amplitude / 2 * f(2 theta + phase)``.

    ``f`` is ``sin`` for A generators and ``cos`` for B generators.
    """

    amplitude: float
    phase: float
    offset: float
    sign: int
    residual: float


def _check_generator(g: GeneratorId) -> None:
    if g.kind == "O" or any(x > 3 for x in g.index):
        raise ValueError(f"{g} is not one of the nine qutrit generators")


def propagator(g: GeneratorId, theta: float) -> np.ndarray:
    _check_generator(g)
    return matrix_exp_unitary(None, theta, decomposition=generator_decomposition(g, 3))


def evolve_unitary(c: QutritCoefficients, u: np.ndarray) -> QutritCoefficients:
    rho = u @ reconstruct(c) @ dagger(u)
    return decompose(0.5 * (rho + dagger(rho)))


def evolve(c: QutritCoefficients, g: GeneratorId, theta: float, *, check: bool = True) -> QutritCoefficients:
    """Coefficients of ``exp(i theta G) rho exp(-i theta G)``."""
    if check and not is_valid_state(c):
        raise DomainError("cannot evolve an invalid state")
    return evolve_unitary(c, propagator(g, theta))


def trajectory(c: QutritCoefficients, g: GeneratorId, theta_max: float, steps: int) -> list[TrajectoryPoint]:
    """Evolved states at ``theta = k theta_max / (steps - 1)``, ``k = 0 .. steps - 1``."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not is_valid_state(c):
        raise DomainError("cannot evolve an invalid state")
    points = []
    for k in range(steps):
        theta = k * theta_max / (steps - 1)
        ck = evolve(c, g, theta, check=False)
        points.append(TrajectoryPoint(theta, ck, radii(ck), bloch_triple(ck)))
    return points


def expectation(c: QutritCoefficients, g: GeneratorId) -> float:
    """``Tr(rho G)`` for a basis operator."""
    return float(np.sum(_basis_operator(g, 3).T * reconstruct(c)).real)


def rotate_projection(alpha: float, beta: float, angle: float) -> tuple[float, float]:
    """``(alpha, beta)`` after a rotation by ``angle`` in the module's sense."""
    ca, sa = math.cos(angle), math.sin(angle)
    return alpha * ca + beta * sa, beta * ca - alpha * sa


def c_rotation_prediction(c: QutritCoefficients, g: GeneratorId, theta: float) -> QutritCoefficients:
    """Closed form of evolution under a C generator: pure rotations, omegas fixed."""
    if g.kind != "C":
        raise ValueError(f"{g} is not a C generator")
    mult = C_ROTATION_MULTIPLES[g.index]
    alpha, beta = [], []
    for s in range(3):
        a, b = rotate_projection(c.alpha[s], c.beta[s], mult[s] * theta)
        alpha.append(a)
        beta.append(b)
    return QutritCoefficients(c.omega, tuple(alpha), tuple(beta))


def oscillation_parameters(c: QutritCoefficients, g: GeneratorId) -> tuple[float, float, float]:
    """``(amplitude, phase, offset)`` of the radius oscillation for an A or B generator.

    The amplitude is ``sqrt(beta_ij^2 + gamma_ij^2)`` for ``A_ij`` and
    ``sqrt(alpha_ij^2 + gamma_ij^2)`` for ``B_ij``; the phase follows from the
    initial ``gamma_ij`` and its rate of change.
    """
    if g.kind not in ("A", "B"):
        raise ValueError(f"radius oscillations are defined for A and B generators, not {g}")
    i, j = g.index
    k = complement(i, j)
    s = pair_slot(i, j)
    a, b, gam = c.alpha[s], c.beta[s], gammas(c)[s]
    if g.kind == "A":
        amp, phase = math.hypot(b, gam), math.atan2(gam, -b)
    else:
        amp, phase = math.hypot(a, gam), math.atan2(-a, gam)
    return amp, phase, 0.5 * (1.0 + c.omega[k - 1])


def radius_closed_form(c: QutritCoefficients, g: GeneratorId, theta) -> tuple:
    """``(R_ik(theta), R_jk(theta))`` predicted from the initial state."""
    amp, phase, offset = oscillation_parameters(c, g)
    wave = np.sin if g.kind == "A" else np.cos
    osc = 0.5 * amp * wave(2.0 * np.asarray(theta) + phase)
    return offset + osc, offset - osc


def radius_slots(g: GeneratorId) -> tuple[int, int]:
    """Positions of ``R_ik`` and ``R_jk`` in the (12, 13, 23) ordering."""
    i, j = g.index
    k = complement(i, j)
    return pair_slot(i, k), pair_slot(j, k)


def _fit(theta: np.ndarray, y: np.ndarray, kind: str, sign: int) -> OscillationFit:
    design = np.column_stack([np.ones_like(theta), np.sin(2 * theta), np.cos(2 * theta)])
    (off, cs, cc), *_ = np.linalg.lstsq(design, y, rcond=None)
    cs, cc = sign * cs, sign * cc
    amp = 2.0 * math.hypot(cs, cc)
    # sin(2t + p) = cos p sin 2t + sin p cos 2t ; cos(2t + p) = cos p cos 2t - sin p sin 2t
    phase = math.atan2(cc, cs) if kind == "A" else math.atan2(-cs, cc)
    resid = float(np.max(np.abs(design @ np.array([off, sign * cs, sign * cc]) - y)))
    return OscillationFit(amp, phase, float(off), sign, resid)


def radius_oscillation_fit(
    c: QutritCoefficients, g: GeneratorId, samples: int = 128
) -> tuple[OscillationFit, OscillationFit]:
    """Fit the radius trajectories ``R_ik(theta)`` and ``R_jk(theta)`` over one period.

    The frequency is fixed at 2, the phase is a free parameter. ``R_jk`` is
    fitted with a negative sign so both fits share amplitude and phase.
    """
    if g.kind not in ("A", "B"):
        raise ValueError(f"radius oscillations are defined for A and B generators, not {g}")
    if samples < 64:
        raise ValueError("use at least 64 samples per period")
    theta = np.linspace(0.0, math.pi, samples, endpoint=False)
    s_ik, s_jk = radius_slots(g)
    r = np.array([radii(evolve(c, g, t, check=False)) for t in theta])
    return _fit(theta, r[:, s_ik], g.kind, +1), _fit(theta, r[:, s_jk], g.kind, -1)


def triple_expectations(c: QutritCoefficients, members) -> tuple[float, float, float]:
    return tuple(expectation(c, g) for g in members)

