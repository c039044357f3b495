import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qutrit_bloch.basis import GENERATORS, A, B, C, O, cyclic_triples
from qutrit_bloch.bloch import QutritCoefficients, decompose, purity, radii, reconstruct
from qutrit_bloch.dynamics import (
    C_ROTATION_MULTIPLES,
    c_rotation_prediction,
    evolve,
    evolve_unitary,
    expectation,
    oscillation_parameters,
    propagator,
    radius_closed_form,
    radius_oscillation_fit,
    radius_slots,
    rotate_projection,
    trajectory,
    triple_expectations,
)
from qutrit_bloch.linalg import eigenvalues_hermitian
from qutrit_bloch.validity import DomainError, is_valid_state

from conftest import density_matrices

generators = st.sampled_from(GENERATORS)
angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)
KET1 = QutritCoefficients((1, 0, 0))


def close(a, b, tol):
    return np.max(np.abs(a.as_vector() - b.as_vector())) <= tol


@given(density_matrices(), generators)
def test_zero_angle_is_identity(m, g):
    c = decompose(m)
    assert close(evolve(c, g, 0.0), c, 1e-15)


@given(density_matrices(), generators, angles, angles)
def test_evolution_composes_and_preserves_spectrum(m, g, t1, t2):
    c = decompose(m)
    one = evolve(c, g, t1 + t2)
    two = evolve(evolve(c, g, t1), g, t2)
    assert close(one, two, 1e-12)
    assert abs(purity(one) - purity(c)) <= 1e-12
    assert np.allclose(eigenvalues_hermitian(reconstruct(one)), eigenvalues_hermitian(m), atol=1e-10)
    assert is_valid_state(one)


def test_population_transfer():
    out = evolve(KET1, A(1, 2), math.pi / 2)
    assert close(out, QutritCoefficients((0, 1, 0)), 1e-14)


def test_invalid_state_rejected():
    with pytest.raises(DomainError):
        evolve(QutritCoefficients((1, 0, 0), (1, 0, 0)), A(1, 2), 0.1)
    with pytest.raises(ValueError):
        propagator(O(1), 0.1)


def test_c12_rotation_senses(example_rho):
    c = decompose(example_rho)
    theta = 0.37
    out = evolve(c, C(1, 2), theta)
    for s, mult in enumerate((2, 1, -1)):
        want = rotate_projection(c.alpha[s], c.beta[s], mult * theta)
        assert (out.alpha[s], out.beta[s]) == pytest.approx(want, abs=1e-15)
    assert out.omega == pytest.approx(c.omega, abs=1e-15)


@given(density_matrices(), st.sampled_from([C(1, 2), C(1, 3), C(2, 3)]), angles)
def test_c_rotation_law(m, g, theta):
    c = decompose(m)
    assert close(evolve(c, g, theta), c_rotation_prediction(c, g, theta), 1e-10)


def test_c_multiples_table():
    # the ij vector turns by 2 theta, the other two by theta with one reversed
    for (i, j), mult in C_ROTATION_MULTIPLES.items():
        slot = {(1, 2): 0, (1, 3): 1, (2, 3): 2}[(i, j)]
        assert mult[slot] == 2
        assert sorted(abs(x) for k, x in enumerate(mult) if k != slot) == [1, 1]


def test_trajectory_examples(example_rho):
    c = decompose(example_rho)
    pts = trajectory(c, A(1, 2), 0.0, 2)
    assert pts[0].coefficients == pts[1].coefficients
    pts = trajectory(c, A(1, 2), math.pi, 33)
    assert [p.theta for p in pts][-1] == pytest.approx(math.pi)
    for p in pts:
        assert p.radii[1] + p.radii[2] == pytest.approx(1 + c.omega[2], abs=1e-12)
        assert p.bloch.radii == p.radii
    for p in trajectory(c, C(1, 2), 2.0, 17):
        assert p.radii == pytest.approx(radii(c), abs=1e-15)


def test_trajectory_errors():
    with pytest.raises(ValueError):
        trajectory(KET1, A(1, 2), 1.0, 1)
    with pytest.raises(DomainError):
        trajectory(QutritCoefficients((0.5, 0.5, 0.5)), A(1, 2), 1.0, 3)


@given(density_matrices(), st.sampled_from([g for g in GENERATORS if g.kind != "C"]))
def test_radius_law_pointwise(m, g):
    c = decompose(m)
    pts = trajectory(c, g, math.pi, 41)
    theta = np.array([p.theta for p in pts])
    r_ik, r_jk = radius_closed_form(c, g, theta)
    got = np.array([p.radii for p in pts])
    s_ik, s_jk = radius_slots(g)
    assert np.max(np.abs(got[:, s_ik] - r_ik)) <= 1e-9
    assert np.max(np.abs(got[:, s_jk] - r_jk)) <= 1e-9
    assert all(abs(p.purity - purity(c)) <= 1e-10 for p in pts)


def test_fit_examples(example_rho):
    c = decompose(example_rho)
    ik, jk = radius_oscillation_fit(c, A(1, 2))
    assert ik.amplitude == pytest.approx(math.sqrt(7) / 4, abs=1e-9)
    assert jk.amplitude == pytest.approx(ik.amplitude, abs=1e-12)
    assert ik.offset == pytest.approx((1 + c.omega[2]) / 2, abs=1e-9)
    assert (ik.sign, jk.sign) == (1, -1)
    assert jk.phase == pytest.approx(ik.phase, abs=1e-9)
    assert max(ik.residual, jk.residual) <= 1e-9
    ik, _ = radius_oscillation_fit(c, B(1, 2))
    assert ik.amplitude == pytest.approx(math.sqrt(3) / 4, abs=1e-9)


def test_fit_flat_when_amplitude_vanishes():
    c = QutritCoefficients((0.4, 0.4, 0.2), (0.3, 0, 0), (0, 0, 0))
    ik, jk = radius_oscillation_fit(c, A(1, 2))
    assert ik.amplitude <= 1e-12 and jk.amplitude <= 1e-12
    pts = trajectory(c, A(1, 2), math.pi, 9)
    assert all(p.radii == pytest.approx(radii(c), abs=1e-15) for p in pts)


@given(density_matrices(), st.sampled_from([g for g in GENERATORS if g.kind != "C"]))
def test_fit_recovers_closed_form(m, g):
    c = decompose(m)
    amp, phase, offset = oscillation_parameters(c, g)
    for fit in radius_oscillation_fit(c, g, 64):
        assert abs(fit.amplitude - amp) <= 1e-9
        assert abs(fit.offset - offset) <= 1e-9
        if amp > 1e-6:
            assert abs(math.remainder(fit.phase - phase, 2 * math.pi)) <= 1e-6


def test_fit_rejects_bad_input():
    with pytest.raises(ValueError):
        radius_oscillation_fit(KET1, C(1, 2))
    with pytest.raises(ValueError):
        radius_oscillation_fit(KET1, A(1, 2), samples=10)


@given(density_matrices(), st.sampled_from(range(7)), angles)
def test_cyclic_triple_rotation(m, which, theta):
    t = cyclic_triples()[which]
    x, y, z = t.members
    c = decompose(m)
    x0, y0, z0 = triple_expectations(c, t.members)
    x1, y1, z1 = triple_expectations(evolve(c, z, theta), t.members)
    k = t.multiplier * theta
    assert abs(x1 - (x0 * math.cos(k) + y0 * math.sin(k))) <= 1e-10
    assert abs(y1 - (y0 * math.cos(k) - x0 * math.sin(k))) <= 1e-10
    assert abs(z1 - z0) <= 1e-10


@given(density_matrices(), generators, generators, angles, angles)
def test_product_of_exponentials(m, g, h, t1, t2):
    c = decompose(m)
    u = propagator(h, t2) @ propagator(g, t1)
    assert close(evolve_unitary(c, u), evolve(evolve(c, g, t1), h, t2), 1e-12)


def test_expectation_of_c_is_gamma(example_rho):
    c = decompose(example_rho)
    assert expectation(c, C(1, 2)) == pytest.approx(c.omega[0] - c.omega[1])
