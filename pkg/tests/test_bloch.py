import math

import numpy as np
import pytest
from hypothesis import given

from qutrit_bloch.basis import C, basis_operator
from qutrit_bloch.bloch import (
    QutritCoefficients,
    TraceError,
    bloch_triple,
    decompose,
    derived_geometry,
    det_formula,
    gammas,
    purity,
    radii,
    radius_from_gammas,
    reconstruct,
    wrap_angle,
)
from qutrit_bloch.linalg import DimensionError, NotHermitianError, determinant, eigenvalues_hermitian, trace_inner

from conftest import density_matrices, hermitian_matrices

MIXED = QutritCoefficients((1 / 3, 1 / 3, 1 / 3))
KET1 = QutritCoefficients((1.0, 0.0, 0.0))


def test_decompose_examples(example_rho):
    c = decompose(np.eye(3) / 3)
    assert c.omega == pytest.approx((1 / 3,) * 3) and c.alpha == (0, 0, 0) and c.beta == (0, 0, 0)
    c = decompose(example_rho)
    s = 1 / (2 * math.sqrt(2))
    assert c.omega == pytest.approx((0.25, 0.5, 0.25), abs=1e-15)
    assert c.alpha == pytest.approx((-s, 0.5, -s), abs=1e-15)
    assert c.beta == pytest.approx((math.sqrt(6) / 4, 0.0, -math.sqrt(6) / 4), abs=1e-15)
    assert decompose(np.diag([1, 0, 0])) == KET1


def test_decompose_sign_convention():
    rho = np.array([[0.5, 0.1 - 0.3j, 0], [0.1 + 0.3j, 0.5, 0], [0, 0, 0]])
    c = decompose(rho)
    assert c.alpha[0] == pytest.approx(0.2) and c.beta[0] == pytest.approx(0.6)


@pytest.mark.parametrize("m,err", [
    (np.array([[1, 1], [0, 0]]), DimensionError),
    (np.array([[0.5, 0.1, 0], [0, 0.5, 0], [0, 0, 0]]), NotHermitianError),
    (np.eye(3) / 2, TraceError),
])
def test_decompose_errors(m, err):
    with pytest.raises(err):
        decompose(m)


def test_reconstruct_examples(example_rho):
    assert np.allclose(reconstruct(MIXED), np.eye(3) / 3, atol=0)
    assert np.max(np.abs(reconstruct(decompose(example_rho)) - example_rho)) <= 1e-15
    bad = QutritCoefficients((1, 0, 0), (1, 0, 0))
    assert eigenvalues_hermitian(reconstruct(bad))[0] < 0


@given(hermitian_matrices())
def test_round_trip_on_coefficients(m):
    c = QutritCoefficients.from_vector(np.concatenate([np.diag(m).real, m[np.triu_indices(3, 1)].real,
                                                       m[np.triu_indices(3, 1)].imag]))
    assert decompose(reconstruct(c), trace_tol=np.inf) == c


@given(density_matrices())
def test_round_trip_on_matrices(m):
    assert np.max(np.abs(reconstruct(decompose(m)) - m)) <= 1e-15


def test_bloch_triple_examples(example_rho):
    t = bloch_triple(decompose(example_rho))
    assert t.gamma == pytest.approx((-0.25, 0.0, 0.25), abs=1e-15)
    assert t.radii == pytest.approx((0.75, 0.5, 0.75), abs=1e-15)
    assert t.lengths == pytest.approx(t.radii, abs=1e-15)
    t = bloch_triple(KET1)
    assert t.gamma == (1, 1, 0) and t.radii == (1, 1, 0) and sum(t.lengths) == 2
    t = bloch_triple(MIXED)
    assert t.gamma == pytest.approx((0, 0, 0)) and t.radii == pytest.approx((2 / 3,) * 3)
    assert t.lengths == pytest.approx((0, 0, 0))


def test_bloch_triple_trace_error():
    with pytest.raises(TraceError):
        bloch_triple(QutritCoefficients((0.5, 0.5, 0.5)))


@given(density_matrices())
def test_bloch_invariants(m):
    c = decompose(m)
    g, R = gammas(c), radii(c)
    assert abs(g[0] - g[1] + g[2]) <= 1e-15
    assert abs(math.fsum(R) - 2) <= 1e-14
    assert abs(g[0] - (R[1] - R[2])) <= 1e-15
    for s, (i, j) in enumerate(((1, 2), (1, 3), (2, 3))):
        assert abs(R[s] - radius_from_gammas(g, i, j)) <= 1e-14
    for s, (i, j) in enumerate(((1, 2), (1, 3), (2, 3))):
        expect = trace_inner(basis_operator(C(i, j)), m).real
        assert abs(expect - g[s]) <= 1e-12


def test_geometry_examples(example_rho):
    geo = derived_geometry(decompose(example_rho))
    assert geo.d == pytest.approx((1, 1, 1), abs=1e-15)
    assert geo.phi == pytest.approx((2 * math.pi / 3, 0, -2 * math.pi / 3), abs=1e-15)
    assert abs(geo.Phi) <= 1e-15
    geo = derived_geometry(MIXED)
    assert geo.d == (0, 0, 0) and geo.Phi == 0
    geo = derived_geometry(QutritCoefficients((0.5, 0.5, 0), (1, 0, 0)))
    assert geo.d[0] == pytest.approx(1) and geo.d[1] is None and geo.d[2] is None
    assert not geo.defined


def test_wrap_angle_range():
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_angle(2 * math.pi) == 0


def test_purity_examples(example_rho):
    assert purity(MIXED) == pytest.approx(1 / 3)
    assert purity(decompose(example_rho)) == pytest.approx(1, abs=1e-15)
    assert purity(QutritCoefficients((0.5, 0.5, 0))) == 0.5


@given(density_matrices())
def test_purity_matches_trace_and_bounds(m):
    c = decompose(m)
    p = purity(c)
    assert abs(p - trace_inner(m, m).real) <= 1e-12
    assert 1 / 3 - 1e-12 <= p <= 1 + 1e-12


@given(density_matrices(rank=1))
def test_pure_states_have_unit_lengths(m):
    c = decompose(m)
    geo = derived_geometry(c)
    assert purity(c) == pytest.approx(1, abs=1e-12)
    assert all(abs(d - 1) <= 1e-9 for d in geo.d)
    assert abs(wrap_angle(geo.Phi)) <= 1e-9


def test_det_formula_examples(example_rho):
    assert det_formula(MIXED) == pytest.approx(1 / 27)
    c = QutritCoefficients((0.25, 0.5, 0.25), (0, 0.5, 0))
    assert det_formula(c) == pytest.approx(determinant(reconstruct(c)).real, abs=1e-15)
    assert abs(det_formula(decompose(example_rho))) <= 1e-15
    assert det_formula(KET1) is None


@given(density_matrices())
def test_det_formula_needs_full_circle_phases(m):
    c = decompose(m)
    if min(c.omega) > 1e-6:
        assert abs(det_formula(c) - determinant(m).real) <= 1e-12


def test_bare_arctan_would_break_det_formula():
    # alpha < 0 puts the phase in the left half plane; a bare arctan drops that
    c = QutritCoefficients((0.4, 0.3, 0.3), (-0.3, 0.2, 0.1), (0.1, 0.05, -0.2))
    geo = derived_geometry(c)
    bare = [math.atan(b / a) for a, b in zip(c.alpha, c.beta)]
    d12, d13, d23 = geo.d
    w = math.prod(c.omega)
    wrong = w * (1 - d12**2 - d13**2 - d23**2 + 2 * d12 * d13 * d23 * math.cos(bare[0] - bare[1] + bare[2]))
    direct = determinant(reconstruct(c)).real
    assert det_formula(c) == pytest.approx(direct, abs=1e-15)
    assert abs(wrong - direct) > 1e-4
