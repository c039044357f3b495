import itertools

import numpy as np
import pytest

from qutrit_bloch.basis import (
    GENERATORS,
    A,
    B,
    C,
    GeneratorId,
    O,
    anticommutator,
    basis_algebra_checks,
    basis_operator,
    commutator,
    commutator_table,
    countertwisting_identities,
    cyclic_triples,
    format_table,
    normalize_pair,
    published_table,
    qudit_basis,
    spin1_checks,
    spin1_matrices,
)
from qutrit_bloch.linalg import DimensionError, eigenvalues_hermitian, trace_inner


def test_basis_operator_examples():
    assert np.array_equal(basis_operator(O(1)), np.diag([1, 0, 0]))
    assert np.allclose(basis_operator(C(1, 2)), np.diag([1, -1, 0]))
    b13 = np.zeros((3, 3), complex)
    b13[0, 2], b13[2, 0] = -1j, 1j
    assert np.array_equal(basis_operator(B(1, 3)), b13)


def test_c_is_commutator_of_a_and_b():
    for i, j in ((1, 2), (1, 3), (2, 3)):
        a, b = basis_operator(A(i, j)), basis_operator(B(i, j))
        assert np.allclose(-0.5j * commutator(a, b), basis_operator(O(i)) - basis_operator(O(j)))


def test_pair_normalisation():
    assert normalize_pair(3, 1) == (1, 3)
    assert A(3, 1) == A(1, 3)
    assert GeneratorId.parse("B21") == B(1, 2)
    with pytest.raises(ValueError):
        normalize_pair(2, 2)


def test_index_out_of_range():
    with pytest.raises((DimensionError, ValueError, IndexError)):
        basis_operator(A(1, 4), 3)


def test_returned_matrices_are_copies():
    m = basis_operator(A(1, 2))
    m[0, 0] = 99
    assert basis_operator(A(1, 2))[0, 0] == 0


def test_orthogonality_and_norms():
    ops = [basis_operator(g) for g in qudit_basis(3)]
    gram = np.array([[trace_inner(x, y) for y in ops] for x in ops])
    want = np.diag([1, 1, 1] + [2] * 6)
    assert np.max(np.abs(gram - want)) <= 1e-12


def test_traceless_and_dependent():
    for g in GENERATORS:
        assert np.trace(basis_operator(g)) == 0
    dep = basis_operator(C(1, 2)) - basis_operator(C(1, 3)) + basis_operator(C(2, 3))
    assert not np.any(dep)


def test_qudit_basis_spans_hermitian_space():
    for d in (2, 3, 4, 5):
        ops = qudit_basis(d)
        assert len(ops) == d * d
        vecs = np.array([np.concatenate([basis_operator(g, d).real.ravel(), basis_operator(g, d).imag.ravel()])
                         for g in ops])
        assert np.linalg.matrix_rank(vecs) == d * d


def test_generator_set_dimension_count():
    # eight independent traceless generators among the nine (one C is redundant)
    vecs = np.array([np.concatenate([basis_operator(g).real.ravel(), basis_operator(g).imag.ravel()])
                     for g in GENERATORS])
    assert np.linalg.matrix_rank(vecs) == 8


@pytest.mark.parametrize("row,col,text", [
    (A(1, 2), B(1, 2), "2iC12"),
    (C(1, 2), C(1, 3), "0"),
    (A(1, 2), A(1, 3), "iB23"),
])
def test_table_examples(row, col, text):
    assert str(commutator_table()[(row, col)]) == text


def test_computed_table_matches_transcription():
    computed, published = commutator_table(), published_table()
    assert len(computed) == 81
    for key, entry in computed.items():
        assert np.max(np.abs(entry.matrix() - published[key].matrix())) <= 1e-12, key


def test_table_is_antisymmetric():
    t = commutator_table()
    for g, h in itertools.product(GENERATORS, GENERATORS):
        assert np.allclose(t[(g, h)].matrix(), -t[(h, g)].matrix())


def test_cyclic_triples():
    triples = cyclic_triples()
    assert [t.multiplier for t in triples].count(2) == 3
    assert [t.multiplier for t in triples].count(1) == 4
    assert any(set(t.members) == {A(1, 2), B(1, 2), C(1, 2)} and t.multiplier == 2 for t in triples)
    assert any(set(t.members) == {B(1, 2), B(1, 3), B(2, 3)} for t in triples)
    for t in triples:
        assert t.residual() <= 1e-12


def test_wrong_ordering_of_extra_triple():
    a13, a23, a12, b12 = (basis_operator(g) for g in (A(1, 3), A(2, 3), A(1, 2), B(1, 2)))
    assert np.max(np.abs(commutator(a13, a23) - 1j * a12)) > 0.5
    assert np.allclose(commutator(a13, a23), 1j * b12)


def test_spin1():
    sx, sy, sz = spin1_matrices()
    assert np.allclose(commutator(sx, sy), 1j * sz)
    assert np.allclose(eigenvalues_hermitian(sz), [-1, 0, 1], atol=1e-14)
    assert np.allclose(sx @ sx + sy @ sy + sz @ sz, 2 * np.eye(3))
    assert all(c.passed for c in spin1_checks())


def test_countertwisting_examples():
    op = basis_operator
    assert np.allclose(anticommutator(op(A(1, 3)), op(A(2, 3))), op(A(1, 2)))
    assert np.allclose(op(A(1, 2)) @ op(A(1, 2)), np.eye(3) - op(O(3)))
    assert np.allclose(anticommutator(op(B(1, 2)), op(A(1, 3))), -op(B(2, 3)))
    checks = countertwisting_identities()
    assert checks and all(c.passed for c in checks)


def test_algebra_check_count():
    checks = basis_algebra_checks()
    assert len(checks) == 114
    assert all(c.passed for c in checks)


def test_format_table_layout():
    text = format_table()
    lines = text.splitlines()
    assert len(lines) == 11
    assert lines[0].split("||")[1].split("|")[0].strip() == "A12"
    assert "2iC12" in lines[2]
