import numpy as np
import pytest
from numpy.testing import assert_allclose

from classifiers.line_junitary import (associated_H_line, complete_from_AB, complete_from_CA,
                                       is_matrix_J_unitary_line, lyapunov_identity_residual,
                                       lyapunov_residuals, sample_check_line,
                                       unitary_line_diagnostics)
from classifiers.structured_hermitian import StructuredHermitian, h_transfer_check, negative_squares
from errors import ClassificationError, InputError, NotMinimalError
from realization.gr_node import apply_similarity, constant_node, expand
from realization.sampling import skew_hermitian_tuple


def test_e1_has_unit_H(e1, J1x1):
    H = associated_H_line(e1, J1x1)
    assert_allclose(H.matrix, [[1]], atol=1e-12)
    assert H.negative_squares == [0]
    assert max(H.residuals[k] for k in ('lyapunov', 'b_relation', 'lyapunov_dual',
                                        'c_relation')) <= 1e-9


def test_associated_e1_has_one_negative_square(e1inv, J1x1):
    H = associated_H_line(e1inv, J1x1)
    assert_allclose(H.matrix, [[-1]], atol=1e-12)
    assert negative_squares(H) == [1]


def test_e1_with_negative_signature(e1):
    H = associated_H_line(e1, np.array([[-1.0]]))
    assert_allclose(H.matrix, [[-1]], atol=1e-12)


@pytest.mark.parametrize('name', ['e1', 'e2', 'example1', 'example3'])
def test_lyapunov_residuals_for_certified_nodes(name, request, J1x1):
    node = request.getfixturevalue(name)
    H = associated_H_line(node, J1x1)
    residuals = lyapunov_residuals(node, H.matrix, J1x1)
    assert max(residuals.values()) <= 1e-9


def test_e2_and_example_H(e2, example1, example3, J1x1):
    assert_allclose(associated_H_line(e2, J1x1).matrix, np.eye(2), atol=1e-10)
    assert_allclose(associated_H_line(example1, J1x1).matrix, np.eye(2), atol=1e-10)
    assert_allclose(associated_H_line(example3, J1x1).matrix, 2 * np.eye(2), atol=1e-10)


@pytest.mark.parametrize('name', ['e1', 'e2', 'example1'])
def test_sampling_on_skew_hermitian_tuples(name, request, J1x1):
    node = request.getfixturevalue(name)
    for n in (1, 2, 3):
        check = sample_check_line(node, J1x1, n, 32, seed=7)
        assert check.samples + check.skipped == 32
        assert check.max_residual <= 1e-8


def test_lyapunov_identity(rng, e2, J1x1):
    H = associated_H_line(e2, J1x1)
    Z = skew_hermitian_tuple(rng, 2, 2, 0.3)
    Zp = [0.2 * np.array([[1, 2j], [0.5, -1]]) for _ in range(2)]
    assert lyapunov_identity_residual(e2, H.matrix, J1x1, Z, Zp) <= 1e-10


def test_shift_is_not_line_unitary(shift, J1x1):
    result = is_matrix_J_unitary_line(shift, J1x1)
    assert not result.holds
    assert result.details['j_unitary'] is False
    assert 'd_j_unitary' in result.residuals


def test_non_minimal_node_is_rejected(padded_e1, J1x1):
    with pytest.raises(NotMinimalError):
        associated_H_line(padded_e1, J1x1)


def test_signature_size_mismatch(e1):
    with pytest.raises(InputError):
        is_matrix_J_unitary_line(e1, np.eye(2))


def test_constant_node_gives_empty_H(J1x1):
    H = associated_H_line(constant_node([[1j]], 2), J1x1)
    assert H.dims == [0, 0]
    with pytest.raises(ClassificationError):
        associated_H_line(constant_node([[2.0]], 2), J1x1)


def test_H_transfers_under_similarity(e2, J1x1):
    T = np.diag([2.0, -3.0 + 1j])
    moved = apply_similarity(e2, T)
    H1 = associated_H_line(moved, J1x1)
    H2 = associated_H_line(e2, J1x1)
    assert_allclose(H1.matrix, T.conj().T @ H2.matrix @ T, atol=1e-9)
    check = h_transfer_check(H1, H2, T)
    assert check["congruence"] <= 1e-9 and check["same_signature"] == 1.0


def test_complete_from_CA_gives_j_unitary_node(e1, J1x1):
    node, H = complete_from_CA(e1.C, e1.A, e1.dims, J1x1)
    assert_allclose(H.matrix, [[1]], atol=1e-12)
    assert_allclose(node.D, [[1]])
    assert is_matrix_J_unitary_line(node, J1x1).holds
    # 补全得到 -E1
    assert expand(node, 4).max_abs_diff(expand(e1, 4).scale(-1)) < 1e-12


def test_complete_from_AB_gives_j_unitary_node(e2, J1x1):
    node, H = complete_from_AB(e2.A, e2.B, e2.dims, J1x1)
    assert is_matrix_J_unitary_line(node, J1x1).holds
    assert_allclose(H.matrix, np.eye(2), atol=1e-10)


def test_complete_needs_observable_pair(J1x1):
    with pytest.raises(NotMinimalError):
        complete_from_CA(np.array([[1.0, 0.0]]), np.diag([1.0, 2.0]), (2,), J1x1)


def test_unitary_diagnostics_on_e1(e1, J1x1):
    report = unitary_line_diagnostics(e1, associated_H_line(e1, J1x1))
    assert report['violation'] is False
    assert report['d_unitary_residual'] <= 1e-12


def test_structured_hermitian_rejects_off_diagonal():
    with pytest.raises(ClassificationError):
        StructuredHermitian.from_matrix(np.array([[1, 1], [1, 1]]), (1, 1))
