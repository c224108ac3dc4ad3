import numpy as np
import pytest
from numpy.testing import assert_allclose

from classifiers.selfadjoint import (J1, circle_selfadjoint_decompose, embed_J1,
                                     embedding_identity_residual, is_matrix_selfadjoint_circle,
                                     is_matrix_selfadjoint_line, selfadjoint_decompose,
                                     selfadjoint_sample_check)
from classifiers.structured_hermitian import StructuredHermitian
from errors import InputError
from factorization.subspaces import SubspaceFamily
from realization.gr_node import GRNode, direct_sum, expand, place_in_variable
from realization.sampling import skew_hermitian_tuple


def test_J1_is_signature():
    S = J1(2)
    assert_allclose(S @ S, np.eye(4))
    assert_allclose(S, S.conj().T)


def test_embedding_shape(phi_sum):
    beta = embed_J1(phi_sum)
    assert beta.D.shape == (2, 2)
    assert_allclose(beta.D, np.eye(2))
    assert beta.dims == phi_sum.dims


def test_embedding_rejects_rectangular():
    node = GRNode(1, (1,), [[0]], [[1]], [[1], [2]], [[0], [0]])
    with pytest.raises(InputError):
        embed_J1(node)


def test_embedding_identity(rng, phi_sum):
    Z = skew_hermitian_tuple(rng, 2, 3, 0.5)
    Zp = [0.3 * np.ones((3, 3)), 0.2j * np.eye(3)]
    assert embedding_identity_residual(phi_sum, Z, Zp) <= 1e-10


def test_phi_sum_is_line_selfadjoint(phi_sum):
    result = is_matrix_selfadjoint_line(phi_sum)
    assert result.holds
    assert_allclose(result.H.matrix, np.eye(2), atol=1e-10)
    assert result.H.negative_squares == [0, 0]
    assert result.residuals['skew_lyapunov'] <= 1e-10


def test_sa_circle_is_circle_selfadjoint(sa_circle):
    result = is_matrix_selfadjoint_circle(sa_circle)
    assert result.holds
    assert_allclose(result.H.matrix, [[2]], atol=1e-9)
    assert result.residuals['d_defect'] <= 1e-9


def test_e1_is_not_line_selfadjoint(e1):
    result = is_matrix_selfadjoint_line(e1)
    assert not result.holds
    assert result.details['selfadjoint'] is False


def test_non_hermitian_constant_is_rejected():
    node = GRNode(1, (1,), [[0]], [[1]], [[1j]], [[1j]])
    assert not is_matrix_selfadjoint_line(node).holds


def test_sampling(phi_sum, sa_circle):
    assert selfadjoint_sample_check(phi_sum, 'line', 2, 16, seed=3).max_residual <= 1e-10
    assert selfadjoint_sample_check(sa_circle, 'circle', 2, 16, seed=3).max_residual <= 1e-8
    with pytest.raises(InputError):
        selfadjoint_sample_check(phi_sum, 'strip', 2, 4, seed=3)


def test_line_decomposition_splits_variables(phi_sum):
    H = is_matrix_selfadjoint_line(phi_sum).H
    M = SubspaceFamily((np.eye(1), np.zeros((1, 0))))
    parts = selfadjoint_decompose(phi_sum, H, M)
    assert parts.first.dims == (1, 0)
    assert parts.second.dims == (0, 1)
    assert parts.residuals['sum_expansion'] <= 1e-12
    assert parts.details['nu_adds']
    z1 = GRNode(1, (1,), [[0]], [[1]], [[1j]], [[0]])
    assert expand(parts.first, 3).max_abs_diff(expand(place_in_variable(z1, 2, 1), 3)) < 1e-12
    assert expand(parts.second, 3).max_abs_diff(expand(place_in_variable(z1, 2, 2), 3)) < 1e-12


def test_line_decomposition_checks_D_split(phi_sum):
    H = is_matrix_selfadjoint_line(phi_sum).H
    M = SubspaceFamily((np.eye(1), np.zeros((1, 0))))
    with pytest.raises(InputError):
        selfadjoint_decompose(phi_sum, H, M, D_split=([[1j]], [[-1j]]))
    with pytest.raises(InputError):
        selfadjoint_decompose(phi_sum, H, M, D_split=([[1]], [[1]]))


def test_circle_decomposition_with_full_family(sa_circle):
    H = is_matrix_selfadjoint_circle(sa_circle).H
    parts = circle_selfadjoint_decompose(sa_circle, H, SubspaceFamily.full(sa_circle.dims))
    assert parts.first.dims == (1,)
    assert parts.second.dims == (0,)
    assert_allclose(parts.first.D, [[1j]], atol=1e-12)
    assert_allclose(parts.second.D, [[0]], atol=1e-12)
    assert parts.to_dict()['nu'] == [[0], [0]]


def test_circle_decomposition_rejects_non_hermitian_S(sa_circle):
    H = is_matrix_selfadjoint_circle(sa_circle).H
    with pytest.raises(InputError):
        circle_selfadjoint_decompose(sa_circle, H, SubspaceFamily.full(sa_circle.dims), S=[[1j]])


def test_degenerate_family_is_rejected():
    node = GRNode(1, (2,), np.diag([1.0, -1.0]), [[1], [1]], [[1j, 1j]], [[0]])
    H = StructuredHermitian.from_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]), (2,))
    M = SubspaceFamily((np.array([[1.0], [0.0]]),))
    with pytest.raises(InputError):
        selfadjoint_decompose(node, H, M)


def test_circle_decomposition_of_direct_sum(sa_circle):
    left = place_in_variable(sa_circle, 2, 1)
    right = place_in_variable(sa_circle, 2, 2)
    node = direct_sum(left, right)
    result = is_matrix_selfadjoint_circle(node)
    assert result.holds
    assert_allclose(result.H.matrix, 2 * np.eye(2), atol=1e-9)
    M = SubspaceFamily((np.eye(1), np.zeros((1, 0))))
    parts = circle_selfadjoint_decompose(node, result.H, M)
    assert parts.first.dims == (1, 0)
    assert parts.second.dims == (0, 1)
    assert_allclose(parts.details['D1'], [[1j]], atol=1e-12)
    assert_allclose(parts.details['D2'], [[1j]], atol=1e-12)
    assert expand(parts.first, 4).max_abs_diff(expand(left, 4)) < 1e-10
    assert expand(parts.second, 4).max_abs_diff(expand(right, 4)) < 1e-10
    assert parts.to_dict()['nu'] == [[0, 0], [0, 0]]
