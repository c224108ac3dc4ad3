import numpy as np
import pytest

from classifiers.inner import balance
from classifiers.line_junitary import associated_H_line
from errors import InputError, NumericalError
from kernels.base_kernel_route import KernelInputs
from kernels.formal_route import (Y_LETTER, Z_LETTER, LAMBDA_LETTER, derivative_table,
                                  kernel_formal_derivative, split_augmented_word)
from kernels.kernel_table import KernelTable, kernel_gram, spanning_pairs
from kernels.model_realization import model_realization
from kernels.node_route import kernel_from_node
from kernels.route_factory import compare_routes, create_kernel_route
from kernels.series_route import kernel_from_series
from kernels.shifts import backward_shift, shift_identity_residual, shift_membership_residual
from realization.gr_node import expand
from realization.similarity import similarity_between
from realization.truncated import ctrl_cols, obs_rows
from series.words import transpose


def _inputs(node, J, degree):
    return KernelInputs(node=node, f=expand(node, 2 * degree + 1),
                        H=associated_H_line(node, J), J=np.asarray(J, dtype=complex))


def _alternating(w, w2):
    return 2.0 * (-1) ** (len(w) + len(w2))


def test_example1_routes_agree(example1, J1x1):
    for k in (1, 2):
        report = compare_routes(_inputs(example1, J1x1, 4), k, 4)
        assert max(report['differences'].values()) <= 1e-10
        for table in report['tables'].values():
            assert table.is_hermitian()


def test_example1_first_kernel_pattern(example1, J1x1):
    K = kernel_from_node(example1, associated_H_line(example1, J1x1), 1, 4)
    for (w, w2), m in K.entries.items():
        on_first = all(i == 1 for i in w + w2)
        expected = _alternating(w, w2) if on_first else 0.0
        assert abs(m[0, 0] - expected) <= 1e-10


def test_e2_kernels_coincide(e2, J1x1):
    inputs = _inputs(e2, J1x1, 4)
    K1 = create_kernel_route('series').compute(inputs, 1, 4, 4)
    K2 = create_kernel_route('series').compute(inputs, 2, 4, 4)
    assert K1.max_abs_diff(K2) <= 1e-12
    for (w, w2), m in K1.entries.items():
        assert abs(m[0, 0] - _alternating(w, w2)) <= 1e-12


def test_example3_routes_agree(example3, J1x1):
    for k in (1, 2):
        report = compare_routes(_inputs(example3, J1x1, 3), k, 3)
        assert max(report['differences'].values()) <= 1e-9
        assert max(report['hermitian_defects'].values()) <= 1e-9


def test_formal_route_on_e1(e1, J1x1):
    K = kernel_formal_derivative(e1, J1x1, 1, 3)
    for (w, w2), m in K.entries.items():
        assert abs(m[0, 0] - _alternating(w, w2)) <= 1e-12


@pytest.mark.parametrize('name, nu', [('e1', [0]), ('e1inv', [1]), ('e2', [0, 0]),
                                      ('example3', [0, 0])])
def test_gram_negative_squares_match_H(name, nu, request, J1x1):
    node = request.getfixturevalue(name)
    H = associated_H_line(node, J1x1)
    assert H.negative_squares == nu
    f = expand(node, 5)
    for k in range(1, node.n_vars + 1):
        K = kernel_from_series(f, J1x1, k, 2)
        _, signature = kernel_gram(K, spanning_pairs(K))
        assert signature[1] == nu[k - 1]


def test_gram_rejects_wrong_vector_length(e1, J1x1):
    K = kernel_from_series(expand(e1, 3), J1x1, 1, 1)
    with pytest.raises(InputError):
        kernel_gram(K, [((), np.ones(2))])


def test_series_route_needs_enough_terms(e1, J1x1):
    with pytest.raises(InputError):
        kernel_from_series(expand(e1, 4), J1x1, 1, 2)
    with pytest.raises(InputError):
        kernel_from_series(expand(e1, 5), J1x1, 2, 2)


def test_route_inputs_are_checked(e1, J1x1):
    with pytest.raises(InputError):
        create_kernel_route('node').compute(KernelInputs(f=expand(e1, 3)), 1, 1, 1)
    with pytest.raises(ValueError):
        create_kernel_route('hankel')


def test_kernel_table_from_empty_list():
    with pytest.raises(InputError):
        KernelTable.from_list([], 1, 1)


def test_backward_shift(e1):
    shifted = backward_shift(expand(e1, 5), 1)
    assert shifted.degree == 4
    for m in range(5):
        assert abs(shifted.coeff((1,) * m)[0, 0] - 2.0 * (-1) ** m) <= 1e-12
    with pytest.raises(InputError):
        backward_shift(expand(e1, 5), 2)


@pytest.mark.parametrize('name', ['e2', 'example3'])
def test_shift_invariance(name, request, J1x1):
    node = request.getfixturevalue(name)
    f = expand(node, 9)
    for k in (1, 2):
        assert shift_membership_residual(f, J1x1, k) <= 1e-9
        for j in (1, 2):
            assert shift_identity_residual(f, J1x1, k, j, 2) <= 1e-9


def test_model_realization_of_e2(e2, J1x1):
    result = model_realization(expand(e2, 8), J1x1)
    assert result.node.dims == (1, 1)
    assert expand(result.node, 6).max_abs_diff(expand(e2, 6)) <= 1e-9
    assert result.residuals['h_gram'] <= 1e-9
    balanced = balance(result.node, result.H, J1x1, 'line')
    T = similarity_between(balanced, e2)
    assert np.linalg.norm(T.conj().T @ T - np.eye(2)) <= 1e-9
    basis = result.to_dict()['basis']
    assert [len(b) for b in basis] == [1, 1]


def test_model_realization_keeps_negative_squares(e1inv, J1x1):
    result = model_realization(expand(e1inv, 8), J1x1)
    assert result.node.dims == (1,)
    assert result.H.negative_squares == [1]


def test_model_realization_needs_degree(e2, J1x1):
    with pytest.raises(InputError):
        model_realization(expand(e2, 3), J1x1)
    with pytest.raises(InputError):
        model_realization(expand(e2, 8), np.eye(2))


@pytest.mark.parametrize('seed', range(4))
def test_random_junitary_routes_agree(seed, random_junitary, J2):
    node = random_junitary(seed)
    inputs = _inputs(node, J2, 2)
    assert inputs.H.negative_squares == [0, 1]
    for k in (1, 2):
        report = compare_routes(inputs, k, 2)
        scale = max(1.0, max(float(np.linalg.norm(m))
                             for m in report['tables']['node'].entries.values()))
        assert max(report['differences'].values()) <= 1e-9 * scale
        for table in report['tables'].values():
            assert table.is_hermitian()
        K = report['tables']['series']
        _, signature = kernel_gram(K, spanning_pairs(K))
        assert signature[1] == inputs.H.negative_squares[k - 1]


@pytest.mark.parametrize('seed', range(3))
def test_lambda_expansion_matches_closed_form(seed, random_junitary):
    node = random_junitary(seed)
    for k in (1, 2):
        table = derivative_table(node, k, 2, 2)
        rows = dict(obs_rows(node, k, 2))
        cols = dict(ctrl_cols(node, k, 2))
        assert set(table) <= {(w, u) for w in rows for u in cols}
        # ctrl_cols 按 u^T 索引，y 字按自然顺序
        for w, X in rows.items():
            for u, Y in cols.items():
                expected = -(-1) ** len(u) * X @ Y
                got = table.get((w, transpose(u)), np.zeros_like(expected))
                assert np.linalg.norm(got - expected) <= 1e-12 * max(1.0, np.linalg.norm(expected))


def test_split_augmented_word():
    word = ((Z_LETTER, 2), (Z_LETTER, 1), (LAMBDA_LETTER, 1), (Y_LETTER, 2))
    assert split_augmented_word(word) == ((2, 1), (2,))
    with pytest.raises(NumericalError):
        split_augmented_word(((Y_LETTER, 1), (LAMBDA_LETTER, 1)))
