import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import InputError, SingularMatrixError
from realization.gr_node import (GRNode, adjoint, apply_similarity, associated, constant_node,
                                 direct_sum, eval_closed, expand, node_from_dict, node_to_dict,
                                 place_in_variable, product, transfer_coeff)
from realization.truncated import (hankel, is_controllable, is_minimal, is_observable,
                                   minimality_report, observability_controllability_agree,
                                   truncated_ctrl, truncated_obs)
from series.fps import FpsTable
from linalg_utils import numerical_rank


def random_node(rng, dims, p=2, q=2, scale=0.5):
    r = sum(dims)
    g = lambda *shape: rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return GRNode(len(dims), tuple(dims), scale * g(r, r), g(r, q), g(p, r), g(p, q))


def test_transfer_coeff_e1(e1):
    assert_allclose(transfer_coeff(e1, ()), [[-1]])
    for m in range(1, 6):
        assert_allclose(transfer_coeff(e1, (1,) * m), [[2 * (-1) ** (m - 1)]], atol=1e-14)


def test_transfer_coeff_e2_all_words(e2):
    f = expand(e2, 4)
    for w, m in f.items():
        if w:
            assert_allclose(m, [[2 * (-1) ** (len(w) - 1)]], atol=1e-13)


def test_transfer_coeff_rejects_bad_letter(e2):
    with pytest.raises(InputError):
        transfer_coeff(e2, (3,))


def test_expand_constant_node():
    node = constant_node([[2, 1]], 3)
    f = expand(node, 3)
    assert f.support() == [()]
    assert_allclose(f.coeff(()), [[2, 1]])


def test_eval_closed_matches_series(rng, e1):
    Z = [0.3 * np.array([[0.2, 1j], [0.5, -0.4]])]
    assert_allclose(eval_closed(e1, Z), expand(e1, 60).evaluate(Z), atol=1e-10)


def test_eval_closed_singular_resolvent(e1):
    # 1 + z 在 z = -1 处不可逆
    with pytest.raises(SingularMatrixError):
        eval_closed(e1, [np.array([[-1.0]])])


def test_product_realizes_series_product(rng):
    for _ in range(5):
        a, b = random_node(rng, (1, 2)), random_node(rng, (2, 1))
        d = 4
        assert expand(product(a, b), d).max_abs_diff(expand(a, d).mul(expand(b, d))) < 1e-9
        assert product(a, b).dims == (3, 3)


def test_direct_sum_realizes_sum(rng):
    a, b = random_node(rng, (1, 1)), random_node(rng, (2, 0))
    d = 4
    assert expand(direct_sum(a, b), d).max_abs_diff(expand(a, d).add(expand(b, d))) < 1e-10


def test_associated_realizes_inverse(rng):
    node = random_node(rng, (1, 2))
    d = 4
    eye = FpsTable.identity(2, 2, d)
    assert expand(node, d).mul(expand(associated(node), d)).max_abs_diff(eye) < 1e-8
    assert expand(associated(associated(node)), d).max_abs_diff(expand(node, d)) < 1e-8


def test_associated_requires_invertible_D():
    node = GRNode(1, (1,), [[0]], [[1]], [[1]], [[0]])
    with pytest.raises(SingularMatrixError):
        associated(node)


def test_adjoint_is_star(rng):
    node = random_node(rng, (2, 1), p=2, q=3)
    assert expand(adjoint(node), 4).max_abs_diff(expand(node, 4).star()) < 1e-10


def test_example1_is_product_of_e1(example1, e1):
    f = expand(example1, 4)
    assert example1.dims == (1, 1)
    assert_allclose(f.coeff(()), [[1]])
    assert_allclose(f.coeff((1,)), [[-2]], atol=1e-14)
    assert_allclose(f.coeff((2,)), [[-2]], atol=1e-14)
    assert_allclose(f.coeff((1, 2)), [[4]], atol=1e-13)
    assert_allclose(f.coeff((2, 1)), [[0]], atol=1e-14)


def test_place_in_variable(e1):
    placed = place_in_variable(e1, 3, 2)
    assert placed.dims == (0, 1, 0)
    f = expand(placed, 3)
    assert_allclose(f.coeff((2, 2)), [[-2]], atol=1e-14)
    assert_allclose(f.coeff((1,)), [[0]])


def test_truncated_matrices_shapes(e2):
    O1 = truncated_obs(e2, 1)
    C2 = truncated_ctrl(e2, 2)
    assert O1.shape[1] == 1 and C2.shape[0] == 1
    assert numerical_rank(O1) == 1 and numerical_rank(C2) == 1


def test_minimality_report(e2, padded_e1):
    assert is_minimal(e2)
    report = minimality_report(padded_e1)
    assert report.obs_ranks == [1] and report.ctrl_ranks == [1]
    assert not is_observable(padded_e1) and not is_controllable(padded_e1)
    assert not report.minimal


def test_observability_controllability_agree(e2):
    assert observability_controllability_agree(e2)
    observable_only = GRNode(1, (1,), [[0]], [[0]], [[1]], [[0]])
    assert is_observable(observable_only)
    assert not observability_controllability_agree(observable_only)


def test_hankel_rank_equals_state_dimension(rng):
    node = random_node(rng, (1, 2), p=1, q=1)
    f = expand(node, 7)
    assert numerical_rank(hankel(f, 1, 3, 3)) == 1
    assert numerical_rank(hankel(f, 2, 3, 3)) == 2


def test_hankel_needs_degree(e2):
    with pytest.raises(InputError):
        hankel(expand(e2, 3), 1, 2, 2)


def test_apply_similarity_keeps_series(rng):
    node = random_node(rng, (1, 2))
    T = [np.array([[2.0]]), np.array([[1, 1], [0, 1]], dtype=complex)]
    moved = apply_similarity(node, T)
    assert expand(moved, 4).max_abs_diff(expand(node, 4)) < 1e-10
    with pytest.raises(InputError):
        apply_similarity(node, np.ones((3, 3)))


def test_node_dict_parsing(e2):
    data = node_to_dict(e2, np.eye(1))
    parsed = node_from_dict(data)
    assert parsed.dims == e2.dims
    del data['B']
    with pytest.raises(InputError):
        node_from_dict(data)


def test_node_rejects_wrong_shapes():
    with pytest.raises(InputError):
        GRNode(2, (1,), [[0]], [[1]], [[1]], [[0]])
    with pytest.raises(InputError):
        GRNode(1, (2,), np.zeros((2, 2)), [[1]], [[1, 0]], [[0]])
