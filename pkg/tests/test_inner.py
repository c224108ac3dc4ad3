import numpy as np
import pytest
from numpy.testing import assert_allclose

from classifiers.circle_junitary import associated_H_circle
from classifiers.inner import (balance, disk_contractivity_sample, halfplane_contractivity_sample,
                               is_J_inner_disk, is_J_inner_line, schur_agler_sample,
                               unitary_node_check)
from classifiers.line_junitary import associated_H_line, lyapunov_residuals
from errors import ClassificationError, InputError
from realization.gr_node import constant_node, expand


def test_e1_is_inner(e1, J1x1):
    result = is_J_inner_line(e1, J1x1)
    assert result.holds
    assert result.details == {'j_unitary': True, 'inner': True}


def test_associated_e1_is_unitary_but_not_inner(e1inv, J1x1):
    result = is_J_inner_line(e1inv, J1x1)
    assert not result.holds
    assert result.details['j_unitary'] is True
    assert result.H.negative_squares == [1]


def test_shift_is_not_line_inner(shift, J1x1):
    result = is_J_inner_line(shift, J1x1)
    assert not result.holds
    assert result.details['j_unitary'] is False


def test_blaschke_product_is_disk_inner(blaschke_product, J1x1):
    assert is_J_inner_disk(blaschke_product, J1x1).holds


def test_balance_line(example3, J1x1):
    H = associated_H_line(example3, J1x1)
    balanced = balance(example3, H, J1x1, 'line')
    assert max(lyapunov_residuals(balanced, np.eye(2), J1x1).values()) <= 1e-9
    assert expand(balanced, 5).max_abs_diff(expand(example3, 5)) < 1e-10
    assert_allclose(associated_H_line(balanced, J1x1).matrix, np.eye(2), atol=1e-9)


def test_balance_circle_gives_unitary_colligation(blaschke, J1x1):
    balanced = balance(blaschke, associated_H_circle(blaschke, J1x1), J1x1, 'circle')
    check = unitary_node_check(balanced)
    assert check['unitary']
    assert check['residual'] <= 1e-12
    assert not unitary_node_check(blaschke)['unitary']


def test_balance_needs_positive_H(e1inv, J1x1):
    with pytest.raises(ClassificationError):
        balance(e1inv, associated_H_line(e1inv, J1x1))


def test_balance_unknown_case(e1, J1x1):
    with pytest.raises(InputError):
        balance(e1, associated_H_line(e1, J1x1), J1x1, 'strip')


@pytest.mark.parametrize('name', ['blaschke', 'blaschke_product'])
def test_schur_agler_sample(name, request, J1x1):
    node = request.getfixturevalue(name)
    check = schur_agler_sample(node, 4, 100, seed=5)
    assert check.samples + check.skipped == 100
    assert check.max_residual <= 1 + 1e-8


def test_balanced_disk_inner_is_schur_agler(blaschke_product, J1x1):
    H = associated_H_circle(blaschke_product, J1x1)
    balanced = balance(blaschke_product, H, J1x1, 'circle')
    assert schur_agler_sample(balanced, 4, 100, seed=9).max_residual <= 1 + 1e-8


def test_schur_agler_sample_detects_large_constant():
    node = constant_node([[2.0]], 2)
    assert schur_agler_sample(node, 2, 10, seed=0).max_residual == pytest.approx(2.0)


def test_schur_agler_sample_on_truncated_series(blaschke):
    f = expand(blaschke, 40)
    assert schur_agler_sample(f, 2, 20, seed=1).max_residual <= 1 + 1e-6


def test_schur_agler_sample_rejects_other_types():
    with pytest.raises(InputError):
        schur_agler_sample([[1.0]], 2, 4, seed=0)


def test_halfplane_contractivity(e2, e1inv, J1x1):
    assert halfplane_contractivity_sample(e2, J1x1, [1, 2], 16, seed=2).max_residual >= -1e-10
    assert halfplane_contractivity_sample(e1inv, J1x1, [1, 2], 16, seed=2).max_residual < 0


def test_disk_contractivity(blaschke_product, J1x1):
    check = disk_contractivity_sample(blaschke_product, J1x1, [1, 2, 3], 16, seed=4)
    assert check.samples == 48
    assert check.max_residual >= -1e-10
