import numpy as np
import pytest
from numpy.testing import assert_allclose

from classifiers.circle_junitary import is_matrix_J_unitary_circle
from classifiers.line_junitary import associated_H_line, empty_hermitian, is_matrix_J_unitary_line
from classifiers.structured_hermitian import StructuredHermitian
from errors import ClassificationError, InputError, NumericalError
from factorization.factorize import (_verify, minimal_junitary_factorize_circle,
                                     minimal_junitary_factorize_line)
from factorization.invariant_search import coordinate_families, enumerate_invariant_families
from factorization.projections import is_supporting
from factorization.subspaces import (SubspaceFamily, h_orthogonal_complement,
                                     is_block_A_invariant, is_nondegenerate, kernel_and_range,
                                     supporting_projection)
from realization.gr_node import constant_node, expand, place_in_variable, product


@pytest.fixture
def first_variable():
    return SubspaceFamily((np.eye(1), np.zeros((1, 0))))


def test_first_factor_family_is_invariant(example1, first_variable):
    assert is_block_A_invariant(example1, first_variable)
    assert not is_block_A_invariant(example1, SubspaceFamily((np.zeros((1, 0)), np.eye(1))))


def test_example1_factorization(example1, e1, first_variable, J1x1):
    result = minimal_junitary_factorize_line(example1, J1x1, first_variable,
                                             D_split=([[-1]], [[-1]]))
    assert result.first.dims == (1, 0)
    assert result.second.dims == (0, 1)
    left = expand(place_in_variable(e1, 2, 1), 6)
    right = expand(place_in_variable(e1, 2, 2), 6)
    assert expand(result.first, 6).max_abs_diff(left) < 1e-10
    assert expand(result.second, 6).max_abs_diff(right) < 1e-10
    assert result.details['minimal']
    assert result.details['nu_adds']
    assert result.details['gamma'] == [[1, 1], [1, 0], [0, 1]]
    assert result.residuals['product_expansion'] <= 1e-10
    for factor in result.factors:
        assert is_matrix_J_unitary_line(factor, J1x1).holds


def test_default_D_split_moves_sign_into_factors(example1, e1, first_variable, J1x1):
    result = minimal_junitary_factorize_line(example1, J1x1, first_variable)
    assert_allclose(result.second.D, [[1]])
    left = expand(place_in_variable(e1, 2, 1), 6).scale(-1)
    assert expand(result.first, 6).max_abs_diff(left) < 1e-10
    assert expand(product(result.first, result.second), 6).max_abs_diff(expand(example1, 6)) < 1e-10


def test_factorization_rejects_bad_inputs(example1, first_variable, J1x1):
    with pytest.raises(InputError):
        minimal_junitary_factorize_line(example1, J1x1,
                                        SubspaceFamily((np.zeros((1, 0)), np.eye(1))))
    with pytest.raises(InputError):
        minimal_junitary_factorize_line(example1, J1x1, first_variable, D_split=([[2]], [[0.5]]))


def test_trivial_family_gives_trivial_factor(example1, J1x1):
    result = minimal_junitary_factorize_line(example1, J1x1, SubspaceFamily.full(example1.dims))
    assert result.second.dims == (0, 0)
    assert result.first.dims == (1, 1)


def test_circle_factorization(blaschke_product, blaschke, first_variable, J1x1):
    result = minimal_junitary_factorize_circle(blaschke_product, J1x1, first_variable, a=1)
    assert_allclose(result.first.D, [[-0.5]], atol=1e-12)
    assert_allclose(result.second.D, [[-0.5]], atol=1e-12)
    assert expand(result.first, 6).max_abs_diff(expand(place_in_variable(blaschke, 2, 1), 6)) < 1e-10
    assert expand(result.second, 6).max_abs_diff(expand(place_in_variable(blaschke, 2, 2), 6)) < 1e-10
    assert result.details['minimal'] and result.details['nu_adds']
    assert result.details['a'] == 1
    for factor in result.factors:
        assert is_matrix_J_unitary_circle(factor, J1x1).holds


def test_supporting_projection(example1, first_variable, J1x1):
    H = associated_H_line(example1, J1x1)
    Mperp = h_orthogonal_complement(first_variable, H.blocks)
    assert Mperp.ranks == [0, 1]
    Pi = supporting_projection(first_variable, Mperp)
    assert_allclose(Pi @ Pi, Pi, atol=1e-12)
    assert is_supporting(example1, Pi)
    kernel, image = kernel_and_range(Pi, example1.dims)
    assert kernel.same_as(first_variable)
    assert image.same_as(Mperp)


def test_degenerate_family_is_detected():
    H_blocks = [np.array([[1, 0], [0, -1]], dtype=complex)]
    null = SubspaceFamily((np.array([[1], [1]], dtype=complex),))
    assert not is_nondegenerate(null, H_blocks)
    assert is_nondegenerate(SubspaceFamily((np.array([[1], [0]], dtype=complex),)), H_blocks)


def test_subspace_family_validation():
    with pytest.raises(InputError):
        SubspaceFamily((np.array([[1, 2], [2, 4]], dtype=complex),))
    with pytest.raises(InputError):
        SubspaceFamily((np.ones((1, 2)),))


def test_subspace_family_from_dict():
    M = SubspaceFamily.from_dict({'bases': [[[1], [0]], [[]]]}, [2, 1])
    assert M.ranks == [1, 0]
    assert M.dims == [2, 1]
    with pytest.raises(InputError):
        SubspaceFamily.from_dict({'bases': [[[1]]]}, [2, 1])
    with pytest.raises(InputError):
        SubspaceFamily.from_dict({}, [1])


def test_coordinate_families_count():
    assert len(coordinate_families([1, 2])) == 8


def test_invariant_search_on_example1(example1, J1x1):
    H = associated_H_line(example1, J1x1)
    found = enumerate_invariant_families(example1, H)
    ranks = [f.family.ranks for f in found]
    assert [1, 0] in ranks
    assert [0, 1] not in ranks
    nontrivial = [f for f in found if not f.trivial]
    assert all(f.nondegenerate for f in nontrivial)
    assert len(enumerate_invariant_families(example1, H, max_results=1)) == 1


def test_zero_family_gives_constant_first_factor(example1, J1x1):
    result = minimal_junitary_factorize_line(example1, J1x1, SubspaceFamily.zero(example1.dims))
    assert result.first.dims == (0, 0)
    assert result.second.dims == (1, 1)
    assert_allclose(result.first.D, example1.D, atol=1e-12)
    assert expand(product(result.first, result.second), 6).max_abs_diff(expand(example1, 6)) < 1e-10
    assert result.details['gamma'] == [[1, 1], [0, 0], [1, 1]]


@pytest.mark.parametrize('family', ['zero', 'full'])
def test_circle_trivial_families(family, blaschke_product, J1x1):
    M = getattr(SubspaceFamily, family)(blaschke_product.dims)
    result = minimal_junitary_factorize_circle(blaschke_product, J1x1, M, a=1)
    if family == 'zero':
        assert result.first.dims == (0, 0)
        assert result.second.dims == (1, 1)
        assert_allclose(result.first.D, np.eye(1), atol=1e-12)
    else:
        assert result.first.dims == (1, 1)
        assert result.second.dims == (0, 0)
        assert abs(abs(result.second.D[0, 0]) - 1.0) <= 1e-9
    f = expand(blaschke_product, 6)
    assert expand(product(result.first, result.second), 6).max_abs_diff(f) < 1e-10
    for factor in result.factors:
        assert is_matrix_J_unitary_circle(factor, J1x1).holds


def test_invariant_search_on_e1_is_trivial(e1, J1x1):
    found = enumerate_invariant_families(e1, associated_H_line(e1, J1x1))
    assert all(f.trivial for f in found)
    assert sorted(f.family.ranks for f in found) == [[0], [1]]


def test_verify_rejects_non_minimal_product(e1, e1inv, J1x1):
    one = constant_node([[1]], 1)
    with pytest.raises(ClassificationError) as info:
        _verify(one, e1, e1inv, empty_hermitian((0,)),
                associated_H_line(e1, J1x1), associated_H_line(e1inv, J1x1))
    assert info.value.details['gamma'] == [[0], [1], [1]]
    assert not info.value.details['minimal']
    assert info.value.residuals['product_expansion'] <= 1e-10


def test_verify_rejects_non_additive_negative_squares(e1, J1x1):
    H = associated_H_line(e1, J1x1)
    wrong = StructuredHermitian.from_matrix(np.array([[-1.0]]), (1,))
    with pytest.raises(ClassificationError) as info:
        _verify(e1, e1, constant_node([[1]], 1), H, wrong, empty_hermitian((0,)))
    assert info.value.details['nu'] == [[0], [1], [0]]
    assert not info.value.details['nu_adds']


def test_verify_rejects_wrong_product(example1, e1, J1x1):
    H = associated_H_line(example1, J1x1)
    left = place_in_variable(e1, 2, 1)
    H_left = associated_H_line(left, J1x1)
    with pytest.raises(NumericalError):
        _verify(example1, left, left, H, H_left, H_left)
