import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import InputError, NotMinimalError
from linalg_utils import block_diag
from realization.gr_node import GRNode, apply_similarity, direct_sum, expand
from realization.reduction import reduce_to_minimal
from realization.sampling import (contraction_tuple, obs_kernel_sample, sizes_up_to,
                                  skew_hermitian_tuple, unitary_tuple)
from realization.similarity import similarity_between
from realization.truncated import is_minimal


def test_padded_e1_reduces_to_e1(padded_e1, e1):
    reduced = reduce_to_minimal(padded_e1)
    assert reduced.node.dims == (1,)
    assert expand(reduced.node, 8).max_abs_diff(expand(e1, 8)) < 1e-12
    assert is_minimal(reduced.node)


def test_reduce_drops_cancelling_sum(e2):
    # F + (-F) 的极小实现是常数零
    negated = GRNode(2, e2.dims, e2.A, e2.B, -e2.C, -e2.D)
    reduced = reduce_to_minimal(direct_sum(e2, negated)).node
    assert reduced.dims == (0, 0)
    assert_allclose(reduced.D, [[0]], atol=1e-14)


def test_reduce_keeps_minimal_node(example1):
    reduced = reduce_to_minimal(example1).node
    assert reduced.dims == example1.dims
    assert expand(reduced, 6).max_abs_diff(expand(example1, 6)) < 1e-12


def test_similarity_recovers_block_transform(rng, example3):
    T0 = [np.array([[1 + 2j]]), np.array([[-0.5]])]
    moved = apply_similarity(example3, T0)
    T = similarity_between(moved, example3)
    assert_allclose(T, block_diag(T0), atol=1e-9)


def test_similarity_rejects_different_series(e2, example1):
    with pytest.raises(InputError):
        similarity_between(e2, example1)


def test_similarity_needs_minimal_nodes(padded_e1):
    with pytest.raises(NotMinimalError):
        similarity_between(padded_e1, padded_e1)


def test_obs_kernel_sample(e2, padded_e1):
    assert obs_kernel_sample(e2, 1, 2, 8, seed=1).shape == (2, 0)
    basis = obs_kernel_sample(padded_e1, 1, 2, 8, seed=1)
    assert basis.shape == (4, 2)


def test_sample_families(rng):
    for Z in (skew_hermitian_tuple(rng, 2, 3), unitary_tuple(rng, 2, 3), contraction_tuple(rng, 2, 3)):
        assert len(Z) == 2 and Z[0].shape == (3, 3)
    S = skew_hermitian_tuple(rng, 1, 3)[0]
    assert_allclose(S, -S.conj().T, atol=1e-14)
    U = unitary_tuple(rng, 1, 1)[0]
    assert_allclose(U @ U.conj().T, np.eye(1), atol=1e-14)
    W = contraction_tuple(rng, 1, 4)[0]
    assert np.linalg.norm(W, 2) < 1
    assert sizes_up_to(3, 7) == [1, 2, 3, 1, 2, 3, 1]
