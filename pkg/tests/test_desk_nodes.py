import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import InputError
from main import load_input
from realization.desk_nodes import DESK_BUILDERS, resolve_signature
from realization.gr_node import expand
from resource_path import list_desk_nodes


def test_every_shipped_file_has_a_builder():
    assert sorted(DESK_BUILDERS) == list_desk_nodes()


@pytest.mark.parametrize('name', sorted(DESK_BUILDERS))
def test_shipped_file_matches_builder(name):
    loaded = load_input(f'desk:{name}')
    built = DESK_BUILDERS[name]()
    assert loaded.node.dims == built.dims
    assert expand(loaded.node, 4).max_abs_diff(expand(built, 4)) <= 1e-12
    if loaded.file_J is not None:
        assert_allclose(loaded.file_J, np.eye(loaded.node.q))


def test_load_input_missing_file():
    with pytest.raises(InputError):
        load_input('desk:no_such_node')


def test_load_input_rejects_non_object(tmp_path):
    path = tmp_path / 'list.json'
    path.write_text(json.dumps([1, 2]))
    with pytest.raises(InputError):
        load_input(str(path))


def test_resolve_signature_order(tmp_path):
    file_J = -np.eye(1, dtype=complex)
    assert_allclose(resolve_signature(1, None), np.eye(1))
    assert_allclose(resolve_signature(1, file_J), file_J)
    path = tmp_path / 'j.json'
    path.write_text(json.dumps({'J': [[[1.0, 0.0]]]}))
    assert_allclose(resolve_signature(1, file_J, str(path)), np.eye(1))
