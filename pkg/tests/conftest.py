import numpy as np
import pytest

from classifiers.line_junitary import complete_from_CA
from realization import desk_nodes
from realization.gr_node import place_in_variable, product

SIGNATURE_2 = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def e1():
    return desk_nodes.e1_node()


@pytest.fixture
def e1inv():
    return desk_nodes.e1_inverse_node()


@pytest.fixture
def e2():
    return desk_nodes.e2_node()


@pytest.fixture
def shift():
    return desk_nodes.shift_node()


@pytest.fixture
def blaschke():
    return desk_nodes.blaschke_node()


@pytest.fixture
def blaschke_product():
    return desk_nodes.blaschke_product_node()


@pytest.fixture
def example1():
    return desk_nodes.example1_node()


@pytest.fixture
def example3():
    return desk_nodes.example3_node()


@pytest.fixture
def padded_e1():
    return desk_nodes.padded_e1_node()


@pytest.fixture
def sa_circle():
    return desk_nodes.sa_circle_node()


@pytest.fixture
def phi_sum():
    return desk_nodes.phi_sum_node()


@pytest.fixture
def J1x1():
    return np.eye(1, dtype=complex)


@pytest.fixture
def J2():
    return SIGNATURE_2.copy()


@pytest.fixture
def random_junitary():
    """
    种子 -> 两个单状态 J-酉节点（J = diag(1, -1)）分别放在变元 1、2 上的乘积

    第一个因子 |C_1| > |C_2|，H > 0；第二个相反，H < 0，所以 ν = [0, 1]
    """
    def build(seed):
        rng = np.random.default_rng(seed)
        factors = []
        for k, (big, small) in enumerate(((0, 1), (1, 0)), 1):
            a = -1.0 + 0.2 * (rng.standard_normal() + 1j * rng.standard_normal())
            phases = np.exp(2j * np.pi * rng.random(2))
            C = np.zeros((2, 1), dtype=complex)
            C[big, 0] = 2.0 * phases[0]
            C[small, 0] = 0.5 * phases[1]
            node, _ = complete_from_CA(C, [[a]], (1,), SIGNATURE_2)
            factors.append(place_in_variable(node, 2, k))
        return product(*factors)
    return build
