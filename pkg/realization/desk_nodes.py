"""
内置示例节点与节点文件加载
desk_nodes/*.json 与这里的构造函数一一对应
"""
import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from io_formats import decode_matrix, read_json
from linalg_utils import check_signature_matrix
from realization.gr_node import GRNode, associated, node_from_dict, place_in_variable, product
from resource_path import resolve_input_path

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)


def e1_node() -> GRNode:
    """(1+z)^{-1}(z-1)"""
    return GRNode(1, (1,), [[-1]], [[SQRT2]], [[SQRT2]], [[-1]])


def e1_inverse_node() -> GRNode:
    """(z-1)^{-1}(1+z)，即 associated(E1)"""
    return associated(e1_node())


def e2_node() -> GRNode:
    """(1+z1+z2)^{-1}(z1+z2-1)"""
    return GRNode(2, (1, 1), -np.ones((2, 2)), [[SQRT2], [SQRT2]], [[SQRT2, SQRT2]], [[-1]])


def shift_node() -> GRNode:
    """f(z) = z"""
    return GRNode(1, (1,), [[0]], [[1]], [[1]], [[0]])


def blaschke_node() -> GRNode:
    """(z - 1/2)(1 - z/2)^{-1}"""
    return GRNode(1, (1,), [[0.5]], [[0.75]], [[1]], [[-0.5]])


def sa_circle_node() -> GRNode:
    """单位圆上矩阵自伴的单变元节点，H = 2"""
    return GRNode(1, (1,), [[1]], [[1]], [[2j]], [[1j]])


def phi_sum_node() -> GRNode:
    """Φ = i(z1 + z2)"""
    return GRNode(2, (1, 1), np.zeros((2, 2)), [[1], [1]], [[1j, 1j]], [[0]])


def example1_node() -> GRNode:
    """(z1+1)^{-1}(z1-1)(z2+1)^{-1}(z2-1)"""
    return product(place_in_variable(e1_node(), 2, 1), place_in_variable(e1_node(), 2, 2))


def example3_node() -> GRNode:
    """((z2+i)(z1+1)+1)^{-1}((z2+i)(z1-1)+1)，H = 2I"""
    a = -0.5 - 0.5j
    return GRNode(2, (1, 1), [[a, a], [a, -0.5 + 0.5j]], [[0.5 + 0.5j], [0.5 + 0.5j]],
                  [[1 + 1j, 1 + 1j]], [[-1j]])


def padded_e1_node() -> GRNode:
    """E1 加上一个不可达且不可观的状态"""
    return GRNode(1, (2,), np.diag([-1.0, 5.0]), [[SQRT2], [0]], [[SQRT2, 0]], [[-1]])


def blaschke_product_node() -> GRNode:
    """两个 Blaschke 因子分别放在变元 1 和 2 上的乘积"""
    return product(place_in_variable(blaschke_node(), 2, 1),
                   place_in_variable(blaschke_node(), 2, 2))


DESK_BUILDERS: Dict[str, Callable[[], GRNode]] = {
    'e1': e1_node,
    'e1inv': e1_inverse_node,
    'e2': e2_node,
    'shift': shift_node,
    'blaschke': blaschke_node,
    'sa_circle': sa_circle_node,
    'phi_sum': phi_sum_node,
    'example1': example1_node,
    'example3': example3_node,
    'padded_e1': padded_e1_node,
    'blaschke_product': blaschke_product_node,
}


def node_with_signature(data: Dict, source: str) -> Tuple[GRNode, Optional[np.ndarray]]:
    """
    解析已读入的节点文件内容

    Args:
        data: JSON 对象
        source: 输入名，仅用于日志

    Returns:
        (节点, 文件中的 J；没有时为 None)

    Raises:
        InputError: 格式不合法
    """
    node = node_from_dict(data)
    J = None
    if 'J' in data:
        J = check_signature_matrix(decode_matrix(data['J'], node.q, node.q, name='J'))
    logger.info(f'已加载节点 {source}: dims={list(node.dims)}, p={node.p}, q={node.q}')
    return node, J


def load_signature(path: str, size: int) -> np.ndarray:
    """读取签名矩阵文件：{"J": matrix} 或直接是矩阵"""
    data = read_json(resolve_input_path(path))
    raw = data['J'] if isinstance(data, dict) and 'J' in data else data
    return check_signature_matrix(decode_matrix(raw, size, size, name='J'))


def resolve_signature(size: int, file_J: Optional[np.ndarray],
                      j_path: Optional[str] = None) -> np.ndarray:
    """--j 文件优先，其次节点文件中的 J，否则单位阵"""
    if j_path:
        return load_signature(j_path, size)
    if file_J is not None:
        return file_J
    return np.eye(size, dtype=complex)
