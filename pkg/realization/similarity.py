"""
两个极小实现之间的唯一分块对角相似变换
"""
import logging
from typing import List

import numpy as np

import config
from errors import InputError, NotMinimalError, NumericalError, SingularMatrixError
from linalg_utils import block_diag, ensure_invertible, relative_residual
from realization.gr_node import GRNode, expand
from realization.truncated import minimality_report, truncated_obs

logger = logging.getLogger(__name__)


def expansion_check_degree(node: GRNode) -> int:
    """比较两组传递级数时使用的次数：min(p·r + r·q, 2r + 1)"""
    return min(node.p * node.r + node.r * node.q, 2 * node.r + 1)


def similarity_between(node1: GRNode, node2: GRNode) -> np.ndarray:
    """
    求分块对角 T 使 A¹ = T^{-1}A²T, B¹ = T^{-1}B², C¹ = C²T

    T_k = (Õ_k²)^+ Õ_k¹

    Args:
        node1: 第一个极小实现
        node2: 第二个极小实现

    Returns:
        r x r 分块对角矩阵 T

    Raises:
        InputError: 形状不一致或传递级数不同
        NotMinimalError: 任一节点不是极小的
        NumericalError: 相似变换奇异或不满足交织关系
    """
    if node1.n_vars != node2.n_vars or node1.dims != node2.dims \
            or node1.D.shape != node2.D.shape:
        raise InputError(f'两个节点的形状不一致: {node1.describe()} vs {node2.describe()}')
    for name, node in (('node1', node1), ('node2', node2)):
        if not minimality_report(node).minimal:
            raise NotMinimalError(f'{name} 不是极小实现')

    degree = expansion_check_degree(node1)
    f1 = expand(node1, degree)
    diff = f1.max_abs_diff(expand(node2, degree))
    scale = max([1.0] + [float(np.linalg.norm(m)) for _, m in f1.items()])
    if diff > config.RES_TOL * scale:
        raise InputError(f'两个节点的传递级数不同（次数 {degree} 内最大差 {diff:.3e}）')

    blocks: List[np.ndarray] = []
    for k in range(1, node1.n_vars + 1):
        O1 = truncated_obs(node1, k)
        O2 = truncated_obs(node2, k)
        T_k = np.linalg.pinv(O2) @ O1
        try:
            ensure_invertible(T_k, f'T_{k}')
        except SingularMatrixError as e:
            raise SingularMatrixError(f'相似变换第 {k} 块奇异') from e
        blocks.append(T_k)
    T = block_diag(blocks)

    residual = max(relative_residual(T @ node1.A - node2.A @ T, node2.A @ T),
                   relative_residual(T @ node1.B - node2.B, node2.B),
                   relative_residual(node1.C - node2.C @ T, node1.C))
    logger.debug(f'相似变换交织残差: {residual:.3e}')
    if residual > config.RES_TOL:
        raise NumericalError(f'相似变换不满足交织关系（残差 {residual:.3e}）')
    return T
