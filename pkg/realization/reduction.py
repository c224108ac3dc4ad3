"""
结构化极小化：先投影到可达子空间族，再商去不可观子空间族
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

import config
from errors import NumericalError
from linalg_utils import orth_basis, relative_residual
from realization.gr_node import GRNode, adjoint, restrict
from realization.truncated import truncated_ctrl, truncated_obs

logger = logging.getLogger(__name__)


@dataclass
class ReductionResult:
    """
    极小化结果

    Attributes:
        node: 极小节点
        bases: 每个分量的等距基 X_k（r_k x γ_k），node = (X* A X, X* B, C X, D)
    """

    node: GRNode
    bases: List[np.ndarray]


def _check_invariance(node: GRNode, bases: List[np.ndarray], what: str) -> None:
    """A_{kj} span(V_j) ⊆ span(V_k) 且 B_k ⊆ span(V_k)"""
    worst = 0.0
    for k in range(1, node.n_vars + 1):
        V_k = bases[k - 1]
        proj = np.eye(V_k.shape[0]) - V_k @ V_k.conj().T
        worst = max(worst, relative_residual(proj @ node.B_block(k), node.B))
        for j in range(1, node.n_vars + 1):
            worst = max(worst, relative_residual(proj @ node.A_block(k, j) @ bases[j - 1], node.A))
    logger.debug(f'{what} 不变性残差: {worst:.3e}')
    if worst > config.RES_TOL:
        raise NumericalError(f'{what} 不是 A 分块不变的（残差 {worst:.3e}）')


def reachable_stage(node: GRNode) -> ReductionResult:
    """投影到 C̃_k 的列空间"""
    bases = [orth_basis(truncated_ctrl(node, k)) for k in range(1, node.n_vars + 1)]
    _check_invariance(node, bases, '可达子空间族')
    return ReductionResult(restrict(node, bases, bases), bases)


def observable_stage(node: GRNode) -> ReductionResult:
    """商去 ker Õ_k：取 Õ_k 行空间的标准正交基"""
    bases = [orth_basis(truncated_obs(node, k).conj().T) for k in range(1, node.n_vars + 1)]
    # ker Õ 的不变性等价于其正交补关于 A* 不变
    _check_invariance(adjoint(node), bases, '不可观子空间族的正交补')
    return ReductionResult(restrict(node, bases, bases), bases)


def reduce_to_minimal(node: GRNode) -> ReductionResult:
    """
    把节点化为极小节点，传递级数不变

    Args:
        node: 任意 GR 节点

    Returns:
        ReductionResult，其中 bases[k] = Q_k V_k

    Raises:
        NumericalError: 数值上不变性检查失败
    """
    stage1 = reachable_stage(node)
    stage2 = observable_stage(stage1.node)
    bases = [Q @ V for Q, V in zip(stage1.bases, stage2.bases)]
    logger.info(f'极小化: dims {list(node.dims)} -> {list(stage2.node.dims)}')
    return ReductionResult(stage2.node, bases)
