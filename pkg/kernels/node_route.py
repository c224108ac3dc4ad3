"""
由极小实现与相伴矩阵 H 计算核：K_{w,w'} = (C♭A)^{wg_k} H_k^{-1} (A*♯C*)^{g_kw'^T}
"""
import logging
from typing import Optional

from classifiers.structured_hermitian import StructuredHermitian
from errors import InputError
from kernels.base_kernel_route import BaseKernelRoute, KernelInputs
from kernels.kernel_table import KernelTable
from linalg_utils import inv_checked
from realization.gr_node import GRNode, adjoint
from realization.truncated import obs_rows

logger = logging.getLogger(__name__)


def kernel_from_node(node: GRNode, H: StructuredHermitian, k: int, degree: int,
                     col_degree: Optional[int] = None, adjoint_kernel: bool = False) -> KernelTable:
    """
    节点路线

    Args:
        node: 极小节点
        H: 相伴结构化 Hermite 矩阵
        k: 分量（1 起始）
        degree: 行字长上限
        col_degree: 列字长上限，默认与 degree 相同
        adjoint_kernel: True 时计算 F* 的核 (B*♭A*)^{wg_k} H_k (A♯B)^{g_kw'^T}

    Raises:
        InputError: 分量越界或 H 的分块与节点不一致
        SingularMatrixError: H_k 奇异
    """
    if list(H.dims) != list(node.dims):
        raise InputError(f'H 的分块 {H.dims} 与节点 dims {list(node.dims)} 不一致')
    col_degree = degree if col_degree is None else col_degree
    source = adjoint(node) if adjoint_kernel else node
    H_k = H.blocks[k - 1]
    middle = H_k if adjoint_kernel else inv_checked(H_k, f'H_{k}')
    rows = dict(obs_rows(source, k, max(degree, col_degree)))
    entries = {}
    for w, X in rows.items():
        if len(w) > degree:
            continue
        left = X @ middle
        for w2, X2 in rows.items():
            if len(w2) <= col_degree:
                entries[(w, w2)] = left @ X2.conj().T
    logger.debug(f'节点路线核 k={k}: {len(entries)} 个系数（adjoint={adjoint_kernel}）')
    return KernelTable(k, node.n_vars, source.p, degree, col_degree, entries)


class NodeKernelRoute(BaseKernelRoute):
    """需要 node 与 H"""

    name = 'node'

    def compute(self, inputs: KernelInputs, k: int, row_degree: int,
                col_degree: int) -> KernelTable:
        self.require(inputs, 'node', 'H')
        return kernel_from_node(inputs.node, inputs.H, k, row_degree, col_degree)
