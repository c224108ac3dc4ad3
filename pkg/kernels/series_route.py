"""
不依赖实现的核：K_{w,w'} = Σ_{vv'=w'} (-1)^{|v'|+1} F_{w g_k v'^T} J F_v*
"""
import logging
from typing import Optional

import numpy as np

from errors import InputError
from kernels.base_kernel_route import BaseKernelRoute, KernelInputs
from kernels.kernel_table import KernelTable
from linalg_utils import check_signature_matrix
from series.fps import FpsTable
from series.words import enumerate_words, transpose

logger = logging.getLogger(__name__)


def kernel_from_series(f: FpsTable, J, k: int, degree: int,
                       col_degree: Optional[int] = None) -> KernelTable:
    """
    级数路线

    Args:
        f: 截断级数，截断次数 >= degree + 1 + col_degree
        J: 签名矩阵
        k: 分量（1 起始）
        degree: 行字长上限
        col_degree: 列字长上限，默认与 degree 相同

    Raises:
        InputError: 截断次数不足或形状不匹配
    """
    col_degree = degree if col_degree is None else col_degree
    if not 1 <= k <= f.n_vars:
        raise InputError(f'分量 {k} 超出范围 1..{f.n_vars}')
    if degree + 1 + col_degree > f.degree:
        raise InputError(f'级数截断次数不足: 需要 {degree + 1 + col_degree}，实际为 {f.degree}')
    J = check_signature_matrix(J)
    if J.shape[0] != f.cols or f.rows != f.cols:
        raise InputError(f'J 的阶数 {J.shape[0]} 与级数形状 {f.shape} 不匹配')

    entries = {}
    for w in enumerate_words(f.n_vars, degree):
        head = w + (k,)
        for w2 in enumerate_words(f.n_vars, col_degree):
            total = np.zeros((f.rows, f.rows), dtype=complex)
            for cut in range(len(w2) + 1):
                v, v_tail = w2[:cut], w2[cut:]
                sign = -1.0 if len(v_tail) % 2 == 0 else 1.0
                total += sign * f.coeff(head + transpose(v_tail)) @ J @ f.coeff(v).conj().T
            entries[(w, w2)] = total
    logger.debug(f'级数路线核 k={k}: {len(entries)} 个系数')
    return KernelTable(k, f.n_vars, f.rows, degree, col_degree, entries)


class SeriesKernelRoute(BaseKernelRoute):
    """需要 f 与 J"""

    name = 'series'

    def compute(self, inputs: KernelInputs, k: int, row_degree: int,
                col_degree: int) -> KernelTable:
        self.require(inputs, 'f', 'J')
        return kernel_from_series(inputs.f, inputs.J, k, row_degree, col_degree)
