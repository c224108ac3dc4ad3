"""
后移算子 R_k 以及核空间对 R_k 的封闭性检查
"""
import logging
from typing import Optional

import numpy as np

from errors import InputError
from kernels.kernel_table import KernelTable
from kernels.series_route import kernel_from_series
from linalg_utils import check_signature_matrix, orth_basis, relative_residual
from series.fps import FpsTable
from series.words import enumerate_words

logger = logging.getLogger(__name__)


def backward_shift(f: FpsTable, k: int) -> FpsTable:
    """(R_k f)_w = f_{w g_k}，截断次数减 1"""
    if not 1 <= k <= f.n_vars:
        raise InputError(f'分量 {k} 超出范围 1..{f.n_vars}')
    if f.degree < 1:
        raise InputError('截断次数为 0 的级数无法后移')
    shifted = {w[:-1]: m for w, m in f.coeffs.items() if w and w[-1] == k}
    return FpsTable(f.n_vars, f.rows, f.cols, f.degree - 1, shifted)


def kernel_columns(K: KernelTable, row_degree: int) -> np.ndarray:
    """把 K_{·,w'} 的每一列（|w| <= row_degree）拼成矩阵"""
    rows = enumerate_words(K.n_vars, row_degree)
    return K.block_matrix(rows, K.col_words())


def shift_membership_residual(f: FpsTable, J, k: int, degree: Optional[int] = None) -> float:
    """
    R_k F(z)c 属于 K_k(F)：R_k F 的系数列到核列张成空间的相对距离

    Args:
        f: 截断级数
        J: 签名矩阵
        k: 分量
        degree: 核的行、列字长上限，默认 (deg f - 1) // 2
    """
    d = (f.degree - 1) // 2 if degree is None else degree
    K = kernel_from_series(f, J, k, d, d)
    basis = orth_basis(kernel_columns(K, d))
    shifted = np.vstack([f.coeff(w + (k,)) for w in enumerate_words(f.n_vars, d)])
    residual = relative_residual(shifted - basis @ (basis.conj().T @ shifted), shifted)
    logger.debug(f'R_{k}F ∈ K_{k}(F) 残差: {residual:.3e}')
    return residual


def shift_identity_residual(f: FpsTable, J, k: int, j: int, degree: int) -> float:
    """
    R_k K^{F,j}_{·,w} c = -R_k F J F_{wg_j}* c - K^{F,k}_{·,wg_j} c 在系数上的最大相对差

    需要 deg f >= 2·degree + 2
    """
    J = check_signature_matrix(J)
    K_j = kernel_from_series(f, J, j, degree + 1, degree)
    K_k = kernel_from_series(f, J, k, degree, degree + 1)
    scale = max([1.0] + [float(np.linalg.norm(m)) for m in K_j.entries.values()])
    worst = 0.0
    for w in enumerate_words(f.n_vars, degree):
        tail = f.coeff(w + (j,)).conj().T
        for x in enumerate_words(f.n_vars, degree):
            lhs = K_j.entry(x + (k,), w)
            rhs = -f.coeff(x + (k,)) @ J @ tail - K_k.entry(x, w + (j,))
            worst = max(worst, float(np.linalg.norm(lhs - rhs)) / scale)
    logger.debug(f'R_{k} K_{j} 平移恒等式残差: {worst:.3e}')
    return worst
