"""
在基 [M_k | Mperp_k] 下的节点坐标、支撑投影判定与投影因子
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

import config
from errors import InputError
from factorization.subspaces import (SubspaceFamily, basis_change, check_family_for,
                                     is_block_A_invariant, kernel_and_range)
from linalg_utils import block_diag, inv_checked, offsets, relative_residual
from realization.gr_node import GRNode, associated

logger = logging.getLogger(__name__)


@dataclass
class BasisCoordinates:
    """
    节点在 [M | Mperp] 坐标下的分块，下标 1 对应 M，2 对应 Mperp

    状态按分量重新分组：第一部分为 (m_1, …, m_N)，第二部分为 (r_1-m_1, …, r_N-m_N)
    """

    dims1: Tuple[int, ...]
    dims2: Tuple[int, ...]
    A11: np.ndarray
    A12: np.ndarray
    A21: np.ndarray
    A22: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    C1: np.ndarray
    C2: np.ndarray

    def lower_block_residual(self, scale: float = 1.0) -> float:
        """‖Ã21‖ 的相对大小，M 不变时为 0"""
        if self.A21.size == 0:
            return 0.0
        return float(np.linalg.norm(self.A21)) / max(1.0, scale)


def _split_indices(ranks: List[int], dims: List[int]) -> Tuple[np.ndarray, np.ndarray]:
    off = offsets(dims)
    first: List[int] = []
    second: List[int] = []
    for k, m in enumerate(ranks):
        first.extend(range(off[k], off[k] + m))
        second.extend(range(off[k] + m, off[k + 1]))
    return np.asarray(first, dtype=int), np.asarray(second, dtype=int)


def decompose_in_basis(node: GRNode, M: SubspaceFamily, Mperp: SubspaceFamily) -> BasisCoordinates:
    """
    S = diag([M_k | Mperp_k])，Ã = S^{-1}AS，B̃ = S^{-1}B，C̃ = CS，再按 M / Mperp 重新分组

    Raises:
        InputError: 两个子空间族不构成直和分解
    """
    check_family_for(node, M)
    check_family_for(node, Mperp)
    S = block_diag(basis_change(M, Mperp))
    if node.r:
        S_inv = np.linalg.inv(S)
        A, B, C = S_inv @ node.A @ S, S_inv @ node.B, node.C @ S
    else:
        A, B, C = node.A, node.B, node.C
    i1, i2 = _split_indices(M.ranks, list(node.dims))
    return BasisCoordinates(
        dims1=tuple(M.ranks), dims2=tuple(Mperp.ranks),
        A11=A[np.ix_(i1, i1)], A12=A[np.ix_(i1, i2)],
        A21=A[np.ix_(i2, i1)], A22=A[np.ix_(i2, i2)],
        B1=B[i1, :], B2=B[i2, :], C1=C[:, i1], C2=C[:, i2])


def is_supporting(node: GRNode, Pi: np.ndarray) -> bool:
    """ker Π 关于 A 分块不变且 ran Π 关于 A× 分块不变"""
    kernel, image = kernel_and_range(Pi, node.dims)
    holds = is_block_A_invariant(node, kernel) and is_block_A_invariant(associated(node), image)
    logger.debug(f'支撑投影判定: {holds}（ker 秩 {kernel.ranks}, ran 秩 {image.ranks}）')
    return holds


def project_factors(node: GRNode, Pi: np.ndarray, D1, D2) -> Tuple[GRNode, GRNode]:
    """
    由支撑投影 Π 和 D = D1·D2 得到 F = F1·F2

    F1 = D1 + C(I-ΔA)^{-1}Δ(I-Π)BD2^{-1}，F2 = D2 + D1^{-1}CΠ(I-ΔA)^{-1}ΔB；
    在 ker Π ⊕ ran Π 坐标下即 F1 = (Ã11, B̃1 D2^{-1}, C̃1, D1)，F2 = (Ã22, B̃2, D1^{-1}C̃2, D2)

    Args:
        node: GR 节点（D 可逆）
        Pi: 分块对角投影
        D1: 左因子的常数项
        D2: 右因子的常数项

    Returns:
        (F1, F2)，dims 分别为 dim ker Π_k 与 dim ran Π_k

    Raises:
        InputError: D1·D2 ≠ D 或 Π 不是支撑投影
        SingularMatrixError: D1、D2 或 D 奇异
    """
    D1 = np.atleast_2d(np.asarray(D1, dtype=complex))
    D2 = np.atleast_2d(np.asarray(D2, dtype=complex))
    if D1.shape[0] != node.p or D2.shape[1] != node.q or D1.shape[1] != D2.shape[0]:
        raise InputError(f'D 的分解形状不匹配: {D1.shape} x {D2.shape} vs {node.D.shape}')
    split_residual = relative_residual(D1 @ D2 - node.D, node.D)
    if split_residual > config.RES_TOL:
        raise InputError(f'D1·D2 ≠ D（残差 {split_residual:.3e}）')
    D_inv = inv_checked(node.D, 'D')
    D1_inv = inv_checked(D1, 'D1')
    D2_inv = inv_checked(D2, 'D2')

    kernel, image = kernel_and_range(Pi, node.dims)
    coords = decompose_in_basis(node, kernel, image)
    scale = max(1.0, float(np.linalg.norm(node.A)))
    lower = coords.lower_block_residual(scale)
    cross = relative_residual(coords.A12 - coords.B1 @ D_inv @ coords.C2, coords.A12)
    logger.debug(f'支撑投影残差: Ã21 {lower:.3e}, Ã12 - B̃1D^{{-1}}C̃2 {cross:.3e}')
    if lower > config.RES_TOL or cross > config.RES_TOL:
        raise InputError(f'Π 不是支撑投影（Ã21 残差 {lower:.3e}，A× 残差 {cross:.3e}）')

    n = node.n_vars
    first = GRNode(n, coords.dims1, coords.A11, coords.B1 @ D2_inv, coords.C1, D1)
    second = GRNode(n, coords.dims2, coords.A22, coords.B2, D1_inv @ coords.C2, D2)
    logger.info(f'投影因子: dims {list(coords.dims1)} + {list(coords.dims2)}')
    return first, second
