"""
结构化 Hermite 矩阵 H = diag(H_1, …, H_N)
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

import config
from errors import ClassificationError
from linalg_utils import block_diag, component_slices, is_hermitian, split_blocks

logger = logging.getLogger(__name__)


@dataclass
class StructuredHermitian:
    """分块对角 Hermite 矩阵，附带计算它时得到的残差"""

    blocks: List[np.ndarray]
    residuals: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_matrix(cls, H: np.ndarray, dims: Sequence[int],
                    residuals: Dict[str, float] = None) -> 'StructuredHermitian':
        """
        从整块矩阵构造；不对称程度在 HERMITIAN_RTOL 内时对称化

        Raises:
            ClassificationError: H 明显不是 Hermite 的，或非对角块不为零
        """
        H = np.asarray(H, dtype=complex)
        residuals = dict(residuals or {})
        off = H - block_diag(split_blocks(H, dims))
        scale = max(1.0, float(np.linalg.norm(H)))
        if np.linalg.norm(off) > config.HERMITIAN_RTOL * scale:
            residuals['block_structure'] = float(np.linalg.norm(off)) / scale
            raise ClassificationError('H 不是分块对角的', residuals)
        asym = float(np.linalg.norm(H - H.conj().T)) / scale if H.size else 0.0
        residuals['hermitian'] = asym
        if not is_hermitian(H, config.HERMITIAN_RTOL):
            raise ClassificationError(f'H 不是 Hermite 的（相对不对称度 {asym:.3e}）', residuals)
        H = (H + H.conj().T) / 2
        return cls(split_blocks(H, dims), residuals)

    @property
    def dims(self) -> List[int]:
        return [b.shape[0] for b in self.blocks]

    @property
    def matrix(self) -> np.ndarray:
        return block_diag(self.blocks)

    def block_eigenvalues(self) -> List[np.ndarray]:
        return [sla.eigvalsh(b) if b.size else np.zeros(0) for b in self.blocks]

    @property
    def signature(self) -> List[Tuple[int, int]]:
        """每块的 (正特征值个数, 负特征值个数)"""
        out = []
        for eigs in self.block_eigenvalues():
            tol = _eig_tol(eigs)
            out.append((int(np.sum(eigs > tol)), int(np.sum(eigs < -tol))))
        return out

    @property
    def negative_squares(self) -> List[int]:
        return [neg for _, neg in self.signature]

    def is_invertible(self) -> bool:
        for eigs in self.block_eigenvalues():
            if eigs.size and np.min(np.abs(eigs)) <= _eig_tol(eigs):
                return False
        return True

    def is_positive(self) -> bool:
        """λ_min(H_k) > PD_RTOL · λ_max(|H_k|)"""
        for eigs in self.block_eigenvalues():
            if not eigs.size:
                continue
            bound = config.PD_RTOL * float(np.max(np.abs(eigs)))
            if eigs.min() <= bound:
                if abs(eigs.min()) <= bound:
                    logger.warning(f'H 块在容差边缘（最小特征值 {eigs.min():.3e}），按不定处理')
                return False
        return True

    def inverse(self) -> np.ndarray:
        return block_diag([np.linalg.inv(b) if b.size else b for b in self.blocks])

    def congruence(self, T: np.ndarray) -> 'StructuredHermitian':
        """T* H T，T 分块对角"""
        slices = component_slices(self.dims)
        return StructuredHermitian([T[s, s].conj().T @ b @ T[s, s]
                                    for s, b in zip(slices, self.blocks)])

    def to_dict(self) -> Dict:
        return {'blocks': self.blocks, 'signature': [list(s) for s in self.signature],
                'nu': self.negative_squares, 'H': self.matrix}


def _eig_tol(eigs: np.ndarray) -> float:
    if not eigs.size:
        return 0.0
    rtol = config.RANK_TOL if config.RANK_TOL is not None else eigs.size * np.finfo(float).eps
    return max(float(rtol) * float(np.max(np.abs(eigs))), 1e-300)


def negative_squares(H: StructuredHermitian) -> List[int]:
    """ν_k = H_k 的负特征值个数"""
    return H.negative_squares


def h_transfer_check(H1: StructuredHermitian, H2: StructuredHermitian,
                     T: np.ndarray) -> Dict[str, float]:
    """
    检查两个实现的 H 满足 H¹ = T* H² T 且签名相同

    Returns:
        {'congruence': 相对残差, 'same_signature': 1.0 或 0.0}
    """
    moved = H2.congruence(T).matrix
    scale = max(1.0, float(np.linalg.norm(H1.matrix)))
    residual = float(np.linalg.norm(H1.matrix - moved)) / scale if moved.size else 0.0
    same = H1.signature == H2.signature
    logger.debug(f'H 变换残差 {residual:.3e}，签名一致: {same}')
    return {'congruence': residual, 'same_signature': 1.0 if same else 0.0}
