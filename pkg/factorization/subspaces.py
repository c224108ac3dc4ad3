"""
按分量给出的子空间族 M = ⊕ M_k，及其 H-正交补与支撑投影
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

import config
from errors import InputError, SingularMatrixError
from io_formats import decode_matrix, encode_matrix
from linalg_utils import (as_complex_matrix, block_diag, ensure_invertible, null_basis,
                          numerical_rank, orth_basis)
from realization.gr_node import GRNode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubspaceFamily:
    """每个分量一个列满秩的基矩阵 M_k（r_k x m_k）"""

    bases: Tuple[np.ndarray, ...]

    def __post_init__(self):
        bases = []
        for k, M in enumerate(self.bases, 1):
            M = np.asarray(M, dtype=complex)
            if M.ndim != 2:
                raise InputError(f'M_{k} 必须是二维矩阵')
            if M.shape[1] > M.shape[0]:
                raise InputError(f'M_{k} 的列数 {M.shape[1]} 超过分量维数 {M.shape[0]}')
            if M.shape[1] and numerical_rank(M) != M.shape[1]:
                raise InputError(f'M_{k} 不是列满秩的')
            bases.append(M)
        object.__setattr__(self, 'bases', tuple(bases))

    @classmethod
    def zero(cls, dims: Sequence[int]) -> 'SubspaceFamily':
        return cls(tuple(np.zeros((d, 0), dtype=complex) for d in dims))

    @classmethod
    def full(cls, dims: Sequence[int]) -> 'SubspaceFamily':
        return cls(tuple(np.eye(d, dtype=complex) for d in dims))

    @classmethod
    def spanned_by(cls, vectors: Sequence[np.ndarray]) -> 'SubspaceFamily':
        """M_k = span(给定列)，零向量给出零子空间"""
        bases = []
        for v in vectors:
            v = np.asarray(v, dtype=complex)
            if v.shape[0] == 0:
                bases.append(np.zeros((0, 0), dtype=complex))
                continue
            bases.append(orth_basis(v.reshape(v.shape[0], -1)))
        return cls(tuple(bases))

    @property
    def dims(self) -> List[int]:
        return [M.shape[0] for M in self.bases]

    @property
    def ranks(self) -> List[int]:
        return [M.shape[1] for M in self.bases]

    @property
    def matrix(self) -> np.ndarray:
        """分块对角 r x m 矩阵"""
        return block_diag(self.bases)

    def is_zero(self) -> bool:
        return sum(self.ranks) == 0

    def is_full(self) -> bool:
        return self.ranks == self.dims

    def is_trivial(self) -> bool:
        return self.is_zero() or self.is_full()

    def orthonormal(self) -> 'SubspaceFamily':
        return SubspaceFamily(tuple(orth_basis(M) if M.shape[1] else M for M in self.bases))

    def projectors(self) -> List[np.ndarray]:
        """每个分量到 M_k 的正交投影"""
        return [M @ np.linalg.pinv(M) if M.shape[1] else np.zeros((M.shape[0],) * 2, dtype=complex)
                for M in self.bases]

    def same_as(self, other: 'SubspaceFamily', tol: float = 1e-8) -> bool:
        if self.ranks != other.ranks or self.dims != other.dims:
            return False
        return all(np.linalg.norm(P - Q) <= tol for P, Q in zip(self.projectors(), other.projectors()))

    def to_dict(self) -> Dict[str, Any]:
        return {'bases': [encode_matrix(M) if M.size else [[] for _ in range(M.shape[0])]
                          for M in self.bases]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], dims: Sequence[int]) -> 'SubspaceFamily':
        """
        解析 {"bases": [M_1, …, M_N]}

        Raises:
            InputError: 分量个数或行数与 dims 不一致
        """
        try:
            raw = data['bases']
        except (KeyError, TypeError) as e:
            raise InputError('子空间族文件缺少 "bases" 字段') from e
        if len(raw) != len(dims):
            raise InputError(f'子空间族应有 {len(dims)} 个分量，实际为 {len(raw)}')
        bases = []
        for k, (item, d) in enumerate(zip(raw, dims), 1):
            if isinstance(item, list) and all(isinstance(row, list) and not row for row in item):
                bases.append(np.zeros((d, 0), dtype=complex))
                continue
            bases.append(decode_matrix(item, rows=d, name=f'M_{k}'))
        return cls(tuple(bases))


def check_family_for(node: GRNode, M: SubspaceFamily) -> None:
    if M.dims != list(node.dims):
        raise InputError(f'子空间族的分量维数 {M.dims} 与节点 dims {list(node.dims)} 不一致')


def is_block_A_invariant(node: GRNode, M: SubspaceFamily) -> bool:
    """A_{kj} col(M_j) ⊆ col(M_k) 对所有 k, j 成立"""
    check_family_for(node, M)
    if node.r == 0:
        return True
    P = block_diag(M.projectors())
    image = node.A @ M.matrix
    residual = float(np.linalg.norm(image - P @ image)) if image.size else 0.0
    scale = max(1.0, float(np.linalg.norm(node.A)))
    logger.debug(f'块 A-不变性残差: {residual:.3e}（秩 {M.ranks}）')
    return residual <= config.INVARIANCE_TOL * scale


def h_orthogonal_complement(M: SubspaceFamily, H_blocks: Sequence[np.ndarray]) -> SubspaceFamily:
    """M^{[⊥]}_k = ker(M_k* H_k)"""
    if len(H_blocks) != len(M.bases):
        raise InputError('H 的分块个数与子空间族不一致')
    return SubspaceFamily(tuple(null_basis(Mk.conj().T @ Hk) if Mk.shape[1]
                                else np.eye(Mk.shape[0], dtype=complex)
                                for Mk, Hk in zip(M.bases, H_blocks)))


def is_nondegenerate(M: SubspaceFamily, H_blocks: Sequence[np.ndarray]) -> bool:
    """每个 M_k* H_k M_k 可逆"""
    for k, (Mk, Hk) in enumerate(zip(M.bases, H_blocks), 1):
        if not Mk.shape[1]:
            continue
        try:
            ensure_invertible(Mk.conj().T @ Hk @ Mk, f'M_{k}* H_{k} M_{k}')
        except SingularMatrixError:
            logger.info(f'子空间族在分量 {k} 上关于 H 退化')
            return False
    return True


def basis_change(M: SubspaceFamily, Mperp: SubspaceFamily) -> List[np.ndarray]:
    """
    S_k = [M_k | Mperp_k]

    Raises:
        InputError: S_k 不是可逆方阵（两者不构成直和分解）
    """
    out = []
    for k, (Mk, Nk) in enumerate(zip(M.bases, Mperp.bases), 1):
        S = np.hstack([Mk, Nk])
        if S.shape[0] != S.shape[1]:
            raise InputError(f'分量 {k}: dim M_k + dim M_k^[⊥] = {S.shape[1]} ≠ {S.shape[0]}')
        try:
            ensure_invertible(S, f'[M_{k} | M_{k}^[⊥]]')
        except SingularMatrixError as e:
            raise InputError(f'分量 {k}: M_k 与其补空间不构成直和（子空间退化）') from e
        out.append(S)
    return out


def supporting_projection(M: SubspaceFamily, Mperp: SubspaceFamily) -> np.ndarray:
    """
    ker Π_k = M_k，ran Π_k = Mperp_k 的分块对角投影 Π_k = [0 | Mperp_k] S_k^{-1}

    Raises:
        InputError: 两者不构成直和分解
    """
    blocks = []
    for S, Mk, Nk in zip(basis_change(M, Mperp), M.bases, Mperp.bases):
        if S.size == 0:
            blocks.append(S)
            continue
        blocks.append(np.hstack([np.zeros_like(Mk), Nk]) @ np.linalg.inv(S))
    return block_diag(blocks)


def kernel_and_range(Pi: np.ndarray, dims: Sequence[int]) -> Tuple[SubspaceFamily, SubspaceFamily]:
    """
    把分块对角投影 Π 拆回 (ker Π, ran Π)

    Raises:
        InputError: Π 不是分块对角的幂等矩阵
    """
    r = sum(dims)
    Pi = as_complex_matrix(Pi, r, r, name='Π')
    if np.linalg.norm(Pi @ Pi - Pi) > config.RES_TOL * max(1.0, float(np.linalg.norm(Pi))):
        raise InputError('Π 不是幂等矩阵')
    kernels, ranges = [], []
    start = 0
    for d in dims:
        block = Pi[start:start + d, start:start + d]
        off = Pi[start:start + d, :].copy()
        off[:, start:start + d] = 0
        if np.linalg.norm(off) > config.RES_TOL:
            raise InputError('Π 必须是分块对角的')
        kernels.append(null_basis(block, rtol=config.INVARIANCE_TOL) if d else block)
        ranges.append(orth_basis(block, rtol=config.INVARIANCE_TOL) if d else block)
        start += d
    return SubspaceFamily(tuple(kernels)), SubspaceFamily(tuple(ranges))
