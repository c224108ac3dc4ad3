"""
线性代数辅助函数
基于 numpy / scipy.linalg 的数值秩、子空间基、结构分块与残差工具
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

import config
from errors import InputError, SingularMatrixError


def as_complex_matrix(value, rows: Optional[int] = None, cols: Optional[int] = None,
                      name: str = 'matrix') -> np.ndarray:
    """将输入转换为二维复矩阵，并可选地检查形状"""
    arr = np.asarray(value, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim == 1:
        if cols == 1:
            arr = arr.reshape(-1, 1)
        elif arr.size == 0 and rows is not None and cols is not None:
            arr = arr.reshape(rows, cols)
        else:
            arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InputError(f'{name} 必须是二维矩阵，实际维数 {arr.ndim}')
    if rows is not None and arr.shape[0] != rows:
        raise InputError(f'{name} 行数应为 {rows}，实际为 {arr.shape[0]}')
    if cols is not None and arr.shape[1] != cols:
        raise InputError(f'{name} 列数应为 {cols}，实际为 {arr.shape[1]}')
    return arr


def rank_rcond(shape: Tuple[int, int]) -> float:
    """秩判定的相对阈值：config.RANK_TOL 或 max(rows, cols) * eps"""
    if config.RANK_TOL is not None:
        return float(config.RANK_TOL)
    return max(shape) * np.finfo(float).eps if max(shape) > 0 else 0.0


def numerical_rank(matrix: np.ndarray, rtol: Optional[float] = None) -> int:
    """基于奇异值的数值秩，阈值相对于最大奇异值"""
    if matrix.size == 0:
        return 0
    s = sla.svdvals(matrix)
    if s[0] == 0.0:
        return 0
    rcond = rank_rcond(matrix.shape) if rtol is None else rtol
    return int(np.sum(s > rcond * s[0]))


def orth_basis(matrix: np.ndarray, rtol: Optional[float] = None) -> np.ndarray:
    """列空间的标准正交基（形状 rows x rank）"""
    rows = matrix.shape[0]
    if matrix.size == 0 or not np.any(matrix):
        return np.zeros((rows, 0), dtype=complex)
    rcond = rank_rcond(matrix.shape) if rtol is None else rtol
    return sla.orth(matrix, rcond=rcond).astype(complex)


def null_basis(matrix: np.ndarray, rtol: Optional[float] = None) -> np.ndarray:
    """零空间的标准正交基（形状 cols x nullity）"""
    cols = matrix.shape[1]
    if matrix.shape[0] == 0 or not np.any(matrix):
        return np.eye(cols, dtype=complex)
    if cols == 0:
        return np.zeros((0, 0), dtype=complex)
    rcond = rank_rcond(matrix.shape) if rtol is None else rtol
    return sla.null_space(matrix, rcond=rcond).astype(complex)


def offsets(dims: Sequence[int]) -> List[int]:
    """分量在状态空间中的起始下标，末尾附带总维数"""
    out = [0]
    for d in dims:
        out.append(out[-1] + int(d))
    return out


def component_slices(dims: Sequence[int]) -> List[slice]:
    """每个分量 C^{r_k} 对应的切片"""
    off = offsets(dims)
    return [slice(off[k], off[k + 1]) for k in range(len(dims))]


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """分块对角拼接，允许 0x0 块"""
    blocks = [np.asarray(b, dtype=complex) for b in blocks]
    if not blocks:
        return np.zeros((0, 0), dtype=complex)
    return np.asarray(sla.block_diag(*blocks), dtype=complex)


def split_blocks(matrix: np.ndarray, dims: Sequence[int]) -> List[np.ndarray]:
    """取出对角块 (M_kk)"""
    return [matrix[s, s] for s in component_slices(dims)]


def solve_checked(a: np.ndarray, b: np.ndarray, what: str = '矩阵') -> np.ndarray:
    """求解 a x = b，a 奇异时抛出 SingularMatrixError"""
    if a.shape[0] == 0:
        return np.zeros((0, b.shape[1]), dtype=complex)
    ensure_invertible(a, what)
    return sla.solve(a, b)


def inv_checked(a: np.ndarray, what: str = '矩阵') -> np.ndarray:
    """求逆，a 奇异时抛出 SingularMatrixError"""
    if a.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    ensure_invertible(a, what)
    return sla.inv(a)


def ensure_invertible(a: np.ndarray, what: str = '矩阵') -> None:
    """最小奇异值 < SINGULAR_RTOL * 最大奇异值 时视为奇异"""
    if a.shape[0] != a.shape[1]:
        raise InputError(f'{what} 不是方阵: {a.shape}')
    if a.shape[0] == 0:
        return
    s = sla.svdvals(a)
    if s[0] == 0.0 or s[-1] < config.SINGULAR_RTOL * s[0]:
        raise SingularMatrixError(f'{what} 奇异（条件数过大）')


def relative_residual(residual: np.ndarray, *scales: np.ndarray) -> float:
    """残差范数除以 max(1, 各参考矩阵范数)"""
    if residual.size == 0:
        return 0.0
    scale = 1.0
    for s in scales:
        if s is not None and np.size(s):
            scale = max(scale, float(np.linalg.norm(s)))
    return float(np.linalg.norm(residual)) / scale


def is_hermitian(matrix: np.ndarray, rtol: float) -> bool:
    if matrix.size == 0:
        return True
    return np.linalg.norm(matrix - matrix.conj().T) <= rtol * max(1.0, np.linalg.norm(matrix))


def hermitian_sqrt(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    正定 Hermite 矩阵的平方根及其逆（Hermite 特征分解）

    Returns:
        (H^{1/2}, H^{-1/2})
    """
    if matrix.size == 0:
        empty = np.zeros((0, 0), dtype=complex)
        return empty, empty
    w, v = sla.eigh((matrix + matrix.conj().T) / 2)
    if np.any(w <= 0):
        raise InputError('矩阵不是正定的，无法取平方根')
    root = (v * np.sqrt(w)) @ v.conj().T
    inv_root = (v / np.sqrt(w)) @ v.conj().T
    return root, inv_root


def check_signature_matrix(J: np.ndarray) -> np.ndarray:
    """
    检查签名矩阵 J = J* 且 J^2 = I

    Raises:
        InputError: 当 J 不是签名矩阵时
    """
    J = as_complex_matrix(J, name='J')
    if J.shape[0] != J.shape[1]:
        raise InputError(f'J 必须是方阵，实际形状 {J.shape}')
    eye = np.eye(J.shape[0])
    if np.linalg.norm(J - J.conj().T) > config.SIGNATURE_TOL * max(1, J.shape[0]) \
            or np.linalg.norm(J @ J - eye) > config.SIGNATURE_TOL * max(1, J.shape[0]):
        raise InputError('J 不是签名矩阵（需同时自伴且酉）')
    return J
