"""
分块对角 Hermite 子空间上的结构化 Lyapunov / Stein 求解
把未知 H 按实参数展开，解实线性最小二乘，取最小 Frobenius 范数解
"""
import logging
from typing import Callable, Dict, List, Sequence

import numpy as np
import scipy.linalg as sla

import config
from classifiers.structured_hermitian import StructuredHermitian
from errors import ClassificationError, InputError
from linalg_utils import as_complex_matrix, offsets, relative_residual

logger = logging.getLogger(__name__)

# 每种模式的线性算子 L(X) 与方程 L(X) = rhs
EQUATIONS: Dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    'line': lambda A, X: A.conj().T @ X + X @ A,          # A*H + HA
    'line_dual': lambda A, X: A @ X + X @ A.conj().T,     # AG + GA*
    'stein': lambda A, X: X - A.conj().T @ X @ A,         # H - A*HA
    'stein_dual': lambda A, X: X - A @ X @ A.conj().T,    # G - AGA*
}


def hermitian_basis(dims: Sequence[int]) -> List[np.ndarray]:
    """分块对角 Hermite 矩阵空间的 Frobenius 标准正交实基"""
    r = sum(dims)
    off = offsets(dims)
    basis: List[np.ndarray] = []
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for k, d in enumerate(dims):
        base = off[k]
        for i in range(d):
            e = np.zeros((r, r), dtype=complex)
            e[base + i, base + i] = 1.0
            basis.append(e)
            for j in range(i + 1, d):
                re = np.zeros((r, r), dtype=complex)
                re[base + i, base + j] = re[base + j, base + i] = inv_sqrt2
                im = np.zeros((r, r), dtype=complex)
                im[base + i, base + j] = 1j * inv_sqrt2
                im[base + j, base + i] = -1j * inv_sqrt2
                basis.extend([re, im])
    return basis


def _realify(m: np.ndarray) -> np.ndarray:
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


def solve_structured_hermitian(A, rhs, dims: Sequence[int], mode: str) -> StructuredHermitian:
    """
    在分块对角 Hermite 矩阵中求解 L(X) = rhs

    Args:
        A: r x r 矩阵
        rhs: r x r Hermite 右端项
        dims: 分量维数
        mode: 'line' | 'line_dual' | 'stein' | 'stein_dual'

    Returns:
        StructuredHermitian（最小范数解，已检查残差与可逆性）

    Raises:
        InputError: 模式未知或形状不合法
        ClassificationError: 无解或最小范数解不可逆
    """
    equation = EQUATIONS.get(mode)
    if equation is None:
        raise InputError(f'未知的方程类型: {mode}')
    r = sum(dims)
    A = as_complex_matrix(A, r, r, name='A')
    rhs = as_complex_matrix(rhs, r, r, name='右端项')
    if r == 0:
        return StructuredHermitian([np.zeros((0, 0), dtype=complex) for _ in dims])

    basis = hermitian_basis(dims)
    system = np.column_stack([_realify(equation(A, E)) for E in basis])
    solution, _, rank, _ = sla.lstsq(system, _realify(rhs))
    X = sum(x * E for x, E in zip(solution, basis))
    residual = relative_residual(equation(A, X) - rhs, rhs, A.conj().T @ X)
    nullity = len(basis) - rank
    logger.debug(f'结构化方程 {mode}: 未知数 {len(basis)}，秩 {rank}，残差 {residual:.3e}')
    if nullity:
        logger.info(f'结构化方程 {mode} 的解空间维数为 {nullity}，取最小范数解')

    residuals = {f'{mode}_equation': residual, f'{mode}_nullity': float(nullity)}
    if residual > config.RES_TOL:
        raise ClassificationError(f'结构化方程 {mode} 无解（最近解残差 {residual:.3e}）', residuals)
    H = StructuredHermitian.from_matrix(X, dims, residuals)
    if not H.is_invertible():
        raise ClassificationError(f'结构化方程 {mode} 的最小范数解不可逆', residuals)
    return H
