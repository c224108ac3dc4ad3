"""
Ā_k = A P_k 的公共特征向量，以及单位性必要条件诊断
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

import config
from linalg_utils import component_slices, null_basis

logger = logging.getLogger(__name__)


@dataclass
class JointEigen:
    """一组公共特征值 (λ_1, …, λ_N) 及其公共特征子空间的基"""

    eigenvalues: Tuple[complex, ...]
    vectors: np.ndarray


def component_projections(dims: Sequence[int]) -> List[np.ndarray]:
    """C^r 到分量 C^{r_k} 的正交投影 P_k"""
    r = sum(dims)
    out = []
    for s in component_slices(dims):
        P = np.zeros((r, r), dtype=complex)
        P[s, s] = np.eye(s.stop - s.start)
        out.append(P)
    return out


def _distinct(values: np.ndarray) -> List[complex]:
    out: List[complex] = []
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    for v in values:
        if all(abs(v - u) > 1e-8 * scale for u in out):
            out.append(complex(v))
    return out


def joint_eigenvectors(A: np.ndarray, dims: Sequence[int]) -> List[JointEigen]:
    """
    枚举 {A P_k} 的公共特征向量

    对每个特征值组合求 ∩_k ker(A P_k - λ_k I)，非空即记录。

    Args:
        A: r x r 矩阵
        dims: 分量维数

    Returns:
        JointEigen 列表
    """
    if sum(dims) == 0:
        return []
    maps = [A @ P for P in component_projections(dims)]
    spectra = [_distinct(sla.eigvals(m)) for m in maps]
    eye = np.eye(A.shape[0])
    found: List[JointEigen] = []
    for lambdas in itertools.product(*spectra):
        stacked = np.vstack([m - lam * eye for m, lam in zip(maps, lambdas)])
        basis = null_basis(stacked, rtol=max(config.INVARIANCE_TOL, 1e-8))
        if basis.shape[1]:
            found.append(JointEigen(tuple(lambdas), basis))
    logger.debug(f'公共特征向量: {[(e.eigenvalues, e.vectors.shape[1]) for e in found]}')
    return found


def unitary_diagnostics(A: np.ndarray, H_blocks: Sequence[np.ndarray], dims: Sequence[int],
                        case: str = 'line') -> Dict:
    """
    矩阵酉性的必要条件：每个公共特征向量 x 都存在 j 使
    λ_j 不在边界上（line: Re λ_j ≠ 0；circle: |λ_j| ≠ 1）且 [P_j x, P_j x]_{H_j} ≠ 0

    Returns:
        {'eigen': [...], 'violation': bool}
    """
    slices = component_slices(dims)
    report = []
    violation = False
    for entry in joint_eigenvectors(A, dims):
        for col in range(entry.vectors.shape[1]):
            x = entry.vectors[:, col]
            witnesses = []
            for j, (lam, s) in enumerate(zip(entry.eigenvalues, slices)):
                xj = x[s]
                form = complex(xj.conj() @ H_blocks[j] @ xj) if xj.size else 0j
                off_boundary = abs(lam.real) > 1e-9 if case == 'line' else abs(abs(lam) - 1) > 1e-9
                if off_boundary and abs(form) > 1e-9:
                    witnesses.append(j + 1)
            holds = bool(witnesses)
            violation = violation or not holds
            report.append({'eigenvalues': list(entry.eigenvalues), 'vector': x,
                           'witnesses': witnesses, 'condition_holds': holds})
    if violation:
        logger.warning(f'公共特征值诊断（{case}）发现与矩阵酉性矛盾的公共特征向量')
    return {'eigen': report, 'violation': violation}
