"""
极小 J-酉分解（线情形与单位圆情形）
F = F1·F2 由 A-不变且关于 H 非退化的子空间族 M 决定
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

import config
from classifiers.circle_junitary import associated_H_circle, resolvent_parameter
from classifiers.line_junitary import associated_H_line, check_square_signature, d_junitary_residual
from classifiers.structured_hermitian import StructuredHermitian
from errors import ClassificationError, InputError, NumericalError
from factorization.projections import project_factors
from factorization.subspaces import (SubspaceFamily, h_orthogonal_complement, is_block_A_invariant,
                                     is_nondegenerate, supporting_projection)
from linalg_utils import block_diag, inv_checked
from realization.gr_node import GRNode, expand, product, restrict
from realization.reduction import reduce_to_minimal
from realization.similarity import expansion_check_degree

logger = logging.getLogger(__name__)


@dataclass
class FactorizationResult:
    """F = first·second 及两个因子的相伴矩阵"""

    case: str
    first: GRNode
    second: GRNode
    H_first: StructuredHermitian
    H_second: StructuredHermitian
    residuals: Dict[str, float] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def factors(self) -> Tuple[GRNode, GRNode]:
        return self.first, self.second

    def to_dict(self) -> Dict[str, Any]:
        return {'case': self.case,
                'dims': [list(self.first.dims), list(self.second.dims)],
                'nu': [self.H_first.negative_squares, self.H_second.negative_squares],
                **self.details}


def _prepare(node: GRNode, H: StructuredHermitian,
             M: SubspaceFamily) -> Tuple[SubspaceFamily, np.ndarray]:
    """检查 M 的不变性与非退化性，返回 (M^[⊥], Π)"""
    if not is_block_A_invariant(node, M):
        raise InputError('子空间族不是 A 分块不变的')
    if not is_nondegenerate(M, H.blocks):
        raise InputError('子空间族关于 H 退化（某个 M_k* H_k M_k 不可逆）')
    Mperp = h_orthogonal_complement(M, H.blocks)
    return Mperp, supporting_projection(M, Mperp)


def _verify(node: GRNode, first: GRNode, second: GRNode, H: StructuredHermitian,
            H1: StructuredHermitian, H2: StructuredHermitian) -> Tuple[Dict[str, float], Dict]:
    degree = max(expansion_check_degree(node), 1)
    f = expand(node, degree)
    scale = max([1.0] + [float(np.linalg.norm(m)) for _, m in f.items()])
    residuals = {'product_expansion': f.max_abs_diff(expand(product(first, second), degree)) / scale}
    gamma = [list(reduce_to_minimal(x).node.dims) for x in (node, first, second)]
    minimal = all(g == a + b for g, a, b in zip(gamma[0], gamma[1], gamma[2]))
    nu = [H.negative_squares, H1.negative_squares, H2.negative_squares]
    nu_adds = all(n == a + b for n, a, b in zip(*nu))
    if residuals['product_expansion'] > config.RES_TOL:
        raise NumericalError(f'因子乘积与原级数不一致（残差 {residuals["product_expansion"]:.3e}）')
    details = {'minimal': minimal, 'nu_adds': nu_adds, 'gamma': gamma}
    if not minimal:
        raise ClassificationError(f'分解不是极小的: γ={gamma}', residuals, {**details, 'nu': nu})
    if not nu_adds:
        raise ClassificationError(f'负平方数不可加: ν={nu}', residuals, {**details, 'nu': nu})
    return residuals, details


def minimal_junitary_factorize_line(node: GRNode, J, M: SubspaceFamily,
                                    D_split: Optional[Sequence] = None,
                                    H: Optional[StructuredHermitian] = None) -> FactorizationResult:
    """
    线情形极小 J-酉分解

    F1 = D1 + C(I-ΔA)^{-1}Δ(I-Π)BD2^{-1}，F2 = D2 + D1^{-1}CΠ(I-ΔA)^{-1}ΔB，
    其中 ker Π = M，ran Π = M^[⊥]

    Args:
        node: 极小的线情形 J-酉节点
        J: 签名矩阵
        M: A 分块不变、关于 H 非退化的子空间族
        D_split: (D1, D2)，默认 (D, I)
        H: 相伴矩阵，None 时重新计算

    Raises:
        InputError: M 不变性或非退化性不成立，或 D 的分解不是 J-酉的
        ClassificationError: 节点不是线情形 J-酉的，或分解不极小、ν 不可加
        NumericalError: 因子乘积与原级数不一致
    """
    J = check_square_signature(node, J)
    if H is None:
        H = associated_H_line(node, J)
    D1, D2 = (node.D, np.eye(node.q)) if D_split is None else D_split
    D1 = np.atleast_2d(np.asarray(D1, dtype=complex))
    D2 = np.atleast_2d(np.asarray(D2, dtype=complex))
    for name, Dx in (('D1', D1), ('D2', D2)):
        if Dx.shape != J.shape or d_junitary_residual(Dx, J) > config.RES_TOL:
            raise InputError(f'{name} 不是 J-酉的')
    _, Pi = _prepare(node, H, M)
    first, second = project_factors(node, Pi, D1, D2)
    H1 = associated_H_line(first, J)
    H2 = associated_H_line(second, J)
    residuals, details = _verify(node, first, second, H, H1, H2)
    logger.info(f'线情形极小 J-酉分解: dims {list(first.dims)} + {list(second.dims)}')
    return FactorizationResult('line', first, second, H1, H2, residuals, details)


def circle_split(node: GRNode, H: StructuredHermitian, J: np.ndarray, M: SubspaceFamily,
                 a: Optional[complex] = None) -> Tuple[np.ndarray, np.ndarray, complex]:
    """
    D1 = I - C1 H1^{-1}(I - aA1*)^{-1}C1* J，D2 = D1^{-1}D；
    (C1, A1, H1) 是节点在 M 的标准正交基上的限制

    Returns:
        (D1, D2, a)
    """
    Q = M.orthonormal().bases
    part = restrict(node, Q, Q)
    H1 = _restricted_H(H, Q)
    a = resolvent_parameter(part.A, a)
    m = part.r
    q = node.q
    if m == 0:
        D1 = np.eye(q, dtype=complex)
    else:
        D1 = np.eye(q) - part.C @ inv_checked(H1, 'H1') \
            @ inv_checked(np.eye(m) - a * part.A.conj().T, 'I - aA1*') @ part.C.conj().T @ J
    D2 = inv_checked(D1, 'D1') @ node.D
    logger.info(f'单位圆情形 D 分解参数 a={a:.6f}')
    return D1, D2, a


def _restricted_H(H: StructuredHermitian, Q: Sequence[np.ndarray]) -> np.ndarray:
    return block_diag([Qk.conj().T @ Hk @ Qk for Qk, Hk in zip(Q, H.blocks)])


def minimal_junitary_factorize_circle(node: GRNode, J, M: SubspaceFamily,
                                      a: Optional[complex] = None,
                                      H: Optional[StructuredHermitian] = None) -> FactorizationResult:
    """
    单位圆情形极小 J-酉分解，D1 由限制数据 (C1, A1, H1) 和单模参数 a ∉ σ(A1) 给出

    Raises:
        InputError: M 不变性或非退化性不成立，|a| ≠ 1
        SingularMatrixError: D 或 I - aA1* 奇异
        ClassificationError: 节点不是单位圆情形 J-酉的，或分解不极小、ν 不可加
        NumericalError: 因子乘积与原级数不一致
    """
    J = check_square_signature(node, J)
    if H is None:
        H = associated_H_circle(node, J)
    inv_checked(node.D, 'D')
    M = M.orthonormal()
    _, Pi = _prepare(node, H, M)
    D1, D2, a = circle_split(node, H, J, M, a)
    first, second = project_factors(node, Pi, D1, D2)
    H1 = associated_H_circle(first, J)
    H2 = associated_H_circle(second, J)
    residuals, details = _verify(node, first, second, H, H1, H2)
    details['a'] = a
    logger.info(f'单位圆情形极小 J-酉分解: dims {list(first.dims)} + {list(second.dims)}')
    return FactorizationResult('circle', first, second, H1, H2, residuals, details)
