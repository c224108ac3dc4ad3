"""
矩阵自伴有理级数（虚轴与单位圆两种情形）
全部通过 J₁-嵌入 F = [[I, iΦ], [0, I]] 转化为 J₁-酉问题求 H，直接条件只作残差检查
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

import config
from classifiers.base_classifier import BaseClassifier, ClassificationResult
from classifiers.circle_junitary import associated_H_circle
from classifiers.line_junitary import SampleCheck, associated_H_line
from classifiers.structured_hermitian import StructuredHermitian
from errors import ClassificationError, InputError, NumericalError
from factorization.projections import decompose_in_basis
from factorization.subspaces import (SubspaceFamily, h_orthogonal_complement, is_block_A_invariant,
                                     is_nondegenerate)
from linalg_utils import block_diag, is_hermitian, relative_residual
from realization.gr_node import GRNode, eval_closed, expand
from realization.sampling import epsilon_for, map_samples, skew_hermitian_tuple, unitary_tuple
from realization.similarity import expansion_check_degree

logger = logging.getLogger(__name__)


def J1(q: int) -> np.ndarray:
    """[[0, I_q], [I_q, 0]]"""
    eye = np.eye(q, dtype=complex)
    zero = np.zeros((q, q), dtype=complex)
    return np.block([[zero, eye], [eye, zero]])


def embed_J1(node: GRNode) -> GRNode:
    """
    β = (A, [0 B], [iC; 0], [[I, iD], [0, I]])，实现 [[I, iΦ], [0, I]]

    Raises:
        InputError: p ≠ q
    """
    if node.p != node.q:
        raise InputError(f'自伴性要求 p = q，实际 p={node.p}, q={node.q}')
    q, r = node.q, node.r
    eye = np.eye(q, dtype=complex)
    zero = np.zeros((q, q), dtype=complex)
    B = np.hstack([np.zeros((r, q), dtype=complex), node.B])
    C = np.vstack([1j * node.C, np.zeros((q, r), dtype=complex)])
    D = np.block([[eye, 1j * node.D], [zero, eye]])
    return GRNode(node.n_vars, node.dims, node.A, B, C, D)


def embedding_identity_residual(node: GRNode, Z, Zp) -> float:
    """J₁⊗I - F(Z)(J₁⊗I)F(Z')* 与 [[(Φ(Z)-Φ(Z')*)/i, 0], [0, 0]] 的相对差"""
    n = np.shape(Z[0])[0]
    m = node.q * n
    JI = np.kron(J1(node.q), np.eye(n))
    beta = embed_J1(node)
    lhs = JI - eval_closed(beta, Z) @ JI @ eval_closed(beta, Zp).conj().T
    phi_gap = (eval_closed(node, Z) - eval_closed(node, Zp).conj().T) / 1j
    rhs = np.zeros((2 * m, 2 * m), dtype=complex)
    rhs[:m, :m] = phi_gap
    return relative_residual(lhs - rhs, lhs, JI)


def line_selfadjoint_residuals(node: GRNode, H: np.ndarray) -> Dict[str, float]:
    """A*H + HA = 0，C = iB*H，D = D*"""
    A, B, C, D = node.A, node.B, node.C, node.D
    return {
        'skew_lyapunov': relative_residual(A.conj().T @ H + H @ A, A.conj().T @ H),
        'c_selfadjoint': relative_residual(C - 1j * B.conj().T @ H, C),
        'd_hermitian': relative_residual(D - D.conj().T, D),
    }


def circle_selfadjoint_residuals(node: GRNode, H: np.ndarray) -> Dict[str, float]:
    """A*HA = H，D - D* = iB*HB，C = iB*HA"""
    A, B, C, D = node.A, node.B, node.C, node.D
    return {
        'stein_isometry': relative_residual(A.conj().T @ H @ A - H, H),
        'd_defect': relative_residual(D - D.conj().T - 1j * B.conj().T @ H @ B, D),
        'c_selfadjoint': relative_residual(C - 1j * B.conj().T @ H @ A, C),
    }


def _checked(case: str, node: GRNode, H: StructuredHermitian,
             residuals: Dict[str, float]) -> ClassificationResult:
    H.residuals.update(residuals)
    worst = max(residuals.values()) if residuals else 0.0
    if worst > config.RES_TOL:
        raise ClassificationError(f'自伴条件残差过大（{worst:.3e}）', H.residuals)
    logger.info(f'{case}: 矩阵自伴, H 签名 {H.signature}')
    return ClassificationResult(case, True, H=H, residuals=dict(H.residuals),
                                details={'selfadjoint': True})


def is_matrix_selfadjoint_line(node: GRNode) -> ClassificationResult:
    """
    反 Hermite 元组上 Φ(Z) = Φ(Z)*：D Hermite 且 embed_J1(node) 是 J₁-酉的

    Raises:
        NotMinimalError: 节点不是极小的
    """
    classifier = SelfadjointLineClassifier()
    beta = embed_J1(node)
    if not is_hermitian(node.D, config.HERMITIAN_CHECK_RTOL):
        return classifier.negative(ClassificationError('D 不是 Hermite 的'), selfadjoint=False)
    try:
        H = associated_H_line(beta, J1(node.q))
        return _checked('sa-line', node, H, line_selfadjoint_residuals(node, H.matrix))
    except ClassificationError as e:
        logger.info(f'不是虚轴情形矩阵自伴的: {e}')
        return classifier.negative(e, selfadjoint=False)


def is_matrix_selfadjoint_circle(node: GRNode) -> ClassificationResult:
    """
    酉元组上 Φ(W) = Φ(W)*：embed_J1(node) 在单位圆情形是 J₁-酉的

    Raises:
        NotMinimalError: 节点不是极小的
    """
    classifier = SelfadjointCircleClassifier()
    beta = embed_J1(node)
    try:
        H = associated_H_circle(beta, J1(node.q))
        return _checked('sa-circle', node, H, circle_selfadjoint_residuals(node, H.matrix))
    except ClassificationError as e:
        logger.info(f'不是单位圆情形矩阵自伴的: {e}')
        return classifier.negative(e, selfadjoint=False)


def selfadjoint_sample_check(node: GRNode, case: str, n: int, samples: int, seed: int) -> SampleCheck:
    """max ‖Φ(Z) - Φ(Z)*‖，line 取反 Hermite 元组，circle 取酉元组"""
    rng = np.random.default_rng(seed)
    if case == 'line':
        radius = config.SAMPLE_SCALE * epsilon_for(node)
        tuples = [skew_hermitian_tuple(rng, node.n_vars, n, radius) for _ in range(samples)]
    elif case == 'circle':
        tuples = [unitary_tuple(rng, node.n_vars, n) for _ in range(samples)]
    else:
        raise InputError(f'未知的自伴情形: {case}')

    def _defect(Z):
        value = eval_closed(node, Z)
        return float(np.linalg.norm(value - value.conj().T, 2))

    values, skipped = map_samples(_defect, tuples)
    worst = max(values) if values else 0.0
    logger.info(f'自伴采样（{case}）: 样本 {len(values)}, 跳过 {skipped}, 最大残差 {worst:.3e}')
    return SampleCheck(worst, len(values), skipped, values)


# ---------------------------------------------------------------------- 加法分解

@dataclass
class AdditiveDecomposition:
    """Φ = first + second，两部分都是矩阵自伴的"""

    case: str
    first: GRNode
    second: GRNode
    H_first: StructuredHermitian
    H_second: StructuredHermitian
    residuals: Dict[str, float] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'case': self.case,
                'dims': [list(self.first.dims), list(self.second.dims)],
                'nu': [self.H_first.negative_squares, self.H_second.negative_squares],
                **self.details}


def _split_parts(node: GRNode, H: StructuredHermitian, M: SubspaceFamily):
    if not is_block_A_invariant(node, M):
        raise InputError('子空间族不是 A 分块不变的')
    if not is_nondegenerate(M, H.blocks):
        raise InputError('子空间族关于 H 退化（某个 M_k* H_k M_k 不可逆）')
    Mperp = h_orthogonal_complement(M, H.blocks)
    coords = decompose_in_basis(node, M, Mperp)
    scale = max(1.0, float(np.linalg.norm(node.A)))
    off = max(coords.lower_block_residual(scale),
              float(np.linalg.norm(coords.A12)) / scale if coords.A12.size else 0.0)
    if off > config.RES_TOL:
        raise InputError(f'M^[⊥] 不是 A 分块不变的（非对角块 {off:.3e}）')
    return coords


def _finish(case: str, node: GRNode, H: StructuredHermitian, first: GRNode,
            second: GRNode) -> AdditiveDecomposition:
    check = is_matrix_selfadjoint_line if case == 'sa-line' else is_matrix_selfadjoint_circle
    results = [check(first), check(second)]
    for label, result in zip(('first', 'second'), results):
        if not result.holds:
            raise ClassificationError(f'分解的{label}部分不是矩阵自伴的: {result.reason}',
                                      result.residuals)
    degree = max(expansion_check_degree(node), 1)
    f = expand(node, degree)
    scale = max([1.0] + [float(np.linalg.norm(m)) for _, m in f.items()])
    total = expand(first, degree).add(expand(second, degree))
    residuals = {'sum_expansion': f.max_abs_diff(total) / scale}
    if residuals['sum_expansion'] > config.RES_TOL:
        raise NumericalError(f'两部分之和与原级数不一致（残差 {residuals["sum_expansion"]:.3e}）')
    H1, H2 = results[0].H, results[1].H
    nu = [H.negative_squares, H1.negative_squares, H2.negative_squares]
    nu_adds = all(n == a + b for n, a, b in zip(*nu))
    if not nu_adds:
        raise ClassificationError(f'负平方数不可加: ν={nu}', residuals, {'nu_adds': False, 'nu': nu})
    logger.info(f'{case} 加法分解: dims {list(first.dims)} + {list(second.dims)}, ν {nu}')
    return AdditiveDecomposition(case, first, second, H1, H2, residuals,
                                 {'nu_adds': nu_adds, 'D1': first.D, 'D2': second.D})


def selfadjoint_decompose(node: GRNode, H: StructuredHermitian, M: SubspaceFamily,
                          D_split: Optional[Sequence] = None) -> AdditiveDecomposition:
    """
    虚轴情形的极小加法分解

    Φ1 = D1 + C(I-ΔA)^{-1}Δ(I-Π)B，Φ2 = D2 + CΠ(I-ΔA)^{-1}ΔB，ker Π = M，ran Π = M^[⊥]

    Args:
        node: 极小的矩阵自伴节点
        H: 相伴矩阵
        M: A 分块不变、关于 H 非退化的子空间族
        D_split: (D1, D2)，D1 + D2 = D 且都是 Hermite 的；默认 (D, 0)

    Raises:
        InputError: M 退化或不变性不成立，D 的拆分不合法
        ClassificationError: 某一部分不是矩阵自伴的，或 ν 不可加
        NumericalError: 两部分之和与原级数不一致
    """
    if D_split is None:
        D_split = (node.D, np.zeros_like(node.D))
    D1, D2 = (np.atleast_2d(np.asarray(x, dtype=complex)) for x in D_split)
    if D1.shape != node.D.shape or D2.shape != node.D.shape \
            or relative_residual(D1 + D2 - node.D, node.D) > config.RES_TOL:
        raise InputError('D1 + D2 ≠ D')
    if not (is_hermitian(D1, config.HERMITIAN_CHECK_RTOL)
            and is_hermitian(D2, config.HERMITIAN_CHECK_RTOL)):
        raise InputError('D1、D2 必须是 Hermite 的')
    coords = _split_parts(node, H, M)
    n = node.n_vars
    first = GRNode(n, coords.dims1, coords.A11, coords.B1, coords.C1, D1)
    second = GRNode(n, coords.dims2, coords.A22, coords.B2, coords.C2, D2)
    return _finish('sa-line', node, H, first, second)


def circle_selfadjoint_decompose(node: GRNode, H: StructuredHermitian, M: SubspaceFamily,
                                 S=None) -> AdditiveDecomposition:
    """
    单位圆情形的极小加法分解，D1 = (i/2)B1*H^{(1)}B1 + S，D2 = D - D1

    B1 取 (I-Π)B 在 M 基下的坐标，H^{(1)} = M*HM

    Args:
        S: Hermite 自由参数，默认 0
    """
    if S is None:
        S = np.zeros_like(node.D)
    S = np.atleast_2d(np.asarray(S, dtype=complex))
    if S.shape != node.D.shape or not is_hermitian(S, config.HERMITIAN_CHECK_RTOL):
        raise InputError('S 必须是与 D 同形的 Hermite 矩阵')
    coords = _split_parts(node, H, M)
    H1 = block_diag([Mk.conj().T @ Hk @ Mk for Mk, Hk in zip(M.bases, H.blocks)])
    D1 = 0.5j * coords.B1.conj().T @ H1 @ coords.B1 + S
    D2 = node.D - D1
    n = node.n_vars
    first = GRNode(n, coords.dims1, coords.A11, coords.B1, coords.C1, D1)
    second = GRNode(n, coords.dims2, coords.A22, coords.B2, coords.C2, D2)
    return _finish('sa-circle', node, H, first, second)


class SelfadjointLineClassifier(BaseClassifier):
    """虚轴情形矩阵自伴分类器（J 不使用，J₁ 在内部构造）"""

    case = 'sa-line'

    def classify(self, node: GRNode, J: np.ndarray) -> ClassificationResult:
        return is_matrix_selfadjoint_line(node)


class SelfadjointCircleClassifier(BaseClassifier):
    """单位圆情形矩阵自伴分类器"""

    case = 'sa-circle'

    def classify(self, node: GRNode, J: np.ndarray) -> ClassificationResult:
        return is_matrix_selfadjoint_circle(node)
