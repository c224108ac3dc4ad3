"""
矩阵 J-内性（H 正定）、H = I 的平衡实现、Schur–Agler 压缩性采样
"""
import logging
from typing import Dict, Union

import numpy as np

import config
from classifiers.base_classifier import BaseClassifier, ClassificationResult
from classifiers.circle_junitary import associated_H_circle, stein_residuals
from classifiers.line_junitary import (SampleCheck, associated_H_line, check_square_signature,
                                       lyapunov_residuals)
from classifiers.structured_hermitian import StructuredHermitian
from errors import ClassificationError, InputError
from linalg_utils import block_diag, hermitian_sqrt, relative_residual
from realization.gr_node import GRNode, eval_closed
from realization.sampling import contraction_tuple, halfplane_tuple, map_samples, sizes_up_to
from series.fps import FpsTable

logger = logging.getLogger(__name__)


def _inner_result(case: str, H: StructuredHermitian) -> ClassificationResult:
    positive = H.is_positive()
    logger.info(f'{case}: H 正定 = {positive}, ν = {H.negative_squares}')
    reason = '' if positive else 'H 不是正定的'
    return ClassificationResult(case, positive, H=H, residuals=dict(H.residuals), reason=reason,
                                details={'j_unitary': True, 'inner': positive})


def is_J_inner_line(node: GRNode, J) -> ClassificationResult:
    """线情形矩阵 J-酉且每个 H_k 正定"""
    try:
        H = associated_H_line(node, J)
    except ClassificationError as e:
        return InnerLineClassifier().negative(e, j_unitary=False, inner=False)
    return _inner_result('inner-line', H)


def is_J_inner_disk(node: GRNode, J) -> ClassificationResult:
    """单位圆情形矩阵 J-酉且每个 H_k 正定"""
    try:
        H = associated_H_circle(node, J)
    except ClassificationError as e:
        return InnerDiskClassifier().negative(e, j_unitary=False, inner=False)
    return _inner_result('inner-disk', H)


def balance(node: GRNode, H: StructuredHermitian, J=None, case: str = 'line') -> GRNode:
    """
    用 H^{1/2} 做分块相似变换，得到相伴矩阵为 I 的实现

    Args:
        node: 极小节点
        H: 相伴结构化 Hermite 矩阵（正定）
        J: 签名矩阵，给出时检验平衡后的关系式
        case: 'line' 检验 A* + A = -C*JC, B = -C*JD；'circle' 检验联结矩阵 J-酉

    Raises:
        ClassificationError: H 不正定或平衡后关系式不成立
    """
    if not H.is_positive():
        raise ClassificationError('H 不是正定的，无法平衡', {'nu': float(sum(H.negative_squares))})
    if node.r == 0:
        return node
    roots = [hermitian_sqrt(b) for b in H.blocks]
    S = block_diag([root for root, _ in roots])
    S_inv = block_diag([inv_root for _, inv_root in roots])
    balanced = GRNode(node.n_vars, node.dims, S @ node.A @ S_inv, S @ node.B,
                      node.C @ S_inv, node.D)
    if J is not None:
        J = check_square_signature(node, J)
        eye = np.eye(node.r)
        if case == 'line':
            residuals = lyapunov_residuals(balanced, eye, J)
        elif case == 'circle':
            residuals = stein_residuals(balanced, eye, J)
        else:
            raise InputError(f'未知的平衡情形: {case}')
        worst = max(residuals.values())
        logger.debug(f'平衡后残差（{case}）: {worst:.3e}')
        if worst > config.RES_TOL:
            raise ClassificationError(f'平衡后的实现不满足 H = I 关系（残差 {worst:.3e}）', residuals)
    return balanced


def unitary_node_check(node: GRNode) -> Dict[str, Union[bool, float]]:
    """联结矩阵 [[A, B], [C, D]] 是否酉"""
    if node.p != node.q:
        raise InputError(f'酉节点检验需要 p = q，实际 p={node.p}, q={node.q}')
    M = node.colligation()
    eye = np.eye(M.shape[0])
    residual = relative_residual(M.conj().T @ M - eye, eye)
    return {'unitary': residual <= config.RES_TOL, 'residual': residual}


def _evaluator(source: Union[GRNode, FpsTable]):
    if isinstance(source, GRNode):
        return source.n_vars, lambda W: eval_closed(source, W)
    if isinstance(source, FpsTable):
        return source.n_vars, source.evaluate
    raise InputError(f'不支持的对象类型: {type(source).__name__}')


def schur_agler_sample(source: Union[GRNode, FpsTable], n_max: int, samples: int,
                       seed: int) -> SampleCheck:
    """
    在 ‖W_k‖ <= CONTRACTION_RADIUS 的随机严格压缩元组上取 max ‖F(W)‖，n = 1..n_max

    截断级数按多项式求值，结果只能作为佐证
    """
    n_vars, evaluate = _evaluator(source)
    rng = np.random.default_rng(seed)
    tuples = [contraction_tuple(rng, n_vars, n) for n in sizes_up_to(n_max, samples)]
    values, skipped = map_samples(lambda W: float(np.linalg.norm(evaluate(W), 2)), tuples)
    worst = max(values) if values else 0.0
    logger.info(f'Schur–Agler 采样: 最大范数 {worst:.6f}（样本 {len(values)}, 跳过 {skipped}）')
    return SampleCheck(worst, len(values), skipped, values)


def _contractivity(node: GRNode, J, tuples) -> SampleCheck:
    J = check_square_signature(node, J)

    def _min_eig(Z):
        n = np.shape(Z[0])[0]
        JI = np.kron(J, np.eye(n))
        F = eval_closed(node, Z)
        gap = JI - F @ JI @ F.conj().T
        return float(np.min(np.linalg.eigvalsh((gap + gap.conj().T) / 2)))

    values, skipped = map_samples(_min_eig, tuples)
    worst = min(values) if values else 0.0
    return SampleCheck(worst, len(values), skipped, values)


def halfplane_contractivity_sample(node: GRNode, J, n_values, samples: int,
                                   seed: int) -> SampleCheck:
    """J⊗I - F(Z)(J⊗I)F(Z)* 在 Z_k = S + 0.1I 上的最小特征值（max_residual 字段存最小值）"""
    rng = np.random.default_rng(seed)
    tuples = [halfplane_tuple(rng, node.n_vars, n) for n in n_values for _ in range(samples)]
    check = _contractivity(node, J, tuples)
    logger.info(f'右半平面 J-压缩性: 最小特征值 {check.max_residual:.3e}')
    return check


def disk_contractivity_sample(node: GRNode, J, n_values, samples: int,
                              seed: int) -> SampleCheck:
    """同上，取严格压缩元组"""
    rng = np.random.default_rng(seed)
    tuples = [contraction_tuple(rng, node.n_vars, n) for n in n_values for _ in range(samples)]
    check = _contractivity(node, J, tuples)
    logger.info(f'多圆盘 J-压缩性: 最小特征值 {check.max_residual:.3e}')
    return check


class InnerLineClassifier(BaseClassifier):
    """右半平面矩阵 J-内分类器"""

    case = 'inner-line'

    def classify(self, node: GRNode, J: np.ndarray) -> ClassificationResult:
        return is_J_inner_line(node, J)


class InnerDiskClassifier(BaseClassifier):
    """多圆盘矩阵 J-内分类器"""

    case = 'inner-disk'

    def classify(self, node: GRNode, J: np.ndarray) -> ClassificationResult:
        return is_J_inner_disk(node, J)
