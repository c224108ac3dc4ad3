"""
虚轴情形（反 Hermite 矩阵元组）上的矩阵 J-酉性
H 通过 α× 与 α̃ = (-A*, C*J, -JB*, JD*J) 之间的唯一相似变换求得，Lyapunov 关系作为独立残差检查
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

import config
from classifiers.base_classifier import BaseClassifier, ClassificationResult
from classifiers.common_eigen import unitary_diagnostics
from classifiers.structured_hermitian import StructuredHermitian
from classifiers.structured_solver import solve_structured_hermitian
from errors import ClassificationError, InputError, NotMinimalError
from linalg_utils import (as_complex_matrix, check_signature_matrix, numerical_rank,
                          relative_residual)
from realization.gr_node import GRNode, associated, eval_closed, expand, resolvent
from realization.sampling import epsilon_for, map_samples, skew_hermitian_tuple
from realization.similarity import expansion_check_degree, similarity_between
from realization.truncated import minimality_report, truncated_ctrl, truncated_obs

logger = logging.getLogger(__name__)


@dataclass
class SampleCheck:
    """随机采样检验的结果"""

    max_residual: float
    samples: int
    skipped: int
    values: List[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> Dict:
        return {'max_residual': self.max_residual, 'samples': self.samples,
                'skipped': self.skipped}


def check_square_signature(node: GRNode, J) -> np.ndarray:
    """J 必须是 q x q 签名矩阵且 p = q"""
    J = check_signature_matrix(J)
    if node.p != node.q:
        raise InputError(f'J-酉性需要 p = q，实际 p={node.p}, q={node.q}')
    if J.shape[0] != node.q:
        raise InputError(f'J 的阶数应为 {node.q}，实际为 {J.shape[0]}')
    return J


def d_junitary_residual(D: np.ndarray, J: np.ndarray) -> float:
    """‖D J D* - J‖ 的相对残差"""
    return relative_residual(D @ J @ D.conj().T - J, J, D)


def empty_hermitian(dims: Sequence[int], residuals: Dict[str, float] = None) -> StructuredHermitian:
    return StructuredHermitian([np.zeros((d, d), dtype=complex) for d in dims], dict(residuals or {}))


def dual_tilde_node(node: GRNode, J: np.ndarray) -> GRNode:
    """α̃ = (-A*, C*J, -JB*, JD*J)，实现 J F^#(z) J"""
    return GRNode(node.n_vars, node.dims, -node.A.conj().T, node.C.conj().T @ J,
                  -J @ node.B.conj().T, J @ node.D.conj().T @ J)


def lyapunov_residuals(node: GRNode, H: np.ndarray, J: np.ndarray) -> Dict[str, float]:
    """
    线情形的四个关系式的相对残差

    L:  A*H + HA = -C*JC
    b:  B = -H^{-1}C*JD
    L': H^{-1}A* + AH^{-1} = -BJB*
    c:  C = -DJB*H
    """
    A, B, C, D = node.A, node.B, node.C, node.D
    H_inv = np.linalg.inv(H)
    return {
        'lyapunov': relative_residual(A.conj().T @ H + H @ A + C.conj().T @ J @ C,
                                      A.conj().T @ H, C.conj().T @ J @ C),
        'b_relation': relative_residual(B + H_inv @ C.conj().T @ J @ D, B),
        'lyapunov_dual': relative_residual(H_inv @ A.conj().T + A @ H_inv + B @ J @ B.conj().T,
                                           A @ H_inv, B @ J @ B.conj().T),
        'c_relation': relative_residual(C + D @ J @ B.conj().T @ H, C),
    }


def require_minimal(node: GRNode) -> None:
    report = minimality_report(node)
    if not report.minimal:
        raise NotMinimalError(f'节点不是极小的: obs={report.obs_ranks}, '
                              f'ctrl={report.ctrl_ranks}, dims={report.dims}')


def associated_H_line(node: GRNode, J) -> StructuredHermitian:
    """
    线情形的相伴结构化 Hermite 矩阵 H = -T，T 为 α× 到 α̃ 的相似变换

    Args:
        node: 极小 GR 节点
        J: 签名矩阵

    Returns:
        StructuredHermitian，residuals 中含 Lyapunov 等残差

    Raises:
        NotMinimalError: 节点不是极小的
        ClassificationError: D 不是 J-酉的、F^{-1} ≠ J F^# J 或 H 不是 Hermite 的
    """
    J = check_square_signature(node, J)
    residuals = {'d_j_unitary': d_junitary_residual(node.D, J)}
    if residuals['d_j_unitary'] > config.RES_TOL:
        raise ClassificationError(f'D 不是 J-酉的（残差 {residuals["d_j_unitary"]:.3e}）',
                                  residuals)
    if node.r == 0:
        return empty_hermitian(node.dims, residuals)
    require_minimal(node)

    cross = associated(node)
    tilde = dual_tilde_node(node, J)
    degree = expansion_check_degree(node)
    f_cross = expand(cross, degree)
    scale = max([1.0] + [float(np.linalg.norm(m)) for _, m in f_cross.items()])
    residuals['inverse_identity'] = f_cross.max_abs_diff(expand(tilde, degree)) / scale
    if residuals['inverse_identity'] > config.RES_TOL:
        raise ClassificationError(f'F^{{-1}} 与 J F^# J 不一致（次数 {degree}，'
                                  f'残差 {residuals["inverse_identity"]:.3e}）', residuals)

    T = similarity_between(cross, tilde)
    H = StructuredHermitian.from_matrix(-T, node.dims, residuals)
    H.residuals.update(lyapunov_residuals(node, H.matrix, J))
    worst = max(H.residuals[key] for key in ('lyapunov', 'b_relation', 'lyapunov_dual', 'c_relation'))
    if worst > config.RES_TOL:
        raise ClassificationError(f'Lyapunov 关系不成立（最大残差 {worst:.3e}）', H.residuals)
    logger.info(f'线情形 H 已求得: dims={list(node.dims)}, 签名={H.signature}')
    return H


def is_matrix_J_unitary_line(node: GRNode, J) -> ClassificationResult:
    """D J-酉且 associated_H_line 成功时为真"""
    try:
        H = associated_H_line(node, J)
    except ClassificationError as e:
        logger.info(f'不是线情形 J-酉的: {e}')
        return LineJUnitaryClassifier().negative(e, j_unitary=False)
    return ClassificationResult('line', True, H=H, residuals=dict(H.residuals),
                                details={'j_unitary': True})


def sample_check_line(node: GRNode, J, n: int, samples: int, seed: int) -> SampleCheck:
    """
    在随机反 Hermite 元组上计算 max ‖F(Z)(J⊗I)F(Z)* - J⊗I‖

    Args:
        node: GR 节点
        J: 签名矩阵
        n: 矩阵阶数
        samples: 样本数
        seed: 随机种子
    """
    J = check_square_signature(node, J)
    rng = np.random.default_rng(seed)
    radius = config.SAMPLE_SCALE * epsilon_for(node)
    tuples = [skew_hermitian_tuple(rng, node.n_vars, n, radius) for _ in range(samples)]
    JI = np.kron(J, np.eye(n))

    def _defect(Z):
        F = eval_closed(node, Z)
        return float(np.linalg.norm(F @ JI @ F.conj().T - JI, 2))

    values, skipped = map_samples(_defect, tuples)
    worst = max(values) if values else 0.0
    logger.info(f'线情形采样: n={n}, 样本 {len(values)}, 跳过 {skipped}, 最大残差 {worst:.3e}')
    return SampleCheck(worst, len(values), skipped, values)


def lyapunov_identity_residual(node: GRNode, H: np.ndarray, J, Z, Zp) -> float:
    """
    J⊗I - F(Z)(J⊗I)F(Z')* 与
    (C⊗I)(I-Δ(Z)(A⊗I))^{-1}(Δ(Z)+Δ(Z')*)(H^{-1}⊗I)(I-(A*⊗I)Δ(Z')*)^{-1}(C*⊗I) 的相对差
    """
    J = check_square_signature(node, J)
    n = np.shape(Z[0])[0]
    eye = np.eye(n)
    JI = np.kron(J, eye)
    lhs = JI - eval_closed(node, Z) @ JI @ eval_closed(node, Zp).conj().T
    if node.r == 0:
        return relative_residual(lhs, JI)
    res, delta = resolvent(node, Z)
    res_p, delta_p = resolvent(node, Zp)
    C_big = np.kron(node.C, eye)
    rhs = C_big @ res @ (delta + delta_p.conj().T) @ np.kron(np.linalg.inv(H), eye) \
        @ res_p.conj().T @ C_big.conj().T
    return relative_residual(lhs - rhs, lhs, JI)


def observable_pair(C: np.ndarray, A: np.ndarray, dims: Sequence[int]) -> bool:
    pair_node = GRNode(len(dims), tuple(dims), A, np.zeros((A.shape[0], C.shape[0])), C,
                        np.eye(C.shape[0]))
    return all(numerical_rank(truncated_obs(pair_node, k)) == d for k, d in enumerate(dims, 1))


def controllable_pair(A: np.ndarray, B: np.ndarray, dims: Sequence[int]) -> bool:
    pair_node = GRNode(len(dims), tuple(dims), A, B, np.zeros((B.shape[1], A.shape[0])),
                        np.eye(B.shape[1]))
    return all(numerical_rank(truncated_ctrl(pair_node, k)) == d for k, d in enumerate(dims, 1))


def complete_from_CA(C, A, dims: Sequence[int], J) -> Tuple[GRNode, StructuredHermitian]:
    """
    由能观对 (C, A) 补全 J-酉节点：D = I，B = -H^{-1}C*J，A*H + HA = -C*JC

    Raises:
        NotMinimalError: (C, A) 不能观
        ClassificationError: 没有可逆的结构化 Hermite 解
    """
    r = sum(dims)
    A = as_complex_matrix(A, r, r, name='A')
    J = check_signature_matrix(J)
    C = as_complex_matrix(C, J.shape[0], r, name='C')
    if not observable_pair(C, A, dims):
        raise NotMinimalError('(C, A) 不是能观对')
    H = solve_structured_hermitian(A, -C.conj().T @ J @ C, dims, 'line')
    B = -H.inverse() @ C.conj().T @ J
    node = GRNode(len(dims), tuple(dims), A, B, C, np.eye(J.shape[0]))
    H.residuals.update(lyapunov_residuals(node, H.matrix, J))
    logger.info(f'由 (C, A) 补全节点: H 签名 {H.signature}')
    return node, H


def complete_from_AB(A, B, dims: Sequence[int], J) -> Tuple[GRNode, StructuredHermitian]:
    """
    由能控对 (A, B) 补全 J-酉节点：D = I，C = -JB*G^{-1}，GA* + AG = -BJB*，H = G^{-1}

    Raises:
        NotMinimalError: (A, B) 不能控
        ClassificationError: 没有可逆的结构化 Hermite 解
    """
    r = sum(dims)
    A = as_complex_matrix(A, r, r, name='A')
    J = check_signature_matrix(J)
    B = as_complex_matrix(B, r, J.shape[0], name='B')
    if not controllable_pair(A, B, dims):
        raise NotMinimalError('(A, B) 不是能控对')
    G = solve_structured_hermitian(A, -B @ J @ B.conj().T, dims, 'line_dual')
    H = StructuredHermitian([np.linalg.inv(g) if g.size else g for g in G.blocks],
                            dict(G.residuals))
    C = -J @ B.conj().T @ H.matrix
    node = GRNode(len(dims), tuple(dims), A, B, C, np.eye(J.shape[0]))
    H.residuals.update(lyapunov_residuals(node, H.matrix, J))
    logger.info(f'由 (A, B) 补全节点: H 签名 {H.signature}')
    return node, H


def unitary_line_diagnostics(node: GRNode, H: StructuredHermitian) -> Dict:
    """J = I 情形：公共特征向量条件与 D 的酉性"""
    report = unitary_diagnostics(node.A, H.blocks, node.dims, 'line')
    if node.p == node.q:
        report['d_unitary_residual'] = d_junitary_residual(node.D, np.eye(node.q))
    return report


class LineJUnitaryClassifier(BaseClassifier):
    """线情形矩阵 J-酉分类器"""

    case = 'line'

    def classify(self, node: GRNode, J: np.ndarray) -> ClassificationResult:
        return is_matrix_J_unitary_line(node, J)
