"""
单位圆情形（酉矩阵元组）上的矩阵 J-酉性
H 经 Cayley 变换转到线情形计算，Stein 关系作为独立残差检查
"""
import logging
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

import config
from classifiers.base_classifier import BaseClassifier, ClassificationResult
from classifiers.common_eigen import unitary_diagnostics
from classifiers.line_junitary import (SampleCheck, controllable_pair, observable_pair,
                                       require_minimal, associated_H_line,
                                       check_square_signature, d_junitary_residual,
                                       empty_hermitian)
from classifiers.structured_hermitian import StructuredHermitian
from classifiers.structured_solver import solve_structured_hermitian
from errors import (ClassificationError, InputError, NotMinimalError, NumericalError,
                    SingularMatrixError)
from linalg_utils import (as_complex_matrix, block_diag, check_signature_matrix,
                          ensure_invertible, inv_checked, relative_residual)
from realization.gr_node import GRNode, associated, eval_closed, resolvent
from realization.sampling import map_samples, unitary_tuple

logger = logging.getLogger(__name__)


def _check_unimodular(a: complex) -> complex:
    a = complex(a)
    if abs(abs(a) - 1.0) > 1e-12:
        raise InputError(f'Cayley 参数必须满足 |a| = 1，实际 |a| = {abs(a)}')
    return a


def scan_unimodular(spectrum: np.ndarray, forbidden: Callable[[complex], complex],
                    seed: int = 0) -> complex:
    """
    在 16 个单位根中选使 forbidden(a) 离谱最远的 a；都太近时再随机尝试

    Args:
        spectrum: 特征值
        forbidden: a ↦ 必须避开的点
        seed: 随机尝试的种子

    Raises:
        NumericalError: 找不到合适的 a
    """
    if spectrum.size == 0:
        return 1.0 + 0j
    threshold = 1e-6 * max(1.0, float(np.max(np.abs(spectrum))))

    def _distance(a: complex) -> float:
        return float(np.min(np.abs(spectrum - forbidden(a))))

    roots = [np.exp(2j * np.pi * j / config.CAYLEY_SCAN_ROOTS)
             for j in range(config.CAYLEY_SCAN_ROOTS)]
    best = max(roots, key=_distance)
    if _distance(best) > threshold:
        return complex(best)
    rng = np.random.default_rng(seed)
    for _ in range(config.CAYLEY_RANDOM_TRIES):
        a = np.exp(2j * np.pi * rng.uniform())
        if _distance(a) > threshold:
            logger.warning(f'单位根都落在谱附近，改用随机参数 a={a:.6f}')
            return complex(a)
    raise NumericalError('找不到满足条件的单位模参数 a')


def choose_cayley_parameter(node: GRNode, seed: int = 0) -> complex:
    """使 -ā 离 σ(A) 最远的单位模参数"""
    spectrum = sla.eigvals(node.A) if node.r else np.zeros(0)
    a = scan_unimodular(spectrum, lambda a: -np.conj(a), seed)
    logger.info(f'Cayley 参数 a = {a:.6f}')
    return a


def cayley(node: GRNode, a: complex) -> GRNode:
    """
    Cayley 变换，把单位圆情形节点变成线情形节点

    A_a = (aA - I)(aA + I)^{-1}, B_a = √2(aA + I)^{-1}aB,
    C_a = √2 C(aA + I)^{-1}, D_a = D - C(aA + I)^{-1}aB

    Raises:
        InputError: |a| ≠ 1
        SingularMatrixError: aA + I 奇异
    """
    a = _check_unimodular(a)
    if node.r == 0:
        return node
    eye = np.eye(node.r)
    M_inv = inv_checked(a * node.A + eye, 'aA + I')
    root2 = np.sqrt(2.0)
    return GRNode(node.n_vars, node.dims,
                  (a * node.A - eye) @ M_inv,
                  root2 * M_inv @ (a * node.B),
                  root2 * node.C @ M_inv,
                  node.D - node.C @ M_inv @ (a * node.B))


def stein_residuals(node: GRNode, H: np.ndarray, J: np.ndarray) -> Dict[str, float]:
    """
    M* diag(H, J) M = diag(H, J) 与 M diag(H^{-1}, J) M* = diag(H^{-1}, J)，M 为联结矩阵
    同时给出分块形式 (A*HA + C*JC = H, A*HB + C*JD = 0, B*HB + D*JD = J)
    """
    A, B, C, D = node.A, node.B, node.C, node.D
    M = node.colligation()
    G = block_diag([H, J])
    G_dual = block_diag([np.linalg.inv(H) if H.size else H, J])
    return {
        'stein': relative_residual(A.conj().T @ H @ A + C.conj().T @ J @ C - H, H),
        'stein_cross': relative_residual(A.conj().T @ H @ B + C.conj().T @ J @ D, H, J),
        'stein_d': relative_residual(B.conj().T @ H @ B + D.conj().T @ J @ D - J, J),
        'colligation': relative_residual(M.conj().T @ G @ M - G, G),
        'colligation_dual': relative_residual(M @ G_dual @ M.conj().T - G_dual, G_dual),
    }


def associated_H_circle(node: GRNode, J, a: Optional[complex] = None) -> StructuredHermitian:
    """
    单位圆情形的相伴结构化 Hermite 矩阵：H = associated_H_line(cayley(node, a), J)

    Args:
        node: 极小 GR 节点
        J: 签名矩阵
        a: Cayley 参数，None 时自动选取

    Raises:
        NotMinimalError: 节点不是极小的
        ClassificationError: 不是单位圆情形 J-酉的
    """
    J = check_square_signature(node, J)
    if node.r == 0:
        residuals = {'d_j_unitary': d_junitary_residual(node.D, J)}
        if residuals['d_j_unitary'] > config.RES_TOL:
            raise ClassificationError('常数 D 不是 J-酉的', residuals)
        return empty_hermitian(node.dims, residuals)
    require_minimal(node)
    if a is None:
        a = choose_cayley_parameter(node)
    H = associated_H_line(cayley(node, a), J)
    H.residuals.update(stein_residuals(node, H.matrix, J))
    worst = max(H.residuals[key] for key in ('stein', 'stein_cross', 'stein_d',
                                             'colligation', 'colligation_dual'))
    if worst > config.RES_TOL:
        raise ClassificationError(f'Stein 关系不成立（最大残差 {worst:.3e}）', H.residuals)
    logger.info(f'单位圆情形 H 已求得: 签名={H.signature}')
    return H


def is_matrix_J_unitary_circle(node: GRNode, J) -> ClassificationResult:
    try:
        H = associated_H_circle(node, J)
    except ClassificationError as e:
        logger.info(f'不是单位圆情形 J-酉的: {e}')
        return CircleJUnitaryClassifier().negative(e, j_unitary=False)
    return ClassificationResult('circle', True, H=H, residuals=dict(H.residuals),
                                details={'j_unitary': True})


def sample_check_circle(node: GRNode, J, n: int, samples: int, seed: int) -> SampleCheck:
    """在随机酉矩阵元组上计算 max ‖f(W)(J⊗I)f(W)* - J⊗I‖"""
    J = check_square_signature(node, J)
    rng = np.random.default_rng(seed)
    tuples = [unitary_tuple(rng, node.n_vars, n) for _ in range(samples)]
    JI = np.kron(J, np.eye(n))

    def _defect(W):
        F = eval_closed(node, W)
        return float(np.linalg.norm(F @ JI @ F.conj().T - JI, 2))

    values, skipped = map_samples(_defect, tuples)
    worst = max(values) if values else 0.0
    logger.info(f'单位圆情形采样: n={n}, 样本 {len(values)}, 跳过 {skipped}, 最大残差 {worst:.3e}')
    return SampleCheck(worst, len(values), skipped, values)


def stein_identity_residual(node: GRNode, H: np.ndarray, J, W, Wp) -> float:
    """
    J⊗I - f(W)(J⊗I)f(W')* 与
    (C⊗I)(I-Δ(W)(A⊗I))^{-1}(I - Δ(W)Δ(W')*)(H^{-1}⊗I)(I-(A*⊗I)Δ(W')*)^{-1}(C*⊗I) 的相对差
    """
    J = check_square_signature(node, J)
    n = np.shape(W[0])[0]
    eye = np.eye(n)
    JI = np.kron(J, eye)
    lhs = JI - eval_closed(node, W) @ JI @ eval_closed(node, Wp).conj().T
    if node.r == 0:
        return relative_residual(lhs, JI)
    res, delta = resolvent(node, W)
    res_p, delta_p = resolvent(node, Wp)
    C_big = np.kron(node.C, eye)
    middle = np.eye(node.r * n) - delta @ delta_p.conj().T
    rhs = C_big @ res @ middle @ np.kron(np.linalg.inv(H), eye) @ res_p.conj().T @ C_big.conj().T
    return relative_residual(lhs - rhs, lhs, JI)


def a_inverse_identity(node: GRNode, H: StructuredHermitian) -> np.ndarray:
    """
    D 可逆时 A 可逆且 A^{-1} = H^{-1}(A×)*H

    Raises:
        SingularMatrixError: D 奇异
        NumericalError: 所得矩阵不是 A 的逆
    """
    cross = associated(node)
    if node.r == 0:
        return np.zeros((0, 0), dtype=complex)
    A_inv = H.inverse() @ cross.A.conj().T @ H.matrix
    residual = relative_residual(A_inv @ node.A - np.eye(node.r), np.eye(node.r))
    logger.debug(f'A^{{-1}} 恒等式残差 {residual:.3e}')
    if residual > config.RES_TOL:
        raise NumericalError(f'H^{{-1}}(A×)*H 不是 A 的逆（残差 {residual:.3e}）')
    return A_inv


def _invertible_A(A: np.ndarray) -> np.ndarray:
    try:
        ensure_invertible(A, 'A')
    except SingularMatrixError as e:
        raise InputError('单位圆情形的补全要求 A 可逆') from e
    return np.linalg.inv(A)


def resolvent_parameter(A: np.ndarray, a: Optional[complex]) -> complex:
    """I - aA* 可逆等价于 a ∉ σ(A)"""
    if a is None:
        return scan_unimodular(sla.eigvals(A) if A.size else np.zeros(0), lambda a: a)
    return _check_unimodular(a)


def complete_from_CA_circle(C, A, dims: Sequence[int], J,
                            a: Optional[complex] = None) -> Tuple[GRNode, StructuredHermitian]:
    """
    由能观对 (C, A) 补全单位圆情形 J-酉节点

    H - A*HA = C*JC，
    D_a = I - CH^{-1}(I - aA*)^{-1}C*J，B_a = -H^{-1}A^{-*}C*JD_a

    Raises:
        InputError: A 奇异或 |a| ≠ 1
        NotMinimalError: (C, A) 不能观
        ClassificationError: Stein 方程没有可逆的结构化解
    """
    r = sum(dims)
    A = as_complex_matrix(A, r, r, name='A')
    J = check_signature_matrix(J)
    C = as_complex_matrix(C, J.shape[0], r, name='C')
    if not observable_pair(C, A, dims):
        raise NotMinimalError('(C, A) 不是能观对')
    A_inv = _invertible_A(A)
    a = resolvent_parameter(A, a)
    H = solve_structured_hermitian(A, C.conj().T @ J @ C, dims, 'stein')
    H_inv = H.inverse()
    q = J.shape[0]
    D_a = np.eye(q) - C @ H_inv @ inv_checked(np.eye(r) - a * A.conj().T, 'I - aA*') \
        @ C.conj().T @ J
    B_a = -H_inv @ A_inv.conj().T @ C.conj().T @ J @ D_a
    node = GRNode(len(dims), tuple(dims), A, B_a, C, D_a)
    H.residuals.update(stein_residuals(node, H.matrix, J))
    logger.info(f'由 (C, A) 补全单位圆情形节点: a={a:.6f}, H 签名 {H.signature}')
    return node, H


def complete_from_AB_circle(A, B, dims: Sequence[int], J,
                            a: Optional[complex] = None) -> Tuple[GRNode, StructuredHermitian]:
    """
    由能控对 (A, B) 补全单位圆情形 J-酉节点

    G - AGA* = BJB*，H = G^{-1}，
    D' = I - JB*(I - aA*)^{-1}HB，C' = -D'JB*A^{-*}H
    """
    r = sum(dims)
    A = as_complex_matrix(A, r, r, name='A')
    J = check_signature_matrix(J)
    B = as_complex_matrix(B, r, J.shape[0], name='B')
    if not controllable_pair(A, B, dims):
        raise NotMinimalError('(A, B) 不是能控对')
    A_inv = _invertible_A(A)
    a = resolvent_parameter(A, a)
    G = solve_structured_hermitian(A, B @ J @ B.conj().T, dims, 'stein_dual')
    H = StructuredHermitian([np.linalg.inv(g) if g.size else g for g in G.blocks],
                            dict(G.residuals))
    q = J.shape[0]
    D_p = np.eye(q) - J @ B.conj().T @ inv_checked(np.eye(r) - a * A.conj().T, 'I - aA*') \
        @ H.matrix @ B
    C_p = -D_p @ J @ B.conj().T @ A_inv.conj().T @ H.matrix
    node = GRNode(len(dims), tuple(dims), A, B, C_p, D_p)
    H.residuals.update(stein_residuals(node, H.matrix, J))
    logger.info(f'由 (A, B) 补全单位圆情形节点: a={a:.6f}, H 签名 {H.signature}')
    return node, H


def unitary_circle_diagnostics(node: GRNode, H: StructuredHermitian) -> Dict:
    """J = I 情形的公共特征向量报告（|λ_j| ≠ 1 条件），仅作标记"""
    report = unitary_diagnostics(node.A, H.blocks, node.dims, 'circle')
    if node.p == node.q:
        report['d_unitary_residual'] = d_junitary_residual(node.D, np.eye(node.q))
    return report


class CircleJUnitaryClassifier(BaseClassifier):
    """单位圆情形矩阵 J-酉分类器"""

    case = 'circle'

    def classify(self, node: GRNode, J: np.ndarray) -> ClassificationResult:
        return is_matrix_J_unitary_circle(node, J)
