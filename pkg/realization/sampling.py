"""
随机矩阵元组采样与并行求值
所有样本先由同一个 default_rng(seed) 生成，再交给线程池，结果与调度无关
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from scipy.stats import unitary_group

import config
from errors import InputError, SingularMatrixError
from linalg_utils import null_basis
from realization.gr_node import GRNode, resolvent

logger = logging.getLogger(__name__)

MatrixTuple = List[np.ndarray]
T = TypeVar('T')


def epsilon_for(node: GRNode) -> float:
    """ε = 1/‖A‖（A = 0 时取 1）"""
    if node.r == 0:
        return 1.0
    norm = float(np.linalg.norm(node.A, 2))
    return 1.0 / norm if norm > 0 else 1.0


def _gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _scaled(m: np.ndarray, radius: float) -> np.ndarray:
    norm = float(np.linalg.norm(m, 2))
    return m if norm == 0 else m * (radius / norm)


def gamma_tuple(rng: np.random.Generator, n_vars: int, n: int, eps: float) -> MatrixTuple:
    """Γ_n(ε) 中的元组：每个 Z_k 缩放到 ‖Z_k‖ = SAMPLE_SCALE·ε"""
    return [_scaled(_gaussian(rng, n), config.SAMPLE_SCALE * eps) for _ in range(n_vars)]


def skew_hermitian_tuple(rng: np.random.Generator, n_vars: int, n: int,
                         radius: Optional[float] = None) -> MatrixTuple:
    """Z_k = i(G + G*)/2，可选缩放到给定范数"""
    out = []
    for _ in range(n_vars):
        g = _gaussian(rng, n)
        z = 0.5j * (g + g.conj().T)
        out.append(z if radius is None else _scaled(z, radius))
    return out


def halfplane_tuple(rng: np.random.Generator, n_vars: int, n: int) -> MatrixTuple:
    """右半平面元组 Z_k = S + HALFPLANE_SHIFT·I，S 反 Hermite"""
    shift = config.HALFPLANE_SHIFT * np.eye(n)
    return [s + shift for s in skew_hermitian_tuple(rng, n_vars, n)]


def unitary_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar 酉矩阵；n = 1 时取随机相位"""
    if n == 1:
        return np.exp(2j * np.pi * rng.uniform()) * np.ones((1, 1))
    return unitary_group.rvs(n, random_state=rng)


def unitary_tuple(rng: np.random.Generator, n_vars: int, n: int) -> MatrixTuple:
    return [unitary_matrix(rng, n) for _ in range(n_vars)]


def contraction_tuple(rng: np.random.Generator, n_vars: int, n: int) -> MatrixTuple:
    """严格压缩元组，‖W_k‖ <= CONTRACTION_RADIUS"""
    return [_scaled(_gaussian(rng, n), config.CONTRACTION_RADIUS * rng.uniform(0.5, 1.0))
            for _ in range(n_vars)]


def sizes_up_to(n_max: int, samples: int) -> List[int]:
    """把样本数均匀分配到矩阵阶数 1..n_max"""
    if n_max < 1 or samples < 1:
        raise InputError(f'矩阵阶数和样本数必须 >= 1，实际为 n_max={n_max}, samples={samples}')
    return [1 + i % n_max for i in range(samples)]


def map_samples(func: Callable[[MatrixTuple], T],
                samples: Sequence[MatrixTuple]) -> Tuple[List[T], int]:
    """
    在线程池中逐样本求值；预解式奇异的样本被跳过

    Returns:
        (结果列表（按样本顺序，不含跳过项）, 跳过的样本数)
    """
    def _run(Z):
        try:
            return func(Z)
        except SingularMatrixError as e:
            logger.warning(f'跳过样本（{e}）')
            return None

    with ThreadPoolExecutor(max_workers=config.MAX_WORKERS) as executor:
        results = list(executor.map(_run, samples))
    kept = [r for r in results if r is not None]
    return kept, len(results) - len(kept)


def obs_kernel_sample(node: GRNode, k: int, n: int, sample_count: int,
                      seed: int) -> np.ndarray:
    """
    ∩ ker φ_k(Z) 的标准正交基，φ_k(Z) = (C⊗I)(I - Δ(Z)(A⊗I))^{-1} 限制在分量 k 的列上

    Args:
        node: GR 节点
        k: 分量
        n: 矩阵阶数
        sample_count: 样本数
        seed: 随机种子

    Returns:
        (r_k n) x m 矩阵；m = 0 表示分量 k 能观的概率证据
    """
    if not 1 <= k <= node.n_vars:
        raise InputError(f'分量 {k} 超出范围 1..{node.n_vars}')
    if n < 1 or sample_count < 1:
        raise InputError('矩阵阶数和样本数必须 >= 1')
    rng = np.random.default_rng(seed)
    eps = epsilon_for(node)
    samples = [gamma_tuple(rng, node.n_vars, n, eps) for _ in range(sample_count)]
    start = sum(node.dims[:k - 1]) * n
    stop = start + node.dims[k - 1] * n
    C_big = np.kron(node.C, np.eye(n))

    def _phi(Z):
        res, _ = resolvent(node, Z)
        return (C_big @ res)[:, start:stop]

    blocks, skipped = map_samples(_phi, samples)
    if not blocks:
        return np.eye(stop - start, dtype=complex)
    basis = null_basis(np.vstack(blocks))
    logger.info(f'分量 {k} 采样公共核维数 {basis.shape[1]}（n={n}, 样本 {len(blocks)}, 跳过 {skipped}）')
    return basis
