"""
后移算子模型：在核空间 K_k(F) 上由 R_k 构造 F 的极小实现
K_k(F) 的元素用截断系数向量表示，基由核列的列主元 QR 选取
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import scipy.linalg as sla

import config
from classifiers.line_junitary import associated_H_line
from classifiers.structured_hermitian import StructuredHermitian
from errors import InputError, NumericalError
from kernels.kernel_table import KernelTable
from kernels.series_route import kernel_from_series
from linalg_utils import block_diag, check_signature_matrix, numerical_rank, relative_residual
from realization.gr_node import GRNode
from series.fps import FpsTable
from series.words import Word, enumerate_words, word_to_text

logger = logging.getLogger(__name__)


@dataclass
class KernelBasis:
    """K_k(F) 的一组基 h_i = K^{F,k}_{·,w_i} c_i，values 的每一列是 h_i 的系数向量"""

    k: int
    words: List[Word]
    vectors: List[np.ndarray]
    values: np.ndarray
    gram: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.words)


@dataclass
class ModelResult:
    node: GRNode
    H: StructuredHermitian
    bases: List[KernelBasis]
    residuals: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {'dims': list(self.node.dims),
                'basis': [[{'w': word_to_text(w), 'c': c} for w, c in zip(b.words, b.vectors)]
                          for b in self.bases]}


def _column_labels(n_vars: int, degree: int, size: int) -> List[Tuple[Word, int]]:
    return [(w, i) for w in enumerate_words(n_vars, degree) for i in range(size)]


def _select_basis(K: KernelTable, rows: List[Word], col_degree: int) -> KernelBasis:
    """
    在 |w'| <= col_degree 的核列中选取 γ_k 列，并检查秩在 col_degree - 1 处已经稳定

    Raises:
        NumericalError: 秩没有稳定
    """
    labels = _column_labels(K.n_vars, col_degree, K.size)
    cols = enumerate_words(K.n_vars, col_degree)
    full = K.block_matrix(rows, cols)
    gamma = numerical_rank(full)
    previous = numerical_rank(K.block_matrix(rows, enumerate_words(K.n_vars, col_degree - 1)))
    logger.info(f'K_{K.k}(F): 列字长 <= {col_degree - 1} 秩 {previous}，<= {col_degree} 秩 {gamma}')
    if previous != gamma:
        raise NumericalError(f'核空间 K_{K.k}(F) 的秩在截断次数内没有稳定（{previous} -> {gamma}），'
                             f'请提高级数截断次数')
    eye = np.eye(K.size, dtype=complex)
    if gamma == 0:
        return KernelBasis(K.k, [], [], np.zeros((full.shape[0], 0), dtype=complex),
                           np.zeros((0, 0), dtype=complex))
    _, _, piv = sla.qr(full, pivoting=True, mode='economic')
    chosen = sorted(int(i) for i in piv[:gamma])
    words = [labels[i][0] for i in chosen]
    vectors = [eye[:, labels[i][1]] for i in chosen]
    values = full[:, chosen]
    gram = np.array([[ci.conj() @ K.entry(wi, wj) @ cj for wj, cj in zip(words, vectors)]
                     for wi, ci in zip(words, vectors)], dtype=complex)
    return KernelBasis(K.k, words, vectors, values, (gram + gram.conj().T) / 2)


def _rows_up_to(values: np.ndarray, size: int, n_words: int) -> np.ndarray:
    return values[:size * n_words, :]


def _coordinates(basis: np.ndarray, target: np.ndarray, what: str) -> np.ndarray:
    if target.shape[1] == 0:
        return np.zeros((basis.shape[1], 0), dtype=complex)
    coords, _, _, _ = sla.lstsq(basis, target)
    residual = relative_residual(basis @ coords - target, target)
    if residual > config.RES_TOL:
        raise NumericalError(f'{what} 不在所选核空间内（残差 {residual:.3e}）')
    return coords


def model_realization(f: FpsTable, J) -> ModelResult:
    """
    由 J-酉级数的截断构造后移算子模型

    A_{kj} 为 R_k 在 K_j(F) → K_k(F) 上的矩阵，B_k 的列为 R_kF(z)c 的坐标，
    C_k 为在空字处取值，D = F_∅；H_k 为所选基在 [·,·]_{F,k} 下的 Gram 矩阵

    Args:
        f: 截断级数，截断次数 >= MODEL_MIN_DEGREE
        J: 签名矩阵

    Returns:
        ModelResult

    Raises:
        InputError: 截断次数不足或形状不合法
        NumericalError: 核空间的秩不稳定或平移不封闭
        ClassificationError: 所得节点不是线情形 J-酉的
    """
    J = check_signature_matrix(J)
    if f.degree < config.MODEL_MIN_DEGREE:
        raise InputError(f'模型实现至少需要截断次数 {config.MODEL_MIN_DEGREE}，实际为 {f.degree}')
    if f.rows != f.cols or J.shape[0] != f.rows:
        raise InputError(f'级数形状 {f.shape} 与 J 的阶数 {J.shape[0]} 不匹配')
    m = (f.degree - 2) // 2
    size = f.rows
    rows = enumerate_words(f.n_vars, m + 1)
    short = len(enumerate_words(f.n_vars, m))
    logger.info(f'模型实现: 截断次数 {f.degree}，行字长 <= {m + 1}，列字长 <= {m}')

    kernels = [kernel_from_series(f, J, k, m + 1, m) for k in range(1, f.n_vars + 1)]
    bases = [_select_basis(K, rows, m) for K in kernels]
    restricted = [_rows_up_to(b.values, size, short) for b in bases]
    for b, R in zip(bases, restricted):
        if numerical_rank(R) != b.rank:
            raise NumericalError(f'K_{b.k}(F) 的基在字长 <= {m} 上不再线性无关')

    index = {w: i for i, w in enumerate(rows)}
    n = f.n_vars
    A_blocks = [[None] * n for _ in range(n)]
    B_blocks = []
    for k in range(1, n + 1):
        shift_rows = [index[w + (k,)] for w in rows[:short]]
        target = restricted[k - 1]
        for j in range(1, n + 1):
            shifted = np.vstack([bases[j - 1].values[i * size:(i + 1) * size, :] for i in shift_rows]) \
                if bases[j - 1].rank else np.zeros((size * short, 0), dtype=complex)
            A_blocks[k - 1][j - 1] = _coordinates(target, shifted, f'R_{k} K_{j}(F)') \
                if bases[k - 1].rank else np.zeros((0, bases[j - 1].rank), dtype=complex)
        RkF = np.vstack([f.coeff(w + (k,)) for w in rows[:short]])
        B_blocks.append(_coordinates(target, RkF, f'R_{k}F') if bases[k - 1].rank
                        else np.zeros((0, size), dtype=complex))

    dims = tuple(b.rank for b in bases)
    A = np.block(A_blocks) if sum(dims) else np.zeros((0, 0), dtype=complex)
    B = np.vstack(B_blocks)
    C = np.hstack([b.values[:size, :] for b in bases])
    node = GRNode(n, dims, A, B, C, f.coeff(()))
    H = StructuredHermitian.from_matrix(block_diag([b.gram for b in bases]), dims)

    residuals: Dict[str, float] = {}
    if sum(dims):
        certified = associated_H_line(node, J)
        residuals['h_gram'] = relative_residual(certified.matrix - H.matrix, H.matrix)
        if residuals['h_gram'] > config.RES_TOL:
            raise NumericalError(f'Gram 矩阵与节点的相伴矩阵不一致（残差 {residuals["h_gram"]:.3e}）')
    logger.info(f'模型实现完成: dims={list(dims)}, H 签名 {H.signature}')
    return ModelResult(node, H, bases, residuals)
