"""
形式求导路线：K^{F,k}(z,z') = -(d/dλ) F(Λ_{z,z'}(λ))_{12} |_{λ=0} · J F(z')*

Λ_{z,z'}(λ) 把 z_j 换成 diag(z_j, -y_j)，第 k 个分量再加上 λ·[[1,1],[1,1]]，其中 y_j 代表 z'_j*。
F(Λ) 在字母表 (z, y, λ) 上展开，只保留 λ 一次项的 (1,2) 块。
双变元级数以 (z 字, y 字) -> 矩阵 的字典表示，z' 变元之间仍不交换。
"""
import logging
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import InputError, NumericalError
from kernels.base_kernel_route import BaseKernelRoute, KernelInputs
from kernels.kernel_table import KernelTable
from linalg_utils import check_signature_matrix, component_slices
from realization.gr_node import GRNode, expand
from series.fps import FpsTable
from series.words import Word, enumerate_words, transpose

logger = logging.getLogger(__name__)

BivariateTable = Dict[Tuple[Word, Word], np.ndarray]

# 增广字母：('z', j)、('y', j)、('λ', k)
Letter = Tuple[str, int]
AugmentedWord = Tuple[Letter, ...]

Z_LETTER = 'z'
Y_LETTER = 'y'
LAMBDA_LETTER = 'λ'

_LETTER_BLOCKS = {
    Z_LETTER: np.array([[1, 0], [0, 0]], dtype=complex),
    Y_LETTER: np.array([[0, 0], [0, -1]], dtype=complex),
    LAMBDA_LETTER: np.ones((2, 2), dtype=complex),
}


def substitution_letters(node: GRNode, k: int) -> List[Tuple[Letter, np.ndarray]]:
    """
    Λ_{z,z'}(λ) 中每个字母的系数矩阵 P_ℓ = diag(0, …, I_{r_j}⊗M_ℓ, …, 0)（状态⊗C^2 排布）
    """
    slices = component_slices(node.dims)
    letters: List[Tuple[Letter, np.ndarray]] = []
    for kind in (Z_LETTER, Y_LETTER, LAMBDA_LETTER):
        for j in range(1, node.n_vars + 1):
            if kind == LAMBDA_LETTER and j != k:
                continue
            mask = np.zeros(node.r)
            mask[slices[j - 1]] = 1.0
            letters.append(((kind, j), np.kron(np.diag(mask), _LETTER_BLOCKS[kind])))
    return letters


def expand_substituted(node: GRNode, k: int, z_degree: int, y_degree: int) -> Dict[AugmentedWord, np.ndarray]:
    """
    F(Λ_{z,z'}(λ)) 的 λ 一次项在 (1,2) 块上的系数

    增广节点为 (A⊗I_2, B⊗I_2, C⊗I_2, D⊗I_2)，字 ℓ_1…ℓ_m 的系数为
    (C⊗I_2) P_{ℓ_1} (A⊗I_2) P_{ℓ_2} … P_{ℓ_m} (B⊗I_2)。
    前缀积恒为零时不再延长。

    Args:
        node: GR 节点
        k: λ 所在分量
        z_degree: z 字母个数上限
        y_degree: y 字母个数上限

    Returns:
        增广字 -> p×q 矩阵，只含恰有一个 λ 的非零项
    """
    letters = substitution_letters(node, k)
    A2 = np.kron(node.A, np.eye(2))
    head = np.kron(node.C, np.eye(2))[0::2, :]
    tail = np.kron(node.B, np.eye(2))[:, 1::2]
    limits = {Z_LETTER: z_degree, Y_LETTER: y_degree, LAMBDA_LETTER: 1}

    out: Dict[AugmentedWord, np.ndarray] = {}
    layer: List[Tuple[AugmentedWord, Dict[str, int], np.ndarray]] = []
    for letter, P in letters:
        counts = {Z_LETTER: 0, Y_LETTER: 0, LAMBDA_LETTER: 0}
        counts[letter[0]] += 1
        if counts[letter[0]] <= limits[letter[0]]:
            layer.append(((letter,), counts, head @ P))
    while layer:
        nxt = []
        for word, counts, V in layer:
            if not np.any(V):
                continue
            if counts[LAMBDA_LETTER] == 1:
                coeff = V @ tail
                if np.any(coeff):
                    out[word] = coeff
            for letter, P in letters:
                if counts[letter[0]] + 1 > limits[letter[0]]:
                    continue
                grown = dict(counts)
                grown[letter[0]] += 1
                nxt.append((word + (letter,), grown, V @ A2 @ P))
        layer = nxt
    return out


def split_augmented_word(word: AugmentedWord) -> Tuple[Word, Word]:
    """z…z λ y…y -> (z 字, y 字)

    Raises:
        NumericalError: 字不是这种形状
    """
    kinds = [kind for kind, _ in word]
    pos = kinds.index(LAMBDA_LETTER)
    if any(kind != Z_LETTER for kind in kinds[:pos]) or any(kind != Y_LETTER for kind in kinds[pos + 1:]):
        raise NumericalError(f'(1,2) 块的 λ 一次项出现在非 zλy 形状的字上: {word}')
    return tuple(j for _, j in word[:pos]), tuple(j for _, j in word[pos + 1:])


def derivative_table(node: GRNode, k: int, row_degree: int, col_degree: int) -> BivariateTable:
    """
    -(d/dλ) F(Λ_{z,z'}(λ))_{12} 在 λ = 0 处的系数，按 (z 字, y 字) 索引
    """
    return {split_augmented_word(word): -coeff
            for word, coeff in expand_substituted(node, k, row_degree, col_degree).items()}


def times_adjoint(table: BivariateTable, J: np.ndarray, f: FpsTable, col_degree: int) -> BivariateTable:
    """
    T(z,z') · J f(z')*，其中 f(z')* = Σ (f_v)* z'^{v^T}，z' 字按 u·v^T 拼接

    结果按 (w, w') 索引，w'^T 是乘积中 z' 的字
    """
    adjoint_coeffs = list(f.star().items())
    out: BivariateTable = defaultdict(lambda: np.zeros((f.rows, f.rows), dtype=complex))
    for (w, u), T in table.items():
        left = T @ J
        for x, G in adjoint_coeffs:
            z_word = u + x
            if len(z_word) <= col_degree:
                out[(w, transpose(z_word))] = out[(w, transpose(z_word))] + left @ G
    return dict(out)


def kernel_formal_derivative(node: GRNode, J, k: int, degree: int,
                             col_degree: Optional[int] = None) -> KernelTable:
    """
    形式求导路线（不使用 H）

    Args:
        node: 极小节点
        J: 签名矩阵
        k: 分量（1 起始）
        degree: 行字长上限
        col_degree: 列字长上限，默认与 degree 相同

    Raises:
        InputError: p ≠ q、J 阶数不符或字长上限为负
    """
    col_degree = degree if col_degree is None else col_degree
    if degree < 0 or col_degree < 0:
        raise InputError('核的字长上限必须非负')
    J = check_signature_matrix(J)
    if node.p != node.q or J.shape[0] != node.q:
        raise InputError(f'形式求导路线需要 p = q = J 的阶数，实际 D 形状 {node.D.shape}')
    table = derivative_table(node, k, degree, col_degree)
    product = times_adjoint(table, J, expand(node, col_degree), col_degree)
    zero = np.zeros((node.p, node.p), dtype=complex)
    entries = {}
    for w in enumerate_words(node.n_vars, degree):
        for w2 in enumerate_words(node.n_vars, col_degree):
            entries[(w, w2)] = product.get((w, w2), zero)
    logger.debug(f'形式求导路线核 k={k}: 双变元项 {len(table)}')
    return KernelTable(k, node.n_vars, node.p, degree, col_degree, entries)


class FormalKernelRoute(BaseKernelRoute):
    """需要 node 与 J"""

    name = 'formal'

    def compute(self, inputs: KernelInputs, k: int, row_degree: int,
                col_degree: int) -> KernelTable:
        self.require(inputs, 'node', 'J')
        return kernel_formal_derivative(inputs.node, inputs.J, k, row_degree, col_degree)
