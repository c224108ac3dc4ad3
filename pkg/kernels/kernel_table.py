"""
核函数系数表 K^{F,k}_{w,w'} 与 Gram 矩阵的负平方数
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

import config
from errors import InputError
from io_formats import decode_matrix, encode_matrix
from series.words import Word, enumerate_words, make_word, word_key

logger = logging.getLogger(__name__)


@dataclass
class KernelTable:
    """
    第 k 个核的系数表，键为 (w, w')，w 取 |w| <= row_degree，w' 取 |w'| <= col_degree

    Attributes:
        k: 分量（1 起始）
        n_vars: 变元个数
        size: 系数矩阵阶数 p
        row_degree: 行字长上限
        col_degree: 列字长上限
        entries: (w, w') -> p x p 矩阵
    """

    k: int
    n_vars: int
    size: int
    row_degree: int
    col_degree: int
    entries: Dict[Tuple[Word, Word], np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def degree(self) -> int:
        return min(self.row_degree, self.col_degree)

    def row_words(self) -> List[Word]:
        return enumerate_words(self.n_vars, self.row_degree)

    def col_words(self) -> List[Word]:
        return enumerate_words(self.n_vars, self.col_degree)

    def entry(self, w: Sequence[int], w2: Sequence[int]) -> np.ndarray:
        key = (tuple(w), tuple(w2))
        if key not in self.entries:
            raise InputError(f'核表中没有 ({list(w)}, {list(w2)})')
        return self.entries[key]

    def block_matrix(self, rows: Sequence[Word], cols: Sequence[Word]) -> np.ndarray:
        """[K_{w,w'}]，行按 rows、列按 cols 排列"""
        if not rows or not cols:
            return np.zeros((self.size * len(rows), self.size * len(cols)), dtype=complex)
        return np.block([[self.entry(w, w2) for w2 in cols] for w in rows])

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.linalg.norm(m) <= tol for m in self.entries.values())

    def hermitian_defect(self) -> float:
        """max ‖K_{w,w'} - K_{w',w}*‖，只在两个键都存在时比较"""
        worst = 0.0
        for (w, w2), m in self.entries.items():
            other = self.entries.get((w2, w))
            if other is not None:
                worst = max(worst, float(np.linalg.norm(m - other.conj().T)))
        return worst

    def is_hermitian(self) -> bool:
        scale = max([1.0] + [float(np.linalg.norm(m)) for m in self.entries.values()])
        return self.hermitian_defect() <= config.KERNEL_SYM_TOL * scale

    def max_abs_diff(self, other: 'KernelTable') -> float:
        """公共键上的最大逐元素差"""
        if self.k != other.k or self.size != other.size:
            raise InputError('两个核表的分量或阶数不一致')
        common = set(self.entries) & set(other.entries)
        if not common:
            return 0.0
        return max(float(np.max(np.abs(self.entries[key] - other.entries[key]))) for key in common)

    def to_list(self) -> List[Dict[str, Any]]:
        keys = sorted(self.entries, key=lambda key: (word_key(key[0]), word_key(key[1])))
        return [{'w': list(w), 'w2': list(w2), 'matrix': encode_matrix(self.entries[(w, w2)])}
                for w, w2 in keys]

    @classmethod
    def from_list(cls, data: List[Dict[str, Any]], k: int, n_vars: int) -> 'KernelTable':
        """
        解析 [{"w": [...], "w2": [...], "matrix": ...}, ...]

        Raises:
            InputError: 字或矩阵格式不合法
        """
        entries: Dict[Tuple[Word, Word], np.ndarray] = {}
        for item in data:
            try:
                key = (make_word(item['w'], n_vars), make_word(item['w2'], n_vars))
                entries[key] = decode_matrix(item['matrix'], name='matrix')
            except (KeyError, TypeError) as e:
                raise InputError(f'核表条目格式不合法: {item!r}') from e
        if not entries:
            raise InputError('核表为空')
        size = next(iter(entries.values())).shape[0]
        row_degree = max(len(w) for w, _ in entries)
        col_degree = max(len(w2) for _, w2 in entries)
        return cls(k, n_vars, size, row_degree, col_degree, entries)


def kernel_gram(K: KernelTable, pairs: Sequence[Tuple[Sequence[int], np.ndarray]]
                ) -> Tuple[np.ndarray, Tuple[int, int, int]]:
    """
    G_{ij} = c_i* K_{w_i, w_j} c_j 及其签名

    Args:
        K: 核表
        pairs: [(w_i, c_i)]

    Returns:
        (G, (正特征值个数, 负特征值个数, 零特征值个数))
    """
    vectors = []
    for w, c in pairs:
        c = np.asarray(c, dtype=complex).reshape(-1)
        if c.shape[0] != K.size:
            raise InputError(f'向量长度应为 {K.size}，实际为 {c.shape[0]}')
        vectors.append((tuple(w), c))
    n = len(vectors)
    G = np.zeros((n, n), dtype=complex)
    for i, (wi, ci) in enumerate(vectors):
        for j, (wj, cj) in enumerate(vectors):
            G[i, j] = ci.conj() @ K.entry(wi, wj) @ cj
    G = (G + G.conj().T) / 2
    if n == 0:
        return G, (0, 0, 0)
    eigs = sla.eigvalsh(G)
    tol = config.PD_RTOL * max(1.0, float(np.max(np.abs(eigs))))
    signature = (int(np.sum(eigs > tol)), int(np.sum(eigs < -tol)), int(np.sum(np.abs(eigs) <= tol)))
    logger.debug(f'核 Gram 矩阵（k={K.k}）签名: {signature}')
    return G, signature


def spanning_pairs(K: KernelTable) -> List[Tuple[Word, np.ndarray]]:
    """所有 (w, e_i)，|w| <= min(row_degree, col_degree)"""
    eye = np.eye(K.size, dtype=complex)
    return [(w, eye[:, i]) for w in enumerate_words(K.n_vars, K.degree) for i in range(K.size)]
