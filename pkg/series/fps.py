"""
截断形式幂级数（非交换变元，复矩阵系数）
系数以稀疏字典保存，所有二元运算的截断次数取两者较小值
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

import config
from errors import InputError
from io_formats import decode_matrix, encode_matrix
from linalg_utils import as_complex_matrix, inv_checked
from series.words import EMPTY, Word, make_word, transpose, word_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FpsTable:
    """按次数截断的形式幂级数，未出现的字系数为零"""

    n_vars: int
    rows: int
    cols: int
    degree: int
    coeffs: Dict[Word, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.n_vars < 1:
            raise InputError(f'变元个数必须 >= 1，实际为 {self.n_vars}')
        if self.degree < 0:
            raise InputError(f'截断次数必须 >= 0，实际为 {self.degree}')
        cleaned: Dict[Word, np.ndarray] = {}
        for w, m in self.coeffs.items():
            w = make_word(w, self.n_vars)
            if len(w) > self.degree:
                raise InputError(f'字 {w} 的长度超过截断次数 {self.degree}')
            m = as_complex_matrix(m, self.rows, self.cols, name=f'系数 {w}')
            if np.linalg.norm(m) > config.DROP_TOL:
                cleaned[w] = m
        object.__setattr__(self, 'coeffs', cleaned)

    # ------------------------------------------------------------------ 构造

    @classmethod
    def zero(cls, n_vars: int, rows: int, cols: int, degree: int) -> 'FpsTable':
        return cls(n_vars, rows, cols, degree, {})

    @classmethod
    def constant(cls, n_vars: int, matrix, degree: int) -> 'FpsTable':
        matrix = as_complex_matrix(matrix)
        return cls(n_vars, matrix.shape[0], matrix.shape[1], degree, {EMPTY: matrix})

    @classmethod
    def identity(cls, n_vars: int, size: int, degree: int) -> 'FpsTable':
        return cls.constant(n_vars, np.eye(size), degree)

    # ------------------------------------------------------------------ 访问

    def coeff(self, w: Sequence[int]) -> np.ndarray:
        m = self.coeffs.get(tuple(w))
        if m is None:
            return np.zeros((self.rows, self.cols), dtype=complex)
        return m

    def items(self) -> Iterator[Tuple[Word, np.ndarray]]:
        """按分级字典序遍历非零系数"""
        for w in sorted(self.coeffs, key=word_key):
            yield w, self.coeffs[w]

    def support(self) -> List[Word]:
        return sorted(self.coeffs, key=word_key)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    # ------------------------------------------------------------------ 运算

    def _check_compatible(self, other: 'FpsTable', what: str) -> None:
        if self.n_vars != other.n_vars:
            raise InputError(f'{what}: 变元个数不一致 ({self.n_vars} != {other.n_vars})')

    def truncate(self, degree: int) -> 'FpsTable':
        degree = min(degree, self.degree)
        return FpsTable(self.n_vars, self.rows, self.cols, degree,
                        {w: m for w, m in self.coeffs.items() if len(w) <= degree})

    def add(self, other: 'FpsTable') -> 'FpsTable':
        """(f+g)_w = f_w + g_w，截断次数取较小值"""
        self._check_compatible(other, 'add')
        if self.shape != other.shape:
            raise InputError(f'add: 形状不一致 {self.shape} != {other.shape}')
        degree = min(self.degree, other.degree)
        out: Dict[Word, np.ndarray] = {}
        for table in (self, other):
            for w, m in table.coeffs.items():
                if len(w) <= degree:
                    out[w] = out[w] + m if w in out else m.copy()
        return FpsTable(self.n_vars, self.rows, self.cols, degree, out)

    def scale(self, factor: complex) -> 'FpsTable':
        return FpsTable(self.n_vars, self.rows, self.cols, self.degree,
                        {w: factor * m for w, m in self.coeffs.items()})

    def sub(self, other: 'FpsTable') -> 'FpsTable':
        return self.add(other.scale(-1.0))

    def left_multiply(self, matrix) -> 'FpsTable':
        """常数矩阵左乘每个系数"""
        matrix = as_complex_matrix(matrix, cols=self.rows)
        return FpsTable(self.n_vars, matrix.shape[0], self.cols, self.degree,
                        {w: matrix @ m for w, m in self.coeffs.items()})

    def right_multiply(self, matrix) -> 'FpsTable':
        """常数矩阵右乘每个系数"""
        matrix = as_complex_matrix(matrix, rows=self.cols)
        return FpsTable(self.n_vars, self.rows, matrix.shape[1], self.degree,
                        {w: m @ matrix for w, m in self.coeffs.items()})

    def mul(self, other: 'FpsTable') -> 'FpsTable':
        """Cauchy 乘积 (fg)_w = sum_{w'w''=w} f_{w'} g_{w''}"""
        self._check_compatible(other, 'mul')
        if self.cols != other.rows:
            raise InputError(f'mul: 形状不匹配 {self.shape} x {other.shape}')
        degree = min(self.degree, other.degree)
        by_length: Dict[int, List[Tuple[Word, np.ndarray]]] = defaultdict(list)
        for w, m in other.coeffs.items():
            by_length[len(w)].append((w, m))
        out: Dict[Word, np.ndarray] = {}
        for w1, m1 in self.coeffs.items():
            room = degree - len(w1)
            for length in range(room + 1):
                for w2, m2 in by_length.get(length, ()):
                    w = w1 + w2
                    prod = m1 @ m2
                    out[w] = out[w] + prod if w in out else prod
        return FpsTable(self.n_vars, self.rows, other.cols, degree, out)

    def invert(self) -> 'FpsTable':
        """
        Neumann 级数求逆 f^{-1} = sum_k (I - f_∅^{-1} f)^k f_∅^{-1}

        截断在 k = degree 处是精确的：更高的项只影响长度 > degree 的字。

        Raises:
            InputError: 非方阵
            SingularMatrixError: 常数项奇异
        """
        if self.rows != self.cols:
            raise InputError(f'invert: 需要方阵系数，实际形状 {self.shape}')
        f0_inv = inv_checked(self.coeff(EMPTY), '常数项 f_∅')
        g = FpsTable.identity(self.n_vars, self.rows, self.degree).sub(
            self.left_multiply(f0_inv))
        base = FpsTable.constant(self.n_vars, f0_inv, self.degree)
        result = base
        term = base
        for _ in range(self.degree):
            term = g.mul(term)
            if not term.coeffs:
                break
            result = result.add(term)
        return result

    def star(self) -> 'FpsTable':
        """伴随级数：(f*)_w = (f_{w^T})*"""
        return FpsTable(self.n_vars, self.cols, self.rows, self.degree,
                        {transpose(w): m.conj().T for w, m in self.coeffs.items()})

    def evaluate(self, Z: Sequence[np.ndarray]) -> np.ndarray:
        """
        在矩阵元组上求值 sum_{|w|<=d} f_w ⊗ Z^w

        Args:
            Z: N 个同阶 n x n 复矩阵

        Returns:
            (p n) x (q n) 矩阵

        Raises:
            InputError: 元组长度或矩阵阶数不一致
        """
        n = check_tuple(Z, self.n_vars)
        powers: Dict[Word, np.ndarray] = {EMPTY: np.eye(n, dtype=complex)}
        total = np.zeros((self.rows * n, self.cols * n), dtype=complex)
        for w, m in self.items():
            zw = powers.get(w)
            if zw is None:
                zw = _power(Z, w, powers)
            total += np.kron(m, zw)
        return total

    def max_abs_diff(self, other: 'FpsTable', degree: Optional[int] = None) -> float:
        """公共截断次数内逐系数差的最大 Frobenius 范数"""
        self._check_compatible(other, 'max_abs_diff')
        limit = min(self.degree, other.degree)
        if degree is not None:
            limit = min(limit, degree)
        words = {w for w in self.coeffs if len(w) <= limit} | \
                {w for w in other.coeffs if len(w) <= limit}
        if not words:
            return 0.0
        return max(float(np.linalg.norm(self.coeff(w) - other.coeff(w))) for w in words)


def check_tuple(Z: Sequence[np.ndarray], n_vars: int) -> int:
    """检查矩阵元组，返回公共阶数 n"""
    if len(Z) != n_vars:
        raise InputError(f'矩阵元组长度应为 {n_vars}，实际为 {len(Z)}')
    sizes = {np.shape(z) for z in Z}
    if len(sizes) != 1:
        raise InputError(f'矩阵元组阶数不一致: {sorted(sizes)}')
    shape = sizes.pop()
    if len(shape) != 2 or shape[0] != shape[1]:
        raise InputError(f'元组中的矩阵必须是方阵，实际形状 {shape}')
    return shape[0]


def _power(Z: Sequence[np.ndarray], w: Word, cache: Dict[Word, np.ndarray]) -> np.ndarray:
    """Z^w = Z_{i1} ... Z_{i|w|}，按前缀缓存"""
    prefix = w[:-1]
    base = cache.get(prefix)
    if base is None:
        base = _power(Z, prefix, cache)
    value = base @ np.asarray(Z[w[-1] - 1], dtype=complex)
    cache[w] = value
    return value


# ---------------------------------------------------------------------- JSON

def fps_from_dict(data: Dict) -> FpsTable:
    """
    解析级数文件 {"n_vars", "rows", "cols", "degree", "terms": [{"word", "matrix"}]}

    Raises:
        InputError: 字段缺失或系数形状不一致
    """
    try:
        n_vars, rows, cols = int(data['n_vars']), int(data['rows']), int(data['cols'])
        degree = int(data['degree'])
        coeffs: Dict[Word, np.ndarray] = {}
        for term in data['terms']:
            w = make_word(term['word'], n_vars)
            if w in coeffs:
                raise InputError(f'级数文件中字 {list(w)} 出现了两次')
            coeffs[w] = decode_matrix(term['matrix'], rows, cols, name=f'系数 {list(w)}')
    except KeyError as e:
        raise InputError(f'级数文件缺少字段: {e}') from e
    except TypeError as e:
        raise InputError(f'级数文件格式不合法: {e}') from e
    return FpsTable(n_vars, rows, cols, degree, coeffs)


def fps_to_dict(f: FpsTable) -> Dict:
    return {'n_vars': f.n_vars, 'rows': f.rows, 'cols': f.cols, 'degree': f.degree,
            'terms': [{'word': list(w), 'matrix': encode_matrix(m)} for w, m in f.items()]}
