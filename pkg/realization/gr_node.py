"""
Givone–Roesser 节点
状态空间按分量依次排列（分量 k 占 r_k 维），所有运算返回新节点
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import InputError, SingularMatrixError
from io_formats import decode_matrix, encode_matrix
from linalg_utils import (as_complex_matrix, block_diag, component_slices, ensure_invertible,
                          inv_checked, offsets)
from series.fps import FpsTable, check_tuple
from series.words import EMPTY, Word, make_word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GRNode:
    """N 维 GR 节点 (N; A, B, C, D)，分量维数 dims = (r_1, …, r_N)"""

    n_vars: int
    dims: Tuple[int, ...]
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        if self.n_vars < 1:
            raise InputError(f'变元个数必须 >= 1，实际为 {self.n_vars}')
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != self.n_vars or any(d < 0 for d in dims):
            raise InputError(f'dims 必须是 {self.n_vars} 个非负整数，实际为 {list(self.dims)}')
        r = sum(dims)
        D = as_complex_matrix(self.D, name='D')
        p, q = D.shape
        object.__setattr__(self, 'dims', dims)
        object.__setattr__(self, 'D', D)
        object.__setattr__(self, 'A', as_complex_matrix(self.A, r, r, name='A'))
        object.__setattr__(self, 'B', as_complex_matrix(self.B, r, q, name='B'))
        object.__setattr__(self, 'C', as_complex_matrix(self.C, p, r, name='C'))

    @property
    def r(self) -> int:
        return sum(self.dims)

    @property
    def p(self) -> int:
        return self.D.shape[0]

    @property
    def q(self) -> int:
        return self.D.shape[1]

    @property
    def slices(self) -> List[slice]:
        return component_slices(self.dims)

    def A_block(self, k: int, j: int) -> np.ndarray:
        """A_{kj}（分量 1 起始）"""
        s = self.slices
        return self.A[s[k - 1], s[j - 1]]

    def B_block(self, k: int) -> np.ndarray:
        return self.B[self.slices[k - 1], :]

    def C_block(self, k: int) -> np.ndarray:
        return self.C[:, self.slices[k - 1]]

    def colligation(self) -> np.ndarray:
        """[[A, B], [C, D]]"""
        return np.block([[self.A, self.B], [self.C, self.D]])

    def describe(self) -> Dict[str, Any]:
        return {'n_vars': self.n_vars, 'dims': list(self.dims), 'r': self.r,
                'p': self.p, 'q': self.q}


def constant_node(D, n_vars: int) -> GRNode:
    """r = 0 的节点，传递函数为常数 D"""
    D = as_complex_matrix(D, name='D')
    p, q = D.shape
    return GRNode(n_vars, (0,) * n_vars, np.zeros((0, 0)), np.zeros((0, q)),
                  np.zeros((p, 0)), D)


# ---------------------------------------------------------------------- 传递函数

def _prefix_products(node: GRNode, max_len: int):
    """
    按分级字典序逐层生成 P(w) = C_{i1} A_{i1 i2} … A_{i(m-1) im}

    Yields:
        (w, P(w))，w 非空且 |w| <= max_len
    """
    if max_len < 1:
        return
    layer: List[Tuple[Word, np.ndarray]] = []
    for j in range(1, node.n_vars + 1):
        layer.append(((j,), node.C_block(j)))
    for w, P in layer:
        yield w, P
    for _ in range(max_len - 1):
        nxt: List[Tuple[Word, np.ndarray]] = []
        for w, P in layer:
            last = w[-1]
            for j in range(1, node.n_vars + 1):
                nxt.append((w + (j,), P @ node.A_block(last, j)))
        layer = nxt
        for w, P in layer:
            yield w, P


def transfer_coeff(node: GRNode, w: Sequence[int]) -> np.ndarray:
    """
    传递级数系数 (C♭A♯B)^w

    Args:
        node: GR 节点
        w: 字（字母 1..N）

    Returns:
        p x q 复矩阵；空字返回 D
    """
    w = make_word(w, node.n_vars)
    if w == EMPTY:
        return node.D.copy()
    P = node.C_block(w[0])
    for a, b in zip(w, w[1:]):
        P = P @ node.A_block(a, b)
    return P @ node.B_block(w[-1])


def expand(node: GRNode, degree: int) -> FpsTable:
    """截断到 degree 的传递级数展开"""
    if degree < 0:
        raise InputError(f'截断次数必须 >= 0，实际为 {degree}')
    coeffs: Dict[Word, np.ndarray] = {EMPTY: node.D}
    if node.r > 0:
        for w, P in _prefix_products(node, degree):
            coeffs[w] = P @ node.B_block(w[-1])
    return FpsTable(node.n_vars, node.p, node.q, degree, coeffs)


def delta_matrix(dims: Sequence[int], Z: Sequence[np.ndarray]) -> np.ndarray:
    """Δ(Z) = diag(I_{r_1}⊗Z_1, …, I_{r_N}⊗Z_N)"""
    return block_diag([np.kron(np.eye(d), np.asarray(z, dtype=complex))
                       for d, z in zip(dims, Z)])


def resolvent(node: GRNode, Z: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """
    计算 (I - Δ(Z)(A⊗I_n))^{-1} 与 Δ(Z)

    Raises:
        SingularMatrixError: 预解式奇异
    """
    n = check_tuple(Z, node.n_vars)
    delta = delta_matrix(node.dims, Z)
    m = np.eye(node.r * n) - delta @ np.kron(node.A, np.eye(n))
    return inv_checked(m, '预解式 I - Δ(Z)A'), delta


def eval_closed(node: GRNode, Z: Sequence[np.ndarray]) -> np.ndarray:
    """
    闭式求值 (D⊗I) + (C⊗I)(I - Δ(Z)(A⊗I))^{-1} Δ(Z)(B⊗I)

    Args:
        node: GR 节点
        Z: N 个 n x n 矩阵

    Returns:
        (p n) x (q n) 矩阵

    Raises:
        InputError: 元组形状不合法
        SingularMatrixError: 预解式奇异
    """
    n = check_tuple(Z, node.n_vars)
    eye = np.eye(n)
    value = np.kron(node.D, eye)
    if node.r == 0:
        return value
    res, delta = resolvent(node, Z)
    return value + np.kron(node.C, eye) @ res @ delta @ np.kron(node.B, eye)


# ---------------------------------------------------------------------- 节点代数

def _interleave(first_dims: Sequence[int], second_dims: Sequence[int]) -> np.ndarray:
    """把 [x'; x''] 重排为按分量交错 (x'_1, x''_1, x'_2, x''_2, …) 的下标"""
    off1 = offsets(first_dims)
    off2 = offsets(second_dims)
    shift = off1[-1]
    perm: List[int] = []
    for k in range(len(first_dims)):
        perm.extend(range(off1[k], off1[k + 1]))
        perm.extend(range(shift + off2[k], shift + off2[k + 1]))
    return np.asarray(perm, dtype=int)


def _check_same_vars(a: GRNode, b: GRNode, what: str) -> None:
    if a.n_vars != b.n_vars:
        raise InputError(f'{what}: 变元个数不一致 ({a.n_vars} != {b.n_vars})')


def _permuted(n_vars: int, dims: Sequence[int], perm: np.ndarray,
              A: np.ndarray, B: np.ndarray, C: np.ndarray, D: np.ndarray) -> GRNode:
    return GRNode(n_vars, tuple(dims), A[np.ix_(perm, perm)], B[perm, :], C[:, perm], D)


def product(a: GRNode, b: GRNode) -> GRNode:
    """
    节点乘积，实现 F'·F''

    分量 k 的状态先放 F' 的 r'_k 维，再放 F'' 的 r''_k 维。

    Raises:
        InputError: 变元个数或外部维数不匹配
    """
    _check_same_vars(a, b, 'product')
    if a.q != b.p:
        raise InputError(f'product: 外部维数不匹配 (q\'={a.q}, p\'\'={b.p})')
    A = np.block([[a.A, a.B @ b.C], [np.zeros((b.r, a.r)), b.A]])
    B = np.vstack([a.B @ b.D, b.B])
    C = np.hstack([a.C, a.D @ b.C])
    dims = [x + y for x, y in zip(a.dims, b.dims)]
    return _permuted(a.n_vars, dims, _interleave(a.dims, b.dims), A, B, C, a.D @ b.D)


def direct_sum(a: GRNode, b: GRNode) -> GRNode:
    """加法节点，实现 F' + F''"""
    _check_same_vars(a, b, 'direct_sum')
    if a.D.shape != b.D.shape:
        raise InputError(f'direct_sum: 外部维数不一致 {a.D.shape} != {b.D.shape}')
    A = block_diag([a.A, b.A])
    B = np.vstack([a.B, b.B])
    C = np.hstack([a.C, b.C])
    dims = [x + y for x, y in zip(a.dims, b.dims)]
    return _permuted(a.n_vars, dims, _interleave(a.dims, b.dims), A, B, C, a.D + b.D)


def adjoint(node: GRNode) -> GRNode:
    """伴随节点 (A*, C*, B*, D*)"""
    return GRNode(node.n_vars, node.dims, node.A.conj().T, node.C.conj().T,
                  node.B.conj().T, node.D.conj().T)


def associated(node: GRNode) -> GRNode:
    """
    相伴节点 α×，实现 F^{-1}

    Raises:
        InputError: D 非方阵
        SingularMatrixError: D 奇异
    """
    if node.p != node.q:
        raise InputError(f'associated: D 必须是方阵，实际形状 {node.D.shape}')
    D_inv = inv_checked(node.D, 'D')
    return GRNode(node.n_vars, node.dims,
                  node.A - node.B @ D_inv @ node.C,
                  node.B @ D_inv,
                  -D_inv @ node.C,
                  D_inv)


def as_block_diagonal(T, dims: Sequence[int]) -> np.ndarray:
    """接受分块列表或整块矩阵，返回分块对角矩阵并检查非对角块为零"""
    if isinstance(T, (list, tuple)):
        blocks = [as_complex_matrix(t, d, d, name=f'T_{k + 1}') for k, (t, d)
                  in enumerate(zip(T, dims))]
        if len(blocks) != len(dims):
            raise InputError(f'相似变换需要 {len(dims)} 个分块，实际为 {len(T)}')
        return block_diag(blocks)
    r = sum(dims)
    T = as_complex_matrix(T, r, r, name='T')
    mask = block_diag([np.ones((d, d)) for d in dims])
    if np.linalg.norm(T * (1 - mask)) > 0:
        raise InputError('相似变换必须是分块对角矩阵')
    return T


def apply_similarity(node: GRNode, T) -> GRNode:
    """
    (T^{-1}AT, T^{-1}B, CT, D)

    Args:
        node: GR 节点
        T: 分块列表 [T_1, …, T_N] 或分块对角矩阵

    Raises:
        SingularMatrixError: 某个 T_k 奇异
    """
    T = as_block_diagonal(T, node.dims)
    for k, s in enumerate(node.slices):
        ensure_invertible(T[s, s], f'T_{k + 1}')
    if node.r == 0:
        return node
    T_inv = np.linalg.inv(T)
    return GRNode(node.n_vars, node.dims, T_inv @ node.A @ T, T_inv @ node.B,
                  node.C @ T, node.D)


def place_in_variable(node: GRNode, n_vars: int, k: int) -> GRNode:
    """把单变元节点嵌入为 n_vars 元节点的第 k 个分量"""
    if node.n_vars != 1:
        raise InputError(f'place_in_variable 只接受单变元节点，实际 N={node.n_vars}')
    if not 1 <= k <= n_vars:
        raise InputError(f'分量 {k} 超出范围 1..{n_vars}')
    dims = [0] * n_vars
    dims[k - 1] = node.r
    return GRNode(n_vars, tuple(dims), node.A, node.B, node.C, node.D)


def restrict(node: GRNode, left: Sequence[np.ndarray], right: Sequence[np.ndarray]) -> GRNode:
    """
    分块压缩 (L* A R, L* B, C R, D)，L_k 与 R_k 满足 L_k* R_k = I

    Args:
        left: 每个分量的左基 L_k (r_k x m_k)
        right: 每个分量的右基 R_k (r_k x m_k)
    """
    L = block_diag(left)
    R = block_diag(right)
    dims = tuple(b.shape[1] for b in right)
    return GRNode(node.n_vars, dims, L.conj().T @ node.A @ R, L.conj().T @ node.B,
                  node.C @ R, node.D)


# ---------------------------------------------------------------------- JSON

def node_from_dict(data: Dict[str, Any]) -> GRNode:
    """
    从 JSON 对象构造节点

    Raises:
        InputError: 字段缺失或形状不一致
    """
    try:
        n_vars = int(data['n_vars'])
        dims = [int(d) for d in data['dims']]
        D = decode_matrix(data['D'], name='D')
        p, q = D.shape
        r = sum(dims)
        A = decode_matrix(data['A'], r, r, name='A')
        B = decode_matrix(data['B'], r, q, name='B')
        C = decode_matrix(data['C'], p, r, name='C')
    except KeyError as e:
        raise InputError(f'节点文件缺少字段: {e}') from e
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f'节点文件格式不合法: {e}') from e
    return GRNode(n_vars, tuple(dims), A, B, C, D)


def node_to_dict(node: GRNode, J: Optional[np.ndarray] = None) -> Dict[str, Any]:
    data = {'n_vars': node.n_vars, 'dims': list(node.dims),
            'A': encode_matrix(node.A) if node.r else [],
            'B': encode_matrix(node.B) if node.r else [],
            'C': encode_matrix(node.C) if node.r else [],
            'D': encode_matrix(node.D)}
    if J is not None:
        data['J'] = encode_matrix(J)
    return data
