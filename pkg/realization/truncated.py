"""
截断能观/能控矩阵、Hankel 矩阵与极小性判定
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from errors import InputError
from linalg_utils import numerical_rank
from realization.gr_node import GRNode
from series.fps import FpsTable
from series.words import EMPTY, Word, enumerate_words, transpose, word_to_text

logger = logging.getLogger(__name__)


def obs_word_bound(node: GRNode) -> int:
    """Õ_k 中字长的上界（不含）：p·r"""
    return node.p * node.r


def ctrl_word_bound(node: GRNode) -> int:
    """C̃_k 中字长的上界（不含）：r·q"""
    return node.r * node.q


def obs_rows(node: GRNode, k: int, max_len: int) -> Iterator[Tuple[Word, np.ndarray]]:
    """
    逐个生成 (C♭A)^{w g_k}，|w| <= max_len，分级字典序

    X(∅) = C_k，X(w) = P(w) A_{last(w), k}，P 为 C♭A 的前缀乘积。
    """
    _check_component(node, k)
    if max_len < 0:
        return
    yield EMPTY, node.C_block(k)
    layer: List[Tuple[Word, np.ndarray]] = [(EMPTY, None)]
    for _ in range(max_len):
        nxt: List[Tuple[Word, np.ndarray]] = []
        for w, P in layer:
            for j in range(1, node.n_vars + 1):
                P_new = node.C_block(j) if not w else P @ node.A_block(w[-1], j)
                nxt.append((w + (j,), P_new))
        layer = nxt
        for w, P in layer:
            yield w, P @ node.A_block(w[-1], k)


def ctrl_cols(node: GRNode, k: int, max_len: int) -> Iterator[Tuple[Word, np.ndarray]]:
    """
    逐个生成 (A♯B)^{g_k w^T}，|w| <= max_len，分级字典序

    Y(∅) = B_k，Y(w) = A_{k, last(w)} Q(w)，Q(g_j) = B_j，Q(w g_j) = A_{j, last(w)} Q(w)。
    """
    _check_component(node, k)
    if max_len < 0:
        return
    yield EMPTY, node.B_block(k)
    layer: List[Tuple[Word, np.ndarray]] = [(EMPTY, None)]
    for _ in range(max_len):
        nxt: List[Tuple[Word, np.ndarray]] = []
        for w, Q in layer:
            for j in range(1, node.n_vars + 1):
                Q_new = node.B_block(j) if not w else node.A_block(j, w[-1]) @ Q
                nxt.append((w + (j,), Q_new))
        layer = nxt
        for w, Q in layer:
            yield w, node.A_block(k, w[-1]) @ Q


def truncated_obs(node: GRNode, k: int, max_len: Optional[int] = None) -> np.ndarray:
    """
    第 k 个截断能观矩阵 Õ_k：按字 |w| < p·r 纵向堆叠 (C♭A)^{w g_k}

    Args:
        node: GR 节点
        k: 分量（1 起始）
        max_len: 字长上限（含），默认 p·r - 1

    Returns:
        (p · #words) x r_k 矩阵
    """
    if max_len is None:
        max_len = obs_word_bound(node) - 1
    rows = [X for _, X in obs_rows(node, k, max_len)]
    if not rows:
        return np.zeros((0, node.dims[k - 1]), dtype=complex)
    return np.vstack(rows)


def truncated_ctrl(node: GRNode, k: int, max_len: Optional[int] = None) -> np.ndarray:
    """第 k 个截断能控矩阵 C̃_k：按字 |w| < r·q 横向拼接 (A♯B)^{g_k w^T}"""
    if max_len is None:
        max_len = ctrl_word_bound(node) - 1
    cols = [Y for _, Y in ctrl_cols(node, k, max_len)]
    if not cols:
        return np.zeros((node.dims[k - 1], 0), dtype=complex)
    return np.hstack(cols)


@dataclass
class MinimalityReport:
    """能观/能控秩报告"""

    dims: List[int]
    obs_ranks: List[int] = field(default_factory=list)
    ctrl_ranks: List[int] = field(default_factory=list)

    @property
    def observable(self) -> bool:
        return all(rk == d for rk, d in zip(self.obs_ranks, self.dims))

    @property
    def controllable(self) -> bool:
        return all(rk == d for rk, d in zip(self.ctrl_ranks, self.dims))

    @property
    def minimal(self) -> bool:
        return self.observable and self.controllable

    def to_dict(self) -> Dict:
        return {'dims': self.dims, 'obs_ranks': self.obs_ranks, 'ctrl_ranks': self.ctrl_ranks,
                'observable': self.observable, 'controllable': self.controllable,
                'minimal': self.minimal}


def minimality_report(node: GRNode) -> MinimalityReport:
    report = MinimalityReport(dims=list(node.dims))
    for k in range(1, node.n_vars + 1):
        report.obs_ranks.append(numerical_rank(truncated_obs(node, k)))
        report.ctrl_ranks.append(numerical_rank(truncated_ctrl(node, k)))
    logger.debug(f'极小性报告: {report.to_dict()}')
    return report


def is_observable(node: GRNode) -> bool:
    return minimality_report(node).observable


def is_controllable(node: GRNode) -> bool:
    return minimality_report(node).controllable


def is_minimal(node: GRNode) -> bool:
    return minimality_report(node).minimal


def observability_controllability_agree(node: GRNode) -> bool:
    """具有可逆结构 Hermite 矩阵的节点应满足：能观 ⇔ 能控"""
    report = minimality_report(node)
    agree = report.observable == report.controllable
    if not agree:
        logger.warning(f'能观性与能控性不一致: obs={report.obs_ranks}, '
                       f'ctrl={report.ctrl_ranks}, dims={report.dims}')
    return agree


def hankel(f: FpsTable, k: int, row_deg: int, col_deg: int) -> np.ndarray:
    """
    第 k 个 Hankel 矩阵，元素 f_{w g_k w'^T}

    Args:
        f: 截断级数
        k: 分量
        row_deg: 行字长上限
        col_deg: 列字长上限

    Raises:
        InputError: row_deg + 1 + col_deg 超过级数截断次数
    """
    if not 1 <= k <= f.n_vars:
        raise InputError(f'分量 {k} 超出范围 1..{f.n_vars}')
    if row_deg < 0 or col_deg < 0:
        raise InputError('Hankel 行/列字长上限必须非负')
    if row_deg + 1 + col_deg > f.degree:
        raise InputError(f'级数截断次数不足: 需要 {row_deg + 1 + col_deg}，实际为 {f.degree}')
    rows = enumerate_words(f.n_vars, row_deg)
    cols = enumerate_words(f.n_vars, col_deg)
    blocks = [[f.coeff(w + (k,) + transpose(w2)) for w2 in cols] for w in rows]
    logger.debug(f'Hankel 矩阵 k={k}: {len(rows)} 行字 x {len(cols)} 列字，'
                 f'首字 {word_to_text(rows[0])}')
    return np.block(blocks)


def _check_component(node: GRNode, k: int) -> None:
    if not 1 <= k <= node.n_vars:
        raise InputError(f'分量 {k} 超出范围 1..{node.n_vars}')
