"""
A 分块不变子空间族的启发式枚举：坐标子空间族 + 公共特征向量生成的族
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

import config
from classifiers.common_eigen import joint_eigenvectors
from classifiers.structured_hermitian import StructuredHermitian
from factorization.subspaces import SubspaceFamily, is_block_A_invariant, is_nondegenerate
from linalg_utils import component_slices
from realization.gr_node import GRNode

logger = logging.getLogger(__name__)


@dataclass
class InvariantFamily:
    """一个通过不变性检验的候选族"""

    family: SubspaceFamily
    source: str
    trivial: bool
    nondegenerate: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        out = {'source': self.source, 'ranks': self.family.ranks, 'trivial': self.trivial,
               **self.family.to_dict()}
        if self.nondegenerate is not None:
            out['nondegenerate'] = self.nondegenerate
        return out


def coordinate_families(dims: Sequence[int]) -> List[SubspaceFamily]:
    """所有由标准基向量张成的子空间族（共 2^r 个）"""
    r = sum(dims)
    if r > config.MAX_COORDINATE_FAMILY_STATES:
        logger.warning(f'状态维数 {r} 超过 {config.MAX_COORDINATE_FAMILY_STATES}，跳过坐标子空间族')
        return []
    per_component = []
    for d in dims:
        eye = np.eye(d, dtype=complex)
        choices = [eye[:, list(cols)] if cols else np.zeros((d, 0), dtype=complex)
                   for m in range(d + 1) for cols in itertools.combinations(range(d), m)]
        per_component.append(choices)
    return [SubspaceFamily(tuple(bases)) for bases in itertools.product(*per_component)]


def eigenvector_families(node: GRNode) -> List[SubspaceFamily]:
    """公共特征向量 x 给出 M_k = span(P_k x)，其中 A P_k x = λ_k x"""
    out = []
    for entry in joint_eigenvectors(node.A, node.dims):
        for col in range(entry.vectors.shape[1]):
            x = entry.vectors[:, col]
            out.append(SubspaceFamily.spanned_by([x[s] for s in component_slices(node.dims)]))
    return out


def enumerate_invariant_families(node: GRNode, H: Optional[StructuredHermitian] = None,
                                 max_results: Optional[int] = None) -> List[InvariantFamily]:
    """
    枚举 A 分块不变的子空间族（不保证完备）

    Args:
        node: GR 节点
        H: 相伴矩阵；给出时标记每个族是否非退化
        max_results: 最多返回的个数，默认 DEFAULT_MAX_FAMILIES

    Returns:
        去重后的 InvariantFamily 列表，平凡族（0 与全空间）也在其中并被标记
    """
    limit = config.DEFAULT_MAX_FAMILIES if max_results is None else max_results
    candidates = [(M, 'coordinate') for M in coordinate_families(node.dims)]
    candidates += [(M, 'eigenvector') for M in eigenvector_families(node)]

    with ThreadPoolExecutor(max_workers=config.MAX_WORKERS) as executor:
        flags = list(executor.map(lambda item: is_block_A_invariant(node, item[0]), candidates))

    found: List[InvariantFamily] = []
    for (M, source), invariant in zip(candidates, flags):
        if not invariant or any(M.same_as(f.family) for f in found):
            continue
        nondegenerate = is_nondegenerate(M, H.blocks) if H is not None else None
        found.append(InvariantFamily(M, source, M.is_trivial(), nondegenerate))
        if len(found) >= limit:
            break
    nontrivial = sum(not f.trivial for f in found)
    logger.info(f'不变子空间族: 候选 {len(candidates)}，不变 {len(found)}，非平凡 {nontrivial}')
    return found
