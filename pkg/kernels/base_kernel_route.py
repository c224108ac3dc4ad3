"""
核路线抽象基类
节点路线、级数路线、形式求导路线都实现 compute，由 route_factory 统一创建
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np

from classifiers.structured_hermitian import StructuredHermitian
from errors import InputError
from kernels.kernel_table import KernelTable
from realization.gr_node import GRNode
from series.fps import FpsTable


@dataclass
class KernelInputs:
    """各路线可能用到的输入，每条路线只读取自己需要的字段"""

    node: Optional[GRNode] = None
    f: Optional[FpsTable] = None
    H: Optional[StructuredHermitian] = None
    J: Optional[np.ndarray] = None


class BaseKernelRoute(ABC):
    """计算 K^{F,k} 的路线"""

    name: str = ''

    @abstractmethod
    def compute(self, inputs: KernelInputs, k: int, row_degree: int,
                col_degree: int) -> KernelTable:
        """
        计算核系数

        Args:
            inputs: 路线输入
            k: 分量（1 起始）
            row_degree: 行字长上限 |w|
            col_degree: 列字长上限 |w'|

        Returns:
            KernelTable
        """
        pass

    def require(self, inputs: KernelInputs, *names: str) -> None:
        """缺少所需字段时抛出 InputError"""
        missing = [name for name in names if getattr(inputs, name) is None]
        if missing:
            raise InputError(f'核路线 {self.name} 缺少输入: {", ".join(missing)}')
