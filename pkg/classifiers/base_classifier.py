"""
分类器抽象基类
定义了对节点做性质判定（J-酉、J-内、自伴）的通用接口
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from classifiers.structured_hermitian import StructuredHermitian
from errors import ClassificationError
from realization.gr_node import GRNode


@dataclass
class ClassificationResult:
    """性质判定结果及其所依据的残差"""

    case: str
    holds: bool
    H: Optional[StructuredHermitian] = None
    residuals: Dict[str, float] = field(default_factory=dict)
    reason: str = ''
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'case': self.case, 'holds': self.holds}
        if self.H is not None:
            out['H'] = self.H.matrix
            out['nu'] = self.H.negative_squares
            out['signature'] = [list(s) for s in self.H.signature]
        if self.reason:
            out['reason'] = self.reason
        out.update(self.details)
        return out


class BaseClassifier(ABC):
    """分类器抽象基类"""

    case: str = ''

    @abstractmethod
    def classify(self, node: GRNode, J: np.ndarray) -> ClassificationResult:
        """
        判定节点是否具有该分类器对应的性质

        Args:
            node: 极小 GR 节点
            J: 签名矩阵

        Returns:
            ClassificationResult；性质不成立时 holds=False 并附带原因
        """
        pass

    def negative(self, error: ClassificationError, **details) -> ClassificationResult:
        """把 ClassificationError 转换为否定结果"""
        return ClassificationResult(self.case, False, residuals=error.residuals,
                                    reason=str(error), details={**error.details, **details})
