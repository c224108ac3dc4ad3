"""
异常定义
库函数只负责抛出，退出码由 main.py 统一映射
"""
from typing import Any, Dict, Optional

import numpy as np


class InputError(ValueError):
    """输入格式、形状或取值不合法（退出码 2）"""


class NotMinimalError(InputError):
    """要求最小实现的操作收到了非最小节点（退出码 2）"""


class NumericalError(RuntimeError):
    """数值计算失败：秩不稳定、相似变换残差过大等（退出码 3）"""


class SingularMatrixError(NumericalError):
    """需要求逆的矩阵奇异（退出码 3）"""


class ClassificationError(Exception):
    """被检验的性质不成立（退出码 1），附带所依据的残差和维数、负平方数等细节"""

    def __init__(self, message: str, residuals: Optional[Dict[str, float]] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.residuals: Dict[str, float] = dict(residuals or {})
        self.details: Dict[str, Any] = dict(details or {})


EXIT_OK = 0
EXIT_PROPERTY_FAILS = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


def exit_code_for(error: BaseException) -> int:
    """
    将异常映射为 CLI 退出码

    Args:
        error: 捕获到的异常

    Returns:
        对应的退出码
    """
    if isinstance(error, ClassificationError):
        return EXIT_PROPERTY_FAILS
    if isinstance(error, InputError):
        return EXIT_INPUT_ERROR
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL_ERROR
    # LinAlgError 是 ValueError 的子类
    if isinstance(error, np.linalg.LinAlgError):
        return EXIT_NUMERICAL_ERROR
    if isinstance(error, (ValueError, KeyError, FileNotFoundError)):
        return EXIT_INPUT_ERROR
    return EXIT_NUMERICAL_ERROR
