"""分类器工厂模块，按 --case 选择性质判定的实现"""
from __future__ import annotations

from typing import List

from classifiers.base_classifier import BaseClassifier
from classifiers.circle_junitary import CircleJUnitaryClassifier
from classifiers.inner import InnerDiskClassifier, InnerLineClassifier
from classifiers.line_junitary import LineJUnitaryClassifier
from classifiers.selfadjoint import SelfadjointCircleClassifier, SelfadjointLineClassifier

CASES: List[str] = ['line', 'circle', 'inner-line', 'inner-disk', 'sa-line', 'sa-circle']


def create_classifier(case: str) -> BaseClassifier:
    """
    创建分类器实例

    Args:
        case: 'line'、'circle'、'inner-line'、'inner-disk'、'sa-line' 或 'sa-circle'

    Returns:
        BaseClassifier: 分类器实例

    Raises:
        ValueError: 当情形不支持时
    """
    if case == 'line':
        return LineJUnitaryClassifier()
    elif case == 'circle':
        return CircleJUnitaryClassifier()
    elif case == 'inner-line':
        return InnerLineClassifier()
    elif case == 'inner-disk':
        return InnerDiskClassifier()
    elif case == 'sa-line':
        return SelfadjointLineClassifier()
    elif case == 'sa-circle':
        return SelfadjointCircleClassifier()
    else:
        raise ValueError(f'不支持的判定情形: {case}（可选: {", ".join(CASES)}）')
