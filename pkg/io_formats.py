"""
JSON 文件格式编解码
复数统一编码为 [re, im] 二元数组，矩阵为按行嵌套的二元数组
"""
import json
import logging
import os
from typing import Any, Dict, List, Optional

import numpy as np

from errors import InputError

logger = logging.getLogger(__name__)


def encode_complex(value: complex) -> List[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def decode_complex(pair: Any) -> complex:
    """解码 [re, im]；同时接受单个实数"""
    if isinstance(pair, (int, float)):
        return complex(pair)
    if isinstance(pair, (list, tuple)) and len(pair) == 2 \
            and all(isinstance(x, (int, float)) for x in pair):
        return complex(pair[0], pair[1])
    raise InputError(f'复数必须编码为 [re, im]，实际为: {pair!r}')


def encode_matrix(matrix: np.ndarray) -> List[List[List[float]]]:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    return [[encode_complex(x) for x in row] for row in matrix]


def decode_matrix(data: Any, rows: Optional[int] = None, cols: Optional[int] = None,
                  name: str = 'matrix') -> np.ndarray:
    """
    解码按行嵌套的 [re, im] 矩阵

    Args:
        data: JSON 数据
        rows: 期望行数（用于空矩阵和形状校验）
        cols: 期望列数
        name: 字段名（用于错误信息）

    Returns:
        复矩阵

    Raises:
        InputError: 当格式或形状不合法时
    """
    if not isinstance(data, list):
        raise InputError(f'{name} 必须是嵌套数组')
    if len(data) == 0:
        return np.zeros((rows or 0, cols or 0), dtype=complex)
    try:
        out = np.array([[decode_complex(x) for x in row] for row in data], dtype=complex)
    except TypeError as e:
        raise InputError(f'{name} 格式不合法: {e}') from e
    if out.ndim != 2:
        raise InputError(f'{name} 行长度不一致')
    if rows is not None and out.shape[0] != rows:
        raise InputError(f'{name} 行数应为 {rows}，实际为 {out.shape[0]}')
    if cols is not None and out.shape[1] != cols:
        raise InputError(f'{name} 列数应为 {cols}，实际为 {out.shape[1]}')
    return out


def read_json(path: str) -> Dict[str, Any]:
    """读取 JSON 文件，文件缺失或格式错误时抛出 InputError"""
    if not os.path.exists(path):
        raise InputError(f'输入文件不存在: {path}')
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f'JSON 解析失败 ({path}): {e}') from e


def to_jsonable(value: Any) -> Any:
    """把 numpy 数组、复数、元组等递归转换为可序列化对象"""
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            if value.ndim == 2:
                return encode_matrix(value)
            return [to_jsonable(v) for v in value]
        return value.tolist()
    if isinstance(value, (complex, np.complexfloating)):
        return encode_complex(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dump_report(report: Dict[str, Any], output: Optional[str] = None) -> str:
    """
    序列化报告：键排序，浮点数使用最短往返表示，保证同一输入逐字节一致

    Args:
        report: 报告字典
        output: 输出文件路径，None 表示只返回字符串

    Returns:
        JSON 文本
    """
    text = json.dumps(to_jsonable(report), sort_keys=True, ensure_ascii=False, indent=2)
    if output:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
        logger.info(f'报告已写入 {output}')
    return text
