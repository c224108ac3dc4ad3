"""核计算路线工厂模块，负责创建路线实例并并行比较三条路线"""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

import config
from kernels.base_kernel_route import BaseKernelRoute, KernelInputs
from kernels.formal_route import FormalKernelRoute
from kernels.kernel_table import KernelTable
from kernels.node_route import NodeKernelRoute
from kernels.series_route import SeriesKernelRoute

logger = logging.getLogger(__name__)

ROUTES: List[str] = ['node', 'series', 'formal']


def create_kernel_route(route: str) -> BaseKernelRoute:
    """
    创建核计算路线

    Args:
        route: 'node'、'series' 或 'formal'

    Returns:
        BaseKernelRoute: 路线实例

    Raises:
        ValueError: 当路线不支持时
    """
    if route == 'node':
        return NodeKernelRoute()
    elif route == 'series':
        return SeriesKernelRoute()
    elif route == 'formal':
        return FormalKernelRoute()
    else:
        raise ValueError(f'不支持的核路线: {route}（可选: {", ".join(ROUTES)}）')


def compare_routes(inputs: KernelInputs, k: int, degree: int,
                   routes: Optional[Sequence[str]] = None) -> Dict:
    """
    并行运行多条路线并给出两两最大差

    Args:
        inputs: 各路线所需的输入
        k: 分量
        degree: 行、列字长上限
        routes: 参与比较的路线，默认全部

    Returns:
        {'tables': {route: KernelTable}, 'differences': {'a-b': float}, 'hermitian_defects': {...}}
    """
    routes = list(routes or ROUTES)
    instances = [create_kernel_route(name) for name in routes]
    with ThreadPoolExecutor(max_workers=config.MAX_WORKERS) as executor:
        futures = [executor.submit(route.compute, inputs, k, degree, degree) for route in instances]
        tables: Dict[str, KernelTable] = {name: fut.result() for name, fut in zip(routes, futures)}
    differences = {f'{a}-{b}': tables[a].max_abs_diff(tables[b])
                   for a, b in itertools.combinations(routes, 2)}
    defects = {name: table.hermitian_defect() for name, table in tables.items()}
    logger.info(f'核路线比较 k={k}, degree={degree}: {differences}')
    return {'tables': tables, 'differences': differences, 'hermitian_defects': defects}
