"""
输入路径解析：内置示例节点 desk_nodes/*.json 与用户给出的文件路径
源码目录和 PyInstaller 打包目录（_MEIPASS）都能找到 desk_nodes/
"""
import os
import sys
from typing import List

DESK_NODES_DIR = 'desk_nodes'
DESK_PREFIX = 'desk:'


def get_base_path() -> str:
    """打包运行时为 _MEIPASS，否则为本文件所在目录"""
    if getattr(sys, 'frozen', False) and hasattr(sys, '_MEIPASS'):
        return sys._MEIPASS
    return os.path.dirname(os.path.abspath(__file__))


def get_resource_path(relative_path: str) -> str:
    """
    把相对于项目根目录的路径（例如 'desk_nodes/e1.json'）转成绝对路径
    """
    return os.path.join(get_base_path(), relative_path)


def get_desk_node_path(name: str) -> str:
    """获取内置示例节点文件路径，name 不含扩展名，例如 'e1'"""
    return get_resource_path(os.path.join(DESK_NODES_DIR, f'{name}.json'))


def list_desk_nodes() -> List[str]:
    """列出所有内置示例节点名称"""
    directory = get_resource_path(DESK_NODES_DIR)
    if not os.path.isdir(directory):
        return []
    return sorted(f[:-5] for f in os.listdir(directory) if f.endswith('.json'))


def resolve_input_path(spec: str) -> str:
    """
    解析 --input 参数：'desk:<name>' 映射到内置示例，其余原样返回

    Args:
        spec: 命令行给出的输入

    Returns:
        文件路径
    """
    if spec.startswith(DESK_PREFIX):
        return get_desk_node_path(spec[len(DESK_PREFIX):])
    return spec
