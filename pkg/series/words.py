"""
自由半群 F_N 上的字（word）
字用整数元组表示，字母取 1..N；空元组即空字
"""
from itertools import product
from typing import Iterable, List, Sequence, Tuple

from errors import InputError

Word = Tuple[int, ...]

EMPTY: Word = ()


def make_word(letters: Iterable[int], n_vars: int) -> Word:
    """
    从字母序列构造字并校验字母范围

    Args:
        letters: 字母序列（1 起始）
        n_vars: 字母表大小 N

    Returns:
        Word

    Raises:
        InputError: 当字母不在 1..N 内时
    """
    word = tuple(int(x) for x in letters)
    for x in word:
        if not 1 <= x <= n_vars:
            raise InputError(f'字母 {x} 超出范围 1..{n_vars}')
    return word


def letter(k: int) -> Word:
    """单字母字 g_k"""
    return (int(k),)


def concat(w: Word, w2: Word) -> Word:
    return tuple(w) + tuple(w2)


def transpose(w: Word) -> Word:
    return tuple(reversed(w))


def word_key(w: Word) -> Tuple[int, Word]:
    """分级字典序的排序键：先比长度，再按字母序列"""
    return len(w), tuple(w)


def words_of_length(n_vars: int, length: int) -> List[Word]:
    """长度恰为 length 的全部字，字典序"""
    return [tuple(p) for p in product(range(1, n_vars + 1), repeat=length)]


def enumerate_words(n_vars: int, max_len: int) -> List[Word]:
    """
    枚举所有长度 <= max_len 的字（分级字典序）

    Args:
        n_vars: 字母表大小 N >= 1
        max_len: 最大长度 >= 0（负数返回空列表）

    Returns:
        字列表，个数为 sum_{k<=max_len} N^k
    """
    if n_vars < 1:
        raise InputError(f'字母表大小必须 >= 1，实际为 {n_vars}')
    out: List[Word] = []
    for m in range(max_len + 1):
        out.extend(words_of_length(n_vars, m))
    return out


def word_to_text(w: Sequence[int]) -> str:
    """显示形式，例如 g1g2；空字显示为 ∅"""
    if not w:
        return '∅'
    return ''.join(f'g{x}' for x in w)
