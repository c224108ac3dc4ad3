import argparse
import logging
import sys
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from dotenv import load_dotenv

from classifiers.circle_junitary import (associated_H_circle, cayley, choose_cayley_parameter,
                                         complete_from_AB_circle, complete_from_CA_circle,
                                         sample_check_circle, unitary_circle_diagnostics)
from classifiers.classifier_factory import CASES, create_classifier
from classifiers.inner import (balance, disk_contractivity_sample, halfplane_contractivity_sample,
                               schur_agler_sample, unitary_node_check)
from classifiers.line_junitary import (associated_H_line, complete_from_AB, complete_from_CA,
                                       sample_check_line, unitary_line_diagnostics)
from classifiers.selfadjoint import (circle_selfadjoint_decompose, is_matrix_selfadjoint_circle,
                                     is_matrix_selfadjoint_line, selfadjoint_decompose,
                                     selfadjoint_sample_check)
from errors import ClassificationError, EXIT_OK, EXIT_PROPERTY_FAILS, InputError, exit_code_for
from factorization.factorize import (minimal_junitary_factorize_circle,
                                     minimal_junitary_factorize_line)
from factorization.invariant_search import enumerate_invariant_families
from factorization.subspaces import SubspaceFamily
from io_formats import decode_matrix, dump_report, read_json
from kernels.base_kernel_route import KernelInputs
from kernels.kernel_table import kernel_gram, spanning_pairs
from kernels.model_realization import model_realization
from kernels.route_factory import ROUTES, compare_routes, create_kernel_route
from linalg_utils import numerical_rank
from realization.desk_nodes import node_with_signature, resolve_signature
from realization.gr_node import GRNode, eval_closed, expand, node_to_dict
from realization.reduction import reduce_to_minimal
from realization.sampling import epsilon_for, gamma_tuple
from realization.truncated import hankel, minimality_report, observability_controllability_agree
from resource_path import resolve_input_path
from series.fps import FpsTable, fps_from_dict, fps_to_dict

# 导入配置
import config

# 加载 .env 文件中的环境变量
load_dotenv()

# 配置日志
logging.basicConfig(level=getattr(logging, config.LOG_LEVEL))
logger = logging.getLogger(__name__)

# 命令处理函数返回 (result, residuals, 性质是否成立)
Outcome = Tuple[Dict[str, Any], Dict[str, float], bool]

DEFAULT_EXPAND_DEGREE = 4
DEFAULT_MODEL_DEGREE = 8
DEFAULT_KERNEL_DEGREE = 2


# ============ 输入加载 ============

class LoadedInput:
    """--input 指向的节点或级数，以及文件中附带的 J"""

    def __init__(self, node: Optional[GRNode], series: Optional[FpsTable],
                 J: Optional[np.ndarray]):
        self.node = node
        self.series = series
        self.file_J = J

    def require_node(self) -> GRNode:
        if self.node is None:
            raise InputError('该命令需要节点文件作为输入（当前输入是级数文件）')
        return self.node

    def series_up_to(self, degree: int) -> FpsTable:
        if self.series is not None:
            return self.series
        return expand(self.node, degree)

    @property
    def size(self) -> int:
        return self.node.q if self.node is not None else self.series.cols


def load_input(spec: Optional[str]) -> LoadedInput:
    """读取节点文件或级数文件（含 "terms" 字段），支持 desk:<name>"""
    if not spec:
        raise InputError('缺少 --input')
    data = read_json(resolve_input_path(spec))
    if not isinstance(data, dict):
        raise InputError(f'输入文件必须是 JSON 对象: {spec}')
    if 'terms' in data:
        series = fps_from_dict(data)
        logger.info(f'已加载级数 {spec}: N={series.n_vars}, {series.rows}x{series.cols}, '
                    f'截断次数 {series.degree}')
        return LoadedInput(None, series, None)
    node, J = node_with_signature(data, spec)
    return LoadedInput(node, None, J)


def signature_for(args: argparse.Namespace, loaded: LoadedInput) -> np.ndarray:
    """--j 优先，其次输入文件中的 J，否则单位阵"""
    return resolve_signature(loaded.size, loaded.file_J, args.j)


def parse_complex(text: Optional[str]) -> Optional[complex]:
    """'re,im' 或 're' 解析为复数"""
    if text is None:
        return None
    try:
        parts = [float(x) for x in text.split(',')]
    except ValueError as e:
        raise InputError(f'无法解析复数参数: {text}') from e
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise InputError(f'复数参数格式应为 re,im: {text}')


def load_subspace(path: Optional[str], node: GRNode) -> SubspaceFamily:
    if not path:
        raise InputError('需要 --subspace 文件')
    return SubspaceFamily.from_dict(read_json(resolve_input_path(path)), node.dims)


def load_params(path: Optional[str]) -> Dict[str, np.ndarray]:
    """--params 文件：可选的 "D1"、"D2"、"S" 矩阵"""
    if not path:
        return {}
    data = read_json(resolve_input_path(path))
    return {key: decode_matrix(data[key], name=key) for key in ('D1', 'D2', 'S') if key in data}


def sample_sizes(args: argparse.Namespace):
    return range(1, max(1, args.matrix_size) + 1)


# ============ 命令实现 ============

def cmd_expand(args, loaded: LoadedInput) -> Outcome:
    degree = args.degree if args.degree is not None else DEFAULT_EXPAND_DEGREE
    f = loaded.series_up_to(degree)
    if loaded.series is not None:
        f = f.truncate(min(degree, f.degree))
    return fps_to_dict(f), {}, True


def cmd_eval(args, loaded: LoadedInput) -> Outcome:
    rng = np.random.default_rng(args.seed)
    node = loaded.node
    if node is None:
        # 截断级数按多项式求值
        Z = gamma_tuple(rng, loaded.series.n_vars, args.matrix_size, 1.0)
        return {'Z': list(Z), 'value': loaded.series.evaluate(Z)}, {}, True
    Z = gamma_tuple(rng, node.n_vars, args.matrix_size, epsilon_for(node))
    value = eval_closed(node, Z)
    residuals = {}
    if args.degree is not None:
        series_value = expand(node, args.degree).evaluate(Z)
        residuals['series_difference'] = float(np.linalg.norm(value - series_value))
    return {'Z': list(Z), 'value': value}, residuals, True


def cmd_minimize(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    reduced = reduce_to_minimal(node).node
    degree = args.degree if args.degree is not None else 2 * node.r + 1
    difference = expand(node, degree).max_abs_diff(expand(reduced, degree))
    return ({'dims_before': list(node.dims), 'dims_after': list(reduced.dims),
             'node': node_to_dict(reduced)},
            {'coefficient_difference': difference}, True)


def cmd_describe(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    report = minimality_report(node)
    result = {'n_vars': node.n_vars, 'p': node.p, 'q': node.q, **report.to_dict(),
              'obs_ctrl_agree': observability_controllability_agree(node)}
    return result, {}, True


def _sample_residuals(case: str, node: GRNode, J: np.ndarray, args) -> Dict[str, float]:
    residuals = {}
    for n in sample_sizes(args):
        if case == 'line':
            check = sample_check_line(node, J, n, args.samples, args.seed)
        elif case == 'circle':
            check = sample_check_circle(node, J, n, args.samples, args.seed)
        elif case in ('sa-line', 'sa-circle'):
            check = selfadjoint_sample_check(node, case[3:], n, args.samples, args.seed)
        else:
            return residuals
        residuals[f'sample_n{n}'] = check.max_residual
    return residuals


def cmd_check(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    J = signature_for(args, loaded)
    result = create_classifier(args.case).classify(node, J)
    residuals = dict(result.residuals)
    if result.holds:
        residuals.update(_sample_residuals(args.case, node, J, args))
        if args.case == 'inner-line':
            check = halfplane_contractivity_sample(node, J, sample_sizes(args), args.samples, args.seed)
            residuals['min_contractivity_eig'] = check.max_residual
        elif args.case == 'inner-disk':
            check = disk_contractivity_sample(node, J, sample_sizes(args), args.samples, args.seed)
            residuals['min_contractivity_eig'] = check.max_residual
    return result.to_dict(), residuals, result.holds


def _associated_H(case: str, node: GRNode, J: np.ndarray):
    if case == 'line':
        return associated_H_line(node, J)
    if case == 'circle':
        return associated_H_circle(node, J)
    raise InputError(f'assoc-h 只支持 line 或 circle，实际为 {case}')


def cmd_assoc_h(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    H = _associated_H(args.case, node, signature_for(args, loaded))
    result = H.to_dict()
    if np.allclose(signature_for(args, loaded), np.eye(node.q)) and node.r:
        diagnostics = unitary_line_diagnostics(node, H) if args.case == 'line' \
            else unitary_circle_diagnostics(node, H)
        result['unitary_diagnostics'] = diagnostics
    return result, dict(H.residuals), True


def cmd_complete(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    J = signature_for(args, loaded)
    a = parse_complex(args.a)
    if args.case == 'line':
        built, H = complete_from_CA(node.C, node.A, node.dims, J) if args.source == 'ca' \
            else complete_from_AB(node.A, node.B, node.dims, J)
    elif args.case == 'circle':
        built, H = complete_from_CA_circle(node.C, node.A, node.dims, J, a) if args.source == 'ca' \
            else complete_from_AB_circle(node.A, node.B, node.dims, J, a)
    else:
        raise InputError(f'complete 只支持 line 或 circle，实际为 {args.case}')
    return {'node': node_to_dict(built, J), 'H': H.to_dict()}, dict(H.residuals), True


def cmd_cayley(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    a = parse_complex(args.a)
    if a is None:
        a = choose_cayley_parameter(node, args.seed)
    return {'a': a, 'node': node_to_dict(cayley(node, a))}, {}, True


def cmd_balance(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    J = signature_for(args, loaded)
    H = _associated_H(args.case, node, J)
    balanced = balance(node, H, J, args.case)
    result = {'node': node_to_dict(balanced, J), 'H': H.to_dict()}
    residuals = dict(H.residuals)
    if args.case == 'circle':
        unitary = unitary_node_check(balanced)
        result['unitary_colligation'] = unitary['unitary']
        residuals['colligation_unitary'] = unitary['residual']
    return result, residuals, True


def _factorize(case: str, node: GRNode, J: np.ndarray, M: SubspaceFamily, args, params):
    if case == 'line':
        split = (params['D1'], params['D2']) if 'D1' in params and 'D2' in params else None
        return minimal_junitary_factorize_line(node, J, M, split)
    if case == 'circle':
        return minimal_junitary_factorize_circle(node, J, M, parse_complex(args.a))
    raise InputError(f'factorize 只支持 line 或 circle，实际为 {case}')


def _factorization_entry(result) -> Dict[str, Any]:
    return {**result.to_dict(), 'first': node_to_dict(result.first),
            'second': node_to_dict(result.second)}


def cmd_factorize(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    J = signature_for(args, loaded)
    params = load_params(args.params)
    if not args.search:
        result = _factorize(args.case, node, J, load_subspace(args.subspace, node), args, params)
        return _factorization_entry(result), dict(result.residuals), True

    H = _associated_H(args.case, node, J)
    families = enumerate_invariant_families(node, H, args.max_results)
    entries, residuals = [], {}
    for i, found in enumerate(families):
        entry = found.to_dict()
        if not found.trivial and found.nondegenerate:
            try:
                result = _factorize(args.case, node, J, found.family, args, params)
            except (InputError, ClassificationError) as e:
                entry['error'] = str(e)
            else:
                entry['factorization'] = _factorization_entry(result)
                residuals.update({f'{key}_{i}': v for key, v in result.residuals.items()})
        entries.append(entry)
    return {'families': entries, 'count': len(entries)}, residuals, True


def cmd_decompose(args, loaded: LoadedInput) -> Outcome:
    node = loaded.require_node()
    M = load_subspace(args.subspace, node)
    params = load_params(args.params)
    if args.case == 'sa-line':
        checked = is_matrix_selfadjoint_line(node)
    elif args.case == 'sa-circle':
        checked = is_matrix_selfadjoint_circle(node)
    else:
        raise InputError(f'decompose 只支持 sa-line 或 sa-circle，实际为 {args.case}')
    if not checked.holds:
        raise ClassificationError(f'节点不是矩阵自伴的: {checked.reason}', checked.residuals)
    if args.case == 'sa-line':
        split = (params['D1'], params['D2']) if 'D1' in params and 'D2' in params else None
        result = selfadjoint_decompose(node, checked.H, M, split)
    else:
        result = circle_selfadjoint_decompose(node, checked.H, M, params.get('S'))
    entry = {**result.to_dict(), 'first': node_to_dict(result.first),
             'second': node_to_dict(result.second)}
    return entry, dict(result.residuals), True


def _kernel_inputs(loaded: LoadedInput, J: np.ndarray, routes, degree: int) -> KernelInputs:
    inputs = KernelInputs(J=J)
    if loaded.node is not None:
        inputs.node = loaded.node
        if 'node' in routes:
            inputs.H = associated_H_line(loaded.node, J)
    if 'series' in routes:
        inputs.f = loaded.series_up_to(2 * degree + 1)
    return inputs


def cmd_kernel(args, loaded: LoadedInput) -> Outcome:
    degree = args.degree if args.degree is not None else DEFAULT_KERNEL_DEGREE
    J = signature_for(args, loaded)
    if args.route == 'all':
        inputs = _kernel_inputs(loaded, J, ROUTES, degree)
        compared = compare_routes(inputs, args.k, degree)
        table = compared['tables']['series']
        residuals = {f'route_{key}': v for key, v in compared['differences'].items()}
    else:
        inputs = _kernel_inputs(loaded, J, [args.route], degree)
        table = create_kernel_route(args.route).compute(inputs, args.k, degree, degree)
        residuals = {}
    residuals['hermitian_defect'] = table.hermitian_defect()
    _, (pos, neg, zero) = kernel_gram(table, spanning_pairs(table))
    result = {'k': args.k, 'degree': degree, 'table': table.to_list(),
              'gram_signature': [pos, neg, zero]}
    return result, residuals, True


def cmd_model(args, loaded: LoadedInput) -> Outcome:
    degree = args.degree if args.degree is not None else DEFAULT_MODEL_DEGREE
    f = loaded.series_up_to(degree)
    J = signature_for(args, loaded)
    model = model_realization(f, J)
    result = {'node': node_to_dict(model.node, J), 'H': model.H.to_dict(), **model.to_dict()}
    residuals = dict(model.residuals)
    check = min(f.degree, 6)
    residuals['expansion_difference'] = f.max_abs_diff(expand(model.node, check), check)
    return result, residuals, True


def cmd_schur_sample(args, loaded: LoadedInput) -> Outcome:
    source = loaded.node if loaded.node is not None else loaded.series
    check = schur_agler_sample(source, args.matrix_size, args.samples, args.seed)
    holds = check.max_residual <= 1.0 + config.SCHUR_AGLER_TOL
    return {'max_norm': check.max_residual, 'contractive': holds, **check.to_dict()}, {}, holds


def cmd_hankel(args, loaded: LoadedInput) -> Outcome:
    f = loaded.series_up_to(args.row_deg + 1 + args.col_deg)
    H = hankel(f, args.k, args.row_deg, args.col_deg)
    return {'k': args.k, 'matrix': H, 'rank': numerical_rank(H)}, {}, True


COMMANDS: Dict[str, Callable[[argparse.Namespace, LoadedInput], Outcome]] = {
    'expand': cmd_expand,
    'eval': cmd_eval,
    'minimize': cmd_minimize,
    'describe': cmd_describe,
    'check': cmd_check,
    'assoc-h': cmd_assoc_h,
    'complete': cmd_complete,
    'cayley': cmd_cayley,
    'balance': cmd_balance,
    'factorize': cmd_factorize,
    'decompose': cmd_decompose,
    'kernel': cmd_kernel,
    'model': cmd_model,
    'schur-sample': cmd_schur_sample,
    'hankel': cmd_hankel,
}


# ============ 命令行解析 ============

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--input', help='节点或级数文件，或 desk:<name>')
    common.add_argument('--j', help='签名矩阵文件')
    common.add_argument('--degree', type=int, help='截断次数')
    common.add_argument('--rank-tol', type=float, help='数值秩的相对阈值')
    common.add_argument('--res-tol', type=float, help='残差阈值')
    common.add_argument('--samples', type=int, default=config.DEFAULT_SAMPLES)
    common.add_argument('--matrix-size', type=int, default=config.DEFAULT_MATRIX_SIZE)
    common.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    common.add_argument('--output', help='报告输出文件')

    parser = argparse.ArgumentParser(description='非交换有理形式幂级数的 GR 实现工具')
    sub = parser.add_subparsers(dest='command', required=True)
    for name in ('expand', 'eval', 'minimize', 'describe', 'cayley', 'model', 'schur-sample'):
        cmd = sub.add_parser(name, parents=[common])
        if name == 'cayley':
            cmd.add_argument('--a', help='单模参数 re,im')
    check = sub.add_parser('check', parents=[common])
    check.add_argument('--case', choices=CASES, required=True)
    for name in ('assoc-h', 'balance'):
        cmd = sub.add_parser(name, parents=[common])
        cmd.add_argument('--case', choices=['line', 'circle'], default='line')
    complete = sub.add_parser('complete', parents=[common])
    complete.add_argument('--case', choices=['line', 'circle'], default='line')
    complete.add_argument('--from', dest='source', choices=['ca', 'ab'], default='ca')
    complete.add_argument('--a', help='单模参数 re,im')
    factorize = sub.add_parser('factorize', parents=[common])
    factorize.add_argument('--case', choices=['line', 'circle'], default='line')
    factorize.add_argument('--subspace', help='子空间族文件')
    factorize.add_argument('--search', action='store_true', help='枚举不变子空间族')
    factorize.add_argument('--max-results', type=int, default=config.DEFAULT_MAX_FAMILIES)
    factorize.add_argument('--params', help='含 D1、D2 的文件')
    factorize.add_argument('--a', help='单模参数 re,im')
    decompose = sub.add_parser('decompose', parents=[common])
    decompose.add_argument('--case', choices=['sa-line', 'sa-circle'], default='sa-line')
    decompose.add_argument('--subspace', help='子空间族文件')
    decompose.add_argument('--params', help='含 D1、D2 或 S 的文件')
    kernel = sub.add_parser('kernel', parents=[common])
    kernel.add_argument('--route', choices=ROUTES + ['all'], default='series')
    kernel.add_argument('--k', type=int, default=1)
    hank = sub.add_parser('hankel', parents=[common])
    hank.add_argument('--k', type=int, default=1)
    hank.add_argument('--row-deg', type=int, default=2)
    hank.add_argument('--col-deg', type=int, default=2)
    return parser


def apply_runtime_config(args: argparse.Namespace) -> None:
    """命令行覆盖 config 中的阈值"""
    if args.rank_tol is not None:
        config.RANK_TOL = args.rank_tol
    if args.res_tol is not None:
        config.RES_TOL = args.res_tol


def run(argv=None) -> Tuple[int, str]:
    """
    执行一条命令

    Args:
        argv: 命令行参数（不含程序名）

    Returns:
        (退出码, JSON 报告文本)
    """
    args = build_parser().parse_args(argv)
    apply_runtime_config(args)
    report: Dict[str, Any] = {
        'command': args.command,
        'inputs': {key: value for key, value in sorted(vars(args).items())
                   if key != 'command' and value is not None},
        'seed': args.seed,
    }
    try:
        loaded = load_input(args.input)
        result, residuals, holds = COMMANDS[args.command](args, loaded)
        code = EXIT_OK if holds else EXIT_PROPERTY_FAILS
    except (InputError, ClassificationError, ArithmeticError, ValueError, RuntimeError) as e:
        logger.error(f'{args.command} 失败: {e}')
        result = {'error': str(e), 'error_type': type(e).__name__}
        if getattr(e, 'details', None):
            result['details'] = e.details
        residuals = dict(getattr(e, 'residuals', {}))
        code = exit_code_for(e)
    report['result'] = result
    report['residuals'] = residuals
    return code, dump_report(report, args.output)


def main(argv=None) -> int:
    code, text = run(argv)
    print(text)
    return code


if __name__ == '__main__':
    sys.exit(main())
