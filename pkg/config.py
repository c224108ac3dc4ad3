"""
配置文件 - 统一管理所有数值容差、采样参数与运行配置
"""
import os

from dotenv import load_dotenv

# 加载 .env 文件中的环境变量（NCGR_* 前缀的覆盖项）
load_dotenv()


def _env_float(name: str, default):
    value = os.getenv(name)
    if value is None or value == '':
        return default
    return float(value)


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value == '':
        return default
    return int(value)


# ============================================================================
# 日志配置
# ============================================================================

# 日志级别: DEBUG, INFO, WARNING, ERROR, CRITICAL
LOG_LEVEL = os.getenv('NCGR_LOG_LEVEL', 'ERROR')

# ============================================================================
# 线程池配置
# ============================================================================

# 线程池最大工作线程数（随机采样与核函数多路计算共用）
MAX_WORKERS = _env_int('NCGR_MAX_WORKERS', 8)

# ============================================================================
# 形式幂级数配置
# ============================================================================

# 系数剪枝阈值（Frobenius 范数，绝对值）
DROP_TOL = 1e-14

# 常数项奇异判定：最小奇异值 < SINGULAR_RTOL * 最大奇异值 即视为奇异
SINGULAR_RTOL = 1e-12

# ============================================================================
# 秩与残差容差
# ============================================================================

# 数值秩阈值；None 表示使用 max(rows, cols) * eps * sigma_max
RANK_TOL = _env_float('NCGR_RANK_TOL', None)

# 相对残差容差（Lyapunov / Stein / 相似变换等）
RES_TOL = _env_float('NCGR_RES_TOL', 1e-9)

# H 的 Hermite 性：||H - H*|| <= HERMITIAN_RTOL * ||H|| 才做对称化
HERMITIAN_RTOL = 1e-8

# 输入的结构 Hermite 矩阵校验容差
HERMITIAN_CHECK_RTOL = 1e-10

# 签名矩阵 J = J* 且 J^2 = I 的容差
SIGNATURE_TOL = 1e-12

# 正定判定：lambda_min > PD_RTOL * max|lambda|
PD_RTOL = 1e-10

# 核函数表 Hermite 对称容差
KERNEL_SYM_TOL = 1e-10

# 块不变子空间判定容差（相对）
INVARIANCE_TOL = 1e-10

# ============================================================================
# 随机采样配置
# ============================================================================

DEFAULT_SEED = _env_int('NCGR_SEED', 0)
DEFAULT_SAMPLES = 32
DEFAULT_MATRIX_SIZE = 2

# Gamma_n(eps) 内采样的缩放系数：||Z_k|| = SAMPLE_SCALE * eps
SAMPLE_SCALE = 0.5

# 严格压缩元组的范数上界
CONTRACTION_RADIUS = 0.95

# 右半平面采样：Z_k = S + HALFPLANE_SHIFT * I
HALFPLANE_SHIFT = 0.1

# Schur–Agler 采样判定压缩时允许的超出量：max ‖F(W)‖ <= 1 + SCHUR_AGLER_TOL
SCHUR_AGLER_TOL = 1e-8

# ============================================================================
# Cayley 变换参数选择
# ============================================================================

# 扫描的单位根个数
CAYLEY_SCAN_ROOTS = 16

# 单位根扫描失败后的随机单模尝试次数
CAYLEY_RANDOM_TRIES = 64

# ============================================================================
# 不变子空间枚举
# ============================================================================

# 坐标子空间族穷举的最大状态维数（2^r 个候选）
MAX_COORDINATE_FAMILY_STATES = 10

# 默认返回的最大候选族个数
DEFAULT_MAX_FAMILIES = 32

# ============================================================================
# 模型实现（后移算子）
# ============================================================================

# 模型实现使用的最小级数截断次数
MODEL_MIN_DEGREE = 4
