"""
异常模块 - 模拟器的统一异常层次及其命令行退出码
"""


class IBPError(Exception):
    """所有模拟器异常的基类"""

    exit_code = 2


class DomainError(IBPError, ValueError):
    """数值函数定义域错误"""

    exit_code = 2


class InvalidParametersError(IBPError, ValueError):
    """模型参数违反约束 (α>0, β<1, c>−β, u>max(β,0))"""

    exit_code = 2


class InvalidSubsetError(IBPError, ValueError):
    """子集 B 不是 [0,1] 内互不相交的区间并"""

    exit_code = 2


class ConfigError(IBPError):
    """配置文件或命令行参数错误"""

    exit_code = 2


class InapplicableSuiteError(IBPError):
    """验证套件的前提条件不满足"""

    exit_code = 3


class ResourceLimitError(IBPError):
    """资源超限（菜品表容量、内存）"""

    exit_code = 4
