"""
命令行入口 - 解析配置、分派命令、映射退出码
"""

from typing import Optional, Sequence

from colorama import Fore, Style, just_fix_windows_console

from utils.config import Config
from utils.errors import ConfigError, IBPError, ResourceLimitError
from utils.logger import Logger
from .commands import Commands
from .parser import parse_config


def main(argv: Optional[Sequence[str]] = None) -> int:
    """运行一条命令并返回退出码：0 通过，1 失败，2 配置错误，3 不适用，4 资源错误"""
    just_fix_windows_console()
    logger = Logger()
    try:
        config = parse_config(argv)
        settings = Config.from_env()
        logger = Logger(level=config.log_level or settings.log_level,
                        log_dir=config.log_dir or settings.log_dir)
        logger.log_config_event("resolved", str(config.provenance()))
        commands = Commands(config, settings)
        method = getattr(commands, config.command)
        return method()
    except MemoryError as e:
        error = ResourceLimitError(f"内存不足: {e}")
        print(f"{Fore.RED}资源错误: {error}{Style.RESET_ALL}")
        logger.error(str(error))
        return error.exit_code
    except OSError as e:
        error = ConfigError(f"无法写入输出: {e}")
        print(f"{Fore.RED}错误: {error}{Style.RESET_ALL}")
        logger.error(str(error))
        return error.exit_code
    except IBPError as e:
        print(f"{Fore.RED}错误: {e}{Style.RESET_ALL}")
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
