"""
命令行模块 - 配置解析与命令分派
"""

from .parser import RunConfig, ConfigParser, parse_config, build_arg_parser
from .commands import Commands
from .app import main

__all__ = [
    'RunConfig',
    'ConfigParser',
    'parse_config',
    'build_arg_parser',
    'Commands',
    'main',
]
