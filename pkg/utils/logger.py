"""
日志系统 - 提供模拟器日志记录功能
"""

import logging
import os
from datetime import datetime
from typing import Optional


class Logger:
    """模拟器日志记录器"""

    def __init__(self, name: str = "ibp", level: Optional[str] = None,
                 log_dir: Optional[str] = None):
        """初始化日志记录器"""
        self.logger = logging.getLogger(name)
        if level is not None:
            self.logger.setLevel(getattr(logging, level.upper(), logging.INFO))
        elif self.logger.level == logging.NOTSET:
            self.logger.setLevel(logging.INFO)

        # 避免重复添加处理器
        if not self.logger.handlers:
            self._setup_console()
        if log_dir and not any(isinstance(h, logging.FileHandler) for h in self.logger.handlers):
            self._setup_file(log_dir)

    @staticmethod
    def _formatter() -> logging.Formatter:
        return logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

    def _setup_console(self):
        """控制台处理器（stderr，不干扰表格输出）"""
        formatter = self._formatter()
        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.DEBUG)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

    def _setup_file(self, log_dir: str):
        """文件处理器"""
        os.makedirs(log_dir, exist_ok=True)
        log_file = os.path.join(log_dir, f"ibp_{datetime.now().strftime('%Y%m%d')}.log")
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(self._formatter())
        self.logger.addHandler(file_handler)

    def debug(self, message: str):
        """记录调试信息"""
        self.logger.debug(message)

    def info(self, message: str):
        """记录一般信息"""
        self.logger.info(message)

    def warning(self, message: str):
        """记录警告信息"""
        self.logger.warning(message)

    def error(self, message: str):
        """记录错误信息"""
        self.logger.error(message)

    def log_sim_event(self, stream_id: int, event: str, details: Optional[str] = None):
        """记录轨迹模拟事件"""
        message = f"TRAJECTORY[{stream_id}]: {event}"
        if details:
            message += f" - {details}"
        self.debug(message)

    def log_suite_event(self, suite: str, event: str, details: Optional[str] = None):
        """记录验证套件事件"""
        message = f"SUITE[{suite}]: {event}"
        if details:
            message += f" - {details}"
        self.info(message)

    def log_config_event(self, event: str, details: Optional[str] = None):
        """记录配置事件"""
        message = f"CONFIG: {event}"
        if details:
            message += f" - {details}"
        self.info(message)
