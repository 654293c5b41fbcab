#!/usr/bin/env python3
"""
加权印度自助餐过程模拟器 - 主程序入口
"""

import sys
import os

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli.app import main

if __name__ == "__main__":
    sys.exit(main())
