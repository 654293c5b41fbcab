"""
补偿求和 - 长轨迹上的累加误差控制
"""


class CompensatedSum:
    """Neumaier 补偿累加器"""

    __slots__ = ("_sum", "_comp")

    def __init__(self, start: float = 0.0):
        self._sum = float(start)
        self._comp = 0.0

    def add(self, x: float):
        total = self._sum + x
        if abs(self._sum) >= abs(x):
            self._comp += (self._sum - total) + x
        else:
            self._comp += (x - total) + self._sum
        self._sum = total

    @property
    def value(self) -> float:
        return self._sum + self._comp

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"CompensatedSum({self.value!r})"
