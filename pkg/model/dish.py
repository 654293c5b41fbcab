"""
菜品表 - 已被尝试的菜品及其加权计数
"""

from dataclasses import dataclass

import numpy as np

from utils.errors import ResourceLimitError


@dataclass(frozen=True)
class Dish:
    """一道菜：创建序号、标签 x ∈ [0,1]、加权计数 Σ R_i M_i{x}、首位顾客"""

    dish_id: int
    label: float
    weighted_count: float
    first_customer: int


class DishTable:
    """按创建顺序存放菜品的列式表"""

    def __init__(self, capacity_limit: int, initial_capacity: int = 64):
        """初始化菜品表"""
        self.capacity_limit = int(capacity_limit)
        size = max(1, min(initial_capacity, self.capacity_limit))
        self._labels = np.empty(size, dtype=float)
        self._counts = np.empty(size, dtype=float)
        self._first = np.empty(size, dtype=np.int64)
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def labels(self) -> np.ndarray:
        return self._labels[:self._size]

    @property
    def weighted_counts(self) -> np.ndarray:
        return self._counts[:self._size]

    def _grow(self, needed: int):
        """扩容（倍增），超过上限时报资源错误"""
        if needed > self.capacity_limit:
            raise ResourceLimitError(
                f"菜品表超过上限 {self.capacity_limit}（需要 {needed}）")
        new_size = min(self.capacity_limit, max(needed, 2 * len(self._labels)))
        for name in ("_labels", "_counts", "_first"):
            old = getattr(self, name)
            new = np.empty(new_size, dtype=old.dtype)
            new[:self._size] = old[:self._size]
            setattr(self, name, new)

    def append(self, labels: np.ndarray, weight: float, customer: int):
        """新增由 customer 创建的菜品，加权计数为其权重"""
        count = len(labels)
        if count == 0:
            return
        needed = self._size + count
        if needed > len(self._labels):
            self._grow(needed)
        self._labels[self._size:needed] = labels
        self._counts[self._size:needed] = weight
        self._first[self._size:needed] = customer
        self._size = needed

    def add_weight(self, dish_ids: np.ndarray, weight: float):
        """被再次尝试的菜品累加权重"""
        self._counts[dish_ids] += weight

    def dish(self, dish_id: int) -> Dish:
        if not 0 <= dish_id < self._size:
            raise IndexError(f"菜品不存在: {dish_id}")
        return Dish(dish_id, float(self._labels[dish_id]),
                    float(self._counts[dish_id]), int(self._first[dish_id]))

    def copy(self) -> "DishTable":
        clone = DishTable(self.capacity_limit, initial_capacity=len(self._labels))
        clone._labels = self._labels.copy()
        clone._counts = self._counts.copy()
        clone._first = self._first.copy()
        clone._size = self._size
        return clone
