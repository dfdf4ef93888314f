"""Seeded ensembles: derived rng streams, Welford accumulation, worker pool.

Work is cut into blocks whose count and seeds depend only on the master seed
and the problem size, never on the number of workers, so results are
bit-identical for any ``MAGICPOWER_WORKERS`` setting.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from .config import worker_count

T = TypeVar("T")
R = TypeVar("R")


def task_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent stream for task ``keys`` under master ``seed``."""
    return np.random.default_rng([int(seed), *(int(k) for k in keys)])


def block_seeds(rng: np.random.Generator, count: int) -> list[int]:
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=count)]


def split_blocks(total: int, block: int) -> list[int]:
    """Sizes of consecutive blocks covering ``total`` items."""
    full, rest = divmod(total, block)
    return [block] * full + ([rest] if rest else [])


@dataclasses.dataclass
class Welford:
    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def add(self, x: float) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def add_many(self, xs: Iterable[float]) -> None:
        arr = np.asarray(list(xs) if not isinstance(xs, np.ndarray) else xs, dtype=float)
        if arr.size:
            self.merge(Welford(arr.size, float(arr.mean()), float(((arr - arr.mean()) ** 2).sum())))

    def merge(self, other: Welford) -> None:
        if other.count == 0:
            return
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / total
        self.m2 += other.m2 + delta * delta * self.count * other.count / total
        self.count = total

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count > 1 else 0.0


def parallel_map(fn: Callable[[T], R], tasks: Sequence[T], workers: int | None = None) -> list[R]:
    """``[fn(t) for t in tasks]``, on a process pool when more than one worker is configured."""
    workers = worker_count() if workers is None else max(1, workers)
    if workers == 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))
