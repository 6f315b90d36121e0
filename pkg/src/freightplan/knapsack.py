"""Exact 0/1 knapsack by dynamic programming over integer capacity."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

import numpy as np


@dataclass(frozen=True)
class KnapsackResult:
    selected: tuple  # item ids, ascending
    value: int
    weight: int


def knapsack(items: Iterable[tuple[Hashable, int, int]], capacity: int) -> KnapsackResult:
    """Maximize total value of (id, weight, value) items under ``capacity``.

    Among optimal selections the result includes the smallest id whenever
    some optimum contains it, then the next smallest, and so on, so the
    answer does not depend on the order ``items`` arrives in.
    """
    items = sorted(items, key=lambda it: it[0])
    for _, w, v in items:
        if w < 1 or v < 1:
            raise ValueError("knapsack weights and values must be positive integers")
    if capacity < 0:
        raise ValueError("capacity must be nonnegative")
    if sum(w for _, w, _ in items) <= capacity:
        return KnapsackResult(tuple(i for i, _, _ in items), sum(v for _, _, v in items),
                              sum(w for _, w, _ in items))

    # dp[c]: best value using the items after the current one (in id order)
    dp = np.zeros(capacity + 1, dtype=np.int64)
    take = np.zeros((len(items), capacity + 1), dtype=bool)
    for k in range(len(items) - 1, -1, -1):
        _, w, v = items[k]
        if w > capacity:
            continue
        cand = dp[: capacity + 1 - w] + v
        take[k, w:] = cand >= dp[w:]
        dp[w:] = np.maximum(dp[w:], cand)

    chosen, c, total_w = [], capacity, 0
    for k, (iid, w, _) in enumerate(items):
        if take[k, c]:
            chosen.append(iid)
            c -= w
            total_w += w
    return KnapsackResult(tuple(chosen), int(dp[capacity]), total_w)
