"""Dijkstra on small weighted digraphs with parallel edges."""
from __future__ import annotations

import heapq
from itertools import count
from typing import Callable, Hashable, Mapping, Optional, Sequence, TypeVar

E = TypeVar("E")


def dijkstra(out_edges: Mapping[Hashable, Sequence[E]], source: Hashable, target: Hashable,
             weight: Callable[[E], int], head: Callable[[E], Hashable]
             ) -> Optional[tuple[int, list[E]]]:
    """Cheapest source-target path as (cost, edge list), or None.

    Weights must be nonnegative. Ties keep the first path found, with
    edges scanned in the order ``out_edges`` lists them.
    """
    dist = {source: 0}
    pred: dict[Hashable, tuple[Hashable, E]] = {}
    done = set()
    tick = count()
    heap = [(0, next(tick), source)]
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == target:
            break
        for e in out_edges.get(u, ()):
            w = weight(e)
            if w < 0:
                raise ValueError("negative edge weight")
            v = head(e)
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = (u, e)
                heapq.heappush(heap, (nd, next(tick), v))
    if target not in done:
        return None
    path = []
    node = target
    while node != source:
        node, e = pred[node]
        path.append(e)
    path.reverse()
    return dist[target], path
