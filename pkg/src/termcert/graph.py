"""Strongly connected components and ordered condensation of small digraphs.

Nodes are ``0..n-1``.  Used both for dependency graphs over pairs and for
type-dependency graphs of schemas.
"""

from __future__ import annotations

import heapq
from typing import Iterable


def tarjan(n: int, succ: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, k = work.pop()
            if k == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            else:
                low[v] = min(low[v], low[succ[v][k - 1]])
            while k < len(succ[v]):
                w = succ[v][k]
                k += 1
                if index[w] < 0:
                    work.append((v, k))
                    work.append((w, 0))
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    out.append(sorted(comp))
    return out


def ordered_components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """SCCs ordered so that no edge leads from a later component to an earlier one.

    Among components that are free to go next, the one holding the smallest
    node index is emitted first, which makes the order deterministic.
    """
    succ: list[list[int]] = [[] for _ in range(n)]
    for a, b in sorted(set(edges)):
        succ[a].append(b)
    comps = tarjan(n, succ)
    comp_of = [0] * n
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    indeg = [0] * len(comps)
    csucc: list[set[int]] = [set() for _ in comps]
    for a in range(n):
        for b in succ[a]:
            ca, cb = comp_of[a], comp_of[b]
            if ca != cb and cb not in csucc[ca]:
                csucc[ca].add(cb)
                indeg[cb] += 1
    heap = [(comp[0], ci) for ci, comp in enumerate(comps) if indeg[ci] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, ci = heapq.heappop(heap)
        order.append(comps[ci])
        for cj in csucc[ci]:
            indeg[cj] -= 1
            if indeg[cj] == 0:
                heapq.heappush(heap, (comps[cj][0], cj))
    return order
