"""Point quadtree over 2D word positions.

Space is split recursively into four equal squares until every point
sits in its own leaf; exactly coincident points share a leaf as a chain.
Used as the index for nearest-neighbor and collision queries.
"""

from __future__ import annotations

import heapq
import itertools
import math

MAX_DEPTH = 48


class _Node:
    __slots__ = ("x", "y", "size", "children", "point", "words")

    def __init__(self, x: float, y: float, size: float):
        self.x = x
        self.y = y
        self.size = size
        self.children: list[_Node] | None = None
        self.point: tuple[float, float] | None = None
        self.words: list[str] = []

    def _quadrant(self, px: float, py: float) -> int:
        half = self.size / 2
        qx = px >= self.x + half
        qy = py >= self.y + half
        return (2 if qy else 0) + (1 if qx else 0)

    def insert(self, px: float, py: float, word: str, depth: int) -> None:
        if self.children is None:
            if self.point is None:
                self.point = (px, py)
                self.words.append(word)
                return
            if self.point == (px, py) or depth >= MAX_DEPTH:
                self.words.append(word)
                return
            # occupied leaf: subdivide and push both points down
            old = self.point
            old_words = self.words
            self.point, self.words = None, []
            half = self.size / 2
            self.children = [
                _Node(self.x, self.y, half),
                _Node(self.x + half, self.y, half),
                _Node(self.x, self.y + half, half),
                _Node(self.x + half, self.y + half, half),
            ]
            child = self.children[self._quadrant(*old)]
            child.point = old
            child.words = old_words
        self.children[self._quadrant(px, py)].insert(px, py, word, depth + 1)

    def min_dist2(self, qx: float, qy: float) -> float:
        dx = max(self.x - qx, 0.0, qx - (self.x + self.size))
        dy = max(self.y - qy, 0.0, qy - (self.y + self.size))
        return dx * dx + dy * dy

    def intersects(self, x0: float, y0: float, x1: float, y1: float) -> bool:
        return not (self.x > x1 or self.x + self.size < x0
                    or self.y > y1 or self.y + self.size < y0)


class QuadTree:
    def __init__(self, coords: dict[str, tuple[float, float]]):
        if not coords:
            raise ValueError("empty point set")
        xs = [p[0] for p in coords.values()]
        ys = [p[1] for p in coords.values()]
        x0, y0 = min(xs), min(ys)
        size = max(max(xs) - x0, max(ys) - y0)
        size = size * (1 + 1e-12) if size > 0 else 1.0
        self.root = _Node(x0, y0, size)
        self.coords = dict(coords)
        for word in sorted(coords):
            px, py = coords[word]
            self.root.insert(px, py, word, 0)

    def knn(self, q: tuple[float, float], k: int,
            exclude: set[str] | None = None) -> list[tuple[str, float]]:
        """k nearest words to q, (word, distance), lexicographic tie-break."""
        qx, qy = q
        counter = itertools.count()
        heap = [(self.root.min_dist2(qx, qy), next(counter), self.root)]
        candidates: list[tuple[float, str]] = []

        def kth() -> float:
            if len(candidates) < k:
                return math.inf
            return sorted(candidates)[k - 1][0]

        while heap:
            dist2, _, node = heapq.heappop(heap)
            if dist2 > kth():
                break
            if node.children is not None:
                for child in node.children:
                    heapq.heappush(heap, (child.min_dist2(qx, qy), next(counter), child))
            elif node.point is not None:
                px, py = node.point
                d2 = (px - qx) ** 2 + (py - qy) ** 2
                for w in node.words:
                    if exclude and w in exclude:
                        continue
                    candidates.append((d2, w))
        candidates.sort()
        return [(w, math.sqrt(d2)) for d2, w in candidates[:k]]

    def region_query(self, x0: float, y0: float, x1: float, y1: float) -> list[str]:
        """Words whose point lies inside [x0,x1] x [y0,y1], sorted."""
        out: list[str] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not node.intersects(x0, y0, x1, y1):
                continue
            if node.children is not None:
                stack.extend(node.children)
            elif node.point is not None:
                px, py = node.point
                if x0 <= px <= x1 and y0 <= py <= y1:
                    out.extend(node.words)
        return sorted(out)

    def radius_query(self, q: tuple[float, float], r: float) -> list[str]:
        qx, qy = q
        hits = [w for w in self.region_query(qx - r, qy - r, qx + r, qy + r)
                if (self.coords[w][0] - qx) ** 2 + (self.coords[w][1] - qy) ** 2 <= r * r]
        return hits
