"""Static interval index over valid time, for stabbing and overlap queries."""

from typing import Iterable, List, Optional, Set, Tuple

from sortedcontainers import SortedKeyList

# (start_tick, end_tick, edge_id), closed on both ends.
Entry = Tuple[int, int, str]


class _CenteredNode:
    """Centered interval tree node: intervals containing ``center`` live here."""

    __slots__ = ("center", "by_start", "by_end", "left", "right")

    def __init__(self, entries: List[Entry]):
        endpoints = sorted(p for start, end, _ in entries for p in (start, end))
        self.center = endpoints[len(endpoints) // 2]

        here, lefts, rights = [], [], []
        for entry in entries:
            start, end, _ = entry
            if end < self.center:
                lefts.append(entry)
            elif start > self.center:
                rights.append(entry)
            else:
                here.append(entry)

        self.by_start = sorted(here, key=lambda e: e[0])
        self.by_end = sorted(here, key=lambda e: e[1], reverse=True)
        self.left: Optional[_CenteredNode] = _CenteredNode(lefts) if lefts else None
        self.right: Optional[_CenteredNode] = _CenteredNode(rights) if rights else None

    def stab(self, t: int, out: Set[str]) -> None:
        node: Optional[_CenteredNode] = self
        while node is not None:
            if t < node.center:
                for start, _, edge_id in node.by_start:
                    if start > t:
                        break
                    out.add(edge_id)
                node = node.left
            elif t > node.center:
                for _, end, edge_id in node.by_end:
                    if end < t:
                        break
                    out.add(edge_id)
                node = node.right
            else:
                out.update(edge_id for _, _, edge_id in node.by_start)
                return


class IntervalIndex:
    """Answers stabbing and closed-overlap queries in O(log n + k)."""

    def __init__(self, entries: Iterable[Entry] = ()):
        entries = list(entries)
        self._by_start = SortedKeyList(entries, key=lambda e: (e[0], e[2]))
        self._root = _CenteredNode(entries) if entries else None

    def __len__(self) -> int:
        return len(self._by_start)

    def stab(self, t: int) -> Set[str]:
        """Ids of intervals with start <= t <= end."""
        out: Set[str] = set()
        if self._root is not None:
            self._root.stab(t, out)
        return out

    def overlap(self, lo: int, hi: int) -> Set[str]:
        """Ids of intervals intersecting [lo, hi]."""
        if lo > hi:
            return set()
        # Either the interval already covers lo, or it starts inside [lo, hi].
        out = self.stab(lo)
        out.update(self.starting_between(lo, hi))
        return out

    def starting_between(self, lo: int, hi: int) -> List[str]:
        return [edge_id for _, _, edge_id in self._by_start.irange_key((lo,), (hi + 1,), inclusive=(True, False))]
