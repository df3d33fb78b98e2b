"""Rank-space combinatorics: permutations, weak orders, the bubble-sort
Cayley graph and the tie-inclusive Kemeny-Snell distance.

Everything here is exact (integers and :class:`fractions.Fraction`) and capped
at desk scale: weak orders for n <= 5, graphs for n <= 6, connectivity for
n <= 5.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import ItemSetMismatch, TooLarge, ValidationError

MAX_WEAK_ORDER_N = 5
MAX_GRAPH_N = 6
MAX_CONNECTIVITY_N = 5


@dataclass(frozen=True, order=True)
class Permutation:
    """Position -> rank, 1-based."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.mapping)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise ValidationError(f"{m} is not a permutation of 1..{len(m)}")
        object.__setattr__(self, "mapping", m)

    def __len__(self) -> int:
        return len(self.mapping)

    def __str__(self) -> str:
        return "".join(map(str, self.mapping))

    def swap(self, i: int) -> "Permutation":
        """Swap positions i and i+1 (0-based)."""
        m = list(self.mapping)
        m[i], m[i + 1] = m[i + 1], m[i]
        return Permutation(tuple(m))


@dataclass(frozen=True)
class WeakOrder:
    """An ordered partition of items into tiers; tier 0 is best."""

    levels: tuple[frozenset, ...]
    _tier: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        levels = tuple(frozenset(lv) for lv in self.levels)
        if not levels or any(not lv for lv in levels):
            raise ValidationError("a weak order needs at least one tier and no empty tiers")
        tier = {}
        for idx, lv in enumerate(levels):
            for x in lv:
                if x in tier:
                    raise ValidationError(f"item {x!r} appears in more than one tier")
                tier[x] = idx
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "_tier", tier)

    @classmethod
    def from_ranks(cls, ranks: Mapping[Hashable, float]) -> "WeakOrder":
        """Items with equal rank value share a tier; lower value is better."""
        by_value: dict[float, set] = {}
        for item, r in ranks.items():
            by_value.setdefault(r, set()).add(item)
        return cls(tuple(frozenset(by_value[v]) for v in sorted(by_value)))

    @classmethod
    def from_permutation(cls, perm: Permutation | Sequence[int]) -> "WeakOrder":
        """Strict order on positions 1..n where position i holds rank perm[i-1]."""
        m = perm.mapping if isinstance(perm, Permutation) else tuple(perm)
        return cls.from_ranks({pos: r for pos, r in enumerate(m, start=1)})

    @property
    def items(self) -> frozenset:
        return frozenset(self._tier)

    def is_strict(self) -> bool:
        return all(len(lv) == 1 for lv in self.levels)

    def preference(self, a: Hashable, b: Hashable) -> int:
        """1 if a is preferred to b, -1 if b is preferred to a, 0 on a tie."""
        ta, tb = self._tier[a], self._tier[b]
        return (ta < tb) - (ta > tb)

    def fractional_ranks(self) -> dict[Hashable, Fraction]:
        out = {}
        start = 1
        for lv in self.levels:
            end = start + len(lv) - 1
            for x in lv:
                out[x] = Fraction(start + end, 2)
            start = end + 1
        return out


def kemeny_distance(a: WeakOrder, b: WeakOrder) -> Fraction:
    """1 per strictly opposed pair, 1/2 per pair tied in exactly one order."""
    if a.items != b.items:
        raise ItemSetMismatch("weak orders rank different item sets")
    total = 0
    for x, y in itertools.combinations(list(a.items), 2):
        total += abs(a.preference(x, y) - b.preference(x, y))
    return Fraction(total, 2)


def _ordered_partitions(items: tuple) -> Iterator[tuple[frozenset, ...]]:
    if not items:
        yield ()
        return
    for size in range(1, len(items) + 1):
        for head in itertools.combinations(items, size):
            rest = tuple(x for x in items if x not in head)
            for tail in _ordered_partitions(rest):
                yield (frozenset(head),) + tail


def enumerate_weak_orders(n: int) -> list[WeakOrder]:
    """All weak orders on items 1..n (the vertices of the Kemeny rank space)."""
    if n > MAX_WEAK_ORDER_N:
        raise TooLarge(f"weak-order enumeration is capped at n = {MAX_WEAK_ORDER_N}")
    if n < 1:
        raise ValidationError("n must be at least 1")
    return [WeakOrder(p) for p in _ordered_partitions(tuple(range(1, n + 1)))]


@dataclass(frozen=True)
class CayleyGraph:
    n: int
    vertices: tuple[Permutation, ...]
    adjacency: Mapping[Permutation, tuple[Permutation, ...]] = field(repr=False)

    def edges(self) -> list[tuple[Permutation, Permutation]]:
        return sorted((u, v) for u in self.vertices for v in self.adjacency[u] if u < v)

    def degrees(self) -> set[int]:
        return {len(self.adjacency[v]) for v in self.vertices}

    def is_regular(self, degree: int | None = None) -> bool:
        d = self.degrees()
        return len(d) == 1 and (degree is None or d == {degree})

    def is_connected(self) -> bool:
        return _is_connected(self.adjacency, self.vertices)

    def edge_list_text(self) -> str:
        return "".join(f"{u}\t{v}\n" for u, v in self.edges())


def _is_connected(adjacency: Mapping, vertices: Iterable, removed: frozenset = frozenset()) -> bool:
    alive = [v for v in vertices if v not in removed]
    if not alive:
        return True
    seen = {alive[0]}
    queue = deque([alive[0]])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w not in seen and w not in removed:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(alive)


def build_bubble_sort_graph(n: int) -> CayleyGraph:
    if n > MAX_GRAPH_N:
        raise TooLarge(f"bubble-sort graphs are capped at n = {MAX_GRAPH_N}")
    if n < 2:
        raise ValidationError("bubble-sort graphs need n >= 2")
    verts = tuple(Permutation(p) for p in itertools.permutations(range(1, n + 1)))
    adj = {v: tuple(sorted(v.swap(i) for i in range(n - 1))) for v in verts}
    return CayleyGraph(n, verts, adj)


@dataclass(frozen=True)
class RecursiveStructureReport:
    n: int
    n_classes: int
    class_sizes: tuple[int, ...]
    isomorphic: tuple[bool, ...]
    internal_edges: int
    cross_edges: int

    @property
    def ok(self) -> bool:
        return self.n_classes == self.n and all(self.isomorphic)

    def summary(self) -> str:
        verdict = "confirmed" if self.ok else "NOT confirmed"
        return (
            f"B_{self.n}: {self.n_classes} classes by last position, sizes {list(self.class_sizes)}, "
            f"each isomorphic to B_{self.n - 1}: {all(self.isomorphic)}, "
            f"cross-class edges {self.cross_edges}; recursive structure {verdict}"
        )


def _drop_last(p: Permutation) -> Permutation:
    last = p.mapping[-1]
    return Permutation(tuple(x - (x > last) for x in p.mapping[:-1]))


def verify_recursive_structure(g: CayleyGraph) -> RecursiveStructureReport:
    """Split B_n by the value in the last position and check each class
    induces a copy of B_(n-1) via the relabelling that drops the last entry."""
    if g.n > MAX_GRAPH_N:
        raise TooLarge(f"bubble-sort graphs are capped at n = {MAX_GRAPH_N}")
    if g.n < 3:
        raise ValidationError("recursive structure needs n >= 3")
    smaller = build_bubble_sort_graph(g.n - 1)
    small_edges = {frozenset(e) for e in smaller.edges()}
    classes: dict[int, list[Permutation]] = {}
    for v in g.vertices:
        classes.setdefault(v.mapping[-1], []).append(v)
    iso, internal = [], 0
    for key in sorted(classes):
        members = classes[key]
        member_set = set(members)
        image = {v: _drop_last(v) for v in members}
        bijective = len(set(image.values())) == len(members) and set(image.values()) == set(smaller.vertices)
        induced = {frozenset((image[u], image[w])) for u in members for w in g.adjacency[u] if w in member_set}
        internal += len(induced)
        iso.append(bijective and induced == small_edges)
    total = len(g.edges())
    return RecursiveStructureReport(
        n=g.n,
        n_classes=len(classes),
        class_sizes=tuple(len(classes[k]) for k in sorted(classes)),
        isomorphic=tuple(iso),
        internal_edges=internal,
        cross_edges=total - internal,
    )


def _local_vertex_connectivity(index: Mapping, adjacency: Mapping, s, t) -> int:
    """Max number of internally vertex-disjoint s-t paths for non-adjacent s, t.

    Unit-capacity max flow on the split graph: node v becomes v_in -> v_out.
    """
    n = len(index)
    big = n + 1
    cap: dict[tuple[int, int], int] = {}
    nbrs: list[list[int]] = [[] for _ in range(2 * n)]

    def add(a: int, b: int, c: int) -> None:
        if (a, b) not in cap:
            nbrs[a].append(b)
            nbrs[b].append(a)
            cap[(a, b)] = 0
            cap.setdefault((b, a), 0)
        cap[(a, b)] += c

    for v, i in index.items():
        add(2 * i, 2 * i + 1, big if v in (s, t) else 1)
        for w in adjacency[v]:
            add(2 * i + 1, 2 * index[w], big)
    source, sink = 2 * index[s] + 1, 2 * index[t]
    flow = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b in nbrs[a]:
                if b not in parent and cap[(a, b)] > 0:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            return flow
        b = sink
        while parent[b] is not None:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1


def vertex_connectivity(g: CayleyGraph | Mapping[Hashable, Iterable[Hashable]]) -> int:
    """Fewest vertices whose removal disconnects the graph (n - 1 for K_n).

    Even's scheme: the answer is the minimum degree or the smallest local
    connectivity between one of the first kappa + 1 vertices and any
    non-adjacent vertex.
    """
    if isinstance(g, CayleyGraph):
        if g.n > MAX_CONNECTIVITY_N:
            raise TooLarge(f"vertex connectivity is capped at n = {MAX_CONNECTIVITY_N}")
        adjacency, verts = g.adjacency, list(g.vertices)
    else:
        adjacency = {v: tuple(ws) for v, ws in g.items()}
        verts = list(adjacency)
    if not _is_connected(adjacency, verts):
        return 0
    adj_sets = {v: set(adjacency[v]) for v in verts}
    index = {v: i for i, v in enumerate(verts)}
    best = min(len(adj_sets[v]) for v in verts)
    for i, s in enumerate(verts):
        if i > best:
            break
        for t in verts[i + 1 :]:
            if t not in adj_sets[s]:
                best = min(best, _local_vertex_connectivity(index, adjacency, s, t))
    return best


def describe_graph(g: CayleyGraph) -> str:
    degs = sorted(g.degrees())
    reg = f"{degs[0]}-regular" if len(degs) == 1 else f"degrees {degs}"
    conn = "connected" if g.is_connected() else "disconnected"
    parts = [f"{len(g.vertices)} vertices", reg, conn]
    if g.n <= MAX_CONNECTIVITY_N:
        parts.append(f"connectivity {vertex_connectivity(g)}")
    return ", ".join(parts)
