"""Exact counting engines over point sets.

Pinned dot-product sets, distinct dot products, weighted-tree embedding and
homomorphism counts, distinct weight tuples, point-line incidences, radial
histograms, the consecutive-points proof multigraph, and the hyperplane
pigeonhole descent.  Everything here compares exact rationals; no tolerance
appears anywhere.

Zero dot products are excluded by default in every operation and can be
admitted with ``include_zero=True``.
"""

from __future__ import annotations

import heapq
import os
import tempfile
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .geometry import (
    AlphaHyperplane,
    Direction,
    Point,
    PointSet,
    dot,
    is_origin,
    radial_direction,
)
from .trees import Tree, WeightedTree

__all__ = [
    "DotProductIndex",
    "DotProductSummary",
    "RadialHistogram",
    "ProofGraphStats",
    "DescentLevel",
    "DescentTrace",
    "pinned_set",
    "distinct_dot_products",
    "count_embeddings",
    "count_homomorphisms",
    "distinct_weight_tuples",
    "pinned_weight_tuples",
    "product_set",
    "incidences",
    "radial_histogram",
    "proof_graph_edges",
    "proof_multigraph",
    "max_pinned",
    "hyperplane_descent",
    "count_segment_crossings",
]


class DotProductIndex:
    """All dot products between two point sets, grouped for fast lookup.

    Built once, queried by every counter.  ``partners(p, a)`` lists the points
    q of the right-hand set with p.q = a, including q = p itself when both
    sides share the point (a point lies on its own alpha-line when p.p = a).
    ``pairs(a)`` lists ordered pairs of *distinct* points, so for a single set
    the list sizes over all values sum to |E|^2 - |E| (minus zero products
    unless they were indexed).
    """

    def __init__(
        self,
        left: PointSet,
        right: PointSet | None = None,
        *,
        include_zero: bool = False,
    ):
        if right is not None and right.dim != left.dim:
            raise ValueError("point sets must share a dimension")
        self.left = left
        self.right = right if right is not None else left
        self.include_zero = include_zero
        self._partners: dict[Point, dict[Fraction, list[Point]]] = {}
        self._pairs: dict[Fraction, list[tuple[Point, Point]]] = {}
        for p in self.left.points:
            by_value: dict[Fraction, list[Point]] = {}
            for q in self.right.points:
                value = dot(p, q)
                if value == 0 and not include_zero:
                    continue
                by_value.setdefault(value, []).append(q)
                if p != q:
                    self._pairs.setdefault(value, []).append((p, q))
            self._partners[p] = by_value

    def values(self) -> Iterable[Fraction]:
        return self._pairs.keys()

    def pairs(self, value: Fraction) -> Sequence[tuple[Point, Point]]:
        return self._pairs.get(Fraction(value), ())

    def partners(self, p: Point, value: Fraction) -> Sequence[Point]:
        return self._partners[p].get(Fraction(value), ())

    def partner_map(self, p: Point) -> dict[Fraction, list[Point]]:
        return self._partners[p]

    def pair_total(self) -> int:
        return sum(len(v) for v in self._pairs.values())


def pinned_set(p: Point, points: PointSet, include_zero: bool = False) -> frozenset[Fraction]:
    """The set of dot products determined by the pin ``p`` against ``points``."""
    if is_origin(p):
        raise ValueError("the origin cannot be a pin")
    values = {dot(p, q) for q in points.points}
    if not include_zero:
        values.discard(Fraction(0))
    return frozenset(values)


class DotProductSummary(NamedTuple):
    distinct: int
    max_multiplicity: int


def distinct_dot_products(
    points: PointSet,
    second: PointSet | None = None,
    *,
    include_zero: bool = False,
) -> DotProductSummary:
    """Distinct dot products over ordered pairs of distinct points.

    Returns the number of distinct values and the largest number of ordered
    pairs producing any single value.  With ``second`` given, pairs run over
    ``points x second`` instead of within one set.
    """
    right = second if second is not None else points
    counts: Counter[Fraction] = Counter()
    for p in points.points:
        for q in right.points:
            if p == q:
                continue
            value = dot(p, q)
            if value == 0 and not include_zero:
                continue
            counts[value] += 1
    if not counts:
        return DotProductSummary(0, 0)
    return DotProductSummary(len(counts), max(counts.values()))


def _zero_weight_guard(weights: Sequence[Fraction], include_zero: bool) -> None:
    if not include_zero and any(w == 0 for w in weights):
        raise ValueError("zero edge weight; pass include_zero=True to count it")


def count_embeddings(
    wt: WeightedTree,
    points: PointSet,
    *,
    include_zero: bool = False,
    threads: int = 1,
    index: DotProductIndex | None = None,
) -> int:
    """Number of injective vertex maps realizing every edge weight exactly.

    Copies are labeled: maps differing by a tree automorphism count
    separately.  Backtracks over the dot-product index in canonical edge
    order, pruning any branch whose next edge has no exact-weight extension.

    With ``threads > 1`` the pair list of the first edge is partitioned and
    counted concurrently; integer addition is commutative, so the result is
    identical for every thread count.
    """
    weights = wt.require_weights()
    tree = wt.tree
    _zero_weight_guard(weights, include_zero)
    if tree.num_vertices > len(points):
        return 0
    if not tree.edges:
        return len(points)
    if index is None:
        index = DotProductIndex(points, include_zero=include_zero)
    edges = tree.edges

    def extend(j: int, assignment: dict[int, Point], used: set[Point]) -> int:
        if j == len(edges):
            return 1
        a, b = edges[j]
        w = weights[j]
        pa = assignment.get(a)
        pb = assignment.get(b)
        if pa is not None and pb is not None:
            return extend(j + 1, assignment, used) if dot(pa, pb) == w else 0
        total = 0
        if pa is not None or pb is not None:
            anchor, free = (pa, b) if pa is not None else (pb, a)
            for y in index.partners(anchor, w):
                if y in used:
                    continue
                assignment[free] = y
                used.add(y)
                total += extend(j + 1, assignment, used)
                del assignment[free]
                used.discard(y)
        else:
            for x, y in index.pairs(w):
                if x in used or y in used:
                    continue
                assignment[a] = x
                assignment[b] = y
                used.add(x)
                used.add(y)
                total += extend(j + 1, assignment, used)
                del assignment[a]
                del assignment[b]
                used.discard(x)
                used.discard(y)
        return total

    first_pairs = index.pairs(weights[0])
    a0, b0 = edges[0]

    def count_chunk(chunk: Sequence[tuple[Point, Point]]) -> int:
        subtotal = 0
        for x, y in chunk:
            subtotal += extend(1, {a0: x, b0: y}, {x, y})
        return subtotal

    if threads <= 1 or len(first_pairs) < 2:
        return count_chunk(first_pairs)
    chunks = [list(first_pairs[i::threads]) for i in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(count_chunk, chunks))


def count_homomorphisms(
    wt: WeightedTree,
    points: PointSet,
    *,
    include_zero: bool = False,
    index: DotProductIndex | None = None,
) -> int:
    """Number of not-necessarily-injective maps satisfying all edge weights.

    Dynamic program over the tree rooted at vertex 1: each vertex's table
    counts partial maps of its subtree, children combining multiplicatively.
    Always at least ``count_embeddings`` on the same input.
    """
    weights = wt.require_weights()
    tree = wt.tree
    _zero_weight_guard(weights, include_zero)
    if not tree.edges:
        return len(points)
    if index is None:
        index = DotProductIndex(points, include_zero=include_zero)
    order = tree.bfs_order(1)
    adj = tree.adjacency()
    parent: dict[int, int] = {order[0]: 0}
    for v in order[1:]:
        for u in adj[v]:
            if u in parent:
                parent[v] = u
                break
    edge_idx = tree.edge_index()
    table: dict[int, dict[Point, int]] = {}
    for v in reversed(order):
        children = [u for u in adj[v] if parent.get(u) == v]
        row: dict[Point, int] = {}
        for x in points.points:
            total = 1
            for c in children:
                w = weights[edge_idx[(min(v, c), max(v, c))]]
                total *= sum(table[c][y] for y in index.partners(x, w))
                if total == 0:
                    break
            row[x] = total
        table[v] = row
    return sum(table[order[0]].values())


def _value_id_matrix(points: PointSet) -> tuple[list[list[int]], list[Fraction], int]:
    """Dense matrix of dot-product value ids for fast tuple enumeration."""
    pts = points.points
    n = len(pts)
    ids: dict[Fraction, int] = {}
    values: list[Fraction] = []
    matrix = [[0] * n for _ in range(n)]
    for i in range(n):
        row = matrix[i]
        for j in range(n):
            v = dot(pts[i], pts[j])
            vid = ids.get(v)
            if vid is None:
                vid = len(values)
                ids[v] = vid
                values.append(v)
            row[j] = vid
    zero_id = ids.get(Fraction(0), -1)
    return matrix, values, zero_id


def _enumerate_weight_tuples(
    tree: Tree,
    points: PointSet,
    *,
    include_zero: bool,
    pinned: tuple[int, int] | None,
    emit,
) -> None:
    """Drive ``emit(tuple_of_value_ids)`` over all injective vertex maps.

    ``pinned`` fixes (vertex, point index).  Tuples follow canonical edge
    order; branches producing a zero component are pruned unless zero dot
    products were requested.
    """
    n = len(points)
    if tree.num_vertices > n:
        return
    matrix, _, zero_id = _value_id_matrix(points)
    root = pinned[0] if pinned is not None else 1
    order = tree.bfs_order(root)
    adj = tree.adjacency()
    parent: dict[int, int] = {root: 0}
    for v in order[1:]:
        for u in adj[v]:
            if u in parent:
                parent[v] = u
                break
    edge_idx = tree.edge_index()
    slot = {v: i for i, v in enumerate(order)}
    # For each order position > 0: (parent position, canonical edge index).
    hooks = []
    for v in order[1:]:
        u = parent[v]
        hooks.append((slot[u], edge_idx[(min(u, v), max(u, v))]))
    comps = [0] * tree.num_edges
    assigned = [0] * len(order)
    used = [False] * n
    k_pos = len(order)

    def rec(pos: int) -> None:
        if pos == k_pos:
            emit(tuple(comps))
            return
        parent_pos, j = hooks[pos - 1]
        prow = matrix[assigned[parent_pos]]
        for idx in range(n):
            if used[idx]:
                continue
            vid = prow[idx]
            if vid == zero_id and not include_zero:
                continue
            comps[j] = vid
            assigned[pos] = idx
            used[idx] = True
            rec(pos + 1)
            used[idx] = False

    if pinned is not None:
        start = pinned[1]
        assigned[0] = start
        used[start] = True
        rec(1)
    else:
        for idx in range(n):
            assigned[0] = idx
            used[idx] = True
            rec(1)
            used[idx] = False


def distinct_weight_tuples(
    tree: Tree,
    points: PointSet,
    *,
    include_zero: bool = False,
    collect: bool = False,
    spill_dir: str | None = None,
    spill_chunk: int = 200_000,
):
    """Count distinct edge-weight tuples over injective maps of ``tree``.

    Tuples are ordered by the canonical edge order, and tuples containing a
    zero dot product are excluded unless requested.  Returns the count, or
    ``(count, frozenset_of_tuples)`` with ``collect=True``.

    With ``spill_dir`` set, sorted-and-deduplicated chunks are spilled to
    temporary files and merge-counted, keeping memory proportional to
    ``spill_chunk`` instead of the number of distinct tuples.
    """
    if tree.num_edges == 0:
        raise ValueError("weight tuples need at least one edge")
    if collect and spill_dir is not None:
        raise ValueError("collect and spill_dir are mutually exclusive")
    if spill_dir is None:
        seen: set[tuple[int, ...]] = set()
        _enumerate_weight_tuples(
            tree, points, include_zero=include_zero, pinned=None, emit=seen.add
        )
        if collect:
            _, values, _ = _value_id_matrix(points)
            tuples = frozenset(tuple(values[i] for i in t) for t in seen)
            return len(seen), tuples
        return len(seen)

    files: list[str] = []
    buffer: list[tuple[int, ...]] = []

    def flush() -> None:
        if not buffer:
            return
        buffer.sort()
        fd, path = tempfile.mkstemp(dir=spill_dir, suffix=".tuples")
        with os.fdopen(fd, "w") as fh:
            prev = None
            for t in buffer:
                if t != prev:
                    fh.write(" ".join(map(str, t)) + "\n")
                    prev = t
        files.append(path)
        buffer.clear()

    def emit(t: tuple[int, ...]) -> None:
        buffer.append(t)
        if len(buffer) >= spill_chunk:
            flush()

    try:
        _enumerate_weight_tuples(
            tree, points, include_zero=include_zero, pinned=None, emit=emit
        )
        flush()
        streams = [open(path) for path in files]
        try:
            merged = heapq.merge(
                *[
                    (tuple(map(int, line.split())) for line in fh)
                    for fh in streams
                ]
            )
            count = 0
            prev = None
            for t in merged:
                if t != prev:
                    count += 1
                    prev = t
            return count
        finally:
            for fh in streams:
                fh.close()
    finally:
        for path in files:
            os.unlink(path)


def pinned_weight_tuples(
    tree: Tree,
    vertex: int,
    pin: Point,
    points: PointSet,
    *,
    include_zero: bool = False,
) -> int:
    """Distinct weight tuples over injective maps sending ``vertex`` to ``pin``."""
    if vertex not in tree.vertices:
        raise ValueError(f"no vertex {vertex}")
    pin = tuple(Fraction(c) for c in pin)
    try:
        pin_index = points.points.index(pin)
    except ValueError:
        raise ValueError(f"pin {pin} is not in the point set") from None
    if tree.num_edges == 0:
        raise ValueError("weight tuples need at least one edge")
    seen: set[tuple[int, ...]] = set()
    _enumerate_weight_tuples(
        tree,
        points,
        include_zero=include_zero,
        pinned=(vertex, pin_index),
        emit=seen.add,
    )
    return len(seen)


def product_set(a: Iterable, b: Iterable) -> frozenset[Fraction]:
    """Exact set of pairwise products {x*y : x in a, y in b}."""
    left = [Fraction(x) for x in a]
    right = [Fraction(y) for y in b]
    return frozenset(x * y for x in left for y in right)


def incidences(points: PointSet, lines: Sequence[AlphaHyperplane]) -> int:
    """Exact number of (point, line) pairs with the point on the line."""
    if points.dim != 2:
        raise ValueError("incidence counting is planar; need dimension 2")
    for line in lines:
        if line.dim != 2:
            raise ValueError("incidence counting is planar; line has wrong dimension")
    return sum(1 for line in lines for p in points.points if line.contains(p))


@dataclass(frozen=True)
class RadialHistogram:
    """Point counts bucketed by the radial line through the origin."""

    buckets: dict[Direction, int]
    total: int

    @property
    def max_count(self) -> int:
        return max(self.buckets.values(), default=0)

    def within_cap(self, c: Fraction | int = 1) -> bool:
        """Exact check of max bucket <= c * total^(2/3)."""
        c = Fraction(c)
        lhs = self.max_count * c.denominator
        return lhs**3 <= c.numerator**3 * self.total**2


def radial_histogram(points: PointSet, *, allow_origin: bool = False) -> RadialHistogram:
    counts: Counter[Direction] = Counter()
    total = 0
    for p in points.points:
        if is_origin(p):
            if not allow_origin:
                raise ValueError("point set contains the origin")
            continue
        counts[radial_direction(p)] += 1
        total += 1
    return RadialHistogram(dict(counts), total)


def _orient(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _properly_cross(s1: tuple[Point, Point], s2: tuple[Point, Point]) -> bool:
    p1, p2 = s1
    q1, q2 = s2
    if p1 in (q1, q2) or p2 in (q1, q2):
        return False
    o1 = _orient(p1, p2, q1)
    o2 = _orient(p1, p2, q2)
    if (o1 > 0) == (o2 > 0) or o1 == 0 or o2 == 0:
        return False
    o3 = _orient(q1, q2, p1)
    o4 = _orient(q1, q2, p2)
    if (o3 > 0) == (o4 > 0) or o3 == 0 or o4 == 0:
        return False
    return True


def count_segment_crossings(segments: Sequence[tuple[Point, Point]]) -> int:
    """Number of unordered pairs of distinct segments that properly cross.

    Segments sharing an endpoint, merely touching, or collinear do not count.
    A bounding-box sweep prunes pairs before the exact orientation tests.
    """
    boxes = []
    for a, b in segments:
        xs = (a[0], b[0]) if a[0] <= b[0] else (b[0], a[0])
        ys = (a[1], b[1]) if a[1] <= b[1] else (b[1], a[1])
        boxes.append((xs[0], xs[1], ys[0], ys[1], (a, b)))
    boxes.sort(key=lambda entry: entry[0])
    crossings = 0
    for i, (_, maxx, miny, maxy, seg) in enumerate(boxes):
        for j in range(i + 1, len(boxes)):
            other = boxes[j]
            if other[0] > maxx:
                break
            if other[3] < miny or other[2] > maxy:
                continue
            if _properly_cross(seg, other[4]):
                crossings += 1
    return crossings


def proof_graph_edges(
    points: PointSet,
    second: PointSet | None = None,
    *,
    include_zero: bool = False,
) -> dict[tuple[Point, Point], int]:
    """Multigraph edges of the consecutive-points construction.

    For each pin p in the first set and each of its dot-product values a
    against the second set, the points of the second set on the alpha-line of
    p are sorted along the line and consecutive pairs become edges; lines
    holding a single point are dropped.  Pins sharing a radial line can
    produce the same geometric line, so multiplicities accumulate per
    (pin, value) contribution.

    Returns a map from the segment (endpoint pair, lexicographically ordered)
    to its edge multiplicity.
    """
    right = second if second is not None else points
    if points.dim != 2 or right.dim != 2:
        raise ValueError("the proof multigraph is planar; need dimension 2")
    for ps in (points, right):
        for p in ps.points:
            if is_origin(p):
                raise ValueError("point sets must not contain the origin")
    index = DotProductIndex(points, right, include_zero=include_zero)
    edges: Counter[tuple[Point, Point]] = Counter()
    for p in points.points:
        for members in index.partner_map(p).values():
            if len(members) < 2:
                continue
            # Lexicographic order is monotone along any line.
            line_pts = sorted(members)
            for r, s in zip(line_pts, line_pts[1:]):
                edges[(r, s)] += 1
    return dict(edges)


@dataclass(frozen=True)
class ProofGraphStats:
    """Summary of the consecutive-points multigraph and its drawing.

    ``max_pinned_size`` is the largest number of *distinct* dot products any
    pin determines (the cardinality, which is what the crossing argument
    uses).  ``drawing_crossings`` counts proper crossings between distinct
    straight segments; coincident multi-edges are drawn together and cross
    nothing among themselves.
    """

    vertices: int
    edges: int
    max_multiplicity: int
    max_pinned_size: int
    drawing_crossings: int
    crossing_bound_ok: bool


def proof_multigraph(
    points: PointSet,
    second: PointSet | None = None,
    *,
    include_zero: bool = False,
) -> ProofGraphStats:
    """Build the consecutive-points multigraph and report its statistics.

    Reports v, e, the maximum edge multiplicity m, the maximum pinned-set
    cardinality t, the number of proper crossings in the straight-line
    drawing, and whether crossings <= |E|^2 * t^2.
    """
    right = second if second is not None else points
    edge_counts = proof_graph_edges(points, right, include_zero=include_zero)
    index = DotProductIndex(points, right, include_zero=include_zero)
    t = max((len(index.partner_map(p)) for p in points.points), default=0)
    vertices = len(set(points.points) | set(right.points))
    e = sum(edge_counts.values())
    m = max(edge_counts.values(), default=0)
    crossings = count_segment_crossings(list(edge_counts.keys()))
    bound_ok = crossings <= len(points) ** 2 * t**2
    return ProofGraphStats(vertices, e, m, t, crossings, bound_ok)


def max_pinned(points: PointSet, *, include_zero: bool = False) -> tuple[Point, int]:
    """The pin in the set maximizing its pinned dot-product set, with the size.

    Ties break toward the earliest point; the origin never serves as a pin.
    """
    if len(points) < 2:
        raise ValueError("need at least two points")
    best: tuple[Point, int] | None = None
    for p in points.points:
        if is_origin(p):
            continue
        size = len(pinned_set(p, points, include_zero))
        if best is None or size > best[1]:
            best = (p, size)
    assert best is not None
    return best


def _affine_rank(pts: Sequence[Point]) -> int:
    if len(pts) <= 1:
        return 0
    base = pts[0]
    rows = [[c - b for c, b in zip(p, base)] for p in pts[1:]]
    rank = 0
    cols = len(base)
    pivot_row = 0
    for col in range(cols):
        pivot = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        prow = rows[pivot_row]
        inv = prow[col]
        for r in range(pivot_row + 1, len(rows)):
            factor = rows[r][col] / inv
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], prow)]
        pivot_row += 1
        rank += 1
        if pivot_row == len(rows):
            break
    return rank


@dataclass(frozen=True)
class DescentLevel:
    pin: Point
    distinct_count: int
    hyperplane: AlphaHyperplane
    points_remaining: int


@dataclass(frozen=True)
class DescentTrace:
    """Record of the pigeonhole descent through dot-product level sets.

    Each level stores the pin, its distinct dot-product count within the
    current flat, the chosen heaviest level-set hyperplane, and the points
    surviving the restriction.  ``reported_count`` is the best pinned
    lower bound the run witnesses: the maximum of the level counts and the
    final planar pinned count.
    """

    levels: tuple[DescentLevel, ...]
    final_points: int
    final_pin: Point | None
    final_pinned_count: int

    @property
    def reported_count(self) -> int:
        components = [lvl.distinct_count for lvl in self.levels]
        components.append(self.final_pinned_count)
        return max(components)


def hyperplane_descent(points: PointSet, *, include_zero: bool = False) -> DescentTrace:
    """Descend through heaviest dot-product level sets until a plane remains.

    At each of up to d-2 levels, the pin maximizing distinct dot products
    within the current point set is found, its level-set hyperplanes bucket
    the points, and the heaviest bucket (ties toward the earliest point)
    becomes the next set.  Degenerate sets already spanning at most a plane
    stop early.  The final level reports the maximum pinned count among the
    remaining points.
    """
    d = points.dim
    if d < 3:
        raise ValueError("the descent needs ambient dimension at least 3")
    if len(points) < d:
        raise ValueError(f"need at least {d} points")
    current = list(points.points)
    levels: list[DescentLevel] = []
    for _ in range(d - 2):
        if len(current) < 2 or _affine_rank(current) <= 2:
            break
        subset = PointSet(d, tuple(current))
        pin, t = max_pinned(subset, include_zero=include_zero)
        buckets: dict[Fraction, list[Point]] = {}
        order: dict[Fraction, int] = {}
        for pos, y in enumerate(current):
            value = dot(pin, y)
            if value == 0 and not include_zero:
                continue
            buckets.setdefault(value, []).append(y)
            order.setdefault(value, pos)
        best_value = min(
            buckets, key=lambda v: (-len(buckets[v]), order[v])
        )
        members = buckets[best_value]
        if len(members) == len(current):
            break
        levels.append(
            DescentLevel(pin, t, AlphaHyperplane(pin, best_value), len(members))
        )
        current = members
    if len(current) >= 2:
        final_pin, final_count = max_pinned(
            PointSet(d, tuple(current)), include_zero=include_zero
        )
    else:
        final_pin, final_count = None, 0
    return DescentTrace(tuple(levels), len(current), final_pin, final_count)
