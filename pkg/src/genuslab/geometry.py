"""Balls, planarity radius, short non-contractible cycles, 2-cycles, diameter."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import total_ordering

from .maps import CombinatorialMap, build_and_validate
from .surgery import CONTRACTIBLE, NONSEPARATING, SEPARATING, CycleRef, CycleWithTail, classify_cycle


@total_ordering
class _Infinity:
    """Sentinel larger than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("genuslab-infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = _Infinity()


def is_inf(x) -> bool:
    return x is INF


# --- balls -----------------------------------------------------------------


@dataclass
class BallComplex:
    radius: int
    distances: dict[int, int]  # ambient vertex -> distance, for vertices inside
    darts: list[int]  # ambient darts of the ball, in increasing order
    submap: CombinatorialMap | None  # None when the ball is a single vertex
    inner_faces: int  # ambient faces lying entirely inside

    @property
    def vertices(self) -> set[int]:
        return set(self.distances)

    @property
    def num_edges(self) -> int:
        return len(self.darts) // 2

    @property
    def genus(self) -> int:
        return 0 if self.submap is None else self.submap.genus


def ball(m: CombinatorialMap, r: int, dist: list[int] | None = None) -> BallComplex:
    """Vertices within distance r of the root vertex, the edges between them, the faces they close."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    dist = m.distances_from(m.root_vertex) if dist is None else dist
    vo = m.vertex_of
    inside = {v: d for v, d in enumerate(dist) if 0 <= d <= r}
    darts = [d for d in range(m.dart_count) if vo[d] in inside and vo[m.alpha[d]] in inside]
    inner = sum(1 for face in m.face_cycles if all(vo[d] in inside for d in face))
    if not darts:
        return BallComplex(r, inside, [], None, 0)
    new = {d: i for i, d in enumerate(darts)}
    sigma = []
    for d in darts:
        e = m.sigma[d]
        while e not in new:
            e = m.sigma[e]
        sigma.append(new[e])
    alpha = [new[m.alpha[d]] for d in darts]
    root = m.root if m.root in new else darts[0]
    sub = build_and_validate(sigma, alpha, new[root], profile="general")
    return BallComplex(r, inside, darts, sub, inner)


# --- cycles in BFS trees ---------------------------------------------------


def _bfs_tree(m: CombinatorialMap, source: int, allowed=None):
    """(dist, parent dart leading towards source) restricted to ``allowed`` vertices."""
    vo = m.vertex_of
    dist = {source: 0}
    parent = {source: -1}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for d in m.vertex_cycles[v]:
            w = vo[m.alpha[d]]
            if w in dist or (allowed is not None and w not in allowed):
                continue
            dist[w] = dist[v] + 1
            parent[w] = m.alpha[d]
            queue.append(w)
    return dist, parent


def _tree_cycle(m: CombinatorialMap, dist, parent, edge_dart: int) -> list[int]:
    """Simple cycle closed by a non-tree edge, as an oriented dart sequence."""
    vo = m.vertex_of
    x, y = vo[edge_dart], vo[m.alpha[edge_dart]]
    # climb both ends to their common ancestor
    up_x, up_y = [], []
    while x != y:
        if dist[x] >= dist[y]:
            d = parent[x]
            up_x.append(d)
            x = vo[m.alpha[d]]
        else:
            d = parent[y]
            up_y.append(d)
            y = vo[m.alpha[d]]
    # lca -> ... -> start of edge_dart, then edge_dart, then back up to lca
    down_x = [m.alpha[d] for d in reversed(up_x)]
    return down_x + [edge_dart] + up_y


def _non_tree_edges(m: CombinatorialMap, parent, allowed) -> list[int]:
    tree = {d for d in parent.values() if d >= 0}
    tree |= {m.alpha[d] for d in tree}
    vo = m.vertex_of
    out = []
    for d, a in m.edges():
        if d in tree:
            continue
        if vo[d] in allowed and vo[a] in allowed:
            out.append(d)
    return out


def planarity_radius(m: CombinatorialMap):
    """Largest r such that every cycle of B_r is contractible in m (INF in genus 0)."""
    if m.genus == 0:
        return INF
    root = m.root_vertex
    dist_all = m.distances_from(root)
    ecc = max(dist_all)
    for r in range(ecc + 1):
        allowed = {v for v, d in enumerate(dist_all) if d <= r}
        dist, parent = _bfs_tree(m, root, allowed)
        for e in _non_tree_edges(m, parent, allowed):
            cyc = _tree_cycle(m, dist, parent, e)
            if classify_cycle(m, cyc) != CONTRACTIBLE:
                return r - 1
    raise AssertionError("positive genus map without a non-contractible cycle")


def ball_planar_radius(m: CombinatorialMap):
    """Largest r such that B_r has genus 0."""
    if m.genus == 0:
        return INF
    dist = m.distances_from(m.root_vertex)
    for r in range(max(dist) + 1):
        if ball(m, r, dist).genus > 0:
            return r - 1
    raise AssertionError("unreachable")


@dataclass
class Systole:
    length: int
    cycle: tuple[int, ...]
    classification: str
    exact: bool


def shortest_non_contractible(m: CombinatorialMap, exact_limit: int = 0) -> Systole | None:
    """Shortest non-contractible cycle among BFS fundamental cycles from every vertex.

    The result is flagged exact when ``m`` has at most ``exact_limit``
    quadrangles and was cross-checked by full cycle enumeration.
    """
    if m.genus == 0:
        return None
    everything = set(range(m.num_vertices))
    best = None
    for v in range(m.num_vertices):
        dist, parent = _bfs_tree(m, v)
        for e in _non_tree_edges(m, parent, everything):
            cyc = _tree_cycle(m, dist, parent, e)
            if best is not None and len(cyc) >= best[0]:
                continue
            kind = classify_cycle(m, cyc)
            if kind != CONTRACTIBLE:
                best = (len(cyc), tuple(cyc), kind)
    assert best is not None
    exact = m.num_quadrangles <= exact_limit
    if exact:
        brute = min_noncontractible_brute(m)
        assert brute is not None and brute[0] == best[0]
    return Systole(best[0], best[1], best[2], exact)


def simple_cycles(m: CombinatorialMap, max_length: int):
    """Every simple cycle of length <= max_length, once per orientation and start.

    Cycles are yielded from their smallest vertex; each undirected cycle of
    length >= 3 appears in both orientations, 2-cycles once per ordered pair.
    """
    vo = m.vertex_of
    for s in range(m.num_vertices):
        on_path = {s}
        darts: list[int] = []

        def rec(v):
            for d in m.vertex_cycles[v]:
                w = vo[m.alpha[d]]
                if darts and d == m.alpha[darts[-1]]:
                    continue
                if w == s:
                    yield tuple(darts + [d])
                    continue
                if w < s or w in on_path or len(darts) + 1 >= max_length:
                    continue
                on_path.add(w)
                darts.append(d)
                yield from rec(w)
                darts.pop()
                on_path.discard(w)

        yield from rec(s)


def min_noncontractible_brute(m: CombinatorialMap, max_length: int | None = None):
    limit = max_length or m.num_vertices
    best = None
    for cyc in simple_cycles(m, limit):
        if best is not None and len(cyc) >= best[0]:
            continue
        if classify_cycle(m, cyc) != CONTRACTIBLE:
            best = (len(cyc), cyc)
    return best


# --- 2-cycles --------------------------------------------------------------


@dataclass
class TwoCycleCensus:
    nonseparating: int = 0
    separating: int = 0
    contractible: int = 0
    pairs: list[tuple[int, int, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.nonseparating + self.separating + self.contractible


def two_cycle_census(m: CombinatorialMap) -> TwoCycleCensus:
    """Classify every pair of distinct parallel edges."""
    vo = m.vertex_of
    groups: dict[tuple[int, int], list[int]] = {}
    for d, a in m.edges():
        x, y = vo[d], vo[a]
        if x == y:
            continue
        # orient every edge of the group from the same end
        key = (min(x, y), max(x, y))
        groups.setdefault(key, []).append(d if x == key[0] else a)
    out = TwoCycleCensus()
    for darts in groups.values():
        for i in range(len(darts)):
            for j in range(i + 1, len(darts)):
                c1, c2 = darts[i], m.alpha[darts[j]]
                kind = classify_cycle(m, (c1, c2))
                out.pairs.append((min(c1, m.alpha[c1]), min(c2, m.alpha[c2]), kind))
                if kind == NONSEPARATING:
                    out.nonseparating += 1
                elif kind == SEPARATING:
                    out.separating += 1
                else:
                    out.contractible += 1
    return out


def vertex_disjoint_pairs(m: CombinatorialMap) -> int:
    """Unordered pairs of edges with four distinct endpoints."""
    vo = m.vertex_of
    edges = [(vo[d], vo[a]) for d, a in m.edges()]
    count = 0
    for i in range(len(edges)):
        a = set(edges[i])
        for j in range(i + 1, len(edges)):
            if not a & set(edges[j]):
                count += 1
    return count


# --- cycles with tails -----------------------------------------------------


def cycle_with_tail_min(m: CombinatorialMap, search_cap: int, pr=None):
    """Smallest cycle with tail, searched over sizes <= search_cap.

    Returns ``(lower, upper, certificate, exact)``.  ``lower`` is PR + 1;
    ``upper`` is the best size found (INF if none); ``exact`` is true when
    the search covered every size up to ``upper``.  Small maps may admit no
    cycle with tail at all (every non-contractible cycle through the root
    vertex avoids the root edge), in which case an uncapped search returns
    INF exactly.
    """
    if search_cap < 1:
        raise ValueError("search_cap must be >= 1")
    if m.genus == 0:
        return INF, INF, None, True
    pr = planarity_radius(m) if pr is None else pr
    lower = pr + 1
    vo = m.vertex_of
    r0, r1 = vo[m.root], vo[m.alpha[m.root]]
    root_edge = min(m.root, m.alpha[m.root])
    best = None
    for cyc in simple_cycles(m, search_cap):
        ell = len(cyc)
        if best is not None and ell >= best[0]:
            continue
        cyc_verts = {vo[d] for d in cyc}
        on_root_edge = any(min(d, m.alpha[d]) == root_edge for d in cyc)
        if on_root_edge:
            size, path = ell, ()
        elif r0 in cyc_verts:
            continue
        else:
            path = _tail(m, r0, r1, cyc_verts, search_cap - ell)
            if path is None:
                continue
            size = ell + len(path)
        if size > search_cap or (best is not None and size >= best[0]):
            continue
        if classify_cycle(m, cyc) == CONTRACTIBLE:
            continue
        best = (size, path, cyc)
    if best is None:
        # a cycle has at most V edges and a tail at most V - 1
        return lower, INF, None, search_cap >= 2 * m.num_vertices
    return lower, best[0], CycleWithTail(tuple(best[1]), CycleRef(tuple(best[2]))), True


def _tail(m: CombinatorialMap, r0: int, r1: int, cyc_verts: set[int], budget: int):
    """Shortest simple path starting with the root dart and touching the cycle only at its end."""
    if budget < 1:
        return None
    vo = m.vertex_of
    if r1 in cyc_verts:
        return (m.root,)
    prev = {r1: m.root}
    queue = deque([(r1, 1)])
    while queue:
        v, length = queue.popleft()
        if length >= budget:
            continue
        for d in m.vertex_cycles[v]:
            w = vo[m.alpha[d]]
            if w == r0 or w in prev:
                continue
            prev[w] = d
            if w in cyc_verts:
                path = [d]
                x = v
                while x != r1:
                    path.append(prev[x])
                    x = vo[prev[x]]
                path.append(m.root)
                return tuple(reversed(path))
            queue.append((w, length + 1))
    return None


# --- diameter --------------------------------------------------------------


def diameter(m: CombinatorialMap, exact_limit: int = 5000) -> tuple[int, bool]:
    """(diameter, exact).  Above ``exact_limit`` vertices a double sweep gives a lower bound."""
    n_v = m.num_vertices
    if n_v <= 1:
        return 0, True
    if n_v <= exact_limit:
        return max(max(m.distances_from(v)) for v in range(n_v)), True
    d0 = m.distances_from(0)
    far = max(range(n_v), key=d0.__getitem__)
    return max(m.distances_from(far)), False


# --- report ----------------------------------------------------------------


METRICS = ("pr", "systole", "two-cycles", "ct", "diameter")


@dataclass
class GeometryReport:
    n: int
    g: int
    planarity_radius: object = None
    ball_planar_radius: object = None
    systole: int | None = None
    systole_cycle: tuple[int, ...] = ()
    x_nonsep_2cycles: int | None = None
    ct_lower: object = None
    ct_upper: object = None
    ct_certificate: CycleWithTail | None = None
    diameter: int | None = None
    flags: list[str] = field(default_factory=list)

    def row(self, index: int) -> list[str]:
        def fmt(x):
            return "" if x is None else str(x)

        return [
            str(index),
            str(self.n),
            str(self.g),
            fmt(self.planarity_radius),
            fmt(self.ball_planar_radius),
            fmt(self.systole),
            fmt(self.x_nonsep_2cycles),
            fmt(self.ct_lower),
            fmt(self.ct_upper),
            fmt(self.diameter),
            ";".join(self.flags),
        ]


CSV_HEADER = [
    "map_index",
    "n",
    "g",
    "pr",
    "ball_planar_radius",
    "systole",
    "x_nonsep_2cycles",
    "ct_lower",
    "ct_upper",
    "diameter",
    "flags",
]


def analyze(m: CombinatorialMap, metrics=METRICS, search_cap: int = 6) -> GeometryReport:
    rep = GeometryReport(m.num_quadrangles, m.genus)
    metrics = set(metrics)
    unknown = metrics - set(METRICS)
    if unknown:
        raise ValueError(f"unknown metrics {sorted(unknown)}")
    pr = None
    if "pr" in metrics or "ct" in metrics:
        pr = planarity_radius(m)
    if "pr" in metrics:
        rep.planarity_radius = pr
        rep.ball_planar_radius = ball_planar_radius(m)
    if "systole" in metrics:
        s = shortest_non_contractible(m)
        if s is not None:
            rep.systole, rep.systole_cycle = s.length, s.cycle
            rep.flags.append("systole-bfs-candidates")
    if "two-cycles" in metrics:
        rep.x_nonsep_2cycles = two_cycle_census(m).nonseparating
    if "ct" in metrics:
        lo, up, cert, exact = cycle_with_tail_min(m, search_cap, pr)
        rep.ct_lower, rep.ct_upper, rep.ct_certificate = lo, up, cert
        if not exact:
            rep.flags.append("ct-search-capped")
    if "diameter" in metrics:
        d, exact = diameter(m)
        rep.diameter = d
        if not exact:
            rep.flags.append("diameter-lower-bound")
    return rep
