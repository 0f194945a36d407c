"""Unicellular maps: decorated trees, trisections, uniform sampling, labellings.

A unicellular map is *normalised* when its darts are numbered by the face
tour from the root, i.e. ``phi[d] == d + 1 (mod 2n)``; it is then fully
described by ``alpha``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .counting import odd_cycle_perm_counts, unicellular_count
from .maps import CombinatorialMap, MapValidationError, build_and_validate, compose, cycles, inverse
from .rng import randbelow, weighted_index


class SamplerBudgetError(RuntimeError):
    """Raised when a rejection loop exhausts its attempt budget."""

    def __init__(self, message: str, attempts: int, accepted: int = 0):
        super().__init__(message)
        self.attempts = attempts
        self.accepted = accepted


# --- plane trees -----------------------------------------------------------


@dataclass(frozen=True)
class PlaneTree:
    """Rooted plane tree as a Dyck word (+1 = step away from the root)."""

    steps: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.steps) // 2

    def __post_init__(self):
        h = 0
        for s in self.steps:
            h += s
            if s not in (1, -1) or h < 0:
                raise ValueError("not a Dyck word")
        if h:
            raise ValueError("unbalanced Dyck word")

    def to_map(self) -> CombinatorialMap:
        """Contour walk: dart i is the i-th step of the tour."""
        size = len(self.steps)
        if size == 0:
            return CombinatorialMap((), (), 0, frozenset(), "unicellular")
        alpha = [0] * size
        stack = []
        for i, s in enumerate(self.steps):
            if s == 1:
                stack.append(i)
            else:
                j = stack.pop()
                alpha[i], alpha[j] = j, i
        return _from_tour_alpha(alpha)


def sample_plane_tree(n: int, rng: np.random.Generator) -> PlaneTree:
    """Uniform rooted plane tree with n edges (cycle lemma)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    word = np.array([1] * n + [-1] * (n + 1))
    rng.shuffle(word)
    prefix = np.cumsum(word)
    # the rotation starting right after the first minimum stays >= 0
    k = int(np.argmin(prefix)) + 1
    rotated = np.concatenate([word[k:], word[:k]])
    return PlaneTree(tuple(int(s) for s in rotated[:-1]))


def all_plane_trees(n: int) -> list[PlaneTree]:
    out = []

    def rec(prefix, up, height):
        if len(prefix) == 2 * n:
            out.append(PlaneTree(tuple(prefix)))
            return
        if up < n:
            rec(prefix + [1], up + 1, height + 1)
        if height > 0:
            rec(prefix + [-1], up, height - 1)

    rec([], 0, 0)
    return out


# --- signed permutations with odd cycles -----------------------------------


@dataclass(frozen=True)
class CDecoratedTree:
    tree: PlaneTree
    cycles: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...]

    @property
    def genus(self) -> int:
        return (self.tree.n + 1 - len(self.cycles)) // 2


def sample_c_permutation(size: int, k: int, rng: np.random.Generator):
    """Uniform permutation of ``range(size)`` with k cycles, all odd; one +-1 sign per cycle."""
    table = odd_cycle_perm_counts(size)
    if table(size, k) == 0:
        raise ValueError(f"no odd-cycle permutation of {size} points with {k} cycles")
    remaining = list(range(size))
    out = []
    kk = k
    while remaining:
        m = len(remaining)
        first = remaining[0]
        weights = [
            comb(m - 1, 2 * j) * _falling(2 * j) * table(m - 1 - 2 * j, kk - 1)
            for j in range((m - 1) // 2 + 1)
        ]
        j = weighted_index(rng, weights)
        others = remaining[1:]
        chosen = []
        for _ in range(2 * j):
            chosen.append(others.pop(int(rng.integers(len(others)))))
        out.append((first, *chosen))
        remaining = others
        kk -= 1
    signs = tuple(int(s) for s in rng.choice([-1, 1], size=len(out)))
    return tuple(out), signs


def _falling(m: int) -> int:
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


# --- normalisation and gluing ----------------------------------------------


def _from_tour_alpha(alpha: Sequence[int]) -> CombinatorialMap:
    size = len(alpha)
    phi = [(d + 1) % size for d in range(size)]
    return CombinatorialMap(compose(phi, alpha), tuple(alpha), 0, frozenset(), "unicellular")


def tour_positions(m: CombinatorialMap) -> list[int]:
    """Time at which the face tour from the root visits each dart."""
    if m.dart_count == 0:
        return []
    if m.num_faces != 1:
        raise MapValidationError(f"map is not unicellular ({m.num_faces} faces)")
    pos = [0] * m.dart_count
    d = m.root
    for t in range(m.dart_count):
        pos[d] = t
        d = m.phi[d]
    return pos


def normalise(m: CombinatorialMap) -> CombinatorialMap:
    """Renumber darts by tour time so that ``phi`` is ``d -> d + 1``."""
    pos = tour_positions(m)
    alpha = [0] * m.dart_count
    for d in range(m.dart_count):
        alpha[pos[d]] = pos[m.alpha[d]]
    return _from_tour_alpha(alpha)


def glue_vertices(m: CombinatorialMap, vertices: Sequence[int]) -> CombinatorialMap:
    """Merge an odd number of distinct vertices into one, keeping a single face.

    Each vertex is entered at its first corner in the reversed tour from the
    root; these corners are linked in reversed-tour order.  Gluing 2p+1
    vertices raises the genus by p, and summed over p this is exactly
    2g-to-1 onto unicellular maps of genus g.
    """
    if len(vertices) % 2 == 0 or len(set(vertices)) != len(vertices):
        raise ValueError("need an odd number of distinct vertices")
    size = m.dart_count
    pos = tour_positions(m)

    def rev_time(d: int) -> int:
        return (-pos[d]) % size

    xs = sorted((min(m.vertex_cycles[v], key=rev_time) for v in vertices), key=rev_time)
    tau = list(range(size))
    for i, x in enumerate(xs):
        tau[x] = xs[i - 1]
    sigma = [tau[s] for s in m.sigma]
    return normalise(CombinatorialMap(tuple(sigma), m.alpha, m.root, frozenset(), "unicellular"))


def sample_unicellular(n: int, g: int, rng: np.random.Generator) -> CombinatorialMap:
    """Uniform rooted unicellular map with n edges and genus g.

    Recursively: pick p with weight C(V + 2p, 2p + 1) U(n, g - p), draw a
    uniform map of genus g - p, glue 2p + 1 uniformly chosen vertices.
    """
    if n < 0 or g < 0 or n + 1 - 2 * g < 1:
        raise ValueError(f"no unicellular map with n={n}, g={g}")
    if g == 0:
        return sample_plane_tree(n, rng).to_map()
    n_vertices = n + 1 - 2 * g
    weights = [
        comb(n_vertices + 2 * p, 2 * p + 1) * unicellular_count(n, g - p) for p in range(1, g + 1)
    ]
    p = weighted_index(rng, weights) + 1
    base = sample_unicellular(n, g - p, rng)
    chosen = rng.choice(base.num_vertices, size=2 * p + 1, replace=False)
    return glue_vertices(base, [int(v) for v in chosen])


def assemble_unicellular(decorated: CDecoratedTree) -> CombinatorialMap:
    """Merge tree vertices along the cycles of the decoration.

    Tree vertices are numbered by their first corner in the reversed tour;
    each cycle (in order of its smallest point) is glued with
    :func:`glue_vertices`.  The output is unicellular of genus
    ``(n + 1 - #cycles) / 2``.  Signs do not influence the shape.
    """
    tree = decorated.tree.to_map()
    n = decorated.tree.n
    points = sorted(p for c in decorated.cycles for p in c)
    if points != list(range(n + 1)) or any(len(c) % 2 == 0 for c in decorated.cycles):
        raise ValueError("decoration must be an odd-cycle permutation of the tree's vertices")
    if n == 0:
        return tree
    size = tree.dart_count

    def first_rev(v: int) -> int:
        return min(tree.vertex_cycles[v], key=lambda d: (-d) % size)

    order = sorted(range(tree.num_vertices), key=lambda v: (-first_rev(v)) % size)
    # darts survive gluing unchanged; renormalisation renames them, so track by tour
    anchors = [first_rev(v) for v in order]
    sigma = list(tree.sigma)
    alpha = tree.alpha
    for cyc in sorted(decorated.cycles, key=min):
        if len(cyc) == 1:
            continue
        current = CombinatorialMap(tuple(sigma), alpha, 0, frozenset(), "unicellular")
        vertices = [current.vertex_of[anchors[p]] for p in cyc]
        pos = tour_positions(current)
        xs = sorted(
            (min(current.vertex_cycles[v], key=lambda d: (-pos[d]) % size) for v in vertices),
            key=lambda d: (-pos[d]) % size,
        )
        tau = list(range(size))
        for i, x in enumerate(xs):
            tau[x] = xs[i - 1]
        sigma = [tau[s] for s in sigma]
    out = normalise(CombinatorialMap(tuple(sigma), alpha, 0, frozenset(), "unicellular"))
    expected = decorated.genus
    if out.num_faces != 1 or out.genus != expected:
        raise AssertionError("assembly broke unicellularity")
    return out


# --- trisections -----------------------------------------------------------


@dataclass(frozen=True)
class Trisection:
    """Corner between dart ``dart`` and its successor ``sigma[dart]``."""

    dart: int
    next: int


def find_trisections(m: CombinatorialMap) -> list[Trisection]:
    """Descents of the tour time around each vertex, minus the descent into its first dart."""
    pos = tour_positions(m)
    out = []
    for cyc in m.vertex_cycles:
        first = min(cyc, key=pos.__getitem__)
        for d in cyc:
            e = m.sigma[d]
            if pos[e] < pos[d] and e != first:
                out.append(Trisection(d, e))
    return out


def slice_trisection(
    m: CombinatorialMap, t: Trisection, labels: Sequence[int] | None = None
):
    """Split the vertex of ``t`` into three; returns ``(map, corners[, labels])``.

    ``corners`` is the ordered dart triple ``(a, b, c)`` needed by
    :func:`glue_three_corners`.  Dart ids are unchanged.  Vertex labels are
    copied onto the three new vertices.
    """
    pos = tour_positions(m)
    if m.sigma[t.dart] != t.next or t not in find_trisections(m):
        raise ValueError("corner is not a trisection")
    a = min(m.vertex_cycles[m.vertex_of[t.dart]], key=pos.__getitem__)
    b, c = t.dart, t.next
    tau_inv = list(range(m.dart_count))
    tau_inv[b], tau_inv[c], tau_inv[a] = a, b, c
    sigma = tuple(tau_inv[s] for s in m.sigma)
    out = build_and_validate(sigma, m.alpha, m.root, profile="unicellular")
    if labels is None:
        return out, (a, b, c)
    return out, (a, b, c), _transfer_labels(m, out, labels)


def glue_three_corners(m: CombinatorialMap, corners: tuple[int, int, int], labels=None):
    """Inverse of :func:`slice_trisection`."""
    a, b, c = corners
    verts = {m.vertex_of[a], m.vertex_of[b], m.vertex_of[c]}
    if len(verts) != 3:
        raise ValueError("corners must lie on three distinct vertices")
    tau = list(range(m.dart_count))
    tau[a], tau[b], tau[c] = b, c, a
    sigma = tuple(tau[s] for s in m.sigma)
    out = build_and_validate(sigma, m.alpha, m.root, profile="unicellular")
    if labels is None:
        return out
    return out, _transfer_labels(m, out, labels)


def _transfer_labels(src: CombinatorialMap, dst: CombinatorialMap, labels: Sequence[int]) -> list[int]:
    out = [0] * dst.num_vertices
    for v, cyc in enumerate(dst.vertex_cycles):
        out[v] = labels[src.vertex_of[cyc[0]]]
    return out


# --- well-labellings -------------------------------------------------------


@dataclass(frozen=True)
class LabeledUnicellular:
    map: CombinatorialMap
    labels: tuple[int, ...]

    def __post_init__(self):
        if not is_well_labelled(self.map, self.labels):
            raise MapValidationError("labels are not a well-labelling")

    @property
    def code(self) -> tuple:
        return labelled_code(self.map, self.labels)


def is_well_labelled(m: CombinatorialMap, labels: Sequence[int]) -> bool:
    if len(labels) != m.num_vertices or (labels and min(labels) != 1):
        return False
    vo = m.vertex_of
    return all(abs(labels[vo[d]] - labels[vo[m.alpha[d]]]) <= 1 for d in range(m.dart_count))


def labelled_code(m: CombinatorialMap, labels: Sequence[int]) -> tuple:
    """Canonical code of the map plus its labels read in traversal order."""
    from .maps import canonical_relabelling

    new = canonical_relabelling(m)
    order = sorted(range(m.dart_count), key=new.__getitem__)
    return m.code + tuple(labels[m.vertex_of[d]] for d in order)


def spanning_tree(m: CombinatorialMap) -> tuple[list[int], list[int]]:
    """BFS tree from the root vertex: ``(parent_dart, order)``.

    ``parent_dart[v]`` is the dart at v leading to its parent (-1 at the root).
    """
    parent = [-2] * m.num_vertices
    root = m.root_vertex
    parent[root] = -1
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in m.vertex_cycles[v]:
            w = m.vertex_of[m.alpha[d]]
            if parent[w] == -2:
                parent[w] = m.alpha[d]
                order.append(w)
                queue.append(w)
    return parent, order


def sample_well_labeling(m: CombinatorialMap, rng: np.random.Generator, tree=None) -> tuple[int, ...] | None:
    """One rejection attempt: uniform increments on a BFS tree, or ``None``.

    Every well-labelling of ``m`` is returned with probability
    ``3 ** -(V - 1)``.
    """
    parent, order = tree if tree is not None else spanning_tree(m)
    vo = m.vertex_of
    steps = rng.integers(-1, 2, size=len(order))
    labels = [0] * m.num_vertices
    for i, v in enumerate(order[1:], 1):
        labels[v] = labels[vo[m.alpha[parent[v]]]] + int(steps[i])
    for d in range(m.dart_count):
        if abs(labels[vo[d]] - labels[vo[m.alpha[d]]]) > 1:
            return None
    shift = 1 - min(labels)
    return tuple(x + shift for x in labels)


def sample_labelled_unicellular(
    n: int, g: int, rng: np.random.Generator, attempt_budget: int = 10**7, stats: dict | None = None
) -> LabeledUnicellular:
    """Uniform element of U^lab(n, g): redraw map and increments until accepted."""
    for attempt in range(1, attempt_budget + 1):
        m = sample_unicellular(n, g, rng)
        labels = sample_well_labeling(m, rng)
        if labels is not None:
            if stats is not None:
                stats["attempts"] = stats.get("attempts", 0) + attempt
                stats["accepted"] = stats.get("accepted", 0) + 1
            return LabeledUnicellular(m, labels)
    raise SamplerBudgetError(
        f"no well-labelling accepted in {attempt_budget} attempts for (n={n}, g={g}); "
        f"measured acceptance < {1 / attempt_budget:.3g}",
        attempt_budget,
    )


def all_well_labelings(m: CombinatorialMap) -> list[tuple[int, ...]]:
    """Exhaustive list via every increment vector on the BFS tree (small maps only)."""
    from itertools import product

    parent, order = spanning_tree(m)
    vo = m.vertex_of
    found = set()
    for steps in product((-1, 0, 1), repeat=len(order) - 1):
        labels = [0] * m.num_vertices
        for v, s in zip(order[1:], steps):
            labels[v] = labels[vo[m.alpha[parent[v]]]] + s
        if all(abs(labels[vo[d]] - labels[vo[m.alpha[d]]]) <= 1 for d in range(m.dart_count)):
            shift = 1 - min(labels)
            found.add(tuple(x + shift for x in labels))
    return sorted(found)
