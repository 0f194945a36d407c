"""Rooted orientable maps encoded as rotation systems.

A map on darts ``0..D-1`` is a pair of permutations: ``sigma`` turns
counterclockwise around a vertex and ``alpha`` jumps to the other half of
the same edge.  Faces are the cycles of ``phi = sigma o alpha`` (alpha is
applied first), so ``phi[d] == sigma[alpha[d]]``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

PROFILES = ("general", "quadrangulation", "unicellular", "with-holes")

WHITE, BLACK = 0, 1


class MapValidationError(ValueError):
    """Raised when permutation data does not describe a valid map."""

    def __init__(self, message: str, dart: int | None = None):
        if dart is not None:
            message = f"{message} (dart {dart})"
        super().__init__(message)
        self.dart = dart


def cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        d = start
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = perm[d]
        out.append(cyc)
    return out


def compose(outer: Sequence[int], inner: Sequence[int]) -> tuple[int, ...]:
    """``outer o inner``: apply ``inner`` first."""
    return tuple(outer[i] for i in inner)


def inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def perm_from_cycles(cyc: Iterable[Iterable[int]], size: int) -> tuple[int, ...]:
    perm = list(range(size))
    for c in cyc:
        c = list(c)
        for i, d in enumerate(c):
            perm[d] = c[(i + 1) % len(c)]
    return tuple(perm)


@dataclass(frozen=True)
class CombinatorialMap:
    sigma: tuple[int, ...]
    alpha: tuple[int, ...]
    root: int = 0
    holes: frozenset[int] = field(default_factory=frozenset)
    profile: str = "general"

    @property
    def dart_count(self) -> int:
        return len(self.sigma)

    @cached_property
    def phi(self) -> tuple[int, ...]:
        return compose(self.sigma, self.alpha)

    @cached_property
    def vertex_cycles(self) -> list[list[int]]:
        return cycles(self.sigma)

    @cached_property
    def face_cycles(self) -> list[list[int]]:
        return cycles(self.phi)

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        return _index_of(self.vertex_cycles, self.dart_count)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        return _index_of(self.face_cycles, self.dart_count)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_cycles)

    @property
    def num_edges(self) -> int:
        return self.dart_count // 2

    @property
    def num_faces(self) -> int:
        return len(self.face_cycles)

    @cached_property
    def hole_faces(self) -> frozenset[int]:
        """Face indices (into ``face_cycles``) marked as holes."""
        return frozenset(self.face_of[d] for d in self.holes)

    @property
    def num_quadrangles(self) -> int:
        return self.num_faces - len(self.hole_faces)

    @property
    def euler_characteristic(self) -> int:
        if self.dart_count == 0:
            return 2  # the vertex map
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def genus(self) -> int:
        return euler_genus(self)

    @property
    def root_vertex(self) -> int:
        return self.vertex_of[self.root]

    def is_hole_dart(self, d: int) -> bool:
        return self.face_of[d] in self.hole_faces

    def edges(self) -> list[tuple[int, int]]:
        """One ``(d, alpha[d])`` pair per edge, ``d`` the smaller dart."""
        return [(d, a) for d, a in enumerate(self.alpha) if d < a]

    def neighbours(self) -> list[list[int]]:
        vo = self.vertex_of
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for cyc_id, cyc in enumerate(self.vertex_cycles):
            adj[cyc_id] = [vo[self.alpha[d]] for d in cyc]
        return adj

    def distances_from(self, vertex: int) -> list[int]:
        """BFS graph distances from ``vertex`` (-1 if unreachable)."""
        adj = self.neighbours()
        dist = [-1] * self.num_vertices
        dist[vertex] = 0
        queue = deque([vertex])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def with_root(self, root: int) -> "CombinatorialMap":
        return CombinatorialMap(self.sigma, self.alpha, root, self.holes, self.profile)

    def with_profile(self, profile: str) -> "CombinatorialMap":
        return build_and_validate(self.sigma, self.alpha, self.root, self.holes, profile)

    @cached_property
    def code(self) -> tuple[int, ...]:
        return canonical_code(self)


def _index_of(cyc: list[list[int]], size: int) -> tuple[int, ...]:
    idx = [0] * size
    for i, c in enumerate(cyc):
        for d in c:
            idx[d] = i
    return tuple(idx)


def _check_permutation(perm: Sequence[int], size: int, name: str) -> None:
    if len(perm) != size:
        raise MapValidationError(f"{name} has length {len(perm)}, expected {size}")
    seen = [False] * size
    for i, p in enumerate(perm):
        if not isinstance(p, int) or not 0 <= p < size:
            raise MapValidationError(f"{name} entry out of range", i)
        if seen[p]:
            raise MapValidationError(f"{name} is not a permutation", i)
        seen[p] = True


def is_connected(sigma: Sequence[int], alpha: Sequence[int]) -> bool:
    size = len(sigma)
    if size == 0:
        return True
    seen = [False] * size
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        d = stack.pop()
        for e in (sigma[d], alpha[d]):
            if not seen[e]:
                seen[e] = True
                count += 1
                stack.append(e)
    return count == size


def build_and_validate(
    sigma: Sequence[int],
    alpha: Sequence[int],
    root: int = 0,
    holes: Iterable[int] = (),
    profile: str = "general",
    dart_count: int | None = None,
) -> CombinatorialMap:
    """Check the arrays and return an immutable map.

    ``holes`` may contain any dart of each hole face; they are normalised to
    the smallest dart of the face.
    """
    if profile not in PROFILES:
        raise MapValidationError(f"unknown profile {profile!r}")
    holes = list(holes)
    size = len(sigma) if dart_count is None else dart_count
    if size % 2:
        raise MapValidationError(f"dart_count must be even, got {size}")
    _check_permutation(sigma, size, "sigma")
    _check_permutation(alpha, size, "alpha")
    for d, a in enumerate(alpha):
        if a == d:
            raise MapValidationError("alpha fixed point", d)
        if alpha[a] != d:
            raise MapValidationError("alpha is not an involution", d)
    if size and not 0 <= root < size:
        raise MapValidationError("root out of range", root)
    if not is_connected(sigma, alpha):
        raise MapValidationError("map is disconnected")

    m = CombinatorialMap(tuple(sigma), tuple(alpha), root, frozenset(), profile)
    if any(not isinstance(h, int) or not 0 <= h < size for h in holes):
        raise MapValidationError("hole dart out of range")
    face_min = [min(c) for c in m.face_cycles]
    hole_set = frozenset(face_min[m.face_of[h]] for h in holes)
    m = CombinatorialMap(m.sigma, m.alpha, root, hole_set, profile)

    if (2 - m.euler_characteristic) % 2 or m.euler_characteristic > 2:
        raise MapValidationError("Euler characteristic is not 2 - 2g")

    if profile == "unicellular":
        if m.num_faces != 1:
            raise MapValidationError(f"unicellular map has {m.num_faces} faces")
        if hole_set:
            raise MapValidationError("unicellular maps carry no holes")
    if profile in ("quadrangulation", "with-holes"):
        if profile == "quadrangulation" and hole_set:
            raise MapValidationError("quadrangulation profile forbids holes")
        for fid, face in enumerate(m.face_cycles):
            if fid in m.hole_faces:
                _check_simple_boundary(m, face)
            elif len(face) != 4:
                raise MapValidationError(f"face degree {len(face)} != 4", face[0])
        bipartite_colors(m)
    return m


def _check_simple_boundary(m: CombinatorialMap, face: list[int]) -> None:
    verts = [m.vertex_of[d] for d in face]
    if len(set(verts)) != len(verts):
        raise MapValidationError("hole boundary is not simple", face[0])
    if len(face) % 2:
        raise MapValidationError("hole of odd degree", face[0])


def euler_genus(m: CombinatorialMap) -> int:
    chi = m.euler_characteristic
    return (2 - chi) // 2


def bipartite_colors(m: CombinatorialMap) -> list[int]:
    """Vertex colours with the root vertex WHITE; raises on an odd cycle."""
    n_v = m.num_vertices
    if n_v == 0:
        return []
    colour = [-1] * n_v
    start = m.root_vertex
    colour[start] = WHITE
    adj = m.neighbours()
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if colour[w] < 0:
                colour[w] = 1 - colour[v]
                queue.append(w)
            elif colour[w] == colour[v]:
                raise MapValidationError("no bipartite colouring (odd cycle)", m.vertex_cycles[v][0])
    return colour


def _traversal_order(m: CombinatorialMap, root: int) -> list[int]:
    size = m.dart_count
    label = [-1] * size
    order = [root]
    label[root] = 0
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for e in (m.sigma[d], m.alpha[d]):
            if label[e] < 0:
                label[e] = len(order)
                order.append(e)
    return order


def canonical_relabelling(m: CombinatorialMap) -> list[int]:
    """``new[old]`` for the deterministic breadth-first traversal from the root."""
    if m.dart_count == 0:
        return []
    order = _traversal_order(m, m.root)
    new = [0] * m.dart_count
    for i, d in enumerate(order):
        new[d] = i
    return new


def relabel(m: CombinatorialMap, new: Sequence[int], profile: str | None = None) -> CombinatorialMap:
    """Rename every dart ``d`` to ``new[d]``."""
    size = m.dart_count
    sigma = [0] * size
    alpha = [0] * size
    for d in range(size):
        sigma[new[d]] = new[m.sigma[d]]
        alpha[new[d]] = new[m.alpha[d]]
    holes = []
    if m.holes:
        for fid, face in enumerate(m.face_cycles):
            if fid in m.hole_faces:
                holes.append(min(new[d] for d in face))
    root = new[m.root] if size else 0
    return CombinatorialMap(tuple(sigma), tuple(alpha), root, frozenset(holes), m.profile if profile is None else profile)


def canonical_form(m: CombinatorialMap) -> CombinatorialMap:
    return relabel(m, canonical_relabelling(m))


def canonical_code(m: CombinatorialMap) -> tuple[int, ...]:
    """Sequence equal for two rooted maps iff they are root-preserving isomorphic."""
    if m.dart_count == 0:
        return (0,)
    order = _traversal_order(m, m.root)
    new = [0] * m.dart_count
    for i, d in enumerate(order):
        new[d] = i
    hole_faces = m.hole_faces
    face_of = m.face_of
    code = [m.dart_count]
    for d in order:
        code.append(new[m.sigma[d]])
        code.append(new[m.alpha[d]])
    if hole_faces:
        code.extend(1 if face_of[d] in hole_faces else 0 for d in order)
    return tuple(code)


def from_phi_alpha(
    phi: Sequence[int],
    alpha: Sequence[int],
    root: int = 0,
    holes: Iterable[int] = (),
    profile: str = "general",
) -> CombinatorialMap:
    """Build a map from its face permutation; ``sigma = phi o alpha``."""
    sigma = compose(phi, alpha)
    return build_and_validate(sigma, alpha, root, holes, profile)


# --- codec -----------------------------------------------------------------


def to_dict(m: CombinatorialMap, **extra) -> dict:
    out = {
        "dart_count": m.dart_count,
        "sigma": list(m.sigma),
        "alpha": list(m.alpha),
        "root": m.root,
        "holes": sorted(m.holes),
        "profile": m.profile,
    }
    out.update(extra)
    return out


def serialize(m: CombinatorialMap, **extra) -> str:
    """One-line JSON text; extra keys (e.g. ``labels``) are appended."""
    return json.dumps(to_dict(m, **extra), separators=(", ", ": "))


def from_dict(obj: dict) -> CombinatorialMap:
    try:
        dart_count = obj["dart_count"]
        sigma = obj["sigma"]
        alpha = obj["alpha"]
        root = obj["root"]
    except (KeyError, TypeError) as exc:
        raise MapValidationError(f"missing field {exc}") from None
    if not isinstance(dart_count, int) or dart_count < 0:
        raise MapValidationError("dart_count must be a non-negative integer")
    if dart_count % 2:
        raise MapValidationError(f"dart_count must be even, got {dart_count}")
    if len(sigma) != dart_count or len(alpha) != dart_count:
        raise MapValidationError("array length does not match dart_count")
    return build_and_validate(
        sigma,
        alpha,
        root,
        obj.get("holes", []),
        obj.get("profile", "general"),
        dart_count=dart_count,
    )


def parse(text: str) -> CombinatorialMap:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapValidationError(f"syntax error: {exc}") from None
    if not isinstance(obj, dict):
        raise MapValidationError("syntax error: expected a JSON object")
    return from_dict(obj)


def write_ndjson(path, maps: Iterable[CombinatorialMap | tuple[CombinatorialMap, dict]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item in maps:
            if isinstance(item, tuple):
                m, extra = item
                fh.write(serialize(m, **extra) + "\n")
            else:
                fh.write(serialize(item) + "\n")


def read_ndjson(path) -> list[tuple[CombinatorialMap, dict]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MapValidationError(f"syntax error on line {lineno}: {exc}") from None
            out.append((from_dict(obj), obj))
    return out


# --- reference fixtures ----------------------------------------------------


def fixture_f1() -> CombinatorialMap:
    """Planar quadrangulation with one face: a path of two edges."""
    return build_and_validate(
        perm_from_cycles([[0], [1, 2], [3]], 4),
        perm_from_cycles([[0, 1], [2, 3]], 4),
        0,
        profile="quadrangulation",
    )


def fixture_f2() -> CombinatorialMap:
    """The genus-one quadrangulation with two faces and two vertices."""
    return build_and_validate(
        perm_from_cycles([[0, 1, 2, 3], [4, 5, 6, 7]], 8),
        perm_from_cycles([[0, 4], [1, 5], [2, 6], [3, 7]], 8),
        0,
        profile="quadrangulation",
    )


def fixture_f3() -> CombinatorialMap:
    """One vertex, two loops, one face: the smallest unicellular torus."""
    return build_and_validate(
        perm_from_cycles([[0, 1, 2, 3]], 4),
        perm_from_cycles([[0, 2], [1, 3]], 4),
        0,
        profile="unicellular",
    )
