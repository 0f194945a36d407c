"""Labelled unicellular maps <-> pointed bipartite quadrangulations.

Forward: add a vertex v0 of label 0 in the face; every corner labelled l >= 2
gets an arc to the next corner along the tour labelled l - 1, every corner
labelled 1 an arc to v0; the old edges are then erased.  The pair
(labelled map, sign) determines the rooted pointed quadrangulation and
conversely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .maps import CombinatorialMap, MapValidationError, build_and_validate
from .unicellular import LabeledUnicellular, is_well_labelled, tour_positions


@dataclass(frozen=True)
class PointedQuadrangulation:
    map: CombinatorialMap
    pointed: int
    # labels carried over from the unicellular map (0 at the pointed vertex)
    labels: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 <= self.pointed < self.map.num_vertices:
            raise ValueError(f"vertex {self.pointed} out of range")

    @property
    def key(self) -> tuple:
        """Isomorphism-invariant key: map code plus the pointed vertex's first visit."""
        from .maps import canonical_relabelling

        new = canonical_relabelling(self.map)
        return self.map.code + (min(new[d] for d in self.map.vertex_cycles[self.pointed]),)


def cms_forward(lu: LabeledUnicellular | tuple, epsilon: int = 1) -> PointedQuadrangulation:
    """Build the pointed quadrangulation; ``epsilon`` is +1 or -1."""
    m, labels = (lu.map, lu.labels) if isinstance(lu, LabeledUnicellular) else lu
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    if not is_well_labelled(m, labels):
        raise MapValidationError("labels are not a well-labelling")
    size = m.dart_count
    if size == 0:
        raise ValueError("the vertex map has no corner")
    pos = tour_positions(m)
    tour = sorted(range(size), key=pos.__getitem__)
    vo = m.vertex_of
    corner_label = [labels[vo[f]] for f in tour]
    # successor corner along the tour (None = v0)
    succ: list[int | None] = []
    for i, lab in enumerate(corner_label):
        if lab == 1:
            succ.append(None)
            continue
        j = (i + 1) % size
        while corner_label[j] != lab - 1:
            j = (j + 1) % size
        succ.append(j)
    # arc i: dart 2i at corner i, dart 2i + 1 at its target
    in_corner: list[list[tuple[float, int]]] = [[] for _ in range(size)]
    at_v0: list[int] = []
    for i, j in enumerate(succ):
        if j is None:
            in_corner[i].append((0.5, 2 * i))
            at_v0.append(i)
        else:
            in_corner[i].append(((j - i) % size, 2 * i))
            in_corner[j].append(((i - j) % size, 2 * i + 1))
    sigma = [0] * (2 * size)
    for v, cyc in enumerate(m.vertex_cycles):
        ring = []
        for d in cyc:
            # corner sitting just before d in the rotation
            i = pos[d]
            ring.extend(dart for _, dart in sorted(in_corner[i], reverse=True))
        for a, b in zip(ring, ring[1:] + ring[:1]):
            sigma[a] = b
    ring = [2 * i + 1 for i in sorted(at_v0, reverse=True)]
    for a, b in zip(ring, ring[1:] + ring[:1]):
        sigma[a] = b
    alpha = [d ^ 1 for d in range(2 * size)]
    root = 0 if epsilon == 1 else 1
    q = build_and_validate(tuple(sigma), tuple(alpha), root, profile="quadrangulation")
    v0 = q.vertex_of[2 * at_v0[0] + 1]
    vertex_labels = [0] * q.num_vertices
    for i, lab in enumerate(corner_label):
        vertex_labels[q.vertex_of[2 * i]] = lab
    return PointedQuadrangulation(q, v0, tuple(vertex_labels))


def distance_property(pq: PointedQuadrangulation) -> bool:
    """Carried labels equal graph distances to the pointed vertex."""
    return pq.labels is not None and list(pq.labels) == pq.map.distances_from(pq.pointed)


def cms_backward(pq: PointedQuadrangulation | tuple) -> tuple[LabeledUnicellular, int]:
    """Inverse of :func:`cms_forward`: returns the labelled map and the sign."""
    q, v0 = (pq.map, pq.pointed) if isinstance(pq, PointedQuadrangulation) else pq
    dist = q.distances_from(v0)
    vo = q.vertex_of
    lab = [dist[vo[d]] for d in range(q.dart_count)]
    hosted: dict[int, int] = {}  # q-dart following a chosen corner -> new dart
    pairs = []
    for face in q.face_cycles:
        if len(face) != 4:
            raise MapValidationError("face degree != 4")
        ls = [lab[d] for d in face]
        top = max(ls)
        tops = [k for k in range(4) if ls[k] == top]
        if len(tops) == 2:
            a, b = tops
        else:
            # simple face: the top corner joins the corner just before it
            (a,) = tops
            b = (a - 1) % 4
        pairs.append((face[a], face[b]))
    for k, (x, y) in enumerate(pairs):
        hosted[x], hosted[y] = 2 * k, 2 * k + 1
    size = 2 * len(pairs)
    sigma = [0] * size
    host_of = [0] * size
    for x, y in hosted.items():
        host_of[y] = x
    for v, cyc in enumerate(q.vertex_cycles):
        if v == v0:
            continue
        ring = [hosted[e] for e in cyc if e in hosted]
        for a, b in zip(ring, ring[1:] + ring[:1]):
            sigma[a] = b
    alpha = [d ^ 1 for d in range(size)]
    # the arc carrying the root, read from its higher-label end
    r = q.root
    source = r if lab[r] > lab[q.alpha[r]] else q.alpha[r]
    epsilon = 1 if source == r else -1
    e = q.sigma[source]
    while e not in hosted:
        e = q.sigma[e]
    u = build_and_validate(tuple(sigma), tuple(alpha), hosted[e], profile="unicellular")
    labels = tuple(lab[host_of[cyc[0]]] for cyc in u.vertex_cycles)
    return LabeledUnicellular(u, labels), epsilon
