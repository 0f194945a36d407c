"""Cutting and gluing quadrangulations along cycles and paths.

Every operation keeps the old darts and the old faces untouched: only the
edge involution ``alpha`` is rewired, plus fresh hole darts where a boundary
appears.  Vertices are then recomputed as ``sigma = phi o alpha``.  Because
old darts survive, a root on the surgered cycle stays on the dart it was on,
which is the copy on the left of the oriented cycle when the root is a
cycle dart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .maps import (
    CombinatorialMap,
    MapValidationError,
    bipartite_colors,
    build_and_validate,
    compose,
)

CONTRACTIBLE = "contractible"
SEPARATING = "separating-noncontractible"
NONSEPARATING = "nonseparating"


class SurgeryError(ValueError):
    pass


@dataclass(frozen=True)
class CycleRef:
    """Oriented simple cycle as its dart sequence; dart i leaves vertex v_{i-1}."""

    darts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.darts)

    @classmethod
    def from_edges(cls, m: CombinatorialMap, edges: Sequence[tuple[int, int] | int]) -> "CycleRef":
        """Order a set of edges into a cycle, starting with the first edge's first dart."""
        darts = [e[0] if isinstance(e, tuple) else e for e in edges]
        first = darts[0]
        todo = {min(d, m.alpha[d]) for d in darts[1:]}
        seq = [first]
        while todo:
            here = m.vertex_of[m.alpha[seq[-1]]]
            nxt = None
            for e in sorted(todo):
                for d in (e, m.alpha[e]):
                    if m.vertex_of[d] == here:
                        nxt = d
                        break
                if nxt is not None:
                    break
            if nxt is None:
                raise SurgeryError("edges do not form a closed walk")
            todo.discard(min(nxt, m.alpha[nxt]))
            seq.append(nxt)
        ref = cls(tuple(seq))
        check_cycle(m, ref)
        return ref


@dataclass(frozen=True)
class CycleWithTail:
    """Path from the root vertex (root dart first) followed by a cycle at its far end."""

    path: tuple[int, ...]
    cycle: CycleRef

    @property
    def size(self) -> int:
        return len(self.path) + len(self.cycle)


@dataclass
class CutResult:
    classification: str
    pieces: list[CombinatorialMap]
    # dart of the cut surface -> (piece index, dart id in that piece); removed darts are absent
    correspondence: dict[int, tuple[int, int]]
    marks: dict = field(default_factory=dict)


def check_cycle(m: CombinatorialMap, cycle: CycleRef | Sequence[int]) -> None:
    darts = tuple(cycle.darts if isinstance(cycle, CycleRef) else cycle)
    if not darts:
        raise SurgeryError("empty cycle")
    edges = {min(d, m.alpha[d]) for d in darts}
    if len(edges) != len(darts):
        raise SurgeryError("cycle reuses an edge")
    verts = [m.vertex_of[d] for d in darts]
    if len(set(verts)) != len(verts):
        raise SurgeryError("cycle is not simple")
    for d, e in zip(darts, darts[1:] + darts[:1]):
        if m.vertex_of[m.alpha[d]] != m.vertex_of[e]:
            raise SurgeryError("consecutive darts do not share a vertex")


def check_path(m: CombinatorialMap, path: Sequence[int]) -> None:
    if not path:
        raise SurgeryError("empty path")
    verts = [m.vertex_of[d] for d in path] + [m.vertex_of[m.alpha[path[-1]]]]
    if len(set(verts)) != len(verts):
        raise SurgeryError("path is not simple")
    for d, e in zip(path, path[1:]):
        if m.vertex_of[m.alpha[d]] != m.vertex_of[e]:
            raise SurgeryError("consecutive darts do not share a vertex")


# --- raw dart soup ---------------------------------------------------------


class _Soup:
    """Mutable (phi, alpha) on a growing dart set; darts may be deleted."""

    def __init__(self, m: CombinatorialMap):
        self.phi = dict(enumerate(m.phi))
        self.alpha = dict(enumerate(m.alpha))
        self.holes = set(m.holes)
        self.root = m.root
        self.next_id = m.dart_count

    def new(self) -> int:
        d = self.next_id
        self.next_id += 1
        return d

    def remove(self, darts: Iterable[int]) -> None:
        for d in darts:
            del self.phi[d]
            del self.alpha[d]
            self.holes.discard(d)

    def face_of(self, d: int) -> list[int]:
        out = [d]
        e = self.phi[d]
        while e != d:
            out.append(e)
            e = self.phi[e]
        return out

    def finish(self, profile: str, extra_roots: Sequence[int] = ()) -> tuple[list[CombinatorialMap], dict[int, tuple[int, int]]]:
        """Split into components, renumber each densely in increasing dart order."""
        darts = sorted(self.phi)
        sigma = {d: self.phi[self.alpha[d]] for d in darts}
        comp: dict[int, int] = {}
        pieces_darts: list[list[int]] = []
        seeds = [self.root, *extra_roots, *darts]
        for s in seeds:
            if s in comp or s not in sigma:
                continue
            idx = len(pieces_darts)
            stack = [s]
            comp[s] = idx
            found = []
            while stack:
                d = stack.pop()
                found.append(d)
                for e in (sigma[d], self.alpha[d]):
                    if e not in comp:
                        comp[e] = idx
                        stack.append(e)
            pieces_darts.append(sorted(found))
        pieces = []
        corr = {}
        for idx, ds in enumerate(pieces_darts):
            new = {d: i for i, d in enumerate(ds)}
            root_old = next((r for r in [self.root, *extra_roots] if r in new), ds[0])
            hole_darts = [new[h] for h in self.holes if h in new]
            piece = build_and_validate(
                tuple(new[sigma[d]] for d in ds),
                tuple(new[self.alpha[d]] for d in ds),
                new[root_old],
                hole_darts,
                profile if (hole_darts or profile != "with-holes") else "quadrangulation",
            )
            pieces.append(piece)
            for d in ds:
                corr[d] = (idx, new[d])
        return pieces, corr


def _classify(pieces: list[CombinatorialMap]) -> str:
    if len(pieces) == 1:
        return NONSEPARATING
    if any(p.genus == 0 for p in pieces):
        return CONTRACTIBLE
    return SEPARATING


def _profile_of(m: CombinatorialMap) -> str:
    return "with-holes" if m.profile in ("quadrangulation", "with-holes") else "general"


# --- cycles ----------------------------------------------------------------


def _cut_into_holes(soup: _Soup, darts: Sequence[int]) -> tuple[list[int], list[int]]:
    """Replace the cycle edges by two boundary circles; returns (H_L, H_R) darts."""
    c = list(darts)
    a = [soup.alpha[d] for d in c]
    ell = len(c)
    h = [soup.new() for _ in range(ell)]
    k = [soup.new() for _ in range(ell)]
    for i in range(ell):
        soup.alpha[h[i]], soup.alpha[a[i]] = a[i], h[i]
        soup.alpha[k[i]], soup.alpha[c[i]] = c[i], k[i]
        soup.phi[h[i]] = h[(i + 1) % ell]
        soup.phi[k[i]] = k[i - 1]
    soup.holes.update((h[0], k[0]))
    return h, k


def cut_simple_cycle(m: CombinatorialMap, cycle: CycleRef | Sequence[int]) -> CutResult:
    """Cut along a simple cycle; both sides become hole faces."""
    darts = tuple(cycle.darts if isinstance(cycle, CycleRef) else cycle)
    check_cycle(m, darts)
    soup = _Soup(m)
    h, k = _cut_into_holes(soup, darts)
    pieces, corr = soup.finish(_profile_of(m), extra_roots=(darts[0], m.alpha[darts[0]]))
    return CutResult(_classify(pieces), pieces, corr, {"left": corr[h[0]], "right": corr[k[0]]})


def classify_cycle(m: CombinatorialMap, cycle: CycleRef | Sequence[int]) -> str:
    """Topological type of a simple cycle, without building the pieces."""
    darts = tuple(cycle.darts if isinstance(cycle, CycleRef) else cycle)
    check_cycle(m, darts)
    soup = _Soup(m)
    _cut_into_holes(soup, darts)
    # components and Euler characteristics straight from the soup
    sigma = {d: soup.phi[soup.alpha[d]] for d in soup.phi}
    seen: dict[int, int] = {}
    chis = []
    for s in soup.phi:
        if s in seen:
            continue
        idx = len(chis)
        stack = [s]
        seen[s] = idx
        members = []
        while stack:
            d = stack.pop()
            members.append(d)
            for e in (sigma[d], soup.alpha[d]):
                if e not in seen:
                    seen[e] = idx
                    stack.append(e)
        v = _orbits(sigma, members)
        f = _orbits(soup.phi, members)
        chis.append(v - len(members) // 2 + f)
    if len(chis) == 1:
        return NONSEPARATING
    return CONTRACTIBLE if 2 in chis else SEPARATING


def _orbits(perm: dict[int, int], members: list[int]) -> int:
    seen = set()
    count = 0
    for d in members:
        if d in seen:
            continue
        count += 1
        while d not in seen:
            seen.add(d)
            d = perm[d]
    return count


def glue_holes(m: CombinatorialMap, h_start: int, k_start: int) -> CombinatorialMap:
    """Identify two hole boundaries of equal length; inverse of :func:`cut_simple_cycle`.

    ``h_start`` is walked forward along its face and ``k_start`` backward;
    the edges behind ``h_i`` and ``k_i`` are fused.
    """
    soup = _Soup(m)
    hf = soup.face_of(h_start)
    kf = soup.face_of(k_start)
    if h_start not in m.holes and m.face_of[h_start] not in m.hole_faces:
        raise SurgeryError("h_start is not on a hole")
    if m.face_of[k_start] not in m.hole_faces or m.face_of[h_start] == m.face_of[k_start]:
        raise SurgeryError("need two distinct holes")
    if len(hf) != len(kf):
        raise SurgeryError("holes have different lengths")
    kb = [kf[0]] + kf[1:][::-1]
    pairs = [(soup.alpha[x], soup.alpha[y]) for x, y in zip(hf, kb)]
    soup.remove(hf + kf)
    for x, y in pairs:
        soup.alpha[x], soup.alpha[y] = y, x
    if soup.root not in soup.phi:
        raise SurgeryError("root dart lies on a hole")
    pieces, _ = soup.finish(_profile_of(m) if soup.holes else "quadrangulation")
    if len(pieces) != 1:
        raise SurgeryError("gluing left the map disconnected")
    return pieces[0]


def glue_pieces(a: CombinatorialMap, b: CombinatorialMap, h_start: int, k_start: int) -> CombinatorialMap:
    """Glue a hole of ``a`` to a hole of ``b`` (``k_start`` is a dart of ``b``)."""
    size = a.dart_count
    sigma = a.sigma + tuple(s + size for s in b.sigma)
    alpha = a.alpha + tuple(x + size for x in b.alpha)
    holes = set(a.holes) | {x + size for x in b.holes}
    joint = CombinatorialMap(sigma, alpha, a.root, frozenset(holes), "general")
    return glue_holes(joint, h_start, k_start + size)


# --- 2-cycles --------------------------------------------------------------


def two_cycle_darts(m: CombinatorialMap, e: int, f: int) -> tuple[int, int]:
    """Orient a parallel pair as (c1, c2): c1 on edge e at the white end."""
    if min(e, m.alpha[e]) == min(f, m.alpha[f]):
        raise SurgeryError("edges are equal")
    colour = bipartite_colors(m)
    c1 = e if colour[m.vertex_of[e]] == 0 else m.alpha[e]
    ends = {m.vertex_of[f], m.vertex_of[m.alpha[f]]}
    if ends != {m.vertex_of[c1], m.vertex_of[m.alpha[c1]]} or len(ends) != 2:
        raise SurgeryError("edges are not parallel")
    c2 = f if m.vertex_of[f] == m.vertex_of[m.alpha[c1]] else m.alpha[f]
    return c1, c2


@dataclass
class TwoCycleCut:
    classification: str
    pieces: list[CombinatorialMap]
    marked: tuple[tuple[int, int], tuple[int, int]]  # darts in the piece holding them
    marked_piece: tuple[int, int]


def cut_two_cycle(m: CombinatorialMap, e: int, f: int) -> TwoCycleCut:
    """Cut a 2-cycle and contract the two digons into marked edges.

    With the cycle oriented as darts (c1, c2) and a_i = alpha(c_i), the
    result pairs a1 with a2 and c1 with c2; no dart is created or destroyed.
    """
    c1, c2 = two_cycle_darts(m, e, f)
    a1, a2 = m.alpha[c1], m.alpha[c2]
    alpha = list(m.alpha)
    alpha[a1], alpha[a2] = a2, a1
    alpha[c1], alpha[c2] = c2, c1
    soup = _Soup(m)
    soup.alpha = dict(enumerate(alpha))
    pieces, corr = soup.finish("quadrangulation", extra_roots=(c1, a1))
    ma = (corr[a1][1], corr[a2][1])
    mc = (corr[c1][1], corr[c2][1])
    return TwoCycleCut(_classify(pieces), pieces, (ma, mc), (corr[a1][0], corr[c1][0]))


def vertex_disjoint(m: CombinatorialMap, e: int, f: int) -> bool:
    vo = m.vertex_of
    return not ({vo[e], vo[m.alpha[e]]} & {vo[f], vo[m.alpha[f]]})


def glue_digons(m: CombinatorialMap, e: int, f: int) -> tuple[CombinatorialMap, tuple[int, int]]:
    """Expand two vertex-disjoint edges into digons and identify them.

    Returns the glued map and the two edges of the new 2-cycle (as darts).
    Darts are unchanged; the white end of ``e`` is fused to the black end
    of ``f``, which is the only gluing keeping the map bipartite.
    """
    if min(e, m.alpha[e]) == min(f, m.alpha[f]):
        raise SurgeryError("edges are equal")
    if not vertex_disjoint(m, e, f):
        raise SurgeryError("edges share a vertex")
    colour = bipartite_colors(m)
    x_w = e if colour[m.vertex_of[e]] == 0 else m.alpha[e]
    x_b = m.alpha[x_w]
    y_w = f if colour[m.vertex_of[f]] == 0 else m.alpha[f]
    y_b = m.alpha[y_w]
    alpha = list(m.alpha)
    alpha[x_w], alpha[y_b] = y_b, x_w
    alpha[x_b], alpha[y_w] = y_w, x_b
    out = build_and_validate(compose(m.phi, alpha), alpha, m.root, profile="quadrangulation")
    return out, (x_w, x_b)


# --- paths and tessellation ------------------------------------------------


def open_path(m: CombinatorialMap, path: Sequence[int]) -> tuple[CombinatorialMap, int]:
    """Open a simple path of length l into a hole of size 2l.

    Returns the map and the closing mark: the hole dart running along the
    first path edge.  Hole position j is re-glued to position 2l - 1 - j.
    """
    path = list(path)
    check_path(m, path)
    soup = _Soup(m)
    y = _slit(soup, path)
    soup.holes.add(y[0])
    pieces, corr = soup.finish(_profile_of(m))
    return pieces[0], corr[y[0]][1]


def _slit(soup: _Soup, path: list[int]) -> list[int]:
    q = [soup.alpha[p] for p in path]
    ell = len(path)
    y = [soup.new() for _ in range(ell)]
    x = [soup.new() for _ in range(ell)]
    for j in range(ell):
        soup.alpha[y[j]], soup.alpha[q[j]] = q[j], y[j]
        soup.alpha[x[j]], soup.alpha[path[j]] = path[j], x[j]
    face = y + x[::-1]
    for a, b in zip(face, face[1:] + face[:1]):
        soup.phi[a] = b
    return face


def close_path(m: CombinatorialMap, mark: int) -> CombinatorialMap:
    """Inverse of :func:`open_path`."""
    if m.face_of[mark] not in m.hole_faces:
        raise SurgeryError("mark is not on a hole")
    soup = _Soup(m)
    face = soup.face_of(mark)
    size = len(face)
    pairs = [(soup.alpha[face[j]], soup.alpha[face[size - 1 - j]]) for j in range(size // 2)]
    soup.remove(face)
    for a, b in pairs:
        soup.alpha[a], soup.alpha[b] = b, a
    pieces, _ = soup.finish(_profile_of(m) if soup.holes else "quadrangulation")
    return pieces[0]


def tessellate_boundary(m: CombinatorialMap, start: int | None = None) -> tuple[CombinatorialMap, int]:
    """Fill a hole of size 2p with p - 1 quadrangles fanned from ``start``'s vertex.

    A digon is contracted into one edge instead.  Returns the map and a
    marked dart: the contracted edge's dart for p = 1, otherwise the first
    chord dart at the fan's apex.
    """
    if start is None:
        if len(m.holes) != 1:
            raise SurgeryError("choose the hole explicitly")
        start = next(iter(m.holes))
    if m.face_of[start] not in m.hole_faces:
        raise SurgeryError("start is not on a hole")
    soup = _Soup(m)
    face = soup.face_of(start)
    if len({m.vertex_of[d] for d in face}) != len(face):
        raise SurgeryError("hole boundary is not simple")
    k = len(face)
    soup.holes -= set(face)
    if k == 2:
        p, q = soup.alpha[face[0]], soup.alpha[face[1]]
        soup.remove(face)
        soup.alpha[p], soup.alpha[q] = q, p
        mark = p
    else:
        first = None
        apex = face[0]
        rest = face[1:]
        while len(rest) > 3:
            u, w = soup.new(), soup.new()
            soup.alpha[u], soup.alpha[w] = w, u
            # quadrangle (apex, rest0, rest1, w); remaining face starts with u
            soup.phi[rest[1]] = w
            soup.phi[w] = apex
            soup.phi[rest[-1]] = u
            soup.phi[u] = rest[2]
            apex = u
            rest = rest[2:]
            if first is None:
                first = u
        mark = first if first is not None else face[0]
    profile = _profile_of(m) if soup.holes else "quadrangulation"
    pieces, corr = soup.finish(profile)
    return pieces[0], corr[mark][1]


# --- cycles with tails -----------------------------------------------------


def check_cycle_with_tail(m: CombinatorialMap, ct: CycleWithTail) -> None:
    check_cycle(m, ct.cycle)
    cyc_verts = {m.vertex_of[d] for d in ct.cycle.darts}
    if not ct.path:
        if m.root not in ct.cycle.darts and m.alpha[m.root] not in ct.cycle.darts:
            raise SurgeryError("an empty tail needs the root edge on the cycle")
        return
    check_path(m, ct.path)
    if ct.path[0] != m.root:
        raise SurgeryError("tail must start with the root dart")
    verts = [m.vertex_of[d] for d in ct.path] + [m.vertex_of[m.alpha[ct.path[-1]]]]
    if set(verts) & cyc_verts != {verts[-1]}:
        raise SurgeryError("tail must meet the cycle only at its far end")


def cut_cycle_with_tail(m: CombinatorialMap, ct: CycleWithTail) -> CutResult:
    """Cut along the cycle, then open the tail into the hole it reaches.

    Gives holes of sizes 2p = 2|P| + |C| and 2p' = |C|.  ``marks`` records
    what :func:`uncut_cycle_with_tail` needs: the tail mark, the tail
    length and the two hole starts.
    """
    check_cycle_with_tail(m, ct)
    darts = ct.cycle.darts
    soup = _Soup(m)
    h, k = _cut_into_holes(soup, darts)
    marks = {"h_start": h[0], "k_start": k[0], "tail": len(ct.path)}
    if ct.path:
        path = list(ct.path)
        q_last = soup.alpha[path[-1]]
        sigma = lambda d: soup.phi[soup.alpha[d]]  # noqa: E731
        # hole dart sitting at the far end of the tail, on the tail's side
        target = None
        d = sigma(q_last)
        while d != q_last:
            if d in h or d in k:
                target = d
                break
            d = sigma(d)
        if target is None:
            raise SurgeryError("tail does not reach the cut")
        hole = soup.face_of(target)
        face = _slit(soup, path)
        ell = len(path)
        y, x_rev = face[:ell], face[ell:]
        soup.phi[y[-1]] = hole[0]
        soup.phi[hole[-1]] = x_rev[0]
        soup.holes -= set(hole)
        soup.holes.add(y[0])
        marks["tail_mark"] = y[0]
        marks["joined"] = "left" if target in h else "right"
        marks["hole_entry"] = target
    pieces, corr = soup.finish(_profile_of(m), extra_roots=(darts[0], m.alpha[darts[0]]))
    mapped = {"tail": len(ct.path)}
    for key in ("h_start", "k_start", "tail_mark", "hole_entry"):
        if key in marks:
            mapped[key] = corr[marks[key]]
    if "joined" in marks:
        mapped["joined"] = marks["joined"]
    return CutResult(_classify(pieces), pieces, corr, mapped)


def uncut_cycle_with_tail(res: CutResult) -> CombinatorialMap:
    """Inverse of :func:`cut_cycle_with_tail` from its pieces and marks."""
    marks = res.marks
    pieces = list(res.pieces)
    if len(pieces) == 2:
        joint_sigma = pieces[0].sigma + tuple(s + pieces[0].dart_count for s in pieces[1].sigma)
        joint_alpha = pieces[0].alpha + tuple(s + pieces[0].dart_count for s in pieces[1].alpha)
        holes = set(pieces[0].holes) | {x + pieces[0].dart_count for x in pieces[1].holes}
        joint = CombinatorialMap(joint_sigma, joint_alpha, pieces[0].root, frozenset(holes), "general")
        offset = [0, pieces[0].dart_count]
    else:
        joint = pieces[0]
        offset = [0]

    def at(key):
        piece, dart = marks[key]
        return dart + offset[piece]

    h_start, k_start = at("h_start"), at("k_start")
    soup = _Soup(joint)
    if marks["tail"]:
        mark = at("tail_mark")
        entry = at("hole_entry")
        face = soup.face_of(mark)
        ell = marks["tail"]
        y = face[:ell]
        e_pos = face.index(entry)
        x_pos = e_pos + (len(face) - 2 * ell)
        hole = face[e_pos:x_pos]
        x_rev = face[x_pos:]
        pairs = [(soup.alpha[y[j]], soup.alpha[x_rev[ell - 1 - j]]) for j in range(ell)]
        # restore the boundary circle the tail was opened into
        soup.phi[hole[-1]] = hole[0]
        soup.remove(y + x_rev)
        for a, b in pairs:
            soup.alpha[a], soup.alpha[b] = b, a
        soup.holes.add(hole[0])
    hf = soup.face_of(h_start)
    kf = soup.face_of(k_start)
    kb = [kf[0]] + kf[1:][::-1]
    pairs = [(soup.alpha[a], soup.alpha[b]) for a, b in zip(hf, kb)]
    soup.remove(hf + kf)
    for a, b in pairs:
        soup.alpha[a], soup.alpha[b] = b, a
    soup.holes.clear()
    pieces, _ = soup.finish("quadrangulation")
    return pieces[0]


# --- transcripts -----------------------------------------------------------


def transcript_line(operation: str, before: CombinatorialMap, after: Iterable[CombinatorialMap], correspondence=None) -> str:
    return json.dumps(
        {
            "operation": operation,
            "input_code": list(before.code),
            "output_codes": [list(p.code) for p in after],
            "correspondence": {str(k): list(v) for k, v in (correspondence or {}).items()},
        },
        separators=(",", ":"),
    )
