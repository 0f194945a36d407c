"""Brute-force ground truth at tiny sizes.

Quadrangulations: the face permutation is fixed to n disjoint 4-cycles and
every bipartite fixed-point-free involution is tried.  Unicellular maps: the
face permutation is one 2n-cycle.  Results are deduplicated by canonical
code, never by dividing through symmetry factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .maps import CombinatorialMap, build_and_validate, canonical_form, compose, is_connected

QUAD_LIMIT = 4
UNICELLULAR_LIMIT = 6


class OracleLimitError(ValueError):
    pass


@dataclass
class OracleList:
    n: int
    g: int | None
    maps: list[CombinatorialMap] = field(default_factory=list)

    @property
    def codes(self) -> list[tuple[int, ...]]:
        return [m.code for m in self.maps]

    def by_genus(self) -> dict[int, list[CombinatorialMap]]:
        out: dict[int, list[CombinatorialMap]] = {}
        for m in self.maps:
            out.setdefault(m.genus, []).append(m)
        return out

    def __len__(self) -> int:
        return len(self.maps)


def _bipartite_involutions(n: int):
    """Yield alpha arrays on 4n darts pairing a white dart with a black dart.

    Dart 4f + i sits on face f; its colour is ``(i + flip[f]) % 2`` with
    ``flip[0] = 0`` so that dart 0 is white.
    """
    size = 4 * n
    alpha = [-1] * size
    flip = [-1] * n
    flip[0] = 0

    def colour(d: int) -> int:
        return (d % 4 + flip[d // 4]) % 2

    def rec():
        try:
            d = alpha.index(-1)
        except ValueError:
            yield list(alpha)
            return
        if flip[d // 4] < 0:
            for value in (0, 1):
                flip[d // 4] = value
                yield from rec()
            flip[d // 4] = -1
            return
        cd = colour(d)
        for e in range(d + 1, size):
            if alpha[e] >= 0:
                continue
            f = e // 4
            fresh = flip[f] < 0
            if fresh:
                # colour of e must differ from cd
                flip[f] = (1 - cd - e % 4) % 2
            elif colour(e) == cd:
                continue
            alpha[d], alpha[e] = e, d
            yield from rec()
            alpha[d] = alpha[e] = -1
            if fresh:
                flip[f] = -1

    yield from rec()


def enumerate_quadrangulations(n: int, g_filter: int | None = None) -> OracleList:
    """All rooted bipartite quadrangulations with n faces (optionally one genus)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > QUAD_LIMIT:
        raise OracleLimitError(f"oracle limited to n <= {QUAD_LIMIT}, got {n}")
    if n == 0:
        # the vertex map: no darts, one vertex, genus 0
        sentinel = CombinatorialMap((), (), 0, frozenset(), "general")
        return OracleList(0, g_filter, [sentinel] if g_filter in (None, 0) else [])
    maps = [m for m in _all_quadrangulations(n) if g_filter is None or m.genus == g_filter]
    return OracleList(n, g_filter, maps)


@lru_cache(maxsize=None)
def _all_quadrangulations(n: int) -> tuple[CombinatorialMap, ...]:
    phi = [4 * (d // 4) + (d + 1) % 4 for d in range(4 * n)]
    found: dict[tuple[int, ...], CombinatorialMap] = {}
    for alpha in _bipartite_involutions(n):
        sigma = compose(phi, alpha)
        if not is_connected(sigma, alpha):
            continue
        m = CombinatorialMap(sigma, tuple(alpha), 0, frozenset(), "quadrangulation")
        code = m.code
        if code not in found:
            found[code] = m
    maps = [
        build_and_validate(c.sigma, c.alpha, c.root, profile="quadrangulation")
        for c in (canonical_form(m) for m in found.values())
    ]
    maps.sort(key=lambda m: (m.genus, m.code))
    return tuple(maps)


def _all_involutions(size: int):
    alpha = [-1] * size

    def rec():
        try:
            d = alpha.index(-1)
        except ValueError:
            yield tuple(alpha)
            return
        for e in range(d + 1, size):
            if alpha[e] < 0:
                alpha[d], alpha[e] = e, d
                yield from rec()
                alpha[d] = alpha[e] = -1

    yield from rec()


def unicellular_from_alpha(alpha) -> CombinatorialMap:
    """Unicellular map whose face tour from the root is 0, 1, ..., 2n-1."""
    size = len(alpha)
    phi = [(d + 1) % size for d in range(size)]
    sigma = compose(phi, alpha)
    return CombinatorialMap(sigma, tuple(alpha), 0, frozenset(), "unicellular")


def enumerate_unicellular(n: int, g_filter: int | None = None) -> OracleList:
    """All rooted unicellular maps with n edges (optionally one genus).

    With the tour fixed to ``0..2n-1`` each rooted map occurs exactly once;
    the canonical-code dedup is kept as a guard.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > UNICELLULAR_LIMIT:
        raise OracleLimitError(f"oracle limited to n <= {UNICELLULAR_LIMIT}, got {n}")
    if n == 0:
        sentinel = CombinatorialMap((), (), 0, frozenset(), "general")
        return OracleList(0, g_filter, [sentinel] if g_filter in (None, 0) else [])
    maps = [m for m in _all_unicellular(n) if g_filter is None or m.genus == g_filter]
    return OracleList(n, g_filter, maps)


@lru_cache(maxsize=None)
def _all_unicellular(n: int) -> tuple[CombinatorialMap, ...]:
    found: dict[tuple[int, ...], CombinatorialMap] = {}
    for alpha in _all_involutions(2 * n):
        m = unicellular_from_alpha(alpha)
        found.setdefault(m.code, m)
    return tuple(sorted(found.values(), key=lambda m: (m.genus, m.alpha)))


def quadrangulation_counts(n_max: int = QUAD_LIMIT) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for n in range(n_max + 1):
        for g, maps in enumerate_quadrangulations(n).by_genus().items():
            out[n, g] = len(maps)
    return out
