"""Uniform samplers for Q(n, g) behind one interface.

* ``exact``: uniform labelled unicellular map, uniform sign, forward
  bijection, forget the pointed vertex.  Exact because every map of Q(n, g)
  has the same number of vertices.
* ``exhaustive``: uniform pick from the brute-force list.
* ``mcmc``: 2-cycle re-gluing chain with a Metropolis-Hastings filter.
  Results are subject to mixing assumptions; ergodicity is not proven.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cms import cms_forward
from .geometry import two_cycle_census
from .maps import CombinatorialMap, canonical_form, canonical_relabelling
from .oracle import QUAD_LIMIT, OracleLimitError, enumerate_quadrangulations
from .rng import make_rng, randbelow
from .surgery import NONSEPARATING, cut_two_cycle, glue_digons
from .unicellular import sample_labelled_unicellular

METHODS = ("exact", "exhaustive", "mcmc")
MCMC_CAVEAT = "subject to mixing assumptions"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SamplerSpec:
    n: int
    g: int
    method: str = "exact"
    seed: int = 0
    attempt_budget: int = 10**7
    mcmc_steps: int = 10**4

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.g < 0:
            raise ConfigError(f"g must be >= 0, got {self.g}")
        if self.n + 2 - 2 * self.g < 2:
            raise ConfigError(f"no quadrangulation with n={self.n}, g={self.g}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.attempt_budget < 1 or self.mcmc_steps < 0:
            raise ConfigError("budgets must be positive")


def _finish(q: CombinatorialMap) -> CombinatorialMap:
    """Canonical dart numbering; ``q`` is already validated."""
    c = canonical_form(q)
    return CombinatorialMap(c.sigma, c.alpha, c.root, frozenset(), "quadrangulation")


def sample_exact(spec: SamplerSpec, rng: np.random.Generator, stats: dict | None = None) -> CombinatorialMap:
    lu = sample_labelled_unicellular(spec.n, spec.g, rng, spec.attempt_budget, stats)
    epsilon = 1 if rng.integers(2) else -1
    return _finish(cms_forward(lu, epsilon).map)


@lru_cache(maxsize=None)
def _oracle(n: int, g: int) -> tuple[CombinatorialMap, ...]:
    return tuple(enumerate_quadrangulations(n, g).maps)


def sample_exhaustive(spec: SamplerSpec, rng: np.random.Generator) -> CombinatorialMap:
    if spec.n > QUAD_LIMIT:
        raise OracleLimitError(f"exhaustive backend limited to n <= {QUAD_LIMIT}")
    maps = _oracle(spec.n, spec.g)
    return maps[randbelow(rng, len(maps))]


@dataclass
class ChainLog:
    steps: int = 0
    accepted: int = 0
    held_no_move: int = 0
    rerooted: int = 0
    states: list[tuple] = field(default_factory=list)


class TwoCycleChain:
    """Cut a uniform nonseparating 2-cycle, re-glue at a uniform vertex-disjoint pair.

    The move from m to m'' through the intermediate map m' has probability
    1 / (X(m) P(m')) and its reverse 1 / (X(m'') P(m')), so accepting with
    probability min(1, X(m) / X(m'')) gives the uniform law as stationary
    measure.  X is the number of nonseparating 2-cycles, P the number of
    vertex-disjoint edge pairs.

    The 2-cycle move alone keeps the root's surroundings in a few classes
    (two components at n=3, g=1), so by default half of the steps move the
    root to a uniform dart instead; that move is symmetric.
    """

    CACHE_LIMIT = 200_000

    def __init__(self, start: CombinatorialMap, rng: np.random.Generator, reroot: bool = True):
        self.state = _finish(start)
        self.rng = rng
        self.reroot = reroot
        self.log = ChainLog()
        self._census: dict[tuple, list[tuple[int, int]]] = {}
        self._moves: dict[tuple, CombinatorialMap] = {}

    def _cached(self, key, build):
        out = self._moves.get(key)
        if out is None:
            out = build()
            if len(self._moves) < self.CACHE_LIMIT:
                self._moves[key] = out
        return out

    def nonseparating(self, m: CombinatorialMap) -> list[tuple[int, int]]:
        key = m.code
        if key not in self._census:
            self._census[key] = [(e, f) for e, f, kind in two_cycle_census(m).pairs if kind == NONSEPARATING]
        return self._census[key]

    def step(self) -> None:
        m = self.state
        self.log.steps += 1
        if self.reroot and self.rng.integers(2):
            d = randbelow(self.rng, m.dart_count)
            self.state = self._cached((m.code, "root", d), lambda: _finish(m.with_root(d)))
            self.log.rerooted += 1
            return
        moves = self.nonseparating(m)
        if not moves:
            self.log.held_no_move += 1
            return
        i = randbelow(self.rng, len(moves))
        piece = self._cached((m.code, "cut", i), lambda: cut_two_cycle(m, *moves[i]).pieces[0])
        pairs = self._cached((m.code, "pairs", i), lambda: _disjoint_pairs(piece))
        j = randbelow(self.rng, len(pairs))
        proposal = self._cached((m.code, "glue", i, j), lambda: _finish(glue_digons(piece, *pairs[j])[0]))
        x_new = len(self.nonseparating(proposal))
        # accept with probability min(1, X(m) / X(m''))
        if randbelow(self.rng, x_new) < len(moves):
            self.state = proposal
            self.log.accepted += 1

    def run(self, steps: int, record: bool = False) -> CombinatorialMap:
        for _ in range(steps):
            self.step()
            if record:
                self.log.states.append(self.state.code)
        return self.state


def _disjoint_pairs(m: CombinatorialMap) -> list[tuple[int, int]]:
    vo = m.vertex_of
    edges = m.edges()
    out = []
    for i, (d, a) in enumerate(edges):
        ends = {vo[d], vo[a]}
        for e, b in edges[i + 1:]:
            if vo[e] not in ends and vo[b] not in ends:
                out.append((d, e))
    return out


def sample_mcmc(
    spec: SamplerSpec, rng: np.random.Generator, start: CombinatorialMap | None = None, reroot: bool = True
) -> CombinatorialMap:
    if spec.g == 0:
        raise ConfigError("the 2-cycle chain needs g >= 1")
    if start is None:
        start = sample_exact(spec, rng)
    chain = TwoCycleChain(start, rng, reroot)
    return chain.run(spec.mcmc_steps)


def sample(spec: SamplerSpec, rng: np.random.Generator) -> CombinatorialMap:
    if spec.method == "exact":
        return sample_exact(spec, rng)
    if spec.method == "exhaustive":
        return sample_exhaustive(spec, rng)
    return sample_mcmc(spec, rng)


def sample_many(spec: SamplerSpec, count: int, stream: tuple[int, ...] = ()) -> list[CombinatorialMap]:
    """``count`` samples; sample i uses its own stream ``(seed, *stream, i)``."""
    return [sample(spec, make_rng(spec.seed, *stream, i)) for i in range(count)]


def pair_key(m: CombinatorialMap, a: int, b: int) -> tuple:
    """Isomorphism-invariant key of a map with an unordered pair of marked edges."""
    r = canonical_relabelling(m)
    ea = min(r[a], r[m.alpha[a]])
    eb = min(r[b], r[m.alpha[b]])
    return m.code + tuple(sorted((ea, eb)))


def move_components(n: int, g: int, reroot: bool = True) -> list[set[tuple]]:
    """Communicating classes of the chain on the oracle list of Q(n, g).

    Every proposal has positive acceptance probability and the chain is
    reversible, so classes are the connected components of the move graph.
    """
    maps = {m.code: m for m in _oracle(n, g)}
    parent = {c: c for c in maps}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for code, m in maps.items():
        targets = []
        for e, f, kind in two_cycle_census(m).pairs:
            if kind != NONSEPARATING:
                continue
            piece = cut_two_cycle(m, e, f).pieces[0]
            targets.extend(glue_digons(piece, a, b)[0].code for a, b in _disjoint_pairs(piece))
        if reroot:
            targets.extend(m.with_root(d).code for d in range(m.dart_count))
        for t in targets:
            if t in parent:
                parent[find(t)] = find(code)
    classes: dict[tuple, set[tuple]] = {}
    for c in maps:
        classes.setdefault(find(c), set()).add(c)
    return sorted(classes.values(), key=len, reverse=True)
