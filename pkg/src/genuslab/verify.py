"""Acceptance checks, runnable as a suite (``genuslab verify``) or one by one."""

from __future__ import annotations

import tempfile
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from scipy.stats import chisquare

from .campaign import CampaignConfig, run_campaign, summarize, wilson_interval
from .cms import PointedQuadrangulation, cms_backward, cms_forward, distance_property
from .counting import cc_table, genus0_closed_form, genus_step_violations
from .geometry import (
    analyze,
    ball,
    cycle_with_tail_min,
    is_inf,
    min_noncontractible_brute,
    planarity_radius,
    shortest_non_contractible,
    two_cycle_census,
    vertex_disjoint_pairs,
)
from .maps import canonical_relabelling, serialize
from .oracle import enumerate_quadrangulations, enumerate_unicellular, quadrangulation_counts
from .rng import make_rng, randbelow
from .sampler import SamplerSpec, _disjoint_pairs, sample_exact
from .surgery import NONSEPARATING, cut_two_cycle, glue_digons
from .unicellular import (
    LabeledUnicellular,
    all_well_labelings,
    find_trisections,
    labelled_code,
    sample_unicellular,
    slice_trisection,
)

LEVELS = ("fast", "full")


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    counterexample: str | None = None
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _level(level: str) -> bool:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    return level == "full"


def _timed(number: int, title: str, fn, *args) -> CheckResult:
    start = time.perf_counter()
    passed, detail, example = fn(*args)
    return CheckResult(number, title, passed, detail, example, time.perf_counter() - start)


# 1 ------------------------------------------------------------------------


def check_enumeration(level: str = "full", variant: str = "corrected") -> CheckResult:
    def run():
        oracle = quadrangulation_counts(4)
        table = cc_table(4, 3, variant)
        for n in range(5):
            for g in range(4):
                want = oracle.get((n, g), 0)
                if table(n, g) != want:
                    return False, f"{variant} Q({n},{g}) = {table(n, g)} but oracle has {want}", f"(n={n}, g={g})"
        printed = cc_table(4, 3, "printed")
        flagged = printed(2, 1) != oracle[(2, 1)]
        if not flagged:
            return False, "printed variant not flagged at (2,1)", None
        return True, f"corrected table equals oracle for n<=4; printed Q(2,1)={printed(2, 1)} flagged", None

    return _timed(1, "enumeration ground truth", run)


# 2 ------------------------------------------------------------------------


def check_genus0(level: str = "full") -> CheckResult:
    def run():
        table = cc_table(12, 0)
        for n in range(13):
            if table(n, 0) != genus0_closed_form(n):
                return False, f"Q({n},0) = {table(n, 0)} != {genus0_closed_form(n)}", None
        return True, "g=0 column equals the closed form for n<=12", None

    return _timed(2, "genus-0 closed form", run)


# 3 ------------------------------------------------------------------------


def labelled_trisection_injection(n: int, g: int) -> tuple[int, int, int]:
    """(images, distinct images, |U^lab(n, g-1)| * (2n)^3) for the slice map."""
    images = set()
    total = 0
    for m in enumerate_unicellular(n, g).maps:
        for labels in all_well_labelings(m):
            for t in find_trisections(m):
                sliced, corners, new_labels = slice_trisection(m, t, labels)
                r = canonical_relabelling(sliced)
                images.add((labelled_code(sliced, new_labels), tuple(r[c] for c in corners)))
                total += 1
    smaller = sum(len(all_well_labelings(m)) for m in enumerate_unicellular(n, g - 1).maps)
    return total, len(images), (2 * n) ** 3 * smaller


def check_genus_step(level: str = "full") -> CheckResult:
    full = _level(level)

    def run():
        n_max = 200 if full else 60
        table = cc_table(n_max, n_max // 2 + 1)
        bad = genus_step_violations(table)
        if bad:
            return False, f"inequality fails at {bad[0]}", str(bad[0])
        inj_max = 4 if full else 3
        for n in range(2, inj_max + 1):
            for g in range(1, n // 2 + 1):
                total, distinct, bound = labelled_trisection_injection(n, g)
                if total != distinct:
                    return False, f"slice not injective at ({n},{g})", f"(n={n}, g={g})"
                if total > bound:
                    return False, f"2g U^lab({n},{g}) > (2n)^3 U^lab({n},{g - 1})", None
        return True, f"2gQ(n,g) <= (2n)^3 Q(n,g-1) for n<={n_max}; slicing injective for n<={inj_max}", None

    return _timed(3, "genus-step bound", run)


# 4 ------------------------------------------------------------------------


def check_trisections(level: str = "full") -> CheckResult:
    full = _level(level)

    def run():
        for n in range(1, 6):
            for m in enumerate_unicellular(n).maps:
                if len(find_trisections(m)) != 2 * m.genus:
                    return False, f"oracle map with n={n} has wrong count", serialize(m)
        draws = 1000 if full else 100
        for n, g in ((20, 2), (40, 4)):
            rng = make_rng(4, n, g)
            for _ in range(draws):
                m = sample_unicellular(n, g, rng)
                if len(find_trisections(m)) != 2 * g:
                    return False, f"sampled map at ({n},{g}) has wrong count", serialize(m)
        return True, f"|trisections| = 2g on oracle n<=5 and {draws} samples at (20,2), (40,4)", None

    return _timed(4, "trisection count", run)


# 5 ------------------------------------------------------------------------


def check_cms(level: str = "full") -> CheckResult:
    def run():
        for n in range(1, 5):
            q_by_g = enumerate_quadrangulations(n).by_genus()
            for g in range(n // 2 + 1):
                keys = set()
                pairs = 0
                for m in enumerate_unicellular(n, g).maps:
                    for labels in all_well_labelings(m):
                        lu = LabeledUnicellular(m, labels)
                        for eps in (1, -1):
                            pq = cms_forward(lu, eps)
                            if not distance_property(pq):
                                return False, "distance property fails", serialize(pq.map)
                            keys.add(pq.key)
                            pairs += 1
                            if n <= 3:
                                back, e = cms_backward(pq)
                                if back.code != lu.code or e != eps:
                                    return False, "backward(forward(x)) != x", serialize(m, labels=list(labels))
                q_maps = q_by_g.get(g, [])
                pointed = sum(q.num_vertices for q in q_maps)
                if not (pairs == len(keys) == (n + 2 - 2 * g) * len(q_maps) == pointed):
                    return False, f"counting identity fails at ({n},{g})", None
        for n in range(1, 4):
            for q in enumerate_quadrangulations(n).maps:
                for v in range(q.num_vertices):
                    lu, eps = cms_backward((q, v))
                    if cms_forward(lu, eps).key != PointedQuadrangulation(q, v).key:
                        return False, "forward(backward(x)) != x", serialize(q, pointed=v)
        return True, "round trips on oracle n<=3; 2U^lab = (n+2-2g)Q for n<=4; labels = distances", None

    return _timed(5, "CMS correspondence", run)


# 6 ------------------------------------------------------------------------


def exact_sampler_chisquare(n: int, g: int, draws: int, seed: int = 6) -> tuple[float, Counter, list]:
    codes = [m.code for m in enumerate_quadrangulations(n, g).maps]
    rng = make_rng(seed, n, g)
    spec = SamplerSpec(n, g)
    counts = Counter(sample_exact(spec, rng).code for _ in range(draws))
    observed = [counts.get(c, 0) for c in codes]
    if sum(observed) != draws:
        return 0.0, counts, codes
    if len(codes) == 1:
        return 1.0, counts, codes
    return float(chisquare(observed).pvalue), counts, codes


def check_sampler(level: str = "full") -> CheckResult:
    full = _level(level)

    def run():
        draws = 10**5 if full else 10**4
        pvals = []
        for n, g in ((1, 0), (2, 0), (3, 1)):
            p, counts, codes = exact_sampler_chisquare(n, g, draws)
            pvals.append(p)
            if p < 0.01:
                return False, f"chi-square p={p:.4g} at ({n},{g})", str(dict(counts))
        return True, f"{draws} draws each, p-values {', '.join(f'{p:.3f}' for p in pvals)}", None

    return _timed(6, "exact sampler uniformity", run)


# 7 ------------------------------------------------------------------------


def census_totals(n: int, g: int) -> tuple[int, int]:
    by_g = enumerate_quadrangulations(n).by_genus()
    x = sum(two_cycle_census(m).nonseparating for m in by_g.get(g, []))
    p = sum(vertex_disjoint_pairs(m) for m in by_g.get(g - 1, []))
    return x, p


def check_surgery(level: str = "full") -> CheckResult:
    full = _level(level)

    def run():
        instances = 10**4 if full else 10**3
        rng = make_rng(7)
        done = 0
        sizes = [(6, 1), (8, 1), (8, 2), (10, 2)]
        while done < instances:
            n, g = sizes[randbelow(rng, len(sizes))]
            m = sample_exact(SamplerSpec(n, g), rng)
            nonsep = [(e, f) for e, f, kind in two_cycle_census(m).pairs if kind == NONSEPARATING]
            for _ in range(10):
                if nonsep:
                    e, f = nonsep[randbelow(rng, len(nonsep))]
                    cut = cut_two_cycle(m, e, f)
                    piece = cut.pieces[0]
                    (a1, _), (c1, _) = cut.marked
                    back, _ = glue_digons(piece, a1, c1)
                    if back.code != m.code:
                        return False, "glue(cut(x)) != x", serialize(m, pair=[e, f])
                    done += 1
                pairs = _disjoint_pairs(m)
                if pairs:
                    x, y = pairs[randbelow(rng, len(pairs))]
                    glued, (u, v) = glue_digons(m, x, y)
                    cut = cut_two_cycle(glued, u, v)
                    if cut.classification != NONSEPARATING or cut.pieces[0].code != m.code:
                        return False, "cut(glue(x)) != x", serialize(m, pair=[x, y])
                    (a1, a2), (c1, c2) = cut.marked
                    r = canonical_relabelling(cut.pieces[0])
                    rm = canonical_relabelling(m)
                    got = {min(r[a1], r[a2]), min(r[c1], r[c2])}
                    want = {min(rm[x], rm[m.alpha[x]]), min(rm[y], rm[m.alpha[y]])}
                    if got != want:
                        return False, "cut(glue(x)) marks the wrong edges", serialize(m, pair=[x, y])
                    done += 1
        for n in range(2, 5):
            for g in range(1, n // 2 + 1):
                x, p = census_totals(n, g)
                if x != p:
                    return False, f"census mismatch at ({n},{g}): {x} vs {p}", None
        x21, p21 = census_totals(2, 1)
        return True, f"{done} round trips; census equal for n<=4, (2,1): {x21} = {p21}", None

    return _timed(7, "2-cycle surgery bijection", run)


# 8 ------------------------------------------------------------------------


def check_geometry(level: str = "full") -> CheckResult:
    full = _level(level)

    def run():
        per_pair = 40 if full else 10
        checked = exact_ct = 0
        for idx, (n, g) in enumerate(((4, 0), (6, 1), (8, 1), (10, 2), (12, 2), (14, 3))):
            for j in range(per_pair):
                m = sample_exact(SamplerSpec(n, g), make_rng(8, idx, j))
                pr = planarity_radius(m)
                if is_inf(pr) != (m.genus == 0):
                    return False, "PR = inf does not match genus 0", serialize(m)
                lo, up, cert, exact = cycle_with_tail_min(m, 8, pr)
                if exact and not is_inf(up):
                    exact_ct += 1
                    if not lo <= up <= 7 * lo + 1:
                        return False, f"ct sandwich fails: PR+1={lo}, ct={up}", serialize(m)
                dist = m.distances_from(m.root_vertex)
                prev = None
                for r in range(max(dist) + 1):
                    b = ball(m, r, dist)
                    if prev is not None and (not set(prev.darts) <= set(b.darts) or b.genus < prev.genus):
                        return False, "balls are not monotone", serialize(m)
                    prev = b
                checked += 1
        for n in range(1, 4):
            for m in enumerate_quadrangulations(n).maps:
                s = shortest_non_contractible(m)
                brute = min_noncontractible_brute(m)
                if (s is None) != (brute is None) or (s is not None and s.length != brute[0]):
                    return False, "systole disagrees with exhaustive enumeration", serialize(m)
        return True, f"{checked} sampled maps ({exact_ct} with exact ct); systole exact on oracle n<=3", None

    return _timed(8, "geometry invariants", run)


# 9 ------------------------------------------------------------------------


def check_two_cycles(level: str = "full") -> CheckResult:
    full = _level(level)

    def run():
        samples = 1000 if full else 100
        n, g = (30, 3) if full else (16, 2)
        reports = []
        for j in range(samples):
            m = sample_exact(SamplerSpec(n, g), make_rng(9, j))
            reports.append(analyze(m, ["two-cycles"]))
        s = summarize(n, g, reports, "exact")
        hits = sum(1 for r in reports if r.x_nonsep_2cycles > 0)
        lower, _ = wilson_interval(hits, samples)
        bound = s["p_x_positive"] + 3 * s["p_x_positive_se"]
        ok = lower > 0 and s["second_moment_ratio"] <= bound
        detail = (
            f"({n},{g}) P(X>0)={s['p_x_positive']:.3f} (99% Wilson lower {lower:.3f}), "
            f"E(X)^2/E(X^2)={s['second_moment_ratio']:.3f} <= {bound:.3f}"
        )
        return ok, detail, None

    return _timed(9, "short 2-cycle proxy", run)


# 10 -----------------------------------------------------------------------


def check_pr_ladder(level: str = "full") -> CheckResult:
    full = _level(level)

    def run():
        samples = 200 if full else 30
        ladder = (10, 20, 40, 80) if full else (10, 20, 40)
        medians = []
        for n in ladder:
            prs = sorted(
                planarity_radius(sample_exact(SamplerSpec(n, 2), make_rng(10, n, j))) for j in range(samples)
            )
            k = len(prs)
            med = prs[k // 2] if k % 2 else (prs[k // 2 - 1] + prs[k // 2]) / 2
            medians.append(med)
        ok = all(a <= b for a, b in zip(medians, medians[1:]))
        return ok, f"median PR at g=2 for n={list(ladder)}: {medians}", None

    return _timed(10, "planarity radius trend", run)


# 11 -----------------------------------------------------------------------


def check_reproducibility(level: str = "full") -> CheckResult:
    full = _level(level)

    def run():
        pairs = [(6, 1), (10, 2)] if full else [(6, 1)]
        samples = 12 if full else 4
        outputs = []
        with tempfile.TemporaryDirectory() as tmp:
            for run_index, workers in enumerate((1, 2, 1)):
                base = Path(tmp) / f"run{run_index}"
                cfg = CampaignConfig(
                    pairs=pairs,
                    samples=samples,
                    seed=11,
                    metrics=["pr", "two-cycles", "ct", "diameter"],
                    workers=workers,
                    out_csv=str(base) + ".csv",
                    out_ndjson=str(base) + ".ndjson",
                )
                run_campaign(cfg, workers=workers)
                outputs.append((Path(cfg.out_csv).read_bytes(), Path(cfg.out_ndjson).read_bytes()))
        same = all(o == outputs[0] for o in outputs)
        return same, f"{len(outputs)} runs with workers 1/2/1 byte-identical: {same}", None

    return _timed(11, "reproducibility", run)


CHECKS = (
    check_enumeration,
    check_genus0,
    check_genus_step,
    check_trisections,
    check_cms,
    check_sampler,
    check_surgery,
    check_geometry,
    check_two_cycles,
    check_pr_ladder,
    check_reproducibility,
)


def verify_suite(level: str = "fast", variant: str = "corrected", only: list[int] | None = None) -> list[CheckResult]:
    """Run the checks in order; a failing check carries its first counterexample."""
    _level(level)
    results = []
    for number, check in enumerate(CHECKS, 1):
        if only and number not in only:
            continue
        if check is check_enumeration:
            results.append(check(level, variant))
        else:
            results.append(check(level))
    return results
