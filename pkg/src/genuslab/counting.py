"""Exact count tables for bipartite quadrangulations and friends.

Everything here is integer or ``Fraction`` arithmetic; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

VARIANTS = ("corrected", "printed")


class InexactDivisionError(ArithmeticError):
    def __init__(self, n: int, g: int, numerator: int, divisor: int):
        super().__init__(
            f"non-exact division at (n={n}, g={g}): {numerator} / {divisor}"
        )
        self.n, self.g = n, g


def middle_coefficient(n: int, variant: str) -> int:
    """Coefficient of Q(n-2, g-1) in the Carrell-Chapuy recurrence."""
    if variant == "corrected":
        return (2 * n - 3) * (n - 1) * (2 * n - 1)
    if variant == "printed":
        return (2 * n - 2) * (n - 1) * (2 * n - 1)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass
class CountTable:
    """Q(n, g) for ``0 <= n <= max_n`` and ``0 <= g <= max_g``.

    ``rows[n][g]`` holds the count.  Entries the recurrence could not divide
    exactly are stored as the floor and listed in ``inexact``.
    """

    max_n: int
    max_g: int
    variant: str = "corrected"
    rows: list[list[int]] = field(default_factory=list)
    inexact: list[tuple[int, int]] = field(default_factory=list)

    def __call__(self, n: int, g: int) -> int:
        if n < 0 or g < 0:
            return 0
        if n > self.max_n or g > self.max_g:
            raise KeyError((n, g))
        return self.rows[n][g]

    def items(self):
        for n, row in enumerate(self.rows):
            for g, value in enumerate(row):
                yield (n, g), value

    def to_json(self) -> dict:
        return {
            "max_n": self.max_n,
            "max_g": self.max_g,
            "variant": self.variant,
            "counts": [[str(v) for v in row] for row in self.rows],
            "inexact": [list(p) for p in self.inexact],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CountTable":
        return cls(
            obj["max_n"],
            obj["max_g"],
            obj["variant"],
            [[int(v) for v in row] for row in obj["counts"]],
            [tuple(p) for p in obj.get("inexact", [])],
        )


def cc_table(n_max: int, g_max: int, variant: str = "corrected", strict: bool = False) -> CountTable:
    """Fill Q(n, g) with the Carrell-Chapuy recurrence.

    With ``strict=True`` a non-exact division raises
    :class:`InexactDivisionError`; otherwise the entry is recorded in
    ``table.inexact`` and the floor is kept so the run can continue.
    """
    if n_max < 0 or g_max < 0:
        raise ValueError("bounds must be non-negative")
    middle_coefficient(1, variant)
    rows = [[0] * (g_max + 1) for _ in range(n_max + 1)]
    rows[0][0] = 1
    # weighted[n][g] = (2n+1) Q(n,g), reused by the convolution
    weighted = [[0] * (g_max + 1) for _ in range(n_max + 1)]
    weighted[0][0] = 1
    inexact = []
    for n in range(1, n_max + 1):
        b = middle_coefficient(n, variant)
        for g in range(g_max + 1):
            if n + 2 - 2 * g < 2:
                continue
            total = 4 * (2 * n - 1) * rows[n - 1][g]
            if n >= 2 and g >= 1:
                total += b * rows[n - 2][g - 1]
            conv = 0
            for n1 in range(n - 1):
                n2 = n - 2 - n1
                w1 = weighted[n1]
                w2 = weighted[n2]
                for g1 in range(max(0, g - n2 // 2), min(g, n1 // 2) + 1):
                    a = w1[g1]
                    if a:
                        conv += a * w2[g - g1]
            total += 3 * conv
            q, r = divmod(total, n + 1)
            if r:
                if strict:
                    raise InexactDivisionError(n, g, total, n + 1)
                inexact.append((n, g))
            rows[n][g] = q
            weighted[n][g] = (2 * n + 1) * q
    return CountTable(n_max, g_max, variant, rows, inexact)


def genus0_closed_form(n: int) -> int:
    """Rooted planar quadrangulations with n faces: 2 * 3^n (2n)! / (n! (n+2)!)."""
    num = 2 * 3**n * factorial(2 * n)
    den = factorial(n) * factorial(n + 2)
    q, r = divmod(num, den)
    assert r == 0
    return q


@dataclass
class DerivedReport:
    u_lab: dict[tuple[int, int], int]
    genus_step_holds: dict[tuple[int, int], bool]
    shrink_ratio: dict[tuple[int, int], Fraction]
    genus_ratio: dict[tuple[int, int], Fraction]


def derived_counts(table: CountTable) -> DerivedReport:
    """Well-labelled unicellular counts, the 2g Q(n,g) <= (2n)^3 Q(n,g-1) matrix, ratios."""
    u_lab = {}
    holds = {}
    shrink = {}
    genus_ratio = {}
    for (n, g), q in table.items():
        num = (n + 2 - 2 * g) * q
        if num % 2:
            raise InexactDivisionError(n, g, num, 2)
        u_lab[n, g] = num // 2 if n + 2 - 2 * g >= 2 else 0
        if n >= 1 and g >= 1 and q:
            holds[n, g] = 2 * g * q <= (2 * n) ** 3 * table(n, g - 1)
        if n >= 1 and q:
            shrink[n, g] = Fraction(table(n - 1, g), q)
        if n >= 1 and g >= 1 and table(n, g - 1):
            genus_ratio[n, g] = Fraction(q, n * n * table(n, g - 1))
    return DerivedReport(u_lab, holds, shrink, genus_ratio)


def genus_step_violations(table: CountTable) -> list[tuple[int, int]]:
    """Entries where 2g Q(n,g) > (2n)^3 Q(n,g-1); empty when the inequality holds everywhere."""
    bad = []
    for (n, g), q in table.items():
        if n >= 1 and g >= 1 and q and 2 * g * q > (2 * n) ** 3 * table(n, g - 1):
            bad.append((n, g))
    return bad


# --- permutations with only odd cycles -------------------------------------


@dataclass
class OddCyclePermTable:
    max_n: int
    rows: list[list[int]]

    def __call__(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n or n > self.max_n:
            return 0
        return self.rows[n][k]


def odd_cycle_perm_counts(n_max: int) -> OddCyclePermTable:
    """c(N, k): permutations of N points, all cycles odd, exactly k cycles."""
    rows = [[0] * (n + 1) for n in range(n_max + 1)]
    rows[0][0] = 1
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            total = 0
            for j in range(0, (n - 1) // 2 + 1):
                rest = n - 1 - 2 * j
                if k - 1 <= rest:
                    prev = rows[rest][k - 1]
                    if prev:
                        total += comb(n - 1, 2 * j) * factorial(2 * j) * prev
            rows[n][k] = total
    return OddCyclePermTable(n_max, rows)


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _odd_table(n_max: int) -> OddCyclePermTable:
    return odd_cycle_perm_counts(n_max)


def unicellular_count(n: int, g: int) -> int:
    """U(n, g): rooted unicellular maps with n edges and genus g.

    Uses the decorated-tree identity
    ``2^(n+1) U(n,g) = Cat(n) * c(n+1, n+1-2g) * 2^(n+1-2g)``.
    """
    if n < 0 or g < 0 or n + 1 - 2 * g < 1:
        return 0
    c = _odd_table(max(n + 1, 1))(n + 1, n + 1 - 2 * g)
    num = catalan(n) * c
    q, r = divmod(num, 4**g)
    assert r == 0
    return q


def unicellular_count_recursive(n: int, g: int) -> int:
    """U(n, g) from the trisection identity 2g U(n,g) = sum_p C(n+1-2g+2p, 2p+1) U(n, g-p)."""
    table = [catalan(n)]
    for h in range(1, g + 1):
        if n + 1 - 2 * h < 1:
            table.append(0)
            continue
        total = sum(
            comb(n + 1 - 2 * h + 2 * p, 2 * p + 1) * table[h - p] for p in range(1, h + 1)
        )
        q, r = divmod(total, 2 * h)
        assert r == 0
        table.append(q)
    return table[g]
