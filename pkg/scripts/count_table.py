"""Print Q(n, g) with the ratio diagnostics, and compare the two coefficient variants."""

import argparse

from genuslab.counting import cc_table, derived_counts


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--g-max", type=int, default=4)
    args = p.parse_args()

    table = cc_table(args.n_max, args.g_max)
    printed = cc_table(args.n_max, args.g_max, "printed")
    report = derived_counts(table)
    print("n  g  Q(n,g)  U_lab(n,g)  Q(n-1,g)/Q(n,g)  Q(n,g)/(n^2 Q(n,g-1))")
    for (n, g), q in table.items():
        if not q or n == 0:
            continue
        shrink = report.shrink_ratio.get((n, g))
        ratio = report.genus_ratio.get((n, g))
        print(
            f"{n:2d} {g:2d} {q} {report.u_lab[n, g]} "
            f"{float(shrink) if shrink is not None else '-':.6} {float(ratio) if ratio is not None else '-':.6}"
        )
    print(f"printed variant: inexact divisions at {printed.inexact}")
    diffs = [(k, v, printed(*k)) for k, v in table.items() if v != printed(*k)]
    print(f"printed variant differs at {len(diffs)} entries, first: {diffs[:3]}")


if __name__ == "__main__":
    main()
