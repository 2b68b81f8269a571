"""Console summaries for the CLI commands."""

from __future__ import annotations

from typing import Dict, Optional

from .codesets import DualDist, InnerDist
from .forms import index_set
from .rmcodes import WeightEnumerator
from .scheme import SchemeTables


def min_rank(D: InnerDist) -> Optional[int]:
    """Smallest nonzero rank with a_i != 0, None for a singleton."""
    ranks = [i.rank for i, v in D.values.items() if v and i.rank > 0]
    return min(ranks) if ranks else None


def design_strength(Dp: DualDist) -> int:
    """Largest t with a'_k = 0 on all ranks 1..t."""
    t = 0
    while t < Dp.m and all(Dp[k] == 0 for k in index_set(Dp.m) if k.rank == t + 1):
        t += 1
    return t


def print_tables_summary(tables: SchemeTables) -> None:
    P = tables.P
    print(f"Eigenvalue tables for m={P.m}, q={P.q}:")
    print(f"  Classes:  {P.size} ({', '.join(i.label for i in P.index)})")
    print(f"  PQ check: {P.q}^{P.m * (P.m + 1) // 2} I  passed")


def print_dist(D: InnerDist, Dp: Optional[DualDist] = None) -> None:
    print(f"Inner distribution (m={D.m}, q={D.q}, {D.kind}), size {D.size}:")
    for i in index_set(D.m):
        line = f"  {i.label:>4}: {D[i]}"
        if Dp is not None:
            line += f"   dual {Dp[i]}"
        print(line)
    d = min_rank(D)
    print(f"  Minimum rank: {d if d is not None else '-'}")
    if Dp is not None:
        print(f"  Design strength: {design_strength(Dp)}")
    print()


def print_code_summary(
    length: int,
    size: int,
    enums: Dict[str, WeightEnumerator],
    designed: Optional[int] = None,
) -> bool:
    """Print code parameters and return whether all enumerators agree."""
    print("Code parameters:")
    print(f"  Length: {length}")
    print(f"  Size:   {size}")
    for name, E in enums.items():
        print(f"  {name:>6} enumerator: {E}")
        print(f"  {name:>6} min distance: {E.min_weight()}")
    values = list(enums.values())
    equal = all(E == values[0] for E in values[1:])
    if len(values) > 1:
        print(f"  Theory vs brute force: {'EQUAL' if equal else 'DIFFER'}")
    if designed is not None:
        got = values[0].min_weight() if values else None
        print(f"  Designed distance: {designed} ({'met' if got == designed else 'not met'})")
    print()
    return equal


def print_suite(report: dict) -> None:
    checks = report["checks"]
    passed = sum(1 for c in checks if c["status"] == "PASS")
    print(f"Suite {report['suite']} (seed {report['seed']}, max m {report['max_m']}, max q {report['max_q']}):")
    for c in checks:
        if c["status"] != "PASS":
            print(f"  {c['status']} {c['name']}: {c['detail']}")
    print(f"  Passed: {passed}/{len(checks)}")
    if report.get("skipped"):
        print(f"  Skipped: {report['skipped']}")
    print(f"  Verdict: {'PASS' if report['passed'] else 'FAIL'}")
