"""Acceptance suites.

Each suite is a list of named checks over a small parameter grid. A check
returns ``(ok, detail)``; it is reported as PASS or FAIL, or as SKIP when an
enumeration cap stops it. ``run_suite`` collects the results into the JSON
report written by ``formscheme verify``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass
from math import comb
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from sympy import factorint

from . import config
from .codesets import (
    FormSet,
    abc_transform_check,
    aggregate_b,
    design_degree,
    dual_dist,
    inner_dist,
    is_d_code,
    is_elliptic_code,
    is_t_design,
    macwilliams_check,
    random_formset,
    size_bound,
    sporadic_two_code,
    theoretical_inner_dist,
)
from .construct import (
    FAMILIES,
    build_family,
    coeff_pairing_check,
    elliptic_dcode,
    maximal_code,
    quad_dcode_even_even,
    quad_dcode_odd_odd,
)
from .errors import CapExceeded, FormSchemeError, InvalidInput, UnsupportedCase
from .forms import QUAD, SYM, OrbitIndex, all_rows, census, index_set, make_form, upper_length
from .gf import as_field
from .qnum import (
    cross_degree_identities_hold,
    f_matrix,
    pascal_identities_hold,
    transform_identity_holds,
)
from .rmcodes import (
    ClassicalCode,
    WeightEnumerator,
    coset_enum_brute,
    designed_distance,
    designed_distance_even,
    dist_enum_brute,
    dist_enum_theory,
    omega,
    rm2_star_enum,
    zero_diagonal_forms,
)
from .scheme import (
    beta_split_holds,
    census_matches_valencies,
    eig_tables,
    grouped_sums_hold,
    oracle_mismatches,
    p_grouped_sums_hold,
    q_number,
    recurrences_hold,
    row_sum_law_holds,
    valency,
)

logger = logging.getLogger(__name__)

SUITES = ("qnum", "scheme", "codesets", "construct", "rmcodes")
ALL = "all"

# spaces enumerated by the oracle and census checks
SPACE_LIMIT = 3**10
# largest constructed code checked
CODE_LIMIT = 2**11
# largest classical code checked by brute force
WORD_LIMIT = 2**16

Outcome = Tuple[bool, str]
Check = Tuple[str, Callable[[], Outcome]]


@dataclass
class CheckResult:
    name: str
    status: str
    seconds: float
    detail: str = ""


@dataclass(frozen=True)
class Grid:
    max_m: int
    max_q: int
    seed: int

    def fields(self, limit: Optional[int] = None) -> List[int]:
        top = self.max_q if limit is None else min(self.max_q, limit)
        return prime_powers(top)

    def dims(self, limit: Optional[int] = None) -> range:
        return range(1, (self.max_m if limit is None else min(self.max_m, limit)) + 1)


def prime_powers(limit: int) -> List[int]:
    return [q for q in range(2, limit + 1) if len(factorint(q)) == 1]


def _run(name: str, fn: Callable[[], Outcome]) -> CheckResult:
    start = time.perf_counter()
    try:
        ok, detail = fn()
        status = "PASS" if ok else "FAIL"
    except CapExceeded as e:
        status, detail = "SKIP", str(e)
    except FormSchemeError as e:
        status, detail = "FAIL", f"{type(e).__name__}: {e}"
    seconds = round(time.perf_counter() - start, 4)
    if status == "FAIL":
        logger.warning("check %s failed: %s", name, detail)
    else:
        logger.info("check %s: %s (%.3fs)", name, status, seconds)
    return CheckResult(name, status, seconds, detail)


def _compare(got, want) -> Outcome:
    if got == want:
        return True, ""
    return False, f"got {got}, expected {want}"


# ---------------------------------------------------------------------------
# qnum


def qnum_checks(grid: Grid) -> Iterator[Check]:
    yield "f_matrix m=4 q=2", lambda: _compare(f_matrix(4, 2), [[1, 1, 1], [35, 3, -5], [28, -4, 4]])
    for q in grid.fields():
        yield f"pascal q={q}", lambda q=q: (
            all(pascal_identities_hold(n, k, q) for n in range(1, 13) for k in range(n + 1)),
            "n <= 12",
        )
        for m in range(1, 9):
            yield f"f orthogonality m={m} q={q}", lambda m=m, q=q: (bool(f_matrix(m, q)), "")
            yield f"f transform m={m} q={q}", lambda m=m, q=q: (transform_identity_holds(m, q), "")
            yield f"f cross-degree m={m} q={q}", lambda m=m, q=q: (cross_degree_identities_hold(m, q), "")


# ---------------------------------------------------------------------------
# scheme


def _valency_sums(m: int, q: int) -> Outcome:
    total = q ** upper_length(m)
    for kind in (QUAD, SYM):
        got = sum(valency(kind, i, m, q) for i in index_set(m))
        if got != total:
            return False, f"{kind} valencies sum to {got}, expected {total}"
    return True, ""


def _oracle(m: int, q: int) -> Outcome:
    bad = oracle_mismatches(m, q)
    return not bad, "; ".join(f"{w}_{a}({b}): {c} vs {o}" for w, a, b, c, o in bad[:5])


def scheme_checks(grid: Grid) -> Iterator[Check]:
    yield "Q_1(1) m=2 q=2", lambda: _compare(q_number(OrbitIndex(1), OrbitIndex(1), 2, 2), -1)
    for q in grid.fields():
        for m in grid.dims():
            tag = f"m={m} q={q}"
            yield f"valency sums {tag}", lambda m=m, q=q: _valency_sums(m, q)
            yield f"PQ = q^N I {tag}", lambda m=m, q=q: (bool(eig_tables(m, q)), "")
            yield f"row-sum law {tag}", lambda m=m, q=q: (row_sum_law_holds(m, q), "")
            yield f"recurrences {tag}", lambda m=m, q=q: (recurrences_hold(m, q), "")
            yield f"beta split {tag}", lambda m=m, q=q: (beta_split_holds(m, q), "")
            yield f"grouped Q sums {tag}", lambda m=m, q=q: (grouped_sums_hold(m, q), "")
            yield f"grouped P sums {tag}", lambda m=m, q=q: (p_grouped_sums_hold(m, q), "")
            if q ** upper_length(m) <= SPACE_LIMIT:
                yield f"census {tag}", lambda m=m, q=q: (census_matches_valencies(m, q), "")
                yield f"oracle {tag}", lambda m=m, q=q: _oracle(m, q)


# ---------------------------------------------------------------------------
# codesets


def _theory_case(m: int, d: int) -> str:
    if d % 2:
        return "quad-odd-m-odd-d" if m % 2 else "quad-even-m-odd-d"
    return "elliptic"


def _check_maximal(m: int, d: int, q: int, elliptic: bool) -> Outcome:
    X = elliptic_dcode(m, d // 2, q) if elliptic else maximal_code(QUAD, m, d, q)
    D = inner_dist(X)
    want = theoretical_inner_dist(_theory_case(m, d), m, q, d)
    if D.as_list() != want.as_list():
        return False, f"census {[str(v) for v in D.as_list()]} vs theory {[str(v) for v in want.as_list()]}"
    t = design_degree(m, d, elliptic)
    if not is_t_design(X, t):
        return False, f"not a {t}-design"
    if elliptic and not is_elliptic_code(X, d):
        return False, "a hyperbolic difference of rank d occurs"
    return True, f"{len(X)} forms, {t}-design"


def _check_partial(m: int, d: int, q: int) -> Outcome:
    X = quad_dcode_even_even(m, d, q)
    got = aggregate_b(inner_dist(X))
    want = theoretical_inner_dist("quad-even-q-even-d-partial", m, q, d)
    span = range(m // 2 + 1)
    return _compare([got.values.get(s, 0) for s in span], [want.values.get(s, 0) for s in span])


def _check_sym_design(m: int, d: int, q: int) -> Outcome:
    X = maximal_code(SYM, m, d, q)
    t = design_degree(m, d)
    return is_t_design(X, t), f"{len(X)} forms, t={t}"


def _check_identities(X) -> Outcome:
    if not macwilliams_check(X):
        return False, "MacWilliams identity"
    if not abc_transform_check(X):
        return False, "grouped transforms"
    return True, f"{len(X)} forms"


def _check_random(q: int, m: int, kind: str, seed: int) -> Outcome:
    total = q ** upper_length(m)
    X = random_formset(q, m, kind, min(12, total), seed)
    dual_dist(inner_dist(X))
    return abc_transform_check(X), f"seed {seed}"


def _check_sporadic() -> Outcome:
    X = sporadic_two_code()
    bound = size_bound(SYM, 3, 2, 2, "additive")
    ok = len(X) == 22 and is_d_code(X, 2) and len(X) > bound
    return ok, f"{len(X)} forms against the additive bound {bound}"


def _check_refusal() -> Outcome:
    try:
        size_bound(SYM, 3, 2, 2)
    except UnsupportedCase:
        return True, ""
    return False, "non-additive even-d bound was not refused"


def codesets_checks(grid: Grid) -> Iterator[Check]:
    yield "sporadic 2-code", _check_sporadic
    yield "even-d bound refusal", _check_refusal
    for q in grid.fields():
        for m in grid.dims():
            for kind in (QUAD, SYM):
                yield f"random {kind} m={m} q={q}", lambda q=q, m=m, kind=kind: _check_random(q, m, kind, grid.seed)
            for d in range(1, m + 1):
                tag = f"m={m} d={d} q={q}"
                if d % 2:
                    if size_bound(QUAD, m, q, d) <= CODE_LIMIT:
                        yield f"maximal quad {tag}", lambda m=m, d=d, q=q: _check_maximal(m, d, q, False)
                    if size_bound(SYM, m, q, d) <= CODE_LIMIT:
                        yield f"maximal sym {tag}", lambda m=m, d=d, q=q: _check_sym_design(m, d, q)
                elif m % 2 == 0:
                    if size_bound(QUAD, m, q, d, "elliptic") <= CODE_LIMIT:
                        yield f"elliptic {tag}", lambda m=m, d=d, q=q: _check_maximal(m, d, q, True)
                    if q % 2 == 0 and size_bound(QUAD, m, q, d) <= CODE_LIMIT:
                        yield f"partial {tag}", lambda m=m, d=d, q=q: _check_partial(m, d, q)
                if q ** upper_length(m) <= SPACE_LIMIT and (m - d) % 2 == 0:
                    if size_bound(SYM, m, q, d, "additive") <= CODE_LIMIT:
                        yield f"identities sym {tag}", lambda m=m, d=d, q=q: _check_identities(
                            build_family("sym", m, d, q)
                        )
                    if m % 2 and d % 2 and size_bound(QUAD, m, q, d) <= CODE_LIMIT:
                        yield f"identities quad {tag}", lambda m=m, d=d, q=q: _check_identities(
                            quad_dcode_odd_odd(m, d, q)
                        )


# ---------------------------------------------------------------------------
# construct


def _family_target(family: str, m: int, d: int, q: int) -> Optional[int]:
    """Size the family must reach at (m, d, q), None when it does not apply."""
    even_q = q % 2 == 0
    if family == "sym" and (m - d) % 2 == 0:
        return size_bound(SYM, m, q, d, "additive")
    if family == "sym-punctured" and (m - d) % 2:
        return size_bound(SYM, m, q, d, "additive")
    if family == "quad-oo" and m % 2 and d % 2:
        return size_bound(QUAD, m, q, d)
    if family == "quad-eo" and m % 2 == 0 and d % 2:
        return size_bound(QUAD, m, q, d)
    if family == "quad-oe" and even_q and m % 2 and d % 2 == 0:
        return size_bound(QUAD, m, q, d)
    if family == "quad-ee" and even_q and m % 2 == 0 and d % 2 == 0:
        return size_bound(QUAD, m, q, d)
    if family == "elliptic" and m % 2 == 0 and d % 2 == 0:
        return size_bound(QUAD, m, q, d, "elliptic")
    return None


def _check_family(family: str, m: int, d: int, q: int, size: int) -> Outcome:
    X = build_family(family, m, d, q)
    if len(X) != size:
        return False, f"{len(X)} forms, bound {size}"
    return is_d_code(X, d), f"{len(X)} forms"


def construct_checks(grid: Grid) -> Iterator[Check]:
    for q in grid.fields(4):
        for m in grid.dims(6):
            if q ** upper_length(m) <= SPACE_LIMIT:
                yield f"coefficient pairing m={m} q={q}", lambda m=m, q=q: (
                    coeff_pairing_check(m, q, seed=grid.seed),
                    "",
                )
            for family in FAMILIES:
                for d in range(1, m + 1):
                    size = _family_target(family, m, d, q)
                    if size is None or size > CODE_LIMIT:
                        continue
                    yield f"{family} m={m} d={d} q={q}", lambda f=family, m=m, d=d, q=q, s=size: _check_family(
                        f, m, d, q, s
                    )


# ---------------------------------------------------------------------------
# rmcodes


def separates_cosets(m: int, q: int) -> bool:
    """False when 1 - [x = 0] is itself a quadratic function on F_q^m.

    The cosets of R_q(1,m)* then stop being distinct as sets, so C(Y) has
    fewer words than its nominal size.
    """
    return m * (q - 1) > 2


def _check_cosets(m: int, q: int) -> Outcome:
    field = as_field(q)
    C = census(field, m, QUAD)
    for i in index_set(m):
        want = omega(i, m, q)
        for row in C.members(i):
            got = coset_enum_brute(make_form(field, m, QUAD, row.tolist()))
            if got != want:
                return False, f"class {i.label}: {got} vs {want}"
    return True, f"{len(C.rows)} cosets"


def _check_omega_sizes(m: int, q: int) -> Outcome:
    for i in index_set(m):
        size = omega(i, m, q).size
        if size != q ** (m + 1):
            return False, f"omega_{i.label}(1) = {size}"
    return True, ""


def _check_code(m: int, d: int, q: int, elliptic: bool) -> Outcome:
    Y = elliptic_dcode(m, d // 2, q) if elliptic else maximal_code(QUAD, m, d, q)
    C = ClassicalCode(Y)
    theory, brute = dist_enum_theory(Y), dist_enum_brute(C, threads=config.threads())
    if theory != brute:
        return False, f"theory {theory} vs census {brute}"
    return _compare(brute.min_weight(), designed_distance(m, q, d // 2))


def _check_even_designed(m: int, d: int, q: int) -> Outcome:
    C = ClassicalCode(quad_dcode_even_even(m, d, q))
    return _compare(dist_enum_brute(C).min_weight(), designed_distance_even(m, q, d // 2))


def _check_headline() -> Outcome:
    Y = quad_dcode_odd_odd(5, 5, 2)
    C = ClassicalCode(Y)
    brute = dist_enum_brute(C)
    if (C.length, C.size) != (31, 2**11):
        return False, f"length {C.length}, size {C.size}"
    if brute != dist_enum_theory(Y):
        return False, "theory and census enumerators differ"
    return _compare(brute.min_weight(), designed_distance(5, 2, 2))


def _check_rm2(m: int, q: int) -> Outcome:
    field = as_field(q)
    if q == 2:
        Y = zero_diagonal_forms(m)
    else:
        Y = FormSet(field, m, QUAD, all_rows(field, m), additive=True)
    return _compare(dist_enum_brute(ClassicalCode(Y)), rm2_star_enum(m, q))


def _check_rm2_full_space() -> Outcome:
    want = WeightEnumerator(7, {w: comb(7, w) for w in range(8)})
    return _compare(rm2_star_enum(3, 2), want)


def rmcodes_checks(grid: Grid) -> Iterator[Check]:
    yield "C(Y) for the maximal 5-code in Q(5,2)", _check_headline
    yield "R_2(2,3)* is the whole space", _check_rm2_full_space
    for q in grid.fields():
        for m in grid.dims(6):
            yield f"omega sizes m={m} q={q}", lambda m=m, q=q: _check_omega_sizes(m, q)
        for m in grid.dims(3):
            if q ** upper_length(m) <= 2**8 and q ** (m + 1) * (q**m - 1) <= WORD_LIMIT:
                yield f"coset enumerators m={m} q={q}", lambda m=m, q=q: _check_cosets(m, q)
            if separates_cosets(m, q) and q ** (upper_length(m) + m + 1) <= WORD_LIMIT:
                yield f"R_q(2,m)* m={m} q={q}", lambda m=m, q=q: _check_rm2(m, q)
        for m in grid.dims(5):
            if not separates_cosets(m, q):
                continue
            for d in range(2, m + 1):
                if d % 2:
                    bound = size_bound(QUAD, m, q, d)
                elif m % 2 == 0:
                    bound = size_bound(QUAD, m, q, d, "elliptic")
                else:
                    continue
                if bound * q ** (m + 1) <= WORD_LIMIT:
                    yield f"C(Y) m={m} d={d} q={q}", lambda m=m, d=d, q=q: _check_code(m, d, q, d % 2 == 0)
                if d % 2 == 0 and m % 2 == 0 and q % 2 == 0:
                    if size_bound(QUAD, m, q, d) * q ** (m + 1) <= config.cap("pairwise_code_cap"):
                        yield f"even designed distance m={m} d={d} q={q}", lambda m=m, d=d, q=q: (
                            _check_even_designed(m, d, q)
                        )


SUITE_CHECKS: Dict[str, Callable[[Grid], Iterator[Check]]] = {
    "qnum": qnum_checks,
    "scheme": scheme_checks,
    "codesets": codesets_checks,
    "construct": construct_checks,
    "rmcodes": rmcodes_checks,
}


def run_suite(
    suite: str,
    max_m: int = 4,
    max_q: int = 3,
    seed: Optional[int] = None,
    strict: bool = False,
) -> dict:
    """Run one suite (or ``all``) and return its JSON-ready report.

    A run passes when no check failed and at least one check passed. With
    ``strict`` a check skipped at a cap also fails the run.
    """
    if suite != ALL and suite not in SUITE_CHECKS:
        raise InvalidInput(f"unknown suite {suite!r}; expected one of {', '.join(SUITES + (ALL,))}")
    if max_m < 1 or max_q < 2:
        raise InvalidInput(f"need max_m >= 1 and max_q >= 2, got {max_m} and {max_q}")
    grid = Grid(max_m, max_q, config.settings()["seed"] if seed is None else seed)
    names = SUITES if suite == ALL else (suite,)
    results: List[CheckResult] = []
    for name in names:
        logger.info("suite %s: max_m=%d max_q=%d seed=%d", name, max_m, max_q, grid.seed)
        results.extend(_run(label, fn) for label, fn in SUITE_CHECKS[name](grid))
    counts = {s: sum(1 for r in results if r.status == s) for s in ("PASS", "FAIL", "SKIP")}
    if counts["SKIP"]:
        logger.warning("%d of %d checks skipped at a cap", counts["SKIP"], len(results))
    passed = counts["FAIL"] == 0 and counts["PASS"] > 0 and not (strict and counts["SKIP"])
    return {
        "suite": suite,
        "seed": grid.seed,
        "max_m": max_m,
        "max_q": max_q,
        "strict": strict,
        "skipped": counts["SKIP"],
        "checks": [asdict(r) for r in results],
        "passed": passed,
    }
