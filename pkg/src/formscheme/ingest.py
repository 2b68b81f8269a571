"""JSON and CSV reading and writing for forms, tables, distributions and enumerators.

Big integers and rationals are written as decimal strings ("7", "3/2").
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .codesets import AggregateDist, DualDist, FormSet, InnerDist
from .errors import InvalidInput
from .forms import QUAD, SYM, OrbitIndex, index_set, pair_index, upper_length
from .gf import Field, as_field
from .rmcodes import WeightEnumerator
from .scheme import EigTable

KIND_NAMES = {QUAD: "quadratic", SYM: "symmetric"}
KIND_FROM_NAME = {v: k for k, v in KIND_NAMES.items()}


def write_json(path: str | Path, obj: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
    return path


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path} is not valid JSON: {e}") from e


def write_rows(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for r in rows:
            writer.writerow([str(x) for x in r])
    return path


def _fraction(text: Any, what: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidInput(f"bad {what} value {text!r}") from e


# ---------------------------------------------------------------------------
# Forms


def forms_to_json(X: FormSet) -> dict:
    m = X.m
    matrices = []
    for row in X.rows:
        M = [[0] * m for _ in range(m)]
        for (i, j), a in zip(pair_index(m), row):
            M[i][j] = int(a)
            if X.kind == SYM:
                M[j][i] = int(a)
        matrices.append([a for r in M for a in r])
    return {
        "q": X.q,
        "m": m,
        "kind": KIND_NAMES[X.kind],
        "field": X.field.describe(),
        "additive": bool(X.additive),
        "forms": matrices,
    }


def forms_from_json(obj: dict) -> FormSet:
    try:
        q, m, kind_name, forms = int(obj["q"]), int(obj["m"]), obj["kind"], obj["forms"]
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"forms JSON needs q, m, kind and forms: {e}") from e
    if kind_name not in KIND_FROM_NAME:
        raise InvalidInput(f"unknown kind {kind_name!r}; expected quadratic or symmetric")
    kind = KIND_FROM_NAME[kind_name]
    field_obj = obj.get("field")
    field = (
        Field(int(field_obj["p"]), int(field_obj["k"]), field_obj.get("modulus"))
        if field_obj
        else as_field(q)
    )
    if field.q != q:
        raise InvalidInput(f"field GF({field.q}) does not match q={q}")
    rows = []
    for flat in forms:
        if len(flat) != m * m:
            raise InvalidInput(f"each form needs {m * m} row-major entries, got {len(flat)}")
        M = [[int(flat[i * m + j]) for j in range(m)] for i in range(m)]
        for i in range(m):
            for j in range(i):
                if kind == QUAD and M[i][j]:
                    raise InvalidInput("quadratic forms must be upper triangular")
                if kind == SYM and M[i][j] != M[j][i]:
                    raise InvalidInput("bilinear forms must be symmetric")
        rows.append([field.check(M[i][j]) for i, j in pair_index(m)])
    if not rows:
        raise InvalidInput("forms JSON holds no forms")
    return FormSet(field, m, kind, np.array(rows, dtype=np.int64).reshape(-1, upper_length(m)),
                   additive=bool(obj.get("additive", False)))


def write_forms_json(path: str | Path, X: FormSet) -> Path:
    return write_json(path, forms_to_json(X))


def read_forms_json(path: str | Path) -> FormSet:
    return forms_from_json(read_json(path))


# ---------------------------------------------------------------------------
# Tables


def table_to_json(T: EigTable) -> dict:
    return {
        "m": T.m,
        "q": T.q,
        "scheme": KIND_NAMES[T.kind],
        "which": T.which,
        "index": [i.label for i in T.index],
        "rows": [[str(x) for x in row] for row in T.rows],
    }


def write_table_json(path: str | Path, T: EigTable) -> Path:
    return write_json(path, table_to_json(T))


def write_table_csv(path: str | Path, T: EigTable) -> Path:
    """First column labels the row class; cells are decimal strings."""
    header = [T.which] + [i.label for i in T.index]
    return write_rows(path, header, ([i.label] + list(row) for i, row in zip(T.index, T.rows)))


# ---------------------------------------------------------------------------
# Distributions


def dist_to_json(D: InnerDist) -> dict:
    return {
        "m": D.m,
        "q": D.q,
        "kind": KIND_NAMES[D.kind],
        "dual": isinstance(D, DualDist),
        "index": [i.label for i in index_set(D.m)],
        "values": [str(v) for v in D.as_list()],
    }


def dist_from_json(obj: dict) -> InnerDist:
    try:
        m, q = int(obj["m"]), int(obj["q"])
        labels, values = obj["index"], obj["values"]
        kind = KIND_FROM_NAME[obj.get("kind", "quadratic")]
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"distribution JSON needs m, q, index and values: {e}") from e
    if len(labels) != len(values):
        raise InvalidInput("index and values differ in length")
    parsed = {OrbitIndex.parse(lab).check(m): _fraction(v, "distribution") for lab, v in zip(labels, values)}
    cls = DualDist if obj.get("dual") else InnerDist
    return cls(m, q, kind, {i: v for i, v in parsed.items() if v})


def aggregate_to_json(B: AggregateDist) -> dict:
    return {"m": B.m, "q": B.q, "d": B.d, "B": [str(B.values.get(s, 0)) for s in range(B.m // 2 + 1)]}


def write_dist_json(path: str | Path, D: InnerDist) -> Path:
    return write_json(path, dist_to_json(D))


def read_dist_json(path: str | Path) -> InnerDist:
    return dist_from_json(read_json(path))


# ---------------------------------------------------------------------------
# Enumerators and codewords


def enum_to_json(E: WeightEnumerator) -> dict:
    return {"length": E.length, "size": str(E.size), "enum": [[w, str(c)] for w, c in E.counts.items()]}


def enum_from_json(obj: dict) -> WeightEnumerator:
    try:
        length, terms = int(obj["length"]), obj["enum"]
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"enumerator JSON needs length and enum: {e}") from e
    E = WeightEnumerator(length, {int(w): _fraction(c, "count") for w, c in terms})
    if "size" in obj and _fraction(obj["size"], "size") != E.size:
        raise InvalidInput(f"enumerator size {obj['size']} does not match its terms ({E.size})")
    return E


def write_enum_json(path: str | Path, E: WeightEnumerator) -> Path:
    return write_json(path, enum_to_json(E))


def read_enum_json(path: str | Path) -> WeightEnumerator:
    return enum_from_json(read_json(path))


def write_codewords(path: str | Path, words: np.ndarray) -> Path:
    """One codeword per CSV row, symbols as field encodings."""
    n = words.shape[1] if words.ndim == 2 else 0
    return write_rows(path, [f"x{t}" for t in range(1, n + 1)], words.tolist())
