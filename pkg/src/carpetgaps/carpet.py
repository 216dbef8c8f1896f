"""Digit-set model, combinatorial classification, and closed-form dimensions.

A carpet is described by integer bases ``n >= m >= 2`` and a digit set
``D`` of pairs ``(i, j)`` with ``0 <= i < n`` (column, x direction) and
``0 <= j < m`` (row, y direction, increasing upward).  Everything derived
here is a pure function of that triple.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DigitSetError

# Component-cardinality verdict literals shared across modules.
FINITE = "finite"
INFINITE = "infinite"
UNKNOWN = "unknown"

# Exponent case tags.
CASE_LINEAR = "linear"
CASE_NONLINEAR_FULL_ROWS = "nonlinear_full_rows"
CASE_NONLINEAR_PARTIAL_ROWS = "nonlinear_partial_rows"
CASE_UNDEFINED = "undefined"

# Relative tolerance for comparing floating dimension/exponent values.
# Exact equality of log-linear forms is certified separately via integer
# witnesses; see theory.comparability_verdict.
REL_TOL = 1e-12


@dataclass(frozen=True)
class DigitSet:
    """Bases ``(n, m)`` plus the chosen digit pairs, the single source of truth."""

    n: int
    m: int
    digits: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and isinstance(self.m, int)):
            raise DigitSetError("bases n and m must be integers")
        if self.m < 2 or self.n < self.m:
            raise DigitSetError(
                f"bases must satisfy n >= m >= 2, got n={self.n}, m={self.m}")
        if len(self.digits) <= 1:
            raise DigitSetError("a digit set needs at least two digits")
        for d in self.digits:
            if (not isinstance(d, tuple) or len(d) != 2
                    or not all(isinstance(c, int) for c in d)):
                raise DigitSetError(f"digit {d!r} is not an integer pair")
            i, j = d
            if not (0 <= i < self.n and 0 <= j < self.m):
                raise DigitSetError(
                    f"digit ({i}, {j}) outside [0,{self.n})x[0,{self.m})")

    @property
    def size(self) -> int:
        return len(self.digits)

    def sorted_digits(self) -> list[tuple[int, int]]:
        return sorted(self.digits)

    def row_columns(self) -> dict[int, list[int]]:
        """Sorted occupied columns per nonempty row index."""
        rows: dict[int, list[int]] = {}
        for i, j in self.digits:
            rows.setdefault(j, []).append(i)
        return {j: sorted(cols) for j, cols in sorted(rows.items())}

    def column_rows(self) -> dict[int, list[int]]:
        """Sorted occupied rows per nonempty column index."""
        cols: dict[int, list[int]] = {}
        for i, j in self.digits:
            cols.setdefault(i, []).append(j)
        return {i: sorted(js) for i, js in sorted(cols.items())}

    def to_json_obj(self) -> dict:
        return {"n": self.n, "m": self.m,
                "digits": [list(d) for d in self.sorted_digits()]}


def digit_set(n: int, m: int, digits: Iterable[tuple[int, int]]) -> DigitSet:
    """Build a validated DigitSet, rejecting duplicate pairs."""
    pairs = [tuple(d) for d in digits]
    if len(pairs) != len(set(pairs)):
        raise DigitSetError("duplicate digit pair")
    return DigitSet(n=n, m=m, digits=frozenset(pairs))  # type: ignore[arg-type]


def full_square(n: int, m: int) -> DigitSet:
    return digit_set(n, m, [(i, j) for i in range(n) for j in range(m)])


def product_digit_set(n: int, m: int, columns: Iterable[int],
                      rows: Iterable[int]) -> DigitSet:
    return digit_set(n, m, [(i, j) for i in columns for j in rows])


def parse_digit_set(text: str) -> DigitSet:
    """Parse the canonical JSON description ``{"n":..,"m":..,"digits":[[i,j],..]}``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DigitSetError(f"malformed JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise DigitSetError("digit-set document must be a JSON object")
    missing = {"n", "m", "digits"} - set(obj)
    if missing:
        raise DigitSetError(f"missing keys: {sorted(missing)}")
    n, m, digits = obj["n"], obj["m"], obj["digits"]
    if not isinstance(n, int) or not isinstance(m, int):
        raise DigitSetError("n and m must be integers")
    if not isinstance(digits, list):
        raise DigitSetError("digits must be a list of [i, j] pairs")
    pairs = []
    for entry in digits:
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(isinstance(c, int) for c in entry)):
            raise DigitSetError(f"digit entry {entry!r} is not an [i, j] pair")
        pairs.append((entry[0], entry[1]))
    return digit_set(n, m, pairs)


def load_digit_set(path: str) -> DigitSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_digit_set(fh.read())


@dataclass(frozen=True)
class Classification:
    """Derived combinatorial facts about a digit set."""

    digit_count: int                 # N
    nonempty_row_count: int          # M
    row_counts: tuple[int, ...]      # M_j for j = 0..m-1
    empty_rows: tuple[int, ...]
    is_linear: bool
    linear_form: str | None          # "column" (A x all rows) or "row" (all columns x B)
    is_one_sided: bool
    one_sided_side: str | None       # "bottom" | "top" | "left" | "right"
    has_full_rows: bool              # M == m

    def to_json_obj(self) -> dict:
        return {
            "digit_count": self.digit_count,
            "nonempty_row_count": self.nonempty_row_count,
            "row_counts": list(self.row_counts),
            "empty_rows": list(self.empty_rows),
            "is_linear": self.is_linear,
            "linear_form": self.linear_form,
            "is_one_sided": self.is_one_sided,
            "one_sided_side": self.one_sided_side,
            "has_full_rows": self.has_full_rows,
        }


def classify(ds: DigitSet) -> Classification:
    """Compute row statistics, linearity and one-sidedness flags."""
    row_counts = [0] * ds.m
    for _, j in ds.digits:
        row_counts[j] += 1
    empty_rows = tuple(j for j, c in enumerate(row_counts) if c == 0)
    nonempty = ds.m - len(empty_rows)

    full_row = set(range(ds.m))
    full_col = set(range(ds.n))
    col_fibers = {i: set() for i in range(ds.n)}
    row_fibers = {j: set() for j in range(ds.m)}
    for i, j in ds.digits:
        col_fibers[i].add(j)
        row_fibers[j].add(i)
    used_cols = [i for i in range(ds.n) if col_fibers[i]]
    used_rows = [j for j in range(ds.m) if row_fibers[j]]
    # Column form: D = A x {0..m-1}; row form: D = {0..n-1} x B.
    column_linear = all(col_fibers[i] == full_row for i in used_cols)
    row_linear = all(row_fibers[j] == full_col for j in used_rows)

    linear_form = None
    if column_linear:
        linear_form = "column"
    elif row_linear:
        linear_form = "row"

    side = None
    if all(j == 0 for _, j in ds.digits):
        side = "bottom"
    elif all(j == ds.m - 1 for _, j in ds.digits):
        side = "top"
    elif all(i == 0 for i, _ in ds.digits):
        side = "left"
    elif all(i == ds.n - 1 for i, _ in ds.digits):
        side = "right"

    return Classification(
        digit_count=ds.size,
        nonempty_row_count=nonempty,
        row_counts=tuple(row_counts),
        empty_rows=empty_rows,
        is_linear=column_linear or row_linear,
        linear_form=linear_form,
        is_one_sided=side is not None,
        one_sided_side=side,
        has_full_rows=nonempty == ds.m,
    )


def box_dimension(ds: DigitSet) -> float:
    """(log N - log M)/log n + log M/log m; reduces to log N/log n for n = m."""
    cls = classify(ds)
    big_n = cls.digit_count
    big_m = cls.nonempty_row_count
    return ((math.log(big_n) - math.log(big_m)) / math.log(ds.n)
            + math.log(big_m) / math.log(ds.m))


def hausdorff_dimension(ds: DigitSet) -> float:
    """log_m of the sum over nonempty rows of M_j^(log m / log n)."""
    cls = classify(ds)
    theta = math.log(ds.m) / math.log(ds.n)
    total = sum(c ** theta for c in cls.row_counts if c > 0)
    return math.log(total) / math.log(ds.m)


@dataclass(frozen=True)
class PredictedExponent:
    """Growth exponent gamma with h(delta) ~ delta^(-gamma), plus the rule used."""

    gamma: float | None
    case_tag: str

    @property
    def defined(self) -> bool:
        return self.case_tag != CASE_UNDEFINED

    def to_json_obj(self) -> dict:
        return {"gamma": self.gamma, "case_tag": self.case_tag}


def predicted_exponent(cls: Classification, ds: DigitSet,
                       cardinality: str) -> PredictedExponent:
    """Exponent of the component-count growth for carpets with infinitely
    many components; undefined otherwise.

    ``cardinality`` is one of ``"finite"``, ``"infinite"``, ``"unknown"``
    (see connectivity.infer_component_cardinality).
    """
    if cardinality != INFINITE:
        return PredictedExponent(gamma=None, case_tag=CASE_UNDEFINED)
    if cls.is_linear:
        return PredictedExponent(gamma=box_dimension(ds) - 1.0,
                                 case_tag=CASE_LINEAR)
    if cls.has_full_rows:
        gamma = math.log(cls.digit_count) / math.log(ds.n)
        return PredictedExponent(gamma=gamma, case_tag=CASE_NONLINEAR_FULL_ROWS)
    return PredictedExponent(gamma=box_dimension(ds),
                             case_tag=CASE_NONLINEAR_PARTIAL_ROWS)
