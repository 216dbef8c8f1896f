"""Exact gap sequences of finite approximations and rigorous h(delta) brackets.

All distances are Chebyshev (maximum metric): distances between grid
rectangles are then exact rationals, handled with ``fractions.Fraction``.
Internally distances are compared as scaled integers over the common
denominator ``n^k * m^k``; no floating point enters any exact path.

The h function of a compact set counts delta-equivalence classes: two points
are delta-equivalent when a chain of set points joins them with consecutive
distances <= delta (non-strict).  For a finite level-k approximation the gap
sequence (jump values of h with multiplicities) equals the descending,
grouped edge weights of a minimum spanning tree over its components under
the component set-distance.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .carpet import DigitSet, PredictedExponent
from .connectivity import CellComponent, cluster_class_count, extract_components
from .errors import CarpetGapsError, TooFewTightSamplesError
from .grid import DEFAULT_MAX_CELLS, require_cells

DEFAULT_MAX_COMPONENTS = 1000

SOURCE_FINITE_LEVEL = "finite_level"
SOURCE_STEP_FUNCTION = "step_function"
SOURCE_REFERENCE = "reference"


@dataclass(frozen=True)
class GapSequence:
    """Descending exact gap values with multiplicities.

    ``class_count`` is the number of delta-equivalence classes below the
    smallest listed threshold; for a finite level it equals the component
    count, and always equals 1 + sum of multiplicities.
    """

    entries: tuple[tuple[Fraction, int], ...]
    source: str
    level: int | None = None

    def __post_init__(self) -> None:
        prev = None
        for value, mult in self.entries:
            if value <= 0 or mult < 1:
                raise CarpetGapsError(
                    f"invalid gap entry ({value}, {mult})")
            if prev is not None and value >= prev:
                raise CarpetGapsError("gap values must be strictly descending")
            prev = value

    @property
    def class_count(self) -> int:
        return 1 + sum(mult for _, mult in self.entries)

    def flat_values(self) -> list[Fraction]:
        """The sequence g_1 >= g_2 >= ... with multiplicities expanded."""
        out = []
        for value, mult in self.entries:
            out.extend([value] * mult)
        return out

    def h_at(self, delta: Fraction) -> int:
        """Classes at threshold delta (non-strict merge at equality)."""
        return 1 + sum(mult for value, mult in self.entries if value > delta)

    def to_json_obj(self) -> dict:
        return {
            "source": self.source,
            "level": self.level,
            "class_count": self.class_count,
            "entries": [{"value": f"{v.numerator}/{v.denominator}",
                         "multiplicity": mult} for v, mult in self.entries],
        }


def _min_run_distance(runs_a: Sequence[tuple[int, int]],
                      runs_b: Sequence[tuple[int, int]]) -> int:
    """Minimal |x1 - x2| over cells of two sorted run lists (0 on overlap)."""
    i = 0
    j = 0
    la = len(runs_a)
    lb = len(runs_b)
    best = None
    while i < la and j < lb:
        alo, ahi = runs_a[i]
        blo, bhi = runs_b[j]
        if ahi < blo:
            d = blo - ahi
            if best is None or d < best:
                best = d
            i += 1
        elif bhi < alo:
            d = alo - bhi
            if best is None or d < best:
                best = d
            j += 1
        else:
            return 0
    return best


def _combine_chebyshev(hterm: int, vterm: int) -> int:
    return hterm if hterm > vterm else vterm


def _combine_euclidean_sq(hterm: int, vterm: int) -> int:
    return hterm * hterm + vterm * vterm


def _component_distance(a: CellComponent, b: CellComponent, n_pow: int,
                        m_pow: int, euclidean: bool = False) -> int:
    """Exact set distance between two components as a scaled integer.

    Chebyshev: max((dX-1)+ * m^k, (dY-1)+ * n^k), i.e. the true distance
    times n^k * m^k.  Euclidean: the squared distance times (n^k * m^k)^2.
    """
    combine = _combine_euclidean_sq if euclidean else _combine_chebyshev
    if a.uniform_runs is not None and b.uniform_runs is not None:
        arows = a.row_list
        brows = b.row_list
        if brows[0] > arows[-1]:
            dy = brows[0] - arows[-1]
        elif arows[0] > brows[-1]:
            dy = arows[0] - brows[-1]
        else:
            dy = 0
        vterm = (dy - 1) * n_pow if dy > 1 else 0
        dx = _min_run_distance(a.uniform_runs, b.uniform_runs)
        hterm = (dx - 1) * m_pow if dx > 1 else 0
        return combine(hterm, vterm)

    rows_b = b.row_list
    best = None
    for ya, runs_a in a.rows.items():
        pos = bisect_left(rows_b, ya)
        below = pos - 1
        above = pos
        while below >= 0 or above < len(rows_b):
            if below < 0:
                yb = rows_b[above]
                above += 1
            elif above >= len(rows_b):
                yb = rows_b[below]
                below -= 1
            elif ya - rows_b[below] <= rows_b[above] - ya:
                yb = rows_b[below]
                below -= 1
            else:
                yb = rows_b[above]
                above += 1
            dy = yb - ya if yb >= ya else ya - yb
            vterm = (dy - 1) * n_pow if dy > 1 else 0
            if best is not None and combine(0, vterm) >= best:
                break
            dx = _min_run_distance(runs_a, b.rows[yb])
            hterm = (dx - 1) * m_pow if dx > 1 else 0
            cand = combine(hterm, vterm)
            if best is None or cand < best:
                best = cand
    return best


def _mst_weights(comps: list[CellComponent], n_pow: int, m_pow: int,
                 euclidean: bool = False) -> list[int]:
    """Prim's algorithm over lazily evaluated exact pairwise distances."""
    c = len(comps)
    if c <= 1:
        return []
    in_tree = [False] * c
    in_tree[0] = True
    dist = [0] * c
    for j in range(1, c):
        dist[j] = _component_distance(comps[0], comps[j], n_pow, m_pow,
                                      euclidean)
    weights = []
    for _ in range(c - 1):
        best_j = -1
        best_d = None
        for j in range(1, c):
            if not in_tree[j] and (best_d is None or dist[j] < best_d):
                best_d = dist[j]
                best_j = j
        weights.append(best_d)
        in_tree[best_j] = True
        new_comp = comps[best_j]
        for j in range(1, c):
            if not in_tree[j]:
                d = _component_distance(new_comp, comps[j], n_pow, m_pow,
                                        euclidean)
                if d < dist[j]:
                    dist[j] = d
    return weights


def _group_descending(values: list[Fraction]) -> tuple[tuple[Fraction, int], ...]:
    entries: list[tuple[Fraction, int]] = []
    for v in sorted(values, reverse=True):
        if entries and entries[-1][0] == v:
            entries[-1] = (v, entries[-1][1] + 1)
        else:
            entries.append((v, 1))
    return tuple(entries)


def component_gap_sequence(ds: DigitSet, k: int,
                           max_components: int = DEFAULT_MAX_COMPONENTS,
                           max_cells: int = DEFAULT_MAX_CELLS) -> GapSequence:
    """Exact gap sequence of the level-k approximation.

    Builds the MST over components weighted by exact Chebyshev set distance;
    the gap sequence is the descending, grouped list of MST edge weights.
    """
    comps = extract_components(ds, k, max_components=max_components,
                               max_cells=max_cells)
    n_pow = ds.n ** k
    m_pow = ds.m ** k
    weights = _mst_weights(comps, n_pow, m_pow)
    denom = n_pow * m_pow
    values = [Fraction(w, denom) for w in weights]
    return GapSequence(entries=_group_descending(values),
                       source=SOURCE_FINITE_LEVEL, level=k)


def euclidean_gap_values(ds: DigitSet, k: int,
                         max_components: int = 100,
                         max_cells: int = DEFAULT_MAX_CELLS) -> list[float]:
    """Derived view: descending MST weights under the Euclidean set distance.

    Exact squared rationals order the MST; the returned weights are floats.
    The core computation stays Chebyshev (see module docstring).
    """
    comps = extract_components(ds, k, max_components=max_components,
                               max_cells=max_cells)
    n_pow = ds.n ** k
    m_pow = ds.m ** k
    weights = _mst_weights(comps, n_pow, m_pow, euclidean=True)
    denom = n_pow * m_pow
    return sorted((math.sqrt(w) / denom for w in weights), reverse=True)


def gap_from_h(steps: Sequence[tuple[Fraction, int]]) -> GapSequence:
    """Convert jump points of a step function h into a gap sequence.

    ``steps`` lists (delta_j, h(delta_j)) with delta strictly descending and
    h strictly increasing, first h equal to 1.  The value of h on
    [delta_{j+1}, delta_j) is h(delta_{j+1}), so the multiplicity of delta_j
    is h(delta_{j+1}) - h(delta_j); the final jump point only closes the
    previous one and yields no entry of its own.
    """
    if not steps:
        return GapSequence(entries=(), source=SOURCE_STEP_FUNCTION)
    if steps[0][1] != 1:
        raise CarpetGapsError("first step must have h = 1")
    for (d0, h0), (d1, h1) in zip(steps, steps[1:]):
        if d1 >= d0:
            raise CarpetGapsError("deltas must be strictly descending")
        if h1 <= h0:
            raise CarpetGapsError("h must be strictly increasing")
    entries = tuple((steps[i][0], steps[i + 1][1] - steps[i][1])
                    for i in range(len(steps) - 1))
    return GapSequence(entries=entries, source=SOURCE_STEP_FUNCTION)


def steps_from_gap_sequence(gs: GapSequence) -> list[tuple[Fraction, int]]:
    """Jump points of the induced step function, with a final closing point
    below the smallest gap so that gap_from_h round-trips exactly."""
    if not gs.entries:
        return [(Fraction(1), 1)]
    steps = []
    h = 1
    for value, mult in gs.entries:
        steps.append((value, h))
        h += mult
    steps.append((gs.entries[-1][0] / 2, h))
    return steps


def cantor_gap_reference(n: int, n0: int, j_max: int) -> GapSequence:
    """Exact gap sequence of the aligned one-dimensional reference set
    K(n, {0..n0-1}): values (n - n0) / ((n-1) n^j) with h jumping to n0^(j-1).
    """
    if not (2 <= n0 <= n - 1):
        raise CarpetGapsError(f"need 2 <= n0 <= n-1, got n0={n0}, n={n}")
    if j_max < 1:
        raise CarpetGapsError("j_max must be >= 1")
    entries = tuple(
        (Fraction(n - n0, (n - 1) * n ** j), n0 ** j - n0 ** (j - 1))
        for j in range(1, j_max + 1))
    return GapSequence(entries=entries, source=SOURCE_REFERENCE)


@dataclass(frozen=True)
class HBracket:
    """Rigorous two-sided bracket of h_E(delta) from the level-L grid.

    The liberal relation links cells whose rectangles are within Chebyshev
    distance delta, so h_low <= h_E(delta).  The conservative relation
    shrinks the threshold by twice the cell diameter (2 m^-L), forcing true
    delta-closeness of any contained points, so h_E(delta) <= h_high; when
    the shrunk threshold is nonpositive h_high degrades to the occupied-cell
    count.
    """

    delta: Fraction
    level: int
    h_low: int
    h_high: int

    @property
    def tight(self) -> bool:
        return self.h_high <= 2 * self.h_low

    def to_json_obj(self) -> dict:
        return {
            "delta": f"{self.delta.numerator}/{self.delta.denominator}",
            "level": self.level,
            "h_low": self.h_low,
            "h_high": self.h_high,
            "tight": self.tight,
        }


def _rational_floor_threshold(delta: Fraction, base_pow: int) -> int:
    """floor(delta * base_pow) + 1, exactly."""
    return (delta.numerator * base_pow) // delta.denominator + 1


def h_bracket(ds: DigitSet, level: int, delta: Fraction,
              max_cells: int = DEFAULT_MAX_CELLS) -> HBracket:
    """Bracket h_E(delta) between liberal and conservative cell clusterings."""
    if delta <= 0:
        raise CarpetGapsError("delta must be positive")
    delta = Fraction(delta)
    cells = require_cells(ds, level, max_cells)
    n_pow = ds.n ** level
    m_pow = ds.m ** level
    h_low = cluster_class_count(
        ds, level,
        link_dx=_rational_floor_threshold(delta, n_pow),
        link_dy=_rational_floor_threshold(delta, m_pow),
        max_cells=max_cells)
    shrunk = delta - Fraction(2, m_pow)
    if shrunk <= 0:
        h_high = cells
    else:
        h_high = cluster_class_count(
            ds, level,
            link_dx=_rational_floor_threshold(shrunk, n_pow),
            link_dy=_rational_floor_threshold(shrunk, m_pow),
            max_cells=max_cells)
    return HBracket(delta=delta, level=level, h_low=h_low, h_high=h_high)


@dataclass(frozen=True)
class ExponentReport:
    """Least-squares exponent fit over tight brackets, vs. the predicted one."""

    fitted_gamma: float
    stderr: float
    samples: tuple[HBracket, ...]
    predicted: PredictedExponent | None
    relative_error: float | None

    def to_json_obj(self) -> dict:
        return {
            "fitted_gamma": self.fitted_gamma,
            "stderr": self.stderr,
            "samples": [s.to_json_obj() for s in self.samples],
            "predicted": (self.predicted.to_json_obj()
                          if self.predicted is not None else None),
            "relative_error": self.relative_error,
        }


def fit_h_exponent(samples: Sequence[HBracket],
                   predicted: PredictedExponent | None = None
                   ) -> ExponentReport:
    """Slope of log h against log(1/delta) using the geometric mean of each
    bracket; brackets with h_high/h_low > 2 are excluded as vacuous."""
    tight = [s for s in samples if s.tight]
    if len(tight) < 3:
        raise TooFewTightSamplesError(
            f"need >= 3 tight brackets (ratio <= 2), got {len(tight)} "
            f"of {len(samples)}")
    xs = [-math.log(float(s.delta)) for s in tight]
    ys = [0.5 * (math.log(s.h_low) + math.log(s.h_high)) for s in tight]
    count = len(xs)
    x_bar = sum(xs) / count
    y_bar = sum(ys) / count
    sxx = sum((x - x_bar) ** 2 for x in xs)
    if sxx == 0.0:
        raise TooFewTightSamplesError("tight samples must span distinct deltas")
    sxy = sum((x - x_bar) * (y - y_bar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = y_bar - slope * x_bar
    sse = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    stderr = math.sqrt(sse / (count - 2) / sxx) if count > 2 else 0.0
    rel = None
    if predicted is not None and predicted.defined and predicted.gamma:
        rel = abs(slope - predicted.gamma) / predicted.gamma
    return ExponentReport(fitted_gamma=slope, stderr=stderr,
                          samples=tuple(samples), predicted=predicted,
                          relative_error=rel)


def bracket_ladder(ds: DigitSet, k_min: int, k_max: int,
                   level_offset: int = 2,
                   max_cells: int = DEFAULT_MAX_CELLS) -> list[HBracket]:
    """Brackets at delta = m^-k, level L = k + level_offset, k = k_min..k_max.

    Sampling delta in powers of the row base m keeps every bracket
    non-vacuous: the conservative shrink 2 m^-L is at most 2/m^2 of delta.
    """
    if k_min < 1 or k_max < k_min:
        raise CarpetGapsError("need 1 <= k_min <= k_max")
    return [h_bracket(ds, k + level_offset, Fraction(1, ds.m ** k),
                      max_cells=max_cells)
            for k in range(k_min, k_max + 1)]
