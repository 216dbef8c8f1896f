"""Connected components of level-k grids via streaming run-based union-find.

Connectivity is 8-connectivity on cells: the closed elementary rectangles of
two cells intersect iff ``|dX| <= 1`` and ``|dY| <= 1`` (corner touching
connects closed sets).  The same engine, run with wider per-axis link
thresholds, computes the thresholded clusterings behind the h-function
brackets in the gaps module.

Labeling streams rows in ascending Y and keeps only a window of recent rows,
so memory stays proportional to one row plus the union-find arrays rather
than the full cell count.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Iterable

from .carpet import (
    FINITE,
    INFINITE,
    UNKNOWN,
    Classification,
    DigitSet,
    classify,
)
from .errors import CapExceededError
from .grid import (
    DEFAULT_MAX_CELLS,
    Run,
    is_cell_occupied,
    is_tilde_cell_occupied,
    iter_rows,
    iter_tilde_rows,
    require_cells,
)

DEFAULT_CSC_KMAX = 6

FLAG_LEFT = 1
FLAG_RIGHT = 2
FLAG_BOTTOM = 4
FLAG_TOP = 8

_FLAG_LETTERS = ((FLAG_LEFT, "L"), (FLAG_RIGHT, "R"),
                 (FLAG_BOTTOM, "B"), (FLAG_TOP, "T"))

ORIENT_VERTICAL = "vertical"
ORIENT_HORIZONTAL = "horizontal"
ORIENT_NEITHER = "neither"
ORIENT_MIXED = "mixed"


def mask_to_string(mask: int) -> str:
    return "".join(letter for bit, letter in _FLAG_LETTERS if mask & bit)


class StreamLabeler:
    """Union-find over RLE runs fed in ascending-Y order.

    Two cells are linked iff ``|dX| <= link_dx`` and ``|dY| <= link_dy``.
    Rows must arrive coalesced so that within-row gaps exceed ``link_dx``
    (grid.iter_rows with merge_gap = link_dx - 1 guarantees this); the
    interval sweep below relies on it.
    """

    def __init__(self, link_dx: int = 1, link_dy: int = 1,
                 flag_fn: Callable[[int, int, int], int] | None = None,
                 track_csc: tuple[int, int, int, int] | None = None,
                 collect_runs: bool = False):
        self.link_dx = link_dx
        self.link_dy = link_dy
        self.parent: list[int] = []
        self.size: list[int] = []
        self.merges = 0
        self.window: deque[tuple[int, list[tuple[int, int, int]]]] = deque()
        self.flag_fn = flag_fn
        self.flags: list[int] | None = [] if flag_fn else None
        # track_csc = (x_lo, x_hi, y_lo, y_hi): the central copy, inclusive.
        self.csc_box = track_csc
        self.noncentral: list[bool] | None = [] if track_csc else None
        self.anchor: list[tuple[int, int]] | None = [] if track_csc else None
        self.cells: list[int] | None = [] if track_csc else None
        self.runs_of: list[list[tuple[int, int, int]]] | None = (
            [] if collect_runs else None)

    def _find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def _union(self, a: int, b: int) -> None:
        ra = self._find(a)
        rb = self._find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.merges += 1
        if self.flags is not None:
            self.flags[ra] |= self.flags[rb]
        if self.noncentral is not None:
            self.noncentral[ra] = self.noncentral[ra] or self.noncentral[rb]
            if self.anchor[rb] < self.anchor[ra]:
                self.anchor[ra] = self.anchor[rb]
            self.cells[ra] += self.cells[rb]

    def add_row(self, y: int, runs: list[Run]) -> None:
        window = self.window
        min_keep = y - self.link_dy
        while window and window[0][0] < min_keep:
            window.popleft()

        parent = self.parent
        size = self.size
        label = len(parent)
        spans: list[tuple[int, int, int]] = []
        for lo, hi in runs:
            parent.append(label)
            size.append(1)
            spans.append((lo, hi, label))
            label += 1

        if self.flag_fn is not None:
            flag_fn = self.flag_fn
            self.flags.extend(flag_fn(y, lo, hi) for lo, hi, _ in spans)
        if self.csc_box is not None:
            x_lo, x_hi, y_lo, y_hi = self.csc_box
            row_central = y_lo <= y <= y_hi
            for lo, hi, _ in spans:
                self.noncentral.append(
                    not (row_central and lo >= x_lo and hi <= x_hi))
                self.anchor.append((y, lo))
                self.cells.append(hi - lo + 1)
        if self.runs_of is not None:
            self.runs_of.extend([(y, lo, hi)] for lo, hi, _ in spans)

        dx = self.link_dx
        union = self._union
        for _, wspans in window:
            i = 0
            j = 0
            la = len(wspans)
            lb = len(spans)
            while i < la and j < lb:
                alo, ahi, alab = wspans[i]
                blo, bhi, blab = spans[j]
                if blo > ahi + dx:
                    i += 1
                elif alo > bhi + dx:
                    j += 1
                else:
                    union(alab, blab)
                    if ahi <= bhi:
                        i += 1
                    else:
                        j += 1
        window.append((y, spans))

    def feed(self, rows: Iterable[tuple[int, list[Run]]]) -> "StreamLabeler":
        add = self.add_row
        for y, runs in rows:
            add(y, runs)
        return self

    @property
    def class_count(self) -> int:
        return len(self.parent) - self.merges

    def roots(self) -> list[int]:
        find = self._find
        seen = set()
        out = []
        for lab in range(len(self.parent)):
            r = find(lab)
            if r not in seen:
                seen.add(r)
                out.append(r)
        return out


def cluster_class_count(ds: DigitSet, k: int, link_dx: int, link_dy: int,
                        max_cells: int = DEFAULT_MAX_CELLS) -> int:
    """Number of classes of occupied level-k cells under the transitive
    closure of |dX| <= link_dx AND |dY| <= link_dy."""
    require_cells(ds, k, max_cells)
    if link_dx >= ds.n ** k - 1 and link_dy >= ds.m ** k - 1:
        return 1  # every pair of cells is directly related
    labeler = StreamLabeler(link_dx=link_dx, link_dy=link_dy)
    labeler.feed(iter_rows(ds, k, merge_gap=link_dx - 1))
    return labeler.class_count


@dataclass(frozen=True)
class ComponentSummary:
    """Component count plus boundary/orientation diagnostics for one level."""

    level: int
    domain: str                       # "plain" | "tilde"
    component_count: int
    # Multiset of per-component boundary masks, e.g. {"LRB": 2, "": 5}.
    # Letters: L/R/B/T = touches left/right/bottom/top of the unit square.
    boundary_mask_counts: dict[str, int]
    orientation: str

    def to_json_obj(self) -> dict:
        return {
            "level": self.level,
            "domain": self.domain,
            "component_count": self.component_count,
            "boundary_mask_counts": dict(sorted(
                self.boundary_mask_counts.items())),
            "orientation": self.orientation,
        }


def _orientation(masks: Iterable[int]) -> str:
    saw_vertical = False
    saw_horizontal = False
    all_vertical = True
    all_horizontal = True
    both = FLAG_TOP | FLAG_BOTTOM
    sides = FLAG_LEFT | FLAG_RIGHT
    for mask in masks:
        vertical = (mask & both) == both
        horizontal = (mask & sides) == sides
        saw_vertical = saw_vertical or vertical
        saw_horizontal = saw_horizontal or horizontal
        all_vertical = all_vertical and vertical
        all_horizontal = all_horizontal and horizontal
    if all_vertical:
        return ORIENT_VERTICAL
    if all_horizontal:
        return ORIENT_HORIZONTAL
    if not saw_vertical and not saw_horizontal:
        return ORIENT_NEITHER
    return ORIENT_MIXED


def _plain_flag_fn(ds: DigitSet, k: int) -> Callable[[int, int, int], int]:
    x_max = ds.n ** k - 1
    y_max = ds.m ** k - 1

    def flag(y: int, lo: int, hi: int) -> int:
        mask = 0
        if lo == 0:
            mask |= FLAG_LEFT
        if hi == x_max:
            mask |= FLAG_RIGHT
        if y == 0:
            mask |= FLAG_BOTTOM
        if y == y_max:
            mask |= FLAG_TOP
        return mask

    return flag


def _tilde_flag_fn(ds: DigitSet, k: int) -> Callable[[int, int, int], int]:
    # Internal offset coordinates; flags test contact with the boundary
    # lines of the central unit square.
    p = ds.n ** k
    q = ds.m ** k

    def flag(y: int, lo: int, hi: int) -> int:
        mask = 0
        if lo <= p and hi >= p - 1:
            mask |= FLAG_LEFT
        if lo <= 2 * p and hi >= 2 * p - 1:
            mask |= FLAG_RIGHT
        if y in (q - 1, q):
            mask |= FLAG_BOTTOM
        if y in (2 * q - 1, 2 * q):
            mask |= FLAG_TOP
        return mask

    return flag


def count_components(ds: DigitSet, k: int, tilde: bool = False,
                     max_cells: int = DEFAULT_MAX_CELLS) -> ComponentSummary:
    """8-connected components of the level-k grid (or its 3x3 tiling)."""
    require_cells(ds, k, max_cells, tilde=tilde)
    if tilde:
        flag_fn = _tilde_flag_fn(ds, k)
        rows = iter_tilde_rows(ds, k)
    else:
        flag_fn = _plain_flag_fn(ds, k)
        rows = iter_rows(ds, k)
    labeler = StreamLabeler(link_dx=1, link_dy=1, flag_fn=flag_fn)
    labeler.feed(rows)
    root_masks = [labeler.flags[r] for r in labeler.roots()]
    counts = Counter(mask_to_string(mask) for mask in root_masks)
    return ComponentSummary(
        level=k,
        domain="tilde" if tilde else "plain",
        component_count=labeler.class_count,
        boundary_mask_counts=dict(counts),
        orientation=_orientation(root_masks),
    )


def component_count(ds: DigitSet, k: int,
                    max_cells: int = DEFAULT_MAX_CELLS) -> int:
    """Plain component count without diagnostics (cheapest path)."""
    require_cells(ds, k, max_cells)
    labeler = StreamLabeler(link_dx=1, link_dy=1)
    labeler.feed(iter_rows(ds, k))
    return labeler.class_count


@dataclass(frozen=True)
class CellComponent:
    """One component of a level-k grid, stored as runs per row."""

    level: int
    rows: dict[int, tuple[Run, ...]]
    cell_count: int
    min_cell: tuple[int, int]        # (Y, X) of the scan-order first cell
    # Runs shared by every row when the component is a vertical product
    # (same runs in each row of a contiguous row range), else None.
    uniform_runs: tuple[Run, ...] | None

    @property
    def row_list(self) -> list[int]:
        return sorted(self.rows)

    def bbox(self) -> tuple[int, int, int, int]:
        ys = self.row_list
        lo = min(r[0][0] for r in self.rows.values())
        hi = max(r[-1][1] for r in self.rows.values())
        return lo, hi, ys[0], ys[-1]


def extract_components(ds: DigitSet, k: int, max_components: int,
                       max_cells: int = DEFAULT_MAX_CELLS
                       ) -> list[CellComponent]:
    """Materialize all components, ordered by their minimal (Y, X) cell.

    Errors out above max_components; distances between many components are
    quadratic, so the cap is explicit.
    """
    require_cells(ds, k, max_cells)
    labeler = StreamLabeler(link_dx=1, link_dy=1, collect_runs=True)
    labeler.feed(iter_rows(ds, k))
    count = labeler.class_count
    if count > max_components:
        raise CapExceededError(
            f"{count} components exceed the cap of {max_components}",
            requested=count, cap=max_components)
    grouped: dict[int, list[tuple[int, int, int]]] = {}
    for lab in range(len(labeler.parent)):
        grouped.setdefault(labeler._find(lab), []).extend(labeler.runs_of[lab])
    comps = []
    for triples in grouped.values():
        rows: dict[int, list[Run]] = {}
        cells = 0
        for y, lo, hi in triples:
            rows.setdefault(y, []).append((lo, hi))
            cells += hi - lo + 1
        packed = {y: tuple(sorted(rr)) for y, rr in rows.items()}
        ys = sorted(packed)
        min_cell = (ys[0], packed[ys[0]][0][0])
        uniform = None
        if ys[-1] - ys[0] + 1 == len(ys):
            first = packed[ys[0]]
            if all(packed[y] == first for y in ys[1:]):
                uniform = first
        comps.append(CellComponent(level=k, rows=packed, cell_count=cells,
                                   min_cell=min_cell, uniform_runs=uniform))
    comps.sort(key=lambda c: c.min_cell)
    return comps


@dataclass(frozen=True)
class CscCertificate:
    """A component of the level-k0 grid that is isolated in the 3x3 tiling."""

    level: int
    anchor: tuple[int, int]          # (X, Y) of the scan-order first cell
    cell_count: int
    rows: dict[int, tuple[Run, ...]]

    def to_json_obj(self) -> dict:
        return {
            "level": self.level,
            "anchor": list(self.anchor),
            "cell_count": self.cell_count,
            "rows": {str(y): [list(r) for r in runs]
                     for y, runs in sorted(self.rows.items())},
        }


def find_csc_certificate(ds: DigitSet, k_max: int = DEFAULT_CSC_KMAX,
                         max_cells: int = DEFAULT_MAX_CELLS
                         ) -> CscCertificate | None:
    """Search levels 1..k_max for a component of the plain grid that is also
    a component of the tiled grid.

    Returns the first hit (smallest level, then smallest (Y, X) anchor).
    Absence is not a disproof.  A cap violation mid-search raises
    CapExceededError with levels_completed set to the deepest finished level.
    """
    for k in range(1, k_max + 1):
        try:
            require_cells(ds, k, max_cells, tilde=True)
        except CapExceededError as exc:
            exc.levels_completed = k - 1  # type: ignore[attr-defined]
            raise
        p = ds.n ** k
        q = ds.m ** k
        labeler = StreamLabeler(
            link_dx=1, link_dy=1,
            track_csc=(p, 2 * p - 1, q, 2 * q - 1))
        labeler.feed(iter_tilde_rows(ds, k))
        isolated = [r for r in labeler.roots() if not labeler.noncentral[r]]
        if not isolated:
            continue
        best = min(isolated, key=lambda r: labeler.anchor[r])
        ay, ax = labeler.anchor[best]
        anchor = (ax - p, ay - q)  # back to true plain coordinates
        return _extract_certificate(ds, k, anchor, labeler.cells[best],
                                    max_cells)
    return None


def _extract_certificate(ds: DigitSet, k: int, anchor: tuple[int, int],
                         cell_count: int, max_cells: int) -> CscCertificate:
    comps = _components_unbounded(ds, k, max_cells)
    for comp in comps:
        if (comp.min_cell[1], comp.min_cell[0]) == anchor:
            if comp.cell_count != cell_count:
                raise AssertionError(
                    "certificate cell count mismatch between tiled and plain "
                    f"passes at level {k}")
            return CscCertificate(level=k, anchor=anchor,
                                  cell_count=comp.cell_count, rows=comp.rows)
    raise AssertionError(f"anchor {anchor} not found in plain components")


def _components_unbounded(ds: DigitSet, k: int,
                          max_cells: int) -> list[CellComponent]:
    return extract_components(ds, k, max_components=ds.size ** k,
                              max_cells=max_cells)


def _subtract_runs(a_runs: Iterable[Run], b_runs: Iterable[Run]) -> list[Run]:
    """Interval difference a \\ b for sorted disjoint run lists."""
    out = []
    b_iter = iter(b_runs)
    b = next(b_iter, None)
    for lo, hi in a_runs:
        cur = lo
        while b is not None and b[1] < cur:
            b = next(b_iter, None)
        while b is not None and b[0] <= hi:
            if b[0] > cur:
                out.append((cur, b[0] - 1))
            cur = max(cur, b[1] + 1)
            if cur > hi:
                break
            b = next(b_iter, None)
        if cur <= hi:
            out.append((cur, hi))
    return out


def _merge_runs(runs: list[Run]) -> list[Run]:
    if not runs:
        return []
    runs = sorted(runs)
    out = [runs[0]]
    for lo, hi in runs[1:]:
        plo, phi = out[-1]
        if lo <= phi + 1:
            out[-1] = (plo, max(phi, hi))
        else:
            out.append((lo, hi))
    return out


def verify_certificate(ds: DigitSet, cert: CscCertificate) -> bool:
    """Independent recheck: the witness is one 8-connected component of the
    plain grid and its one-cell Chebyshev dilation hits nothing else in the
    tiled grid."""
    k = cert.level
    # Every claimed cell must be occupied.
    for y, runs in cert.rows.items():
        for lo, hi in runs:
            for x in range(lo, hi + 1):
                if not is_cell_occupied(ds, x, y, k):
                    return False
    # The witness must be internally 8-connected.
    labeler = StreamLabeler(link_dx=1, link_dy=1)
    for y in sorted(cert.rows):
        labeler.add_row(y, list(cert.rows[y]))
    if labeler.class_count != 1:
        return False
    # Dilation check against the tiled occupancy.
    witness_rows = {y: list(runs) for y, runs in cert.rows.items()}
    check_rows: dict[int, list[Run]] = {}
    for y, runs in witness_rows.items():
        expanded = _merge_runs([(lo - 1, hi + 1) for lo, hi in runs])
        for yy in (y - 1, y, y + 1):
            check_rows.setdefault(yy, []).extend(expanded)
    for yy, runs in check_rows.items():
        candidates = _subtract_runs(_merge_runs(runs),
                                    witness_rows.get(yy, []))
        for lo, hi in candidates:
            for x in range(lo, hi + 1):
                if is_tilde_cell_occupied(ds, x, yy, k):
                    return False
    return True


@dataclass(frozen=True)
class CardinalityVerdict:
    """Finite/infinite/unknown verdict with the evidence that produced it."""

    verdict: str                     # "finite" | "infinite" | "unknown"
    count: int | None
    evidence: str                    # "full_square" | "linear_rule" |
    #                                  "csc_certificate" | "growth_observation"
    certificate: CscCertificate | None = None
    observed_counts: tuple[int, ...] | None = None

    def to_json_obj(self) -> dict:
        obj = {"verdict": self.verdict, "count": self.count,
               "evidence": self.evidence}
        if self.certificate is not None:
            obj["certificate"] = self.certificate.to_json_obj()
        if self.observed_counts is not None:
            obj["observed_counts"] = list(self.observed_counts)
        return obj


def infer_component_cardinality(ds: DigitSet,
                                cls: Classification | None = None,
                                k_max: int = DEFAULT_CSC_KMAX,
                                max_cells: int = DEFAULT_MAX_CELLS
                                ) -> CardinalityVerdict:
    """Decision ladder: full square, linear rule, CSC certificate, else
    Unknown with the observed component-count sequence."""
    if cls is None:
        cls = classify(ds)
    if cls.digit_count == ds.n * ds.m:
        return CardinalityVerdict(verdict=FINITE, count=1,
                                  evidence="full_square")
    if cls.is_linear:
        if cls.linear_form == "column":
            fiber_count = cls.digit_count // ds.m
            base = ds.n
        else:
            fiber_count = cls.digit_count // ds.n
            base = ds.m
        if fiber_count in (1, base):
            return CardinalityVerdict(verdict=FINITE, count=1,
                                      evidence="linear_rule")
        return CardinalityVerdict(verdict=INFINITE, count=None,
                                  evidence="linear_rule")
    try:
        cert = find_csc_certificate(ds, k_max=k_max, max_cells=max_cells)
    except CapExceededError:
        cert = None
    if cert is not None:
        return CardinalityVerdict(verdict=INFINITE, count=None,
                                  evidence="csc_certificate",
                                  certificate=cert)
    counts = []
    for k in range(1, k_max + 1):
        try:
            counts.append(component_count(ds, k, max_cells=max_cells))
        except CapExceededError:
            break
    return CardinalityVerdict(verdict=UNKNOWN, count=None,
                              evidence="growth_observation",
                              observed_counts=tuple(counts))
