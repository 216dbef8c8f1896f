"""Level-k occupancy grids, streamed row by row as run-length encoded spans.

A level-k cell is an integer pair ``(X, Y)`` with ``X`` in ``[0, n^k)`` and
``Y`` in ``[0, m^k)``; it is occupied iff every base-n digit of ``X`` pairs
with the corresponding base-m digit of ``Y`` inside the digit set.  Rows are
generated by odometer iteration over the nonempty row digits, so the
``m^k - M^k`` empty rows are never touched, and occupied columns are emitted
as maximal ``(lo, hi)`` runs.

The 3x3 tiled domain ("tilde") is streamed with all coordinates offset by
``(n^k, m^k)`` so indices stay nonnegative; the offset is internal and
reported results are translated back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .carpet import DigitSet
from .errors import CapExceededError, DigitSetError

# Default guard on occupied-cell counts; keeps streaming labeling within
# minutes on a desktop.  Overridable everywhere via max_cells arguments.
DEFAULT_MAX_CELLS = 50_000_000

RENDER_MAX_CELLS = 1_000_000

Run = tuple[int, int]


@dataclass(frozen=True)
class Cell:
    """One elementary rectangle ``[X/n^k, (X+1)/n^k] x [Y/m^k, (Y+1)/m^k]``."""

    x: int
    y: int
    level: int


def cell_from_word(ds: DigitSet, word: Sequence[tuple[int, int]]) -> Cell:
    """Positional encoding of a digit word (most significant pair first)."""
    if len(word) < 1:
        raise DigitSetError("word must have length >= 1")
    x = 0
    y = 0
    for pair in word:
        pair = tuple(pair)
        if pair not in ds.digits:
            raise DigitSetError(f"pair {pair!r} not in digit set")
        x = x * ds.n + pair[0]
        y = y * ds.m + pair[1]
    return Cell(x=x, y=y, level=len(word))


def is_cell_occupied(ds: DigitSet, x: int, y: int, k: int) -> bool:
    """Digit test for a single plain-domain cell."""
    if not (0 <= x < ds.n ** k and 0 <= y < ds.m ** k):
        return False
    for _ in range(k):
        if (x % ds.n, y % ds.m) not in ds.digits:
            return False
        x //= ds.n
        y //= ds.m
    return True


def is_tilde_cell_occupied(ds: DigitSet, x: int, y: int, k: int) -> bool:
    """Occupancy in the 3x3 tiling, true coordinates in [-n^k, 2n^k) etc."""
    p, q = ds.n ** k, ds.m ** k
    if not (-p <= x < 2 * p and -q <= y < 2 * q):
        return False
    return is_cell_occupied(ds, x % p, y % q, k)


def cell_count(ds: DigitSet, k: int, tilde: bool = False) -> int:
    count = ds.size ** k
    return 9 * count if tilde else count


def require_cells(ds: DigitSet, k: int, max_cells: int,
                  tilde: bool = False) -> int:
    if k < 1:
        raise DigitSetError(f"level must be >= 1, got {k}")
    count = cell_count(ds, k, tilde=tilde)
    if count > max_cells:
        raise CapExceededError(
            f"level {k} needs {count} occupied cells, cap is {max_cells}",
            requested=count, cap=max_cells)
    return count


def _maximal_runs(sorted_vals: Sequence[int]) -> list[Run]:
    runs = []
    lo = hi = sorted_vals[0]
    for v in sorted_vals[1:]:
        if v == hi + 1:
            hi = v
        else:
            runs.append((lo, hi))
            lo = hi = v
    runs.append((lo, hi))
    return runs


class _RowInfo:
    """Per-row-digit column structure, precomputed once per stream."""

    __slots__ = ("cols", "runs", "is_full")

    def __init__(self, cols: list[int], n: int):
        self.cols = cols
        self.runs = _maximal_runs(cols)
        self.is_full = len(cols) == n


def _word_runs(word: Sequence[int], info: dict[int, _RowInfo], n: int,
               k: int, merge_gap: int) -> list[Run]:
    """Runs of the occupied X set for one row word, coalesced at gaps
    <= merge_gap empty cells.  merge_gap=0 yields plain maximal runs."""
    # Fold trailing full positions into a single scaled block per prefix.
    t = 0
    while t < k and info[word[k - 1 - t]].is_full:
        t += 1
    if t == k:
        return [(0, n ** k - 1)]
    scale = n ** t
    last = info[word[k - 1 - t]]
    base = [(alo * scale, ahi * scale + scale - 1) for alo, ahi in last.runs]
    b = k - 1 - t  # number of free prefix positions

    cols_list = [info[word[p]].cols for p in range(b)]
    places = [n ** (k - 1 - p) for p in range(b)]
    idxs = [0] * b
    v = sum(cols_list[p][0] * places[p] for p in range(b))

    out: list[Run] = []
    append = out.append
    link = merge_gap + 1
    cur_lo = -1
    cur_hi = -2 - merge_gap  # sentinel: first block never merges
    while True:
        for blo, bhi in base:
            lo = v + blo
            if lo - cur_hi <= link:
                cur_hi = v + bhi
            else:
                if cur_lo >= 0:
                    append((cur_lo, cur_hi))
                cur_lo = lo
                cur_hi = v + bhi
        p = b - 1
        while p >= 0:
            idx = idxs[p]
            col = cols_list[p]
            if idx + 1 < len(col):
                v += (col[idx + 1] - col[idx]) * places[p]
                idxs[p] = idx + 1
                break
            v -= (col[idx] - col[0]) * places[p]
            idxs[p] = 0
            p -= 1
        if p < 0:
            break
    if cur_lo >= 0:
        append((cur_lo, cur_hi))
    return out


def iter_rows(ds: DigitSet, k: int, merge_gap: int = 0
              ) -> Iterator[tuple[int, list[Run]]]:
    """Yield (Y, runs) for every nonempty row, Y ascending."""
    info = {j: _RowInfo(cols, ds.n) for j, cols in ds.row_columns().items()}
    row_digits = sorted(info)
    places = [ds.m ** (k - 1 - p) for p in range(k)]
    idxs = [0] * k
    word = [row_digits[0]] * k
    y = sum(row_digits[0] * places[p] for p in range(k))
    while True:
        yield y, _word_runs(word, info, ds.n, k, merge_gap)
        p = k - 1
        while p >= 0:
            idx = idxs[p]
            if idx + 1 < len(row_digits):
                y += (row_digits[idx + 1] - row_digits[idx]) * places[p]
                idxs[p] = idx + 1
                word[p] = row_digits[idx + 1]
                break
            y -= (row_digits[idx] - row_digits[0]) * places[p]
            idxs[p] = 0
            word[p] = row_digits[0]
            p -= 1
        if p < 0:
            return


def iter_tilde_rows(ds: DigitSet, k: int, merge_gap: int = 0
                    ) -> Iterator[tuple[int, list[Run]]]:
    """Rows of the 3x3 tiling in internal offset coordinates.

    Internal X spans [0, 3n^k) and Y spans [0, 3m^k); true coordinates are
    internal minus (n^k, m^k).
    """
    p_span = ds.n ** k
    q_span = ds.m ** k
    link = merge_gap + 1
    for jcopy in (0, 1, 2):
        y_off = jcopy * q_span
        for y, runs in iter_rows(ds, k, merge_gap):
            out: list[Run] = []
            append = out.append
            cur_lo = -1
            cur_hi = -2 - merge_gap
            for x_off in (0, p_span, 2 * p_span):
                for lo, hi in runs:
                    lo += x_off
                    if lo - cur_hi <= link:
                        cur_hi = hi + x_off
                    else:
                        if cur_lo >= 0:
                            append((cur_lo, cur_hi))
                        cur_lo = lo
                        cur_hi = hi + x_off
            if cur_lo >= 0:
                append((cur_lo, cur_hi))
            yield y_off + y, out


@dataclass
class RowStream:
    """Single-consumer stream of RLE rows over one domain."""

    level: int
    domain: str            # "plain" | "tilde"
    x_offset: int          # subtract to get true coordinates
    y_offset: int
    _rows: Iterator[tuple[int, list[Run]]]

    def __iter__(self) -> Iterator[tuple[int, list[Run]]]:
        return self._rows


def stream_rows(ds: DigitSet, k: int, tilde: bool = False,
                max_cells: int = DEFAULT_MAX_CELLS) -> RowStream:
    """Stream the level-k approximation (or its 3x3 tiling) row by row."""
    require_cells(ds, k, max_cells, tilde=tilde)
    if tilde:
        return RowStream(level=k, domain="tilde", x_offset=ds.n ** k,
                         y_offset=ds.m ** k, _rows=iter_tilde_rows(ds, k))
    return RowStream(level=k, domain="plain", x_offset=0, y_offset=0,
                     _rows=iter_rows(ds, k))


def occupied_cell_total(ds: DigitSet, k: int) -> int:
    """Sum of run lengths over all rows; equals N^k (used as a self-check)."""
    total = 0
    for _, runs in iter_rows(ds, k):
        for lo, hi in runs:
            total += hi - lo + 1
    return total


def render_svg(ds: DigitSet, k: int, max_cells: int = RENDER_MAX_CELLS) -> str:
    """Deterministic SVG of the level-k approximation, one rect per cell.

    Cell coordinates are written as exact integers in a viewBox of
    ``n^k x m^k`` units; the viewport is square because the carpet lives in
    the unit square.
    """
    require_cells(ds, k, max_cells)
    p_span = ds.n ** k
    q_span = ds.m ** k
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="512" height="512" '
        f'viewBox="0 0 {p_span} {q_span}" preserveAspectRatio="none">\n',
        f'<!-- digit set n={ds.n} m={ds.m} level={k} -->\n',
    ]
    append = parts.append
    for y, runs in iter_rows(ds, k):
        svg_y = q_span - 1 - y  # carpet y grows upward, SVG y grows downward
        for lo, hi in runs:
            for x in range(lo, hi + 1):
                append(f'<rect x="{x}" y="{svg_y}" width="1" height="1"/>\n')
    append("</svg>\n")
    return "".join(parts)


def cells_csv(ds: DigitSet, k: int, max_cells: int = DEFAULT_MAX_CELLS) -> str:
    """Cell dump as ``X,Y`` lines with the level in a header comment."""
    require_cells(ds, k, max_cells)
    lines = [f"# level={k} n={ds.n} m={ds.m}", "X,Y"]
    for y, runs in iter_rows(ds, k):
        for lo, hi in runs:
            for x in range(lo, hi + 1):
                lines.append(f"{x},{y}")
    return "\n".join(lines) + "\n"
