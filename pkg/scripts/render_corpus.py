#!/usr/bin/env python3
"""Render every corpus digit set to SVG at a few levels.

Usage: python scripts/render_corpus.py [outdir]
"""

import sys
from pathlib import Path

from carpetgaps.corpus import CORPUS_NAMES, load_corpus
from carpetgaps.errors import CapExceededError
from carpetgaps.grid import render_svg


def main() -> int:
    outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "rendered")
    outdir.mkdir(parents=True, exist_ok=True)
    for name in CORPUS_NAMES:
        ds = load_corpus(name)
        for k in (1, 2, 3):
            try:
                svg = render_svg(ds, k)
            except CapExceededError:
                break
            target = outdir / f"{name}_k{k}.svg"
            target.write_text(svg, encoding="utf-8")
            print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
