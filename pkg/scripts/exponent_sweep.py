#!/usr/bin/env python3
"""Exponent experiment: bracket ladders and fits for the nonlinear corpus.

Prints one block per carpet: the raw h-bracket samples, the fitted growth
exponent, and the predicted one from the classification.

Usage: python scripts/exponent_sweep.py [k_min k_max]
"""

import sys

from carpetgaps.carpet import classify, predicted_exponent
from carpetgaps.connectivity import infer_component_cardinality
from carpetgaps.corpus import load_corpus
from carpetgaps.errors import TooFewTightSamplesError
from carpetgaps.gaps import bracket_ladder, fit_h_exponent

CARPETS = ("d1", "d2", "strong_separation", "e1_standin", "e2_standin",
           "e3_standin")


def main() -> int:
    k_min = int(sys.argv[1]) if len(sys.argv) > 2 else 1
    k_max = int(sys.argv[2]) if len(sys.argv) > 2 else 5
    for name in CARPETS:
        ds = load_corpus(name)
        cls = classify(ds)
        card = infer_component_cardinality(ds, cls)
        pred = predicted_exponent(cls, ds, card.verdict)
        print(f"== {name}: n={ds.n} m={ds.m} N={cls.digit_count} "
              f"M={cls.nonempty_row_count} branch={pred.case_tag}")
        samples = bracket_ladder(ds, k_min, k_max)
        for s in samples:
            print(f"   delta={s.delta}  L={s.level}  "
                  f"h in [{s.h_low}, {s.h_high}]"
                  f"{'' if s.tight else '  (loose, excluded)'}")
        try:
            report = fit_h_exponent(samples, pred)
        except TooFewTightSamplesError as exc:
            print(f"   fit skipped: {exc}")
            continue
        line = (f"   fitted gamma = {report.fitted_gamma:.6f} "
                f"+- {report.stderr:.6f}")
        if report.relative_error is not None:
            line += (f"  predicted {pred.gamma:.6f}  "
                     f"rel err {report.relative_error:.2%}")
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
