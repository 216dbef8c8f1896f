"""Shipped digit-set corpus referenced by the CLI harness and the tests.

``e1_standin``/``e2_standin`` reconstruct the shapes of carpets that the
source material only shows pictorially: they match the published parameters
(n=7, m=3, N=6 with M=3 resp. M=2, nonlinear) but not necessarily the exact
translations.  ``theta_ring`` is a connected nonlinear carpet whose
component counts stay constant, standing in for the finite-component
examples.  ``d1``/``d2`` are the explicitly published pair with equal box
and Hausdorff dimensions but non-comparable gap sequences.
"""

from __future__ import annotations

from importlib import resources

from .carpet import DigitSet, parse_digit_set

CORPUS_NAMES = (
    "d1",
    "d2",
    "cantor_product",
    "e1_standin",
    "e2_standin",
    "e3_standin",
    "linear_pair",
    "strong_separation",
    "full_square",
    "theta_ring",
)


def corpus_text(name: str) -> str:
    if name not in CORPUS_NAMES:
        raise KeyError(f"unknown corpus digit set {name!r}")
    return (resources.files(__package__) / "corpus"
            / f"{name}.json").read_text(encoding="utf-8")


def load_corpus(name: str) -> DigitSet:
    return parse_digit_set(corpus_text(name))


def all_corpus() -> dict[str, DigitSet]:
    return {name: load_corpus(name) for name in CORPUS_NAMES}
