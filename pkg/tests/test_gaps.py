import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from carpetgaps.carpet import classify, digit_set, full_square, predicted_exponent
from carpetgaps.errors import CarpetGapsError, TooFewTightSamplesError
from carpetgaps.gaps import (
    HBracket,
    bracket_ladder,
    cantor_gap_reference,
    component_gap_sequence,
    euclidean_gap_values,
    fit_h_exponent,
    gap_from_h,
    h_bracket,
    steps_from_gap_sequence,
)
from conftest import digit_sets
from oracles import (
    brute_gap_sequence,
    oracle_h_bracket,
    single_linkage_class_count,
)

SPARSE = digit_set(7, 3, [(0, 0), (3, 1)])


def test_cantor_product_level3(corpus):
    gs = component_gap_sequence(corpus["cantor_product"], 3)
    assert gs.entries == ((Fraction(4, 27), 1), (Fraction(1, 27), 2))
    assert gs.class_count == 4
    assert gs.entries == tuple(brute_gap_sequence(corpus["cantor_product"], 3))


def test_connected_grid_has_empty_sequence():
    gs = component_gap_sequence(full_square(3, 2), 2)
    assert gs.entries == ()
    assert gs.class_count == 1


def test_sparse_level1_single_gap():
    gs = component_gap_sequence(SPARSE, 1)
    assert gs.entries == ((Fraction(2, 7), 1),)


@given(digit_sets(max_n=4, max_m=3, max_size=6))
@settings(max_examples=25, deadline=None)
def test_gap_sequence_matches_brute_force(ds):
    for k in (1, 2):
        gs = component_gap_sequence(ds, k, max_components=100)
        assert list(gs.entries) == brute_gap_sequence(ds, k)


def test_h_bracket_whole_set_one_class(corpus):
    bracket = h_bracket(corpus["cantor_product"], 5, Fraction(1, 2))
    assert (bracket.h_low, bracket.h_high) == (1, 1)
    bracket = h_bracket(SPARSE, 2, Fraction(2))
    assert (bracket.h_low, bracket.h_high) == (1, 1)


def test_h_bracket_sparse_matches_oracle():
    bracket = h_bracket(SPARSE, 3, Fraction(1, 7))
    low, high = oracle_h_bracket(SPARSE, 3, Fraction(1, 7))
    assert (bracket.h_low, bracket.h_high) == (low, high)
    assert bracket.h_low == bracket.h_high == 2


@given(digit_sets(max_n=4, max_m=3, max_size=6))
@settings(max_examples=20, deadline=None)
def test_h_bracket_matches_oracle(ds):
    for delta in (Fraction(1, 3), Fraction(1, ds.n ** 2), Fraction(2, 5)):
        bracket = h_bracket(ds, 2, delta)
        assert (bracket.h_low, bracket.h_high) == oracle_h_bracket(ds, 2,
                                                                   delta)


def test_h_bracket_vacuous_conservative_side():
    # delta at or below twice the cell height: h_high degrades to the
    # occupied-cell count.
    bracket = h_bracket(SPARSE, 2, Fraction(1, 49))
    assert bracket.h_high == 4
    assert bracket.h_low <= bracket.h_high


@given(digit_sets(max_n=4, max_m=3, max_size=6))
@settings(max_examples=20, deadline=None)
def test_bracket_sound_and_monotone(ds):
    deltas = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 9),
              Fraction(1, 30)]
    brackets = [h_bracket(ds, 3, d) for d in deltas]
    for b in brackets:
        assert 1 <= b.h_low <= b.h_high
    for a, b in zip(brackets, brackets[1:]):
        assert a.h_low <= b.h_low
        assert a.h_high <= b.h_high


def test_bracket_refines_with_level(corpus):
    # Raising L with delta fixed never loosens the bracket on the corpus,
    # starting from the first level whose conservative side is non-vacuous
    # (2 m^-L < delta; below that h_high is just the growing cell count).
    delta = Fraction(1, 9)
    for name in ("cantor_product", "strong_separation", "e2_standin"):
        ds = corpus[name]
        start = 1
        while Fraction(2, ds.m ** start) >= delta:
            start += 1
        widths = []
        for level in range(start, start + 3):
            b = h_bracket(ds, level, delta)
            widths.append((b.h_low, b.h_high))
        for (lo_a, hi_a), (lo_b, hi_b) in zip(widths, widths[1:]):
            assert lo_b >= lo_a
            assert hi_b <= hi_a


def test_gap_from_h_cantor_steps():
    steps = [(Fraction(1, 2 * 3 ** j), 2 ** (j - 1)) for j in range(1, 5)]
    gs = gap_from_h(steps)
    assert gs.entries == ((Fraction(1, 6), 1), (Fraction(1, 18), 2),
                          (Fraction(1, 54), 4))


def test_gap_from_h_single_jump():
    gs = gap_from_h([(Fraction(1, 5), 1), (Fraction(1, 50), 3)])
    assert gs.entries == ((Fraction(1, 5), 2),)


def test_gap_from_h_rejects_non_monotone():
    with pytest.raises(CarpetGapsError):
        gap_from_h([(Fraction(1, 5), 1), (Fraction(1, 4), 2)])
    with pytest.raises(CarpetGapsError):
        gap_from_h([(Fraction(1, 5), 1), (Fraction(1, 6), 1)])
    with pytest.raises(CarpetGapsError):
        gap_from_h([(Fraction(1, 5), 2), (Fraction(1, 6), 3)])


def test_round_trip_on_corpus(corpus):
    for name in ("cantor_product", "d1", "strong_separation", "e2_standin"):
        gs = component_gap_sequence(corpus[name], 2, max_components=500)
        assert gap_from_h(steps_from_gap_sequence(gs)).entries == gs.entries


def test_cantor_reference_values():
    gs = cantor_gap_reference(3, 2, 2)
    assert gs.entries == ((Fraction(1, 6), 1), (Fraction(1, 18), 2))
    gs = cantor_gap_reference(5, 2, 1)
    assert gs.entries == ((Fraction(3, 20), 1),)
    n = 6
    gs = cantor_gap_reference(n, n - 1, 1)
    assert gs.entries == ((Fraction(1, n * (n - 1)), n - 2),)


def test_cantor_reference_rejects_bad_params():
    with pytest.raises(CarpetGapsError):
        cantor_gap_reference(3, 1, 2)
    with pytest.raises(CarpetGapsError):
        cantor_gap_reference(3, 3, 2)
    with pytest.raises(CarpetGapsError):
        cantor_gap_reference(3, 2, 0)


def test_level_gaps_converge_to_reference(corpus):
    # Level-k gap j equals (3^-j - 3^-k)/2; the limit value is 3^-j / 2.
    ds = corpus["cantor_product"]
    for k in (4, 6, 8):
        gs = component_gap_sequence(ds, k)
        ref = cantor_gap_reference(3, 2, k - 1)
        for j, ((value, mult), (ref_value, ref_mult)) in enumerate(
                zip(gs.entries, ref.entries), start=1):
            assert value == (Fraction(1, 3 ** j) - Fraction(1, 3 ** k)) / 2
            assert mult == ref_mult == 2 ** (j - 1)
            assert 0 <= ref_value - value <= Fraction(1, 2 * 3 ** k)


def test_step_duality_at_random_thresholds(corpus):
    rng = random.Random(7321)
    for name in ("cantor_product", "d1", "strong_separation"):
        ds = corpus[name]
        k = 2
        gs = component_gap_sequence(ds, k, max_components=500)
        if not gs.entries:
            continue
        lo = gs.entries[-1][0] / 2
        hi = gs.entries[0][0] * 2
        for _ in range(20):
            delta = lo + (hi - lo) * Fraction(rng.randint(0, 1000), 1000)
            assert gs.h_at(delta) == single_linkage_class_count(ds, k, delta)


def test_h_at_respects_gap_identity(corpus):
    # h(alpha_j) <= j < h(alpha_j^-) for the expanded gap value list.
    gs = component_gap_sequence(corpus["d1"], 2, max_components=500)
    flat = gs.flat_values()
    for j, alpha in enumerate(flat, start=1):
        h_at = gs.h_at(alpha)
        h_left = gs.h_at(alpha * Fraction(999, 1000))  # just below alpha
        assert h_at <= j < h_left


def test_euclidean_view_within_sqrt2(corpus):
    for name, k in (("cantor_product", 3), ("d1", 2), ("e2_standin", 2)):
        ds = corpus[name]
        cheb = [float(v) for v in
                component_gap_sequence(ds, k, max_components=100)
                .flat_values()]
        eucl = euclidean_gap_values(ds, k, max_components=100)
        assert len(cheb) == len(eucl)
        for c, e in zip(cheb, eucl):
            assert c - 1e-12 <= e <= c * math.sqrt(2) + 1e-12


def test_fit_exact_power_law():
    samples = [
        HBracket(delta=Fraction(1, 2 ** i), level=i,
                 h_low=round(2 ** (1.5 * i)), h_high=round(2 ** (1.5 * i)))
        for i in range(1, 7)
    ]
    # Use exact powers of 8 at even i to avoid rounding noise: rebuild.
    samples = [
        HBracket(delta=Fraction(1, 4 ** i), level=i, h_low=8 ** i,
                 h_high=8 ** i)
        for i in range(1, 7)
    ]
    report = fit_h_exponent(samples)
    assert report.fitted_gamma == pytest.approx(1.5, rel=1e-12)
    assert report.stderr == pytest.approx(0.0, abs=1e-9)


def test_fit_constant_h_gives_zero():
    samples = [HBracket(delta=Fraction(1, 2 ** i), level=i, h_low=1,
                        h_high=1) for i in range(1, 5)]
    assert fit_h_exponent(samples).fitted_gamma == 0.0


def test_fit_requires_three_tight_samples():
    samples = [HBracket(delta=Fraction(1, 2), level=2, h_low=1, h_high=10),
               HBracket(delta=Fraction(1, 4), level=2, h_low=2, h_high=40),
               HBracket(delta=Fraction(1, 8), level=2, h_low=4, h_high=4)]
    with pytest.raises(TooFewTightSamplesError):
        fit_h_exponent(samples)


def test_column_base_ladder_is_vacuous_for_wide_carpets(corpus):
    # Sampling delta in powers of the column base n = m^2 with level k+2
    # leaves the conservative side trivial for k >= 2 (delta <= 2 m^-L),
    # so fewer than three brackets stay tight and the fit refuses.  The
    # acceptance ladder therefore samples delta in powers of the row base.
    ds = corpus["d2"]
    samples = [h_bracket(ds, k + 2, Fraction(1, 9 ** k)) for k in (1, 2, 3)]
    assert sum(1 for s in samples if s.tight) < 3
    with pytest.raises(TooFewTightSamplesError):
        fit_h_exponent(samples)


def test_fitted_exponent_matches_theory_for_sparse_set():
    cls = classify(SPARSE)
    pred = predicted_exponent(cls, SPARSE, "infinite")
    report = fit_h_exponent(bracket_ladder(SPARSE, 2, 6), pred)
    assert report.relative_error < 0.01
    assert pred.gamma == pytest.approx(math.log(2) / math.log(3), rel=1e-12)
