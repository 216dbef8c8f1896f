"""Executable verdicts: gap-sequence comparability and Lipschitz reports.

Two carpets with infinitely many components have comparable gap sequences
iff their growth exponents agree.  Equality of exponents is certified
exactly only through integer identities (identical formula inputs, or
log-ratio forms over a common root, e.g. the n = m^2 construction where the
box dimension is log(M*N)/log(n)); everything else falls back to a
double-precision comparison at 1e-12 with a near-tie flag.  Reports never
claim Lipschitz equivalence, only non-equivalence via non-comparability.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .carpet import (
    CASE_UNDEFINED,
    INFINITE,
    REL_TOL,
    Classification,
    DigitSet,
    PredictedExponent,
    box_dimension,
    classify,
    hausdorff_dimension,
    predicted_exponent,
)
from .connectivity import (
    DEFAULT_CSC_KMAX,
    CardinalityVerdict,
    infer_component_cardinality,
)
from .grid import DEFAULT_MAX_CELLS

COMPARABLE = "comparable"
NOT_COMPARABLE = "not_comparable"
VERDICT_UNKNOWN = "unknown"


def _perfect_power_root(v: int) -> tuple[int, int]:
    """Write v >= 2 as r^e with e maximal; returns (r, e)."""
    best = (v, 1)
    for e in range(2, v.bit_length() + 1):
        r = round(v ** (1.0 / e))
        for cand in (r - 1, r, r + 1):
            if cand >= 2 and cand ** e == v:
                best = (cand, e)
    return best


def _log_ratio_signature(c: int, b: int):
    """Canonical signature of gamma = log c / log b (c, b >= 2 integers).

    Signatures compare equal iff equality is integer-certified: both ratios
    reduce over a common root, or the ratio is rational.
    """
    rc, ec = _perfect_power_root(c)
    rb, eb = _perfect_power_root(b)
    if rc == rb:
        return ("rational", Fraction(ec, eb))
    return ("logratio", rc, rb, Fraction(ec, eb))


def _box_dimension_signature(ds: DigitSet, cls: Classification):
    """Exact signature of the box dimension when it reduces to a log ratio
    (n a perfect power of m), else an identity-only tuple."""
    big_n = cls.digit_count
    big_m = cls.nonempty_row_count
    root, exp = _perfect_power_root(ds.n)
    m_root, m_exp = _perfect_power_root(ds.m)
    if root == m_root and exp % m_exp == 0:
        e = exp // m_exp  # n = m^e
        return _log_ratio_signature(big_n * big_m ** (e - 1), ds.n)
    return ("bdim", ds.n, ds.m, big_n, big_m)


def _gamma_signature(ds: DigitSet, cls: Classification,
                     pred: PredictedExponent):
    if pred.case_tag == "linear":
        if cls.linear_form == "column":
            return _log_ratio_signature(cls.digit_count // ds.m, ds.n)
        return _log_ratio_signature(cls.digit_count // ds.n, ds.m)
    if pred.case_tag == "nonlinear_full_rows":
        return _log_ratio_signature(cls.digit_count, ds.n)
    return _box_dimension_signature(ds, cls)


def _certifiable(sig) -> bool:
    return sig[0] in ("rational", "logratio")


@dataclass(frozen=True)
class ComparabilityVerdict:
    verdict: str                                  # comparable | not_comparable | unknown
    gamma_pair: tuple[PredictedExponent, PredictedExponent]
    basis: str
    exact_witness: str | None
    near_tie: bool

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "gamma_pair": [g.to_json_obj() for g in self.gamma_pair],
            "basis": self.basis,
            "exact_witness": self.exact_witness,
            "near_tie": self.near_tie,
        }


def comparability_verdict(ds1: DigitSet, ds2: DigitSet,
                          card1: CardinalityVerdict,
                          card2: CardinalityVerdict) -> ComparabilityVerdict:
    """Compare predicted exponents; comparable iff they agree."""
    cls1 = classify(ds1)
    cls2 = classify(ds2)
    pred1 = predicted_exponent(cls1, ds1, card1.verdict)
    pred2 = predicted_exponent(cls2, ds2, card2.verdict)
    pair = (pred1, pred2)
    if card1.verdict != INFINITE or card2.verdict != INFINITE \
            or pred1.case_tag == CASE_UNDEFINED \
            or pred2.case_tag == CASE_UNDEFINED:
        return ComparabilityVerdict(
            verdict=VERDICT_UNKNOWN, gamma_pair=pair,
            basis="exponent comparison requires two carpets with infinitely "
                  "many components",
            exact_witness=None, near_tie=False)

    sig1 = _gamma_signature(ds1, cls1, pred1)
    sig2 = _gamma_signature(ds2, cls2, pred2)
    branches = " / ".join(sorted({pred1.case_tag, pred2.case_tag}))
    if sig1 == sig2:
        return ComparabilityVerdict(
            verdict=COMPARABLE, gamma_pair=pair,
            basis=f"equal exponents, integer-certified ({branches})",
            exact_witness=_witness_text(sig1), near_tie=False)
    g1, g2 = pred1.gamma, pred2.gamma
    if abs(g1 - g2) <= REL_TOL * max(1.0, abs(g1), abs(g2)):
        return ComparabilityVerdict(
            verdict=COMPARABLE, gamma_pair=pair,
            basis=f"exponents equal within 1e-12, not certified ({branches})",
            exact_witness=None, near_tie=True)
    return ComparabilityVerdict(
        verdict=NOT_COMPARABLE, gamma_pair=pair,
        basis=f"exponents differ ({branches})",
        exact_witness=None, near_tie=False)


def _witness_text(sig) -> str:
    if sig[0] == "rational":
        return f"gamma = {sig[1]} exactly for both"
    if sig[0] == "logratio":
        return (f"gamma = {sig[3]} * log {sig[1]} / log {sig[2]} for both")
    return "identical formula inputs (n, m, N, M)"


def _squarefree_decompose(v: int) -> tuple[int, int]:
    """v = a^2 * d with d squarefree; returns (a, d)."""
    a = 1
    d = 1
    x = v
    f = 2
    while f * f <= x:
        count = 0
        while x % f == 0:
            x //= f
            count += 1
        a *= f ** (count // 2)
        if count % 2:
            d *= f
        f += 1
    if x > 1:
        d *= x
    return a, d


def _sqrt_sum_signature(row_counts) -> tuple:
    """Sum of sqrt(M_j) as coefficients over squarefree radicals; two sums
    are equal iff the signatures match (radicals are independent over Q)."""
    coeffs: dict[int, int] = {}
    for c in row_counts:
        if c > 0:
            a, d = _squarefree_decompose(c)
            coeffs[d] = coeffs.get(d, 0) + a
    return tuple(sorted(coeffs.items()))


def _dimension_equality(ds1: DigitSet, cls1: Classification,
                        ds2: DigitSet, cls2: Classification) -> dict:
    """Box and Hausdorff dimension comparison with exact witnesses where an
    integer identity certifies equality."""
    box1 = box_dimension(ds1)
    box2 = box_dimension(ds2)
    sig1 = _box_dimension_signature(ds1, cls1)
    sig2 = _box_dimension_signature(ds2, cls2)
    box_witness = None
    if sig1 == sig2:
        box_equal = True
        if sig1[0] in ("rational", "logratio"):
            n1 = cls1.digit_count * cls1.nonempty_row_count
            n2 = cls2.digit_count * cls2.nonempty_row_count
            if ds1.n == ds2.n and ds1.n == ds1.m ** 2 and n1 == n2:
                box_witness = (f"M*N = {n1} for both with n = m^2")
            else:
                box_witness = _witness_text(sig1)
        else:
            box_witness = "identical formula inputs (n, m, N, M)"
    else:
        box_equal = abs(box1 - box2) <= REL_TOL * max(1.0, box1, box2)

    haus1 = hausdorff_dimension(ds1)
    haus2 = hausdorff_dimension(ds2)
    haus_witness = None
    if (ds1.n, ds1.m) == (ds2.n, ds2.m) and \
            sorted(c for c in cls1.row_counts if c) == \
            sorted(c for c in cls2.row_counts if c):
        haus_equal = True
        haus_witness = "identical nonempty row-count multisets"
    elif (ds1.n, ds1.m) == (ds2.n, ds2.m) and ds1.n == ds1.m ** 2 and \
            _sqrt_sum_signature(cls1.row_counts) == \
            _sqrt_sum_signature(cls2.row_counts):
        haus_equal = True
        sig = _sqrt_sum_signature(cls1.row_counts)
        pretty = " + ".join(f"{a}*sqrt({d})" if d > 1 else str(a)
                            for d, a in sig)
        haus_witness = f"sum of sqrt(M_j) = {pretty} for both (n = m^2)"
    else:
        haus_equal = abs(haus1 - haus2) <= REL_TOL * max(1.0, haus1, haus2)

    return {
        "box_dimensions": [box1, box2],
        "box_dimensions_equal": box_equal,
        "box_witness": box_witness,
        "hausdorff_dimensions": [haus1, haus2],
        "hausdorff_dimensions_equal": haus_equal,
        "hausdorff_witness": haus_witness,
    }


CONCLUSION_NOT_EQUIVALENT = ("gap sequences are not comparable, so the "
                             "carpets are not Lipschitz equivalent")
CONCLUSION_COMPARABLE = ("gap sequences are comparable; Lipschitz "
                         "equivalence is not decided by this invariant")
CONCLUSION_UNDECIDED = ("comparability unknown; no Lipschitz conclusion")


def lipschitz_report(ds1: DigitSet, ds2: DigitSet,
                     k_max: int = DEFAULT_CSC_KMAX,
                     max_cells: int = DEFAULT_MAX_CELLS) -> dict:
    """Full pairwise report: classifications, dimensions with witnesses,
    full-rows comparison, cardinality verdicts, comparability, conclusion."""
    cls1 = classify(ds1)
    cls2 = classify(ds2)
    card1 = infer_component_cardinality(ds1, cls1, k_max=k_max,
                                        max_cells=max_cells)
    card2 = infer_component_cardinality(ds2, cls2, k_max=k_max,
                                        max_cells=max_cells)
    comp = comparability_verdict(ds1, ds2, card1, card2)
    if comp.verdict == NOT_COMPARABLE:
        conclusion = CONCLUSION_NOT_EQUIVALENT
    elif comp.verdict == COMPARABLE:
        conclusion = CONCLUSION_COMPARABLE
    else:
        conclusion = CONCLUSION_UNDECIDED
    report = {
        "digit_sets": [ds1.to_json_obj(), ds2.to_json_obj()],
        "classifications": [cls1.to_json_obj(), cls2.to_json_obj()],
        "full_rows": [cls1.has_full_rows, cls2.has_full_rows],
        "cardinality": [card1.to_json_obj(), card2.to_json_obj()],
        "comparability": comp.to_json_obj(),
        "conclusion": conclusion,
    }
    report.update(_dimension_equality(ds1, cls1, ds2, cls2))
    return report
