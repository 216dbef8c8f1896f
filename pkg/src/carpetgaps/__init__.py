"""Gap sequences and connectivity structure of Bedford-McMullen carpets."""

from .carpet import (
    Classification,
    DigitSet,
    PredictedExponent,
    box_dimension,
    classify,
    digit_set,
    full_square,
    hausdorff_dimension,
    load_digit_set,
    parse_digit_set,
    predicted_exponent,
    product_digit_set,
)
from .connectivity import (
    CardinalityVerdict,
    CellComponent,
    ComponentSummary,
    CscCertificate,
    count_components,
    component_count,
    extract_components,
    find_csc_certificate,
    infer_component_cardinality,
    verify_certificate,
)
from .errors import (
    CapExceededError,
    CarpetGapsError,
    DigitSetError,
    TooFewTightSamplesError,
)
from .gaps import (
    ExponentReport,
    GapSequence,
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
from .grid import Cell, RowStream, cell_from_word, render_svg, stream_rows
from .theory import ComparabilityVerdict, comparability_verdict, lipschitz_report

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "CardinalityVerdict",
    "CarpetGapsError",
    "Cell",
    "CellComponent",
    "Classification",
    "ComparabilityVerdict",
    "ComponentSummary",
    "CscCertificate",
    "DigitSet",
    "DigitSetError",
    "ExponentReport",
    "GapSequence",
    "HBracket",
    "PredictedExponent",
    "RowStream",
    "TooFewTightSamplesError",
    "box_dimension",
    "bracket_ladder",
    "cantor_gap_reference",
    "cell_from_word",
    "classify",
    "comparability_verdict",
    "component_count",
    "component_gap_sequence",
    "count_components",
    "digit_set",
    "euclidean_gap_values",
    "extract_components",
    "find_csc_certificate",
    "fit_h_exponent",
    "full_square",
    "gap_from_h",
    "h_bracket",
    "hausdorff_dimension",
    "infer_component_cardinality",
    "lipschitz_report",
    "load_digit_set",
    "parse_digit_set",
    "predicted_exponent",
    "product_digit_set",
    "render_svg",
    "steps_from_gap_sequence",
    "stream_rows",
    "verify_certificate",
]
