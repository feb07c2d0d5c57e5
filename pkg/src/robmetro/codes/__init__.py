# this_file: src/robmetro/codes/__init__.py

"""GF(2) linear codes, weight enumerators and the MacWilliams transform."""

from robmetro.codes.builtin import (
    even_weight_code,
    fixture_codes,
    get_code,
    hamming7_code,
    random_code,
    repetition_code,
    steane_code,
    trivial_code,
)
from robmetro.codes.code_file import format_code, load_code, parse_code_text, resolve_code
from robmetro.codes.enumerator import (
    WeightEnumerator,
    dual_weight_enumerator,
    macwilliams_transform,
    robustness,
    robustness_bound_slack,
    weight_enumerator,
)
from robmetro.codes.linear_code import BinaryCode, dual_code, enumerate_codewords, zero_coordinates

__all__ = [
    "BinaryCode",
    "WeightEnumerator",
    "dual_code",
    "dual_weight_enumerator",
    "enumerate_codewords",
    "even_weight_code",
    "fixture_codes",
    "format_code",
    "get_code",
    "hamming7_code",
    "load_code",
    "macwilliams_transform",
    "parse_code_text",
    "random_code",
    "repetition_code",
    "resolve_code",
    "robustness",
    "robustness_bound_slack",
    "steane_code",
    "trivial_code",
    "weight_enumerator",
    "zero_coordinates",
]
