"""Bundled balanced-LRC support patterns.

Three ready-made parity skeletons covering the interesting corners of the
design space: a [15,10] code with uniform column weight 6, a [16,10] code
with uniform column weight 5 tuned for cheap double repairs, and a [16,10]
row-weight-2 code that trades fault tolerance for very cheap single repairs.

Coefficients are drawn per seed.  Repair costs and decodability counts are
support-determined as long as the drawn coefficients are in general
position; a draw can occasionally land on an accidental rank degeneracy
(probability roughly a few percent per code), which only lowers some
decodability figures.  The default seeds below were screened so that the
censuses equal the support-forced minima; GENERIC_SEEDS lists screened
alternatives per code for seed-stability checks.
"""

from __future__ import annotations

from .code import BlrcCode, CodeSpec, SupportPattern, assign_coefficients
from .gf import GF256, FieldSpec

SUPPORT_15_10_W3: SupportPattern = (
    (0, 1, 3),
    (0, 3, 4),
    (0, 2, 3),
    (0, 1, 4),
    (0, 2, 4),
    (0, 1, 2),
    (1, 2, 4),
    (2, 3, 4),
    (1, 2, 3),
    (1, 3, 4),
)

SUPPORT_16_10_W3: SupportPattern = (
    (0, 4, 5),
    (1, 2, 5),
    (1, 4, 5),
    (2, 3, 4),
    (0, 3, 5),
    (1, 2, 3),
    (0, 1, 3),
    (0, 3, 4),
    (2, 4, 5),
    (0, 1, 2),
)

SUPPORT_16_10_W2: SupportPattern = (
    (0, 5),
    (3, 4),
    (3, 5),
    (4, 5),
    (0, 3),
    (1, 4),
    (0, 1),
    (0, 2),
    (2, 4),
    (1, 2),
)

GENERIC_SEEDS = {
    "blrc-15-10-w3": (123, 160, 253, 313, 324, 342),
    "blrc-16-10-w3": (261, 374, 1078, 1090, 1464, 1506),
    "blrc-16-10-w2": (1, 2, 3, 4, 5, 6),
}


def blrc_15_10_w3(seed: int = 123, field: FieldSpec = GF256) -> BlrcCode:
    """[15,10] code, w=3: every parity column has weight 6."""
    return assign_coefficients(SUPPORT_15_10_W3, CodeSpec(15, 10, 3, field), seed)


def blrc_16_10_w3(seed: int = 261, field: FieldSpec = GF256) -> BlrcCode:
    """[16,10] code, w=3: every parity column has weight 5."""
    return assign_coefficients(SUPPORT_16_10_W3, CodeSpec(16, 10, 3, field), seed)


def blrc_16_10_w2(seed: int = 1, field: FieldSpec = GF256) -> BlrcCode:
    """[16,10] code, w=2: column weights 3 and 4, distance only 3."""
    return assign_coefficients(SUPPORT_16_10_W2, CodeSpec(16, 10, 2, field), seed)


BUNDLED = {
    "blrc-15-10-w3": blrc_15_10_w3,
    "blrc-16-10-w3": blrc_16_10_w3,
    "blrc-16-10-w2": blrc_16_10_w2,
}
