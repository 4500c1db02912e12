"""Constructs and verifies subsolubility certificates: explicit point sets
with transitive soluble group actions containing a given set isometrically."""

__version__ = "0.1.0"

from .certificate import (  # noqa: F401
    Certificate,
    Transitivity,
    emit_json,
    parse_json,
    product_certificate,
)
from .geometry import EmbeddingMap, PointSet, find_subisometry, symmetry_group  # noqa: F401
from .verify import VerifyReport, verify_certificate  # noqa: F401
