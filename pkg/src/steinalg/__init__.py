"""Exact Steinberg-algebra computations on ample groupoid models.

Backends: finite discrete groupoids and Cantor snake group bundles (the
basic non-Hausdorff ample groupoids).  The algebra layer is exact; the
only floating point lives in operator-norm estimation, where every value
carries a tolerance.
"""

from .algebra import (
    UNIT_SPACE,
    AlgebraElement,
    Spectrum,
    add,
    convolve,
    element_test_points,
    equals,
    evaluate,
    i_norm,
    involute,
    is_supported_in,
    open_support,
    scale,
    spectral_radius,
    sup_norm,
    unit_spectrum,
)
from .cantor import ClopenSet
from .errors import (
    AxiomError,
    GroupoidParseError,
    InfiniteFiber,
    ModelMismatch,
    SteinalgError,
    SupportViolation,
)
from .formats import load_elements, load_groupoid, parse_groupoid, serialize_element
from .groupoid import (
    FiniteBisection,
    FiniteGroupoid,
    SnakeBisection,
    SnakeGroupoid,
    TestPoint,
    bisection_inverse,
    bisection_product,
    disjointify,
    enumerate_test_points,
    fiber,
    range_region,
    source_region,
)
from .oracle import DenseMatrix, brute_convolve, brute_support, matrix_norm
from .representation import (
    FiberOperator,
    NormReport,
    SymbolNorm,
    fiber_norm,
    norm_sandwich,
    reduced_norm,
    regular_rep,
    symbol_norm,
)
from .rewriting import (
    Decomposition,
    bounded_summands,
    restrict,
    rewrite_within,
    trivial_bound,
    unit_support_window,
)
from .scalars import QC, RadicalSum

__version__ = "0.1.0"
