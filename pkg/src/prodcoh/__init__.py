"""Exact multigraded sheaf cohomology on products of projective spaces,
with a window-certified splitting test for direct sums of O(kH)."""

from .lattice import (
    LatticeError,
    Polarization,
    ProductSpace,
    Window,
    canonical_twist,
    intermediate_k_range,
    leq,
    lt,
    render_region,
    safe_region,
)
from .bott import factor_h, line_bundle_h, signature
from .linalg import PrimeField, RationalField, RATIONALS, default_field, parse_field
from .coxring import (
    FreeSum,
    LineBundleComplex,
    MultiHomogPoly,
    free_complex,
    graded_basis,
    monomials,
    mult_matrix,
    poly_mult,
    syzygies_in_window,
    validate_complex,
)
from .cech import (
    TruncationInstability,
    cech_basis,
    cech_line_bundle_h,
    cohomology_table,
    hypercohomology,
)
from .tate import (
    CohomologyTable,
    StrandInconsistency,
    TateCoverageError,
    TateTermProfile,
    corner_checksum,
    strand_checksum,
    strand_propagate,
    tate_checksum,
    tate_term_dims,
)
from .splitter import (
    ExtremalReport,
    SplitVerdict,
    extremal_hm,
    hm_monotonicity_check,
    hypothesis_violations,
    multiplicities,
    split_check,
    verify_split,
)

__version__ = "0.1.0"
