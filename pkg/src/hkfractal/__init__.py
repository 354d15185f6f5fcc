"""Exact Hilbert-Kunz and F-signature computations for hypersurfaces over
prime fields, with rationality certificates for the associated sequences and
cancellation analysis of their generating functions."""

from .colength import (
    DEFAULT_DIM_BUDGET,
    TruncatedAlgebra,
    colength,
    mult_rank,
    multiplication_matrix,
)
from .cyclocancel import (
    CancellationInput,
    CancellationReport,
    QuestionReport,
    SMSystem,
    build_pq,
    cancellation_analyze,
    check_pd_not_root,
    question_check,
    sm_dimension,
    sm_system,
    vl_basis,
    vl_sum_dimension,
)
from .errors import BudgetError, DomainError, HKFractalError, ParseError
from .fppoly import FpPoly, joined_product, parse_poly, power_mod, truncate
from .gflinalg import backend_name
from .phifunc import (
    DyadicPoint,
    PhiFunction,
    e_sequence,
    fs_function,
    hk_function,
    hypersurface_phi,
    phi_eval,
    product_phi,
    reflect,
    shift,
)
from .qpseries import (
    PFractalReport,
    QuasiPolynomial,
    RecurrenceCertificate,
    detect_recurrence,
    fit_quasi_polynomial,
    fit_series,
    gf_of_certified,
    multiplicity_from_series,
    qp_eval,
    qp_of_series,
    rnc_hk,
    series_of_qp,
    weak_pfractal_report,
)
from .ratfunc import (
    Rat,
    RationalGF,
    UniPoly,
    cyclotomic,
    partial_fractions,
    poly_gcd,
    rat_from_str,
    rat_to_str,
    residue_limit,
)

__version__ = "0.1.0"
