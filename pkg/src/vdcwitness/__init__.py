"""Nonnegative normed cosine polynomials with spectrum in the values of an
odd integer polynomial: construction, verification, and bounds.
"""

__version__ = "0.1.0"

from .arcs import ArcLocation, classify
from .averaging import (
    AveragingScheme,
    averaged_tau,
    build_scheme,
    exponents_for_prime,
    tau,
    tau_star,
    threshold_astar,
    threshold_pstar,
    verify_scheme,
)
from .expsum import (
    CompleteSumResult,
    complete_sum,
    estimate_c0,
    reduced_sum,
    reduced_sum_all,
)
from .kernels import (
    EmptySurrogateRange,
    SparseCosinePolynomial,
    build_surrogate,
    eval_cosine,
    fejer,
    fejer_value,
    major_arc_residual,
    surrogate_norm_K,
)
from .lowerbound import (
    ResidueClassSystem,
    build_classes,
    gamma_lower_bound,
    prime_inequality_check,
)
from .oracles import (
    GammaBracket,
    gamma_plus_bracket,
    max_diff_avoiding,
    simplex_solve,
)
from .poly import (
    OddIntPolynomial,
    dilate,
    eval_poly,
    make_poly,
    parse_poly,
    values_up_to,
)
from .witness import (
    DeskScheme,
    PaperParameters,
    WitnessReport,
    build_witness,
    desk_scheme,
    paper_parameters,
    rational_probe,
    scan_min,
)
