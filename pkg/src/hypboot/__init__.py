"""Verification and computation toolkit for the hyperbolic bootstrap equations
of compact hyperbolic 2-orbifolds.

The package is organized around one object — a windowed candidate spectrum of
triple coefficients — and the machinery to generate, serialize, and check it,
plus the recurrence families, hypergeometric diagnostics, and spectral-gap
bound computations that the consistency equations feed.
"""

from .errors import (
    CancellationError,
    DomainError,
    HorizonError,
    NoThresholdError,
    ParseError,
)
from .orbifold import (
    HolomorphicSpectrum,
    TopologicalType,
    dim_modular_forms,
    holomorphic_spectrum,
    is_hyperbolic,
    orbifold_euler_characteristic,
)
from .indexset import (
    Index,
    LaplaceSpectrum,
    SpectralContext,
    Window,
    bar,
    context_covers,
    lambda_of,
    lower,
    lowering_coefficient,
    lowering_radicand,
    member,
    raise_,
    raising_coefficient,
    raising_radicand,
    shift,
)
from .spectrum import (
    CandidateSpectrum,
    LadderSeed,
    canonical_key,
    deserialize,
    extend_hb3_closure,
    fill_se4_diagonal,
    fill_unit,
    from_triples,
    generate_ladder,
    serialize,
)
from .equations import (
    EquationStats,
    ResidualReport,
    check_all,
    check_hb1,
    check_hb2,
    check_hb3,
    check_hb4,
    check_hb5,
    check_hb5_inverted,
    check_hb6,
    check_l0_diagonal,
    check_num_recursion,
    exact_hb5_squared,
    exact_num_recursion,
)
from .recurrences import (
    B,
    B_values,
    DominationGrid,
    DominationReport,
    MatrixProductReport,
    PiecewiseBivariate,
    R_combined,
    SignGrid,
    SignThreshold,
    certify_sign_threshold,
    correction_values,
    default_domination_grid,
    default_sign_grid,
    p,
    p_correction,
    p_values,
    q,
    q_values,
    r,
    s,
    s_correction,
    verify_correction_domination,
    verify_matrix_product,
)
from .bounds import (
    Functional,
    closed_form_bound,
    functional_polynomial,
    positivity_threshold,
    search_functional,
    solve_cancellation,
)
from .hypergeom import (
    AsymptoticEntry,
    CrossingEntry,
    CrossingReport,
    SeriesEvaluation,
    SpectralParameter,
    check_asymptotic,
    check_kmp_crossing,
    f21,
    pochhammer,
    verify_tblock,
    weyl_ladder_ratio,
)
from .polys import BivariatePolynomial, UnivariatePolynomial
from .sturm import isolate_real_roots, real_root_brackets, refine_root, sturm_chain

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
