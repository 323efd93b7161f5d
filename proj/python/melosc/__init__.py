"""Melnikov analysis and event-driven simulation of the discontinuous
oscillator  x'' + alpha*sign(x) = eta*x + eps*f(t, x, x').

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ._core import (  # noqa: F401
    AnnulusInfo,
    CaseClass,
    ContinuationResult,
    CrossingEvent,
    DisplacementValue,
    EvalError,
    ExtendedPoint,
    GrazingError,
    MelnikovResult,
    MelnikovZero,
    MeloscError,
    NewtonDivergence,
    NoPeriodAnnulus,
    OutOfAnnulusDomain,
    OutOfAnnulusImage,
    Parameters,
    ParseError,
    PeriodicOrbit,
    Perturbation,
    QuadratureFailure,
    Region,
    RootBracketFailure,
    TimeLimitExceeded,
    TrajectorySegment,
    __version__,
    annulus_info,
    check_periodicity,
    classify,
    continuation,
    delta3_tilde,
    describe,
    displacement,
    exp_At,
    find_periodic_orbit,
    flow_concat,
    gamma_minus,
    gamma_plus,
    integrate_piece,
    kernel_U,
    melnikov,
    melnikov_derivative,
    melnikov_grid,
    parse,
    predicted_initial_condition,
    sigma_admissible,
    sin_oracle,
    tau0,
    u_vector,
    v_of,
)
