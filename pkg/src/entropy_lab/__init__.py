"""Exact intrinsic-entropy computations for endomorphisms of representable
Abelian groups.

The package certifies entropy values for an endomorphism restricted to the
trajectory of a finitely generated subgroup: partial trajectories grow by
exact integer linear algebra, inertness is decided by a finite quotient-index
certificate, and an entropy figure is reported as ``ExactLog(c)`` only when
the growth increments provably stabilize. Everything runs over exact
integers and fractions; no floats enter any decision.
"""

from .endomorphisms import (
    Endo,
    EndoPower,
    MatrixEndo,
    StencilEndo,
    apply,
    identity_endo,
    image,
    left_shift,
    multiplication,
    power,
    right_shift,
)
from .entropy import (
    CounterexampleReport,
    EntropyOptions,
    EntropyResult,
    ExactLog,
    GrowthTrace,
    InertCertificate,
    LogLawReport,
    TrajectoryInvarianceReport,
    Undetermined,
    certify_trace,
    counterexample_report,
    entropy_on_trajectory,
    entropy_power_on_trajectory,
    entropy_wrt,
    find_inert_trajectory_level,
    growth_trace,
    inert_certificate,
    log_law_report,
    partial_trajectory,
    trajectory_identity_check,
    trajectory_invariance_report,
)
from .errors import (
    AmbientMismatchError,
    ContainmentError,
    EntropyLabError,
    EnumerationCapError,
    InertLevelNotFoundError,
    InternalInvariantViolation,
    NotInertError,
    OracleMismatchError,
    RationalAmbientError,
    ScenarioError,
)
from .groups import (
    Ambient,
    Element,
    FgSubgroup,
    Rational,
    TorsionSum,
    contains,
    is_subgroup_of,
    quotient_index,
    subgroup,
    subgroup_order,
)
from .groups import sum as subgroup_sum
from .linalg import (
    INFINITE,
    Cardinality,
    IntMatrix,
    RatMatrix,
    determinant,
    hermite_form,
    lattice_index,
    smith_form,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # ambients and subgroups
    "Ambient",
    "Rational",
    "TorsionSum",
    "Element",
    "FgSubgroup",
    "subgroup",
    "subgroup_sum",
    "subgroup_order",
    "quotient_index",
    "contains",
    "is_subgroup_of",
    # endomorphisms
    "Endo",
    "EndoPower",
    "MatrixEndo",
    "StencilEndo",
    "right_shift",
    "left_shift",
    "identity_endo",
    "multiplication",
    "power",
    "apply",
    "image",
    # entropy
    "EntropyOptions",
    "InertCertificate",
    "GrowthTrace",
    "ExactLog",
    "Undetermined",
    "EntropyResult",
    "TrajectoryInvarianceReport",
    "LogLawReport",
    "CounterexampleReport",
    "partial_trajectory",
    "inert_certificate",
    "growth_trace",
    "certify_trace",
    "entropy_wrt",
    "find_inert_trajectory_level",
    "entropy_on_trajectory",
    "entropy_power_on_trajectory",
    "trajectory_identity_check",
    "trajectory_invariance_report",
    "log_law_report",
    "counterexample_report",
    # exact linear algebra
    "IntMatrix",
    "RatMatrix",
    "Cardinality",
    "INFINITE",
    "hermite_form",
    "smith_form",
    "determinant",
    "lattice_index",
    # errors
    "EntropyLabError",
    "AmbientMismatchError",
    "ContainmentError",
    "NotInertError",
    "InertLevelNotFoundError",
    "EnumerationCapError",
    "RationalAmbientError",
    "OracleMismatchError",
    "ScenarioError",
    "InternalInvariantViolation",
]
