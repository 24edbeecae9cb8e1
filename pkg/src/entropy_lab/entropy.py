"""Partial trajectories, inert certificates, and intrinsic entropy limits.

For an endomorphism power ``f`` and a finitely generated subgroup ``H``, the
n-th partial trajectory is ``T_n(f, H) = H + f(H) + ... + f^(n-1)(H)``. A
subgroup is inert under ``f`` when ``(H + f(H)) / H`` is finite; for inert
``H`` the quotients ``T_n / H`` stay finite, and the entropy of ``f`` with
respect to ``H`` is the limit of ``log|T_n / H| / n``.

The limit is certified exactly only through increment stabilization: when the
index gain ``|T_(n+1) / T_n|`` is the same finite constant ``c`` for the last
``stability_window`` steps of a trace (or the trajectory stops growing, which
forces ``c = 1``), the entropy is exactly ``log c``. A trace that does not
stabilize yields an :class:`Undetermined` result carrying float bounds, never
a fabricated exact value.

Entropy of a map *on the trajectory generated by a seed subgroup* is computed
by first searching for an inert partial-trajectory level of the seed; the
supremum over all inert subgroups of an arbitrary ambient group is not
algorithmically attainable and is deliberately out of scope.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from typing import Optional

from . import groups
from .endomorphisms import Endo, EndoPower, power, right_shift
from .errors import (
    AmbientMismatchError,
    InertLevelNotFoundError,
    InternalInvariantViolation,
    NotInertError,
)
from .groups import Element, FgSubgroup, TorsionSum
from .linalg import Cardinality

__all__ = [
    "EntropyOptions",
    "GrowthTrace",
    "ExactLog",
    "Undetermined",
    "EntropyResult",
    "InertCertificate",
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
]

_ONE = Cardinality.finite(1)


@dataclass(frozen=True)
class EntropyOptions:
    """Knobs for entropy certification.

    ``max_n`` is the length of the growth trace, ``stability_window`` the number
    of trailing increments that must agree for an exact certificate, ``max_m``
    the search bound for an inert partial-trajectory level of a seed subgroup.
    """

    max_n: int = 64
    stability_window: int = 4
    max_m: int = 32

    def __post_init__(self):
        if operator.index(self.max_n) < 1:
            raise ValueError("max_n must be >= 1")
        if not 1 <= operator.index(self.stability_window) <= self.max_n:
            raise ValueError("stability_window must be in [1, max_n]")
        if operator.index(self.max_m) < 1:
            raise ValueError("max_m must be >= 1")


@dataclass(frozen=True)
class InertCertificate:
    """Finiteness check of ``(H + f(H)) / H``."""

    defect: Cardinality
    verdict: bool


@dataclass(frozen=True)
class GrowthTrace:
    """Index data of a partial-trajectory chain.

    ``indices[i]`` is ``|T_(i+1) / H|`` (so ``indices[0]`` is 1) and
    ``increments[i]`` is ``|T_(i+2) / T_(i+1)|``. ``saturated_at`` is the
    first ``n`` with ``T_(n+1) = T_n``, if any; once that happens the
    trajectory never grows again.
    """

    subgroup: FgSubgroup
    indices: tuple[Cardinality, ...]
    increments: tuple[Cardinality, ...]
    saturated_at: Optional[int]


class ExactLog:
    """An exact entropy value ``log(c)`` for a positive integer ``c``."""

    __slots__ = ("c",)

    def __init__(self, c: int):
        c = operator.index(c)
        if c < 1:
            raise ValueError("ExactLog argument must be >= 1")
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("ExactLog is immutable")

    @property
    def log_value(self) -> float:
        return math.log(self.c)

    def scale(self, k: int) -> "ExactLog":
        """k * log(c) = log(c**k), exactly."""
        k = operator.index(k)
        if k < 0:
            raise ValueError("scale factor must be >= 0")
        return ExactLog(self.c**k)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExactLog) and self.c == other.c

    def __hash__(self) -> int:
        return hash(("ExactLog", self.c))

    def __repr__(self) -> str:
        return f"ExactLog({self.c})"


@dataclass(frozen=True)
class Undetermined:
    """A trace that did not stabilize; carries float bounds, never an exact claim."""

    trace: GrowthTrace
    lower: float
    upper: float


EntropyResult = ExactLog | Undetermined


@dataclass(frozen=True)
class TrajectoryInvarianceReport:
    """Entropy of ``f`` w.r.t. ``H`` versus w.r.t. ``T_k(f, H)``.

    ``equal`` is None when either side is undetermined.
    """

    left: EntropyResult
    right: EntropyResult
    equal: Optional[bool]


@dataclass(frozen=True)
class LogLawReport:
    """Entropy of a map and of its k-th power on the same seed trajectory."""

    k: int
    entropy_base: EntropyResult
    entropy_power: EntropyResult
    k_times_base: Optional[ExactLog]
    law_holds: Optional[bool]


@dataclass(frozen=True)
class CounterexampleReport:
    """Worked demonstration that power entropy is sensitive to the reference subgroup.

    For the right shift ``b`` on the sum of copies of Z/2, with ``H``
    generated by ``e_0`` and ``Hp = T_2(b, H)``, the squared shift has entropy
    ``log 2`` with respect to ``H`` but ``log 4`` with respect to ``Hp``,
    so replacing a subgroup by its partial trajectory, harmless for the base
    map, changes the entropy of the square.
    """

    h: FgSubgroup
    h_prime: FgSubgroup
    rows: tuple[tuple[int, Cardinality, Cardinality], ...]
    entropy_h: ExactLog
    entropy_h_prime: ExactLog
    certificates: dict[str, InertCertificate] = field(compare=False)
    distinct: bool = True


def _as_power(f: Endo | EndoPower) -> EndoPower:
    return f if isinstance(f, EndoPower) else power(f, 1)


def partial_trajectory(f: EndoPower, h: FgSubgroup, n: int) -> FgSubgroup:
    """``T_n(f, H) = H + f(H) + ... + f^(n-1)(H)`` for ``n >= 1``."""
    f = _as_power(f)
    n = operator.index(n)
    if n < 1:
        raise ValueError("trajectory length must be >= 1")
    if h.ambient != f.ambient:
        raise AmbientMismatchError(f"{h.ambient!r} vs {f.ambient!r}")
    acc = groups._accumulator_from(h)
    gens = h.generators()
    for _ in range(n - 1):
        gens = [f.apply(g) for g in gens]
        for g in gens:
            acc.absorb(g)
    return acc.to_subgroup(h.ambient)


def inert_certificate(f: Endo | EndoPower, h: FgSubgroup) -> InertCertificate:
    """Certify whether ``(H + f(H)) / H`` is finite."""
    f = _as_power(f)
    enlarged = groups.sum(h, f.image(h))
    defect = groups.quotient_index(enlarged, h)
    return InertCertificate(defect=defect, verdict=defect.is_finite)


def growth_trace(f: Endo | EndoPower, h: FgSubgroup, max_n: int) -> GrowthTrace:
    """Indices ``|T_n / H|`` and their increments for ``n = 1 .. max_n``.

    Requires ``h`` to be inert under ``f``. Saturation (``T_(n+1) = T_n``)
    is permanent, so the tail of a saturated trace is filled without further
    computation.
    """
    f = _as_power(f)
    max_n = operator.index(max_n)
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    cert = inert_certificate(f, h)
    if not cert.verdict:
        raise NotInertError(f"subgroup is not inert (defect {cert.defect!r})")
    acc = groups._accumulator_from(h)
    prev_state = acc.state()
    indices: list[Cardinality] = [_ONE]
    increments: list[Cardinality] = []
    gens = h.generators()
    saturated_at: Optional[int] = None
    for n in range(2, max_n + 1):
        gens = [f.apply(g) for g in gens]
        for g in gens:
            acc.absorb(g)
        state = acc.state()
        inc = groups._rel_index(h.ambient, prev_state, state)
        increments.append(inc)
        indices.append(indices[-1] * inc)
        prev_state = state
        if inc == _ONE:
            saturated_at = n - 1
            break
    while len(indices) < max_n:
        increments.append(_ONE)
        indices.append(indices[-1])
    return GrowthTrace(
        subgroup=h,
        indices=tuple(indices),
        increments=tuple(increments),
        saturated_at=saturated_at,
    )


def _log_of(c: Cardinality) -> float:
    return math.log(c.value) if c.is_finite else math.inf


def certify_trace(trace: GrowthTrace, stability_window: int) -> EntropyResult:
    """Read an entropy verdict off a growth trace.

    A saturated trace certifies ``ExactLog(1)``. Otherwise the verdict is
    exact only when the last ``stability_window`` increments agree on one
    finite value ``c``; a geometric tail ``|T_(n+1)/T_n| = c`` pins the
    growth exponent, so the limit is ``log c``. Anything else is
    :class:`Undetermined`, with the tail's increment logs as crude bounds.
    """
    stability_window = operator.index(stability_window)
    if stability_window < 1:
        raise ValueError("stability_window must be >= 1")
    if trace.saturated_at is not None:
        return ExactLog(1)
    window = min(stability_window, len(trace.increments))
    if window == 0:
        return Undetermined(trace=trace, lower=0.0, upper=math.inf)
    tail = trace.increments[-window:]
    first = tail[0]
    if first.is_finite and all(inc == first for inc in tail):
        return ExactLog(first.value)
    logs = [_log_of(inc) for inc in tail]
    return Undetermined(trace=trace, lower=min(logs), upper=max(logs))


def entropy_wrt(f: Endo | EndoPower, h: FgSubgroup, opts: EntropyOptions | None = None) -> EntropyResult:
    """Entropy of ``f`` with respect to the inert subgroup ``h``.

    Exact only on increment stabilization; a saturated trajectory gives
    ``ExactLog(1)`` immediately.
    """
    opts = opts or EntropyOptions()
    return certify_trace(growth_trace(f, h, opts.max_n), opts.stability_window)


def find_inert_trajectory_level(
    f: Endo | EndoPower, fgen: FgSubgroup, max_m: int
) -> Optional[tuple[int, FgSubgroup]]:
    """Smallest ``m <= max_m`` with ``T_m(f, fgen)`` inert under ``f``, if any."""
    f = _as_power(f)
    max_m = operator.index(max_m)
    if max_m < 1:
        raise ValueError("max_m must be >= 1")
    acc = groups._accumulator_from(fgen)
    gens = fgen.generators()
    for m in range(1, max_m + 1):
        level = acc.to_subgroup(fgen.ambient)
        if inert_certificate(f, level).verdict:
            return m, level
        gens = [f.apply(g) for g in gens]
        for g in gens:
            acc.absorb(g)
    return None


def entropy_on_trajectory(
    f: Endo | EndoPower, fgen: FgSubgroup, opts: EntropyOptions | None = None
) -> EntropyResult:
    """Entropy of ``f`` on the full trajectory generated by the seed ``fgen``.

    Works through the smallest inert partial-trajectory level ``H`` of the
    seed; the trajectory of ``H`` equals the trajectory of the seed, and the
    entropy of ``f`` restricted to it equals the entropy w.r.t. ``H``.
    """
    opts = opts or EntropyOptions()
    phi = _as_power(f)
    found = find_inert_trajectory_level(phi, fgen, opts.max_m)
    if found is None:
        raise InertLevelNotFoundError(f"no inert trajectory level within max_m={opts.max_m}")
    _, level = found
    return entropy_wrt(phi, level, opts)


def entropy_power_on_trajectory(
    f: Endo | EndoPower, k: int, fgen: FgSubgroup, opts: EntropyOptions | None = None
) -> EntropyResult:
    """Entropy of the k-th power of ``f`` on the trajectory generated by ``fgen``.

    The reference subgroup is ``H = T_(m+k-1)(f, fgen)`` where ``m`` is the
    smallest inert level of the seed: extending an inert level by ``k - 1``
    more trajectory steps yields a subgroup inert under both ``f`` and its
    k-th power, which makes the power entropy well-defined on the trajectory.
    Both certificates are re-checked and a failure raises
    :class:`~entropy_lab.errors.InternalInvariantViolation`.
    """
    opts = opts or EntropyOptions()
    k = operator.index(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    phi = _as_power(f)
    found = find_inert_trajectory_level(phi, fgen, opts.max_m)
    if found is None:
        raise InertLevelNotFoundError(f"no inert trajectory level within max_m={opts.max_m}")
    m, _ = found
    h = partial_trajectory(phi, fgen, m + k - 1)
    phi_k = power(phi, k)
    if not inert_certificate(phi, h).verdict:
        raise InternalInvariantViolation("extended trajectory level lost base-map inertness")
    if not inert_certificate(phi_k, h).verdict:
        raise InternalInvariantViolation("extended trajectory level is not inert under the power")
    return entropy_wrt(phi_k, h, opts)


def trajectory_identity_check(f: Endo | EndoPower, k: int, m: int, fgen: FgSubgroup, n: int) -> bool:
    """Exact subgroup identity tying power trajectories to base trajectories.

    With ``H = T_(m+k-1)(f, fgen)``, checks
    ``T_n(f^k, H) == T_(k*n - k + 1)(f, H)`` by canonical-form equality.
    """
    k = operator.index(k)
    m = operator.index(m)
    n = operator.index(n)
    if min(k, m, n) < 1:
        raise ValueError("k, m, n must all be >= 1")
    phi = _as_power(f)
    h = partial_trajectory(phi, fgen, m + k - 1)
    lhs = partial_trajectory(power(phi, k), h, n)
    rhs = partial_trajectory(phi, h, k * n - k + 1)
    return lhs == rhs


def trajectory_invariance_report(
    f: Endo | EndoPower, h: FgSubgroup, k: int, opts: EntropyOptions | None = None
) -> TrajectoryInvarianceReport:
    """Entropy w.r.t. an inert ``h`` versus w.r.t. its k-step partial trajectory.

    For the base map these agree; ``equal`` records the exact comparison when
    both sides stabilize and is None otherwise.
    """
    opts = opts or EntropyOptions()
    phi = _as_power(f)
    left = entropy_wrt(phi, h, opts)
    right = entropy_wrt(phi, partial_trajectory(phi, h, k), opts)
    if isinstance(left, ExactLog) and isinstance(right, ExactLog):
        equal: Optional[bool] = left == right
    else:
        equal = None
    return TrajectoryInvarianceReport(left=left, right=right, equal=equal)


def log_law_report(
    f: Endo | EndoPower, k: int, fgen: FgSubgroup, opts: EntropyOptions | None = None
) -> LogLawReport:
    """Check ``entropy(f^k) = k * entropy(f)`` on the trajectory of a seed.

    ``law_holds`` is None when either entropy fails to stabilize.
    """
    opts = opts or EntropyOptions()
    k = operator.index(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    base = entropy_on_trajectory(f, fgen, opts)
    powered = entropy_power_on_trajectory(f, k, fgen, opts)
    scaled = base.scale(k) if isinstance(base, ExactLog) else None
    if scaled is not None and isinstance(powered, ExactLog):
        law: Optional[bool] = powered == scaled
    else:
        law = None
    return LogLawReport(
        k=k,
        entropy_base=base,
        entropy_power=powered,
        k_times_base=scaled,
        law_holds=law,
    )


def counterexample_report() -> CounterexampleReport:
    """Build and verify the shift-square counterexample; mismatches are fatal.

    Construction: the right shift on the sum of copies of Z/2, ``H``
    generated by ``e_0``, ``Hp = T_2(shift, H)``. Verified facts, all exact:

    * ``H``, ``Hp`` are inert under the shift and its square,
    * ``|T_n(shift^2, H) / H| = 2**(n-1)`` and
      ``|T_n(shift^2, Hp) / Hp| = 2**(2n-2)`` for ``n = 1 .. 8``,
    * entropy of the square w.r.t. ``H`` is ``log 2``, w.r.t. ``Hp`` is
      ``log 4``: distinct.
    """
    ambient = TorsionSum(2)
    shift = right_shift(ambient)
    phi = power(shift, 1)
    phi2 = power(shift, 2)
    h = groups.subgroup(ambient, [ambient.basis_element(0)])
    hp = partial_trajectory(phi, h, 2)
    expected_hp = groups.subgroup(ambient, [ambient.basis_element(0), ambient.basis_element(1)])
    if hp != expected_hp:
        raise InternalInvariantViolation("two-step trajectory of <e0> is not <e0, e1>")

    certificates = {
        "h_shift": inert_certificate(phi, h),
        "h_square": inert_certificate(phi2, h),
        "hp_shift": inert_certificate(phi, hp),
        "hp_square": inert_certificate(phi2, hp),
    }
    if not all(c.verdict for c in certificates.values()):
        raise InternalInvariantViolation("expected inert certificates failed")

    trace_h = growth_trace(phi2, h, 8)
    trace_hp = growth_trace(phi2, hp, 8)
    rows = []
    for n in range(1, 9):
        idx_h = trace_h.indices[n - 1]
        idx_hp = trace_hp.indices[n - 1]
        if idx_h != Cardinality.finite(2 ** (n - 1)):
            raise InternalInvariantViolation(f"|T_{n}(shift^2, H)/H| != 2**{n - 1}")
        if idx_hp != Cardinality.finite(2 ** (2 * n - 2)):
            raise InternalInvariantViolation(f"|T_{n}(shift^2, Hp)/Hp| != 2**{2 * n - 2}")
        rows.append((n, idx_h, idx_hp))

    ent_h = entropy_wrt(phi2, h, EntropyOptions(max_n=16, stability_window=4))
    ent_hp = entropy_wrt(phi2, hp, EntropyOptions(max_n=16, stability_window=4))
    if ent_h != ExactLog(2):
        raise InternalInvariantViolation("entropy of the square w.r.t. H is not log 2")
    if ent_hp != ExactLog(4):
        raise InternalInvariantViolation("entropy of the square w.r.t. Hp is not log 4")
    if ent_h == ent_hp:
        raise InternalInvariantViolation("counterexample entropies unexpectedly agree")

    return CounterexampleReport(
        h=h,
        h_prime=hp,
        rows=tuple(rows),
        entropy_h=ent_h,
        entropy_h_prime=ent_hp,
        certificates=certificates,
        distinct=True,
    )
