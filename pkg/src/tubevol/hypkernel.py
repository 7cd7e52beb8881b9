"""Scalar kernel: the Lobachevsky function, ideal-polyhedron volume
constants, and the closed-form tube/drilling volume estimates.

Everything here is a pure function of binary64 inputs.  The quantities all
concern a closed geodesic of length ``L`` with an embedded open tube of
radius ``R`` inside a hyperbolic 3-manifold of volume ``v_fill``, whose
complement (the drilled manifold) has volume ``v_drill``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "Constants",
    "CONSTANTS",
    "Factor",
    "TubeData",
    "V3",
    "V8",
    "VolumePair",
    "bound_base_B",
    "drilled_volume_bound",
    "factor_co",
    "factor_cp",
    "filled_volume_lower_bound",
    "horocusp_volume",
    "lobachevsky",
    "mean_curvature",
    "overshoot_ratio",
    "tube_boundary_area",
    "tube_volume",
]


# ---------------------------------------------------------------------------
# Lobachevsky function

# Coefficients of the integrated series for -int_0^s log(sin t / t) dt.
# log(sin t / t) = -sum_{n>=1} zeta(2n) t^(2n) / (n pi^(2n)), and
# zeta(2n)/pi^(2n) is rational, so term n is s^(2n+1)/(n (2n+1)) times it.
_SERIES_COEFFS = (
    1.0 / 18.0,
    1.0 / 900.0,
    1.0 / 19845.0,
    1.0 / 340200.0,
    1.0 / 5145525.0,
    691.0 / 49804004250.0,
)

# Integrate the log singularity at t=0 by series below this point.
_SPLIT = 0.1


def _series_piece(s: float) -> float:
    # -int_0^s log(2t) dt - int_0^s log(sin t / t) dt, valid for s <= _SPLIT
    if s == 0.0:
        return 0.0
    head = s - s * math.log(2.0 * s)
    s2 = s * s
    p = s2 * s
    tail = 0.0
    for c in _SERIES_COEFFS:
        tail += c * p
        p *= s2
    return head + tail


def _adaptive_simpson(f, a, b, tol):
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_split(f, a, b, fa, fb, m, fm, whole, tol, 48)


def _simpson_split(f, a, b, fa, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    if depth <= 0 or abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    half = 0.5 * tol
    return _simpson_split(f, a, m, fa, fm, lm, flm, left, half, depth - 1) + _simpson_split(
        f, m, b, fm, fb, rm, frm, right, half, depth - 1
    )


def lobachevsky(theta: float, tol: float = 1e-12) -> float:
    """Lobachevsky function Lambda(theta) = -int_0^theta log|2 sin t| dt.

    Accurate to about ``tol`` absolute.  The argument is first reduced using
    oddness and pi-periodicity to [0, pi/2]; the logarithmic singularity at
    t=0 is integrated in closed form plus a rapidly convergent series, and
    the smooth remainder by adaptive Simpson quadrature.
    """
    if not math.isfinite(theta):
        raise DomainError("lobachevsky: theta must be finite")
    if not 0.0 < tol <= 1e-6:
        raise DomainError("lobachevsky: tol must be in (0, 1e-6]")
    # Lambda(theta + k*pi) = Lambda(theta); reduce to x in [-pi/2, pi/2]
    x = theta - math.pi * round(theta / math.pi)
    sign = 1.0
    if x < 0.0:
        sign, x = -1.0, -x
    if x == 0.0:
        return 0.0
    s = min(x, _SPLIT)
    value = _series_piece(s)
    if x > s:
        value += _adaptive_simpson(lambda t: -math.log(2.0 * math.sin(t)), s, x, tol)
    return sign * value


# ---------------------------------------------------------------------------
# Constants


@dataclass(frozen=True)
class Constants:
    """Volumes of the regular ideal tetrahedron (v3) and octahedron (v8)."""

    v3: float
    v8: float


def _compute_constants() -> Constants:
    return Constants(
        v3=3.0 * lobachevsky(math.pi / 3.0, 1e-13),
        v8=8.0 * lobachevsky(math.pi / 4.0, 1e-13),
    )


CONSTANTS = _compute_constants()
V3 = CONSTANTS.v3
V8 = CONSTANTS.v8


# ---------------------------------------------------------------------------
# Domain types


def _require_positive_finite(value: float, what: str) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{what} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class TubeData:
    """Length of a closed geodesic and the radius of an embedded open tube
    about it, both in hyperbolic length units."""

    length: float
    radius: float

    def __post_init__(self):
        _require_positive_finite(self.length, "TubeData.length")
        _require_positive_finite(self.radius, "TubeData.radius")


@dataclass(frozen=True)
class VolumePair:
    """Volumes of a closed manifold and of its drilled complement.

    Drilling strictly increases volume, so 0 < v_fill < v_drill is enforced.
    """

    v_fill: float
    v_drill: float

    def __post_init__(self):
        _require_positive_finite(self.v_fill, "VolumePair.v_fill")
        _require_positive_finite(self.v_drill, "VolumePair.v_drill")
        if not self.v_drill > self.v_fill:
            raise DomainError(
                f"VolumePair: v_drill ({self.v_drill!r}) must strictly exceed "
                f"v_fill ({self.v_fill!r})"
            )


class Factor(enum.Enum):
    """Which multiplicative constant the drilled-volume estimate uses."""

    PERELMAN = "perelman"
    OLD = "old"


# ---------------------------------------------------------------------------
# Tube geometry


def tube_volume(t: TubeData) -> float:
    """Volume pi * L * sinh(R)^2 of the radius-R tube about the geodesic."""
    return math.pi * t.length * math.sinh(t.radius) ** 2


def tube_boundary_area(t: TubeData) -> float:
    """Area pi * L * sinh(2R) of the tube boundary torus."""
    return math.pi * t.length * math.sinh(2.0 * t.radius)


def mean_curvature(radius: float) -> float:
    """Mean curvature coth(2R) of the boundary of a radius-R tube.

    Equals (coth R + tanh R)/2; always > 1, tending to 1 as R grows.
    """
    _require_positive_finite(radius, "radius")
    return 1.0 / math.tanh(2.0 * radius)


def horocusp_volume(t: TubeData) -> float:
    """Volume of the horocusp whose boundary matches the tube boundary's
    area and mean curvature: (1/2) pi L sinh(2R) tanh(2R)."""
    two_r = 2.0 * t.radius
    return 0.5 * math.pi * t.length * math.sinh(two_r) * math.tanh(two_r)


# ---------------------------------------------------------------------------
# Drilling estimates


def bound_base_B(v_fill: float, t: TubeData) -> float:
    """Base term B = v_fill + pi L sinh(R)^2 sech(2R) of the drilling
    estimates; algebraically equal to v_fill + (pi/2) L tanh(R) tanh(2R)."""
    _require_positive_finite(v_fill, "v_fill")
    return v_fill + math.pi * t.length * math.sinh(t.radius) ** 2 / math.cosh(2.0 * t.radius)


def factor_co(radius: float) -> float:
    """Multiplier (coth R coth 2R)^(3/2) of the older drilling estimate."""
    _require_positive_finite(radius, "radius")
    return (1.0 / (math.tanh(radius) * math.tanh(2.0 * radius))) ** 1.5


def factor_cp(radius: float) -> float:
    """Multiplier coth(2R)^3 of the sharper drilling estimate."""
    _require_positive_finite(radius, "radius")
    return (1.0 / math.tanh(2.0 * radius)) ** 3


def _factor_value(radius: float, factor: Factor) -> float:
    if factor is Factor.PERELMAN:
        return factor_cp(radius)
    if factor is Factor.OLD:
        return factor_co(radius)
    raise DomainError(f"unknown factor {factor!r}")


def drilled_volume_bound(v_fill: float, t: TubeData, factor: Factor) -> float:
    """Upper bound C(R) * B for the volume of the drilled manifold.

    ``factor`` selects C = coth(2R)^3 (PERELMAN) or (coth R coth 2R)^(3/2)
    (OLD); the former is smaller, hence sharper, for every R.
    """
    return _factor_value(t.radius, factor) * bound_base_B(v_fill, t)


def overshoot_ratio(p: VolumePair, t: TubeData, factor: Factor = Factor.PERELMAN) -> float:
    """Estimate error (V_est - v_drill) / (v_drill - v_fill), where V_est is
    the drilled-volume bound.  Negative iff the record violates the bound."""
    v_est = drilled_volume_bound(p.v_fill, t, factor)
    return (v_est - p.v_drill) / (p.v_drill - p.v_fill)


def filled_volume_lower_bound(
    v_drill: float, t: TubeData, factor: Factor = Factor.PERELMAN
) -> float:
    """Lower bound for the filled volume, inverting the drilled-volume bound:
    v_drill / C(R) - pi L sinh(R)^2 sech(2R).  May be <= 0 (vacuous)."""
    _require_positive_finite(v_drill, "v_drill")
    correction = math.pi * t.length * math.sinh(t.radius) ** 2 / math.cosh(2.0 * t.radius)
    return v_drill / _factor_value(t.radius, factor) - correction
