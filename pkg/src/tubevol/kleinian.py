"""Geometry of the upper half-space model of hyperbolic 3-space.

Isometries are 2x2 complex matrices of determinant 1 acting on the extended
complex plane by fractional linear maps and on half-space by the Poincare
extension.  The module classifies elements, extracts complex translation
lengths and axes, measures the complex distance between geodesics, and
searches group presentations for the closest distinct lift of a geodesic,
which bounds the embedded tube radius from above.

Results of the tube-radius search are meaningful only when the input group
is discrete; discreteness is not verified here.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .errors import DomainError, NonLoxodromicError, ParseError

__all__ = [
    "ComplexDistance",
    "GeodesicLine",
    "GroupPresentation",
    "H3Point",
    "INFINITY",
    "MobiusClass",
    "MobiusTransform",
    "TubeRadiusResult",
    "axis",
    "classify",
    "complex_length",
    "evaluate_word",
    "is_infinity",
    "line_distance",
    "line_distance_oracle",
    "point_distance",
    "read_presentation",
    "tube_radius_upper_bound",
]

_CLASSIFY_TOL = 1e-9
_SAME_LINE_TOL = 1e-9


class _PointAtInfinity:
    """The ideal point at infinity of the extended complex plane."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _PointAtInfinity()

ExtendedPoint = complex | _PointAtInfinity


def is_infinity(p) -> bool:
    return isinstance(p, _PointAtInfinity)


def _finite_complex(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


# beyond this magnitude a point is within 2e-150 of INFINITY on the sphere,
# and squaring it would overflow
_HUGE = 1e150


def _chordal(p: ExtendedPoint, q: ExtendedPoint) -> float:
    """Chordal distance on the Riemann sphere; a bounded metric that treats
    INFINITY like any other point."""
    p_far = is_infinity(p) or abs(p) > _HUGE
    q_far = is_infinity(q) or abs(q) > _HUGE
    if p_far and q_far:
        return 0.0
    if p_far:
        return 2.0 / math.hypot(1.0, abs(q))
    if q_far:
        return 2.0 / math.hypot(1.0, abs(p))
    return 2.0 * abs(p - q) / (math.hypot(1.0, abs(p)) * math.hypot(1.0, abs(q)))


# ---------------------------------------------------------------------------
# Mobius transformations


@dataclass(frozen=True)
class MobiusTransform:
    """2x2 complex matrix, normalized at construction to determinant 1."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(v) for v in (self.a, self.b, self.c, self.d))
        if not all(_finite_complex(v) for v in (a, b, c, d)):
            raise DomainError("MobiusTransform: entries must be finite")
        det = a * d - b * c
        if det == 0:
            raise DomainError("MobiusTransform: matrix is singular")
        s = cmath.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
        if abs(a * d - b * c - 1.0) > 1e-10:
            raise DomainError("MobiusTransform: could not normalize determinant")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "MobiusTransform":
        return cls(1.0, 0.0, 0.0, 1.0)

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MobiusTransform") -> "MobiusTransform":
        return MobiusTransform(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def trace(self) -> complex:
        return self.a + self.d

    def apply(self, p: ExtendedPoint) -> ExtendedPoint:
        """Fractional linear action on the extended complex plane."""
        if is_infinity(p):
            return INFINITY if self.c == 0 else self.a / self.c
        den = self.c * p + self.d
        if den == 0:
            return INFINITY
        return (self.a * p + self.b) / den

    def apply_to_line(self, line: "GeodesicLine") -> "GeodesicLine":
        return GeodesicLine(self.apply(line.p), self.apply(line.q))

    def apply_h3(self, point: "H3Point") -> "H3Point":
        """Poincare extension: action on an interior point of half-space."""
        z, t = complex(point.w), float(point.t)
        cz_d = self.c * z + self.d
        den = abs(cz_d) ** 2 + (abs(self.c) * t) ** 2
        w = ((self.a * z + self.b) * cz_d.conjugate() + self.a * self.c.conjugate() * t * t) / den
        return H3Point(w, t / den)


class MobiusClass(enum.Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"


def classify(m: MobiusTransform) -> MobiusClass:
    """Classify by trace: tr^2 = 4 is parabolic (or +-identity), real trace
    of modulus < 2 is elliptic, anything else is loxodromic."""
    for sign in (1.0, -1.0):
        if max(abs(m.a - sign), abs(m.b), abs(m.c), abs(m.d - sign)) < _CLASSIFY_TOL:
            return MobiusClass.IDENTITY
    t = m.trace()
    if abs(t * t - 4.0) < _CLASSIFY_TOL:
        return MobiusClass.PARABOLIC
    if abs(t.imag) < _CLASSIFY_TOL and abs(t.real) < 2.0:
        return MobiusClass.ELLIPTIC
    return MobiusClass.LOXODROMIC


def complex_length(m: MobiusTransform) -> complex:
    """Complex translation length ell + i*theta of a loxodromic element,
    with ell > 0 and theta in (-pi, pi]; satisfies tr = +-2 cosh(length/2)."""
    if classify(m) is not MobiusClass.LOXODROMIC:
        raise NonLoxodromicError("complex_length: element is not loxodromic")
    t = m.trace()
    s = cmath.sqrt(t * t - 4.0)
    eig = 0.5 * (t + s)
    if abs(eig) < 1.0:
        eig = 0.5 * (t - s)
    lam = 2.0 * cmath.log(eig)
    theta = math.remainder(lam.imag, math.tau)
    if theta <= -math.pi:
        theta += math.tau
    return complex(lam.real, theta)


# ---------------------------------------------------------------------------
# Geodesics


def _point_key(p: ExtendedPoint):
    if is_infinity(p):
        return (0, 0.0, 0.0)
    return (1, p.real, p.imag)


@dataclass(frozen=True)
class GeodesicLine:
    """Geodesic of half-space, recorded by its unordered pair of distinct
    ideal endpoints (INFINITY sorts first, then lexicographic)."""

    p: ExtendedPoint
    q: ExtendedPoint

    def __post_init__(self):
        for v in (self.p, self.q):
            if not is_infinity(v) and not _finite_complex(complex(v)):
                raise DomainError("GeodesicLine: endpoints must be finite or INFINITY")
        p = self.p if is_infinity(self.p) else complex(self.p)
        q = self.q if is_infinity(self.q) else complex(self.q)
        if _point_key(p) == _point_key(q):
            raise DomainError("GeodesicLine: endpoints must be distinct")
        if _point_key(q) < _point_key(p):
            p, q = q, p
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def same_line(self, other: "GeodesicLine", tol: float = _SAME_LINE_TOL) -> bool:
        """Whether the endpoint sets agree within ``tol`` in the chordal
        metric (canonical ordering makes the straight comparison suffice,
        but both pairings are checked for robustness near ties)."""
        return (
            _chordal(self.p, other.p) < tol and _chordal(self.q, other.q) < tol
        ) or (_chordal(self.p, other.q) < tol and _chordal(self.q, other.p) < tol)


def axis(m: MobiusTransform) -> GeodesicLine:
    """Axis of a loxodromic element: the geodesic joining its fixed points."""
    if classify(m) is not MobiusClass.LOXODROMIC:
        raise NonLoxodromicError("axis: element is not loxodromic")
    a, b, c, d = m.a, m.b, m.c, m.d
    scale = max(abs(a), abs(b), abs(c), abs(d), 1.0)
    if abs(c) <= 1e-14 * scale:
        return GeodesicLine(b / (d - a), INFINITY)
    # roots of c z^2 + (d - a) z - b, picking the larger-magnitude branch
    # first to dodge cancellation
    u = a - d
    s = cmath.sqrt(u * u + 4.0 * b * c)
    z1 = (u + s) / (2.0 * c) if abs(u + s) >= abs(u - s) else (u - s) / (2.0 * c)
    z2 = (-b / c) / z1 if b != 0 else u / c - z1
    return GeodesicLine(z1, z2)


# ---------------------------------------------------------------------------
# Distances


class H3Point(NamedTuple):
    """Interior point of upper half-space: horizontal coordinate and height."""

    w: complex
    t: float


def point_distance(p1: H3Point, p2: H3Point) -> float:
    """Hyperbolic distance between interior points of half-space."""
    if not (p1.t > 0.0 and p2.t > 0.0):
        raise DomainError("point_distance: heights must be positive")
    q = (abs(p1.w - p2.w) ** 2 + (p1.t - p2.t) ** 2) / (2.0 * p1.t * p2.t)
    return math.acosh(1.0 + q)


@dataclass(frozen=True)
class ComplexDistance:
    """Complex distance along the common perpendicular of two geodesics:
    nonnegative real distance d and relative rotation phi in (-pi, pi].
    The angle convention follows the principal branch of acosh applied to
    the endpoint cross-ratio and is not load-bearing."""

    d: float
    phi: float
    same_line: bool = False


def _to_zero_infinity(line: GeodesicLine) -> MobiusTransform:
    """A transformation sending line.p to 0 and line.q to INFINITY."""
    p, q = line.p, line.q
    if is_infinity(p):
        return MobiusTransform(0.0, 1.0, 1.0, -q)
    if is_infinity(q):
        return MobiusTransform(1.0, -p, 0.0, 1.0)
    return MobiusTransform(1.0, -p, 1.0, -q)


def line_distance(g1: GeodesicLine, g2: GeodesicLine) -> ComplexDistance:
    """Complex distance between two geodesics.

    d is the minimal hyperbolic distance between them: 0 when they meet or
    share an ideal endpoint.  Identical lines are flagged ``same_line``.
    d is invariant under applying one transformation to both lines; phi only
    up to the branch convention.
    """
    if g1.same_line(g2):
        return ComplexDistance(0.0, 0.0, same_line=True)
    m = _to_zero_infinity(g1)
    u = m.apply(g2.p)
    v = m.apply(g2.q)
    # cross-ratio x of (0, INFINITY; u, v) is u/v; cosh(eta) = (1+x)/(1-x)
    if is_infinity(u) or v == 0:
        return ComplexDistance(0.0, math.pi)
    if is_infinity(v) or u == 0:
        return ComplexDistance(0.0, 0.0)
    x = u / v
    if x == 1.0:
        raise DomainError("line_distance: degenerate endpoint configuration")
    eta = cmath.acosh((1.0 + x) / (1.0 - x))
    d = max(eta.real, 0.0)
    phi = eta.imag
    if phi <= -math.pi:
        phi += math.tau
    return ComplexDistance(d, phi)


def _points_on_line(line: GeodesicLine, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Arclength parameterization: images of (0, e^s) on the vertical axis
    under the map taking (0, INFINITY) back to ``line``."""
    m = _to_zero_infinity(line).inverse()
    t = np.exp(s)
    t2 = t * t
    den = abs(m.d) ** 2 + (abs(m.c) ** 2) * t2
    w = (m.b * np.conj(m.d) + m.a * np.conj(m.c) * t2) / den
    return w, t / den


def _pair_distance(w1, t1, w2, t2):
    q = (np.abs(w1 - w2) ** 2 + (t1 - t2) ** 2) / (2.0 * t1 * t2)
    return np.arccosh(1.0 + q)


def line_distance_oracle(
    g1: GeodesicLine,
    g2: GeodesicLine,
    grid: int = 64,
    span: float = 10.0,
    refine: bool = True,
) -> float:
    """Brute-force minimal distance between two geodesics.

    Both lines are parameterized by arclength over [-span, span]; the
    minimum of the pairwise point distance over a grid x grid lattice is
    then polished by a local search.  Intended as an independent check of
    ``line_distance`` on non-asymptotic pairs whose common perpendicular
    meets the parameterized segments.
    """
    if grid < 2:
        raise DomainError("line_distance_oracle: grid must be >= 2")
    s = np.linspace(-span, span, grid)
    w1, t1 = _points_on_line(g1, s)
    w2, t2 = _points_on_line(g2, s)
    dmat = _pair_distance(w1[:, None], t1[:, None], w2[None, :], t2[None, :])
    flat = int(np.argmin(dmat))
    i, j = divmod(flat, grid)
    coarse = float(dmat[i, j])
    if not refine:
        return coarse

    def objective(x):
        a1, h1 = _points_on_line(g1, np.array([x[0]]))
        a2, h2 = _points_on_line(g2, np.array([x[1]]))
        return float(_pair_distance(a1[0], h1[0], a2[0], h2[0]))

    res = optimize.minimize(
        objective,
        x0=[s[i], s[j]],
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 600},
    )
    return min(coarse, float(res.fun))


# ---------------------------------------------------------------------------
# Tube radius search


@dataclass(frozen=True)
class GroupPresentation:
    """Generators of a Kleinian group plus the word whose axis projects to
    the geodesic under study.  Words use 'a'..'z' for generators and the
    corresponding capitals for inverses."""

    generators: tuple[MobiusTransform, ...]
    core_word: str

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise DomainError("GroupPresentation: need at least one generator")
        if len(self.generators) > 26:
            raise DomainError("GroupPresentation: at most 26 generators")
        if not self.core_word:
            raise DomainError("GroupPresentation: core_word must be nonempty")
        core = evaluate_word(self.generators, self.core_word)
        if classify(core) is not MobiusClass.LOXODROMIC:
            raise NonLoxodromicError("GroupPresentation: core word is not loxodromic")

    def core(self) -> MobiusTransform:
        return evaluate_word(self.generators, self.core_word)


def _letter_matrix(generators, letter: str) -> MobiusTransform:
    if letter.islower():
        index = ord(letter) - ord("a")
        invert = False
    elif letter.isupper():
        index = ord(letter) - ord("A")
        invert = True
    else:
        raise DomainError(f"invalid word letter {letter!r}")
    if not 0 <= index < len(generators):
        raise DomainError(f"word letter {letter!r} has no generator")
    gen = generators[index]
    return gen.inverse() if invert else gen


def evaluate_word(generators, word: str) -> MobiusTransform:
    """Product of generator matrices spelled by ``word``."""
    if not word:
        raise DomainError("evaluate_word: empty word")
    m = _letter_matrix(generators, word[0])
    for ch in word[1:]:
        m = m @ _letter_matrix(generators, ch)
    return m


def _letters(count: int) -> list[str]:
    out = []
    for i in range(count):
        out.append(chr(ord("a") + i))
        out.append(chr(ord("A") + i))
    return out


def _sign_normalized_key(m: MobiusTransform, digits: int = 9):
    entries = (m.a, m.b, m.c, m.d)
    ref = max(entries, key=abs)
    flip = ref.real < 0 or (ref.real == 0 and ref.imag < 0)
    s = -1.0 if flip else 1.0
    return tuple(round(x, digits) for e in entries for x in ((s * e).real, (s * e).imag))


class TubeRadiusResult(NamedTuple):
    radius: float
    witness: str | None


def tube_radius_upper_bound(
    g: GroupPresentation, max_word_length: int
) -> TubeRadiusResult:
    """Upper bound on the tube radius about the core geodesic: half the
    minimal distance from the core's axis to its image under any reduced
    word of length <= max_word_length that moves the axis.

    Longer words could bring lifts closer, so the result only bounds the
    radius from above.  Words stabilizing the axis (powers of the core and
    other axis-preserving elements) are excluded; duplicate matrices are
    searched once.  Returns radius = inf with witness None when no distinct
    lift shows up within the search.
    """
    if max_word_length < 1:
        raise DomainError("tube_radius_upper_bound: max_word_length must be >= 1")
    core_axis = axis(g.core())
    letters = _letters(len(g.generators))
    matrices = {letter: _letter_matrix(g.generators, letter) for letter in letters}

    best_d = math.inf
    best_word: str | None = None
    seen: set[tuple] = set()
    frontier: list[tuple[str, MobiusTransform]] = [("", MobiusTransform.identity())]
    for _ in range(max_word_length):
        next_frontier = []
        for word, m in frontier:
            for letter in letters:
                if word and word[-1] == letter.swapcase():
                    continue  # free reduction
                new_word = word + letter
                new_m = m @ matrices[letter]
                key = _sign_normalized_key(new_m)
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append((new_word, new_m))
                image = new_m.apply_to_line(core_axis)
                cd = line_distance(core_axis, image)
                if cd.same_line:
                    continue
                if cd.d < best_d:
                    best_d = cd.d
                    best_word = new_word
        frontier = next_frontier
    if best_word is None:
        return TubeRadiusResult(math.inf, None)
    return TubeRadiusResult(0.5 * best_d, best_word)


# ---------------------------------------------------------------------------
# Presentation files


def read_presentation(path) -> GroupPresentation:
    """Read a presentation: one generator per line as eight decimals
    (re/im of a, b, c, d), then a line ``core: <word>``."""
    generators = []
    core_word = None
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("core:"):
                core_word = line[len("core:") :].strip()
                continue
            parts = line.split()
            if len(parts) != 8:
                raise ParseError(f"{path}: line {lineno}: expected 8 values, got {len(parts)}")
            try:
                v = [float(p) for p in parts]
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
            generators.append(
                MobiusTransform(
                    complex(v[0], v[1]),
                    complex(v[2], v[3]),
                    complex(v[4], v[5]),
                    complex(v[6], v[7]),
                )
            )
    if core_word is None:
        raise ParseError(f"{path}: missing 'core: <word>' line")
    return GroupPresentation(tuple(generators), core_word)
