"""Partial gaskets, their linear projections, and decay diagnostics.

The depth-n partial gasket is the union of 3^n right triangles of side
3^-n anchored at all depth-n sums of the digit vectors (0,0), (2,0),
(0,2).  Projecting onto a line through the origin sends each triangle to
the interval spanned by its three projected vertices; averaging the
projection measure over all directions gives the Favard (Buffon needle)
value, which decays as the depth grows.

Directions come in two flavours: an exact rational slope, for which the
projected set is computed entirely in rational arithmetic up to a single
cosine rescale, and a floating angle, for which endpoints are doubles
merged with a depth-scaled tolerance.  The exact mode exists to anchor
the numeric one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .cantor import slice_set
from .exact import Interval, IntervalUnion, Rational, RationalLike, as_rational, normalize

GASKET_DEPTH_CAP = 8

_DIGIT_VECTORS = ((0, 0), (2, 0), (0, 2))


@dataclass(frozen=True)
class GasketSpec:
    """Construction depth; 3^depth triangles of side 3^-depth."""

    depth: int
    cap: int = GASKET_DEPTH_CAP

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError(f"negative depth {self.depth}")
        if self.depth > self.cap:
            raise ValueError(f"depth {self.depth} exceeds cap {self.cap}")


@dataclass(frozen=True)
class Direction:
    """Projection direction: exact rational slope or floating angle.

    Exactly one of the two must be set.  Slope mode means tan(theta) =
    slope with theta in (0, pi/2); angle mode takes any theta in [0, pi).
    """

    slope: Rational | None = None
    angle: float | None = None

    def __post_init__(self) -> None:
        if (self.slope is None) == (self.angle is None):
            raise ValueError("set exactly one of slope / angle")
        if self.slope is not None:
            object.__setattr__(self, "slope", as_rational(self.slope))
            if self.slope <= 0:
                raise ValueError(f"slope must be positive, got {self.slope}")
        else:
            if not math.isfinite(self.angle):
                raise ValueError(f"angle must be finite, got {self.angle}")
            if not 0 <= self.angle < math.pi:
                raise ValueError(f"angle {self.angle} outside [0, pi)")

    @classmethod
    def from_slope(cls, slope: RationalLike) -> "Direction":
        return cls(slope=as_rational(slope))

    @classmethod
    def from_angle(cls, angle: float) -> "Direction":
        return cls(angle=float(angle))


def gasket_anchors(spec: GasketSpec) -> tuple[tuple[Rational, Rational], ...]:
    """Lower-left corners of all generation-depth triangles.

    Emitted in digit-enumeration order, (0,0) branch first, so the output
    is deterministic; all 3^depth anchors are distinct.
    """
    anchors: list[tuple[Fraction, Fraction]] = [(Fraction(0), Fraction(0))]
    for k in range(1, spec.depth + 1):
        step = Fraction(1, 3**k)
        anchors = [
            (x + vx * step, y + vy * step)
            for x, y in anchors
            for vx, vy in _DIGIT_VECTORS
        ]
    return tuple(anchors)


def _anchor_array(depth: int) -> np.ndarray:
    pts = np.zeros((1, 2))
    vecs = np.array(_DIGIT_VECTORS, dtype=np.float64)
    for k in range(1, depth + 1):
        pts = (pts[:, None, :] + vecs[None, :, :] / 3.0**k).reshape(-1, 2)
    return pts


@dataclass(frozen=True)
class ExactProjection:
    """Projection in slope mode: exact set divided by cos(theta).

    ``scaled_set`` collects the intervals x + slope*y swept by each
    triangle, exactly; the true projected measure is the exact scaled
    measure times the cosine, applied numerically at the boundary.
    """

    scaled_set: IntervalUnion
    cosine: float

    @property
    def measure(self) -> float:
        return float(self.scaled_set.measure) * self.cosine


@dataclass(frozen=True)
class NumericProjection:
    """Projection in angle mode: merged double-precision intervals."""

    parts: tuple[tuple[float, float], ...]
    measure: float


def project(spec: GasketSpec, direction: Direction) -> ExactProjection | NumericProjection:
    """Projection of the partial gasket onto a line with the direction."""
    if direction.slope is not None:
        return _project_exact(spec, direction.slope)
    return _project_numeric(spec, direction.angle)


def _project_exact(spec: GasketSpec, slope: Fraction) -> ExactProjection:
    width = Fraction(1, 3**spec.depth) * max(Fraction(1), slope)
    parts = []
    for x, y in gasket_anchors(spec):
        lo = x + slope * y
        parts.append(Interval(lo, lo + width))
    cosine = 1.0 / math.sqrt(1.0 + float(slope) ** 2)
    return ExactProjection(scaled_set=normalize(parts), cosine=cosine)


def _merged_measure(lo: np.ndarray, hi: np.ndarray, tol: float) -> tuple[list[tuple[float, float]], float]:
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    parts: list[tuple[float, float]] = []
    cur_lo, cur_hi = float(lo[0]), float(hi[0])
    for L, H in zip(lo[1:], hi[1:]):
        if L <= cur_hi + tol:
            if H > cur_hi:
                cur_hi = float(H)
        else:
            parts.append((cur_lo, cur_hi))
            cur_lo, cur_hi = float(L), float(H)
    parts.append((cur_lo, cur_hi))
    return parts, math.fsum(b - a for a, b in parts)


def _projected_endpoints(pts: np.ndarray, depth: int, theta: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(theta), math.sin(theta)
    w = 3.0**-depth
    base = pts[:, 0] * c + pts[:, 1] * s
    corners = np.stack([base, base + c * w, base + s * w], axis=1)
    return corners.min(axis=1), corners.max(axis=1)


def _project_numeric(spec: GasketSpec, theta: float) -> NumericProjection:
    pts = _anchor_array(spec.depth)
    lo, hi = _projected_endpoints(pts, spec.depth, theta)
    tol = 1e-12 * 3**spec.depth
    parts, total = _merged_measure(lo, hi, tol)
    return NumericProjection(parts=tuple(parts), measure=total)


def _numeric_measure(pts: np.ndarray, depth: int, theta: float) -> float:
    lo, hi = _projected_endpoints(pts, depth, theta)
    _, total = _merged_measure(lo, hi, 1e-12 * 3**depth)
    return total


def favard(spec: GasketSpec, quad_points: int) -> float:
    """Midpoint estimate of the direction-averaged projection measure.

    Uniform midpoint grid over [0, pi); the gasket's symmetry under
    swapping coordinates pairs midpoints theta and pi/2 - theta (mod pi),
    halving the evaluations for even grids.  Summation order is fixed by
    grid index, so the result is deterministic.
    """
    if quad_points < 16:
        raise ValueError(f"need at least 16 quadrature points, got {quad_points}")
    pts = _anchor_array(spec.depth)
    step = math.pi / quad_points
    multiplicity: dict[int, int] = {}
    for i in range(quad_points):
        if quad_points % 2 == 0:
            partner = (quad_points // 2 - 1 - i) % quad_points
            rep = min(i, partner)
        else:
            rep = i
        multiplicity[rep] = multiplicity.get(rep, 0) + 1
    total = math.fsum(
        _numeric_measure(pts, spec.depth, (rep + 0.5) * step) * count
        for rep, count in sorted(multiplicity.items())
    )
    return total / quad_points


@dataclass(frozen=True)
class SliceBoundRow:
    """One height of the slice-vs-projection comparison."""

    depth: int
    t: Rational
    lhs: Rational
    rhs: float
    ratio: float
    ok: bool


def lemma1_check(
    depth: int, t_grid: Sequence[RationalLike], tolerance: float = 1e-9
) -> list[SliceBoundRow]:
    """Compare exact slice measures against the projection bound.

    For each t the left side is the exact measure of the depth-n slice
    set and the right side is (1+t) times the numeric projection measure
    at the angle whose tangent is (2-t)/(1+t).  Rows report the ratio;
    the literal inequality is known to fail for some t (the projected
    set matches the slice set only up to an affine rescale), so failures
    are flagged, never hidden.
    """
    spec = GasketSpec(depth)
    pts = _anchor_array(depth)
    rows = []
    for t_raw in t_grid:
        t = as_rational(t_raw)
        if not 0 <= t <= 1:
            raise ValueError(f"grid height {t} outside [0, 1]")
        lhs = slice_set(depth, t).measure
        phi = math.atan(float((2 - t) / (1 + t)))
        rhs = float(1 + t) * _numeric_measure(pts, depth, phi)
        ratio = float(lhs) / rhs if rhs else math.inf
        rows.append(
            SliceBoundRow(
                depth=depth,
                t=t,
                lhs=lhs,
                rhs=rhs,
                ratio=ratio,
                ok=float(lhs) <= rhs + tolerance,
            )
        )
    return rows


def _adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int = 48
) -> float:
    """Classic recursive Simpson with the 15x error heuristic."""

    def simp(fa: float, fm: float, fb: float, a: float, b: float) -> float:
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simp(fa, flm, fm, a, m)
        right = simp(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return rec(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(
            m, b, fm, frm, fb, right, tol / 2.0, depth - 1
        )

    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    return rec(a, b, fa, fm, fb, simp(fa, fm, fb, a, b), tol, max_depth)


def _singular_exp_integral(n: float, p: float) -> float:
    """Integral of exp(x) * x^-p over [0, n] for p in (0, 1).

    Split at x = 1.  On [0, 1] the substitution u = x^(1-p) absorbs the
    singularity exactly: the integrand becomes exp(u^(1/(1-p))) / (1-p),
    smooth and bounded.  On [1, n] plain adaptive Simpson with a
    tolerance relative to the exponential scale.
    """
    top = min(1.0, n)
    u_top = top ** (1.0 - p)
    inner = 1.0 / (1.0 - p)
    smooth = lambda u: math.exp(u**inner)
    part1 = _adaptive_simpson(smooth, 0.0, u_top, 1e-12) / (1.0 - p)
    if n <= 1.0:
        return part1
    g = lambda x: math.exp(x) * x**-p
    part2 = _adaptive_simpson(g, 1.0, n, 1e-13 * g(n) * max(1.0, n - 1.0))
    return part1 + part2


@dataclass(frozen=True)
class ExpBoundRow:
    """One grid point of the singular-integral growth comparison."""

    n: float
    integral: float
    bound: float
    ratio: float


def lemma2_check(p: float, n_values: Iterable[float]) -> list[ExpBoundRow]:
    """Ratios of the singular integral to its claimed e^n n^-p envelope.

    The ratios stay finite and drift down toward 1 as n grows, which is
    the testable content of the bound.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"exponent p must lie in (0, 1), got {p}")
    rows = []
    for n in n_values:
        n = float(n)
        if n <= 0:
            raise ValueError(f"grid value {n} must be positive")
        integral = _singular_exp_integral(n, p)
        bound = math.exp(n) * n**-p
        rows.append(ExpBoundRow(n=n, integral=integral, bound=bound, ratio=integral / bound))
    return rows


@dataclass(frozen=True)
class DecayFit:
    """Power-law fit value ~ C * m^-p by least squares in log-log space."""

    pairs: tuple[tuple[float, float], ...]
    c: float
    p: float
    residual: float


def decay_fit(pairs: Sequence[tuple[float, float]]) -> DecayFit:
    """Fit log value = log C - p log m; residual is the log-space RMS."""
    cleaned = tuple((float(m), float(v)) for m, v in pairs)
    if len(cleaned) < 3:
        raise ValueError(f"need at least 3 pairs, got {len(cleaned)}")
    for m, v in cleaned:
        if m < 1:
            raise ValueError(f"scale index {m} must be >= 1")
        if v <= 0:
            raise ValueError(f"value {v} must be positive")
    xs = [math.log(m) for m, _ in cleaned]
    ys = [math.log(v) for _, v in cleaned]
    mean_x = math.fsum(xs) / len(xs)
    mean_y = math.fsum(ys) / len(ys)
    var = math.fsum((x - mean_x) ** 2 for x in xs)
    if var == 0.0:
        raise ValueError("all scale indices coincide; nothing to fit")
    slope = math.fsum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / var
    intercept = mean_y - slope * mean_x
    residual = math.sqrt(
        math.fsum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys)) / len(xs)
    )
    return DecayFit(pairs=cleaned, c=math.exp(intercept), p=-slope, residual=residual)
