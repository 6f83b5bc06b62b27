"""Boundary-anchored interval map families.

Five families are supported: the logistic map q_a, the tent map T_a, the
sawtooth composition T_b o T_a, the boundary-anchored cubic on [-1, 1] and
the quartic composition q_mu o q_lambda.  Every constructor returns an
immutable :class:`ModalMap` whose critical points and shape have been
computed and whose boundary anchoring has been checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

ANCHOR_TOL = 1e-12
TANGENCY_TOL = 1e-9


class MapError(ValueError):
    """Invalid map parameters."""


class DegenerateMapError(MapError):
    """The map does not have distinct real critical points."""


class DomainError(MapError):
    """A point lies outside the map's domain."""


class Family(Enum):
    LOGISTIC = "logistic"
    TENT = "tent"
    SAWTOOTH = "sawtooth"
    CUBIC = "cubic"
    QUARTIC = "quartic"


class Shape(Enum):
    POSITIVE = 1
    NEGATIVE = -1


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise MapError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    @property
    def width(self):
        return self.hi - self.lo


UNIT = Interval(0.0, 1.0)
SYMMETRIC = Interval(-1.0, 1.0)


@dataclass(frozen=True)
class CubicParams:
    """f(x) = alpha x^3 + beta x^2 + (-sigma1 - alpha) x - beta on [-1, 1]."""

    alpha: float
    beta: float
    sigma1: int = -1

    @property
    def shape(self) -> Shape:
        return Shape.POSITIVE if self.sigma1 == -1 else Shape.NEGATIVE

    @property
    def discriminant(self) -> float:
        # quarter of the discriminant of f'(x) = 3 alpha x^2 + 2 beta x + (-sigma1 - alpha)
        return self.beta**2 - 3.0 * self.alpha * (-self.sigma1 - self.alpha)


@dataclass(frozen=True)
class QuarticParams:
    lam: float
    mu: float


@dataclass(frozen=True)
class SawtoothParams:
    a: float
    b: float


# --- raw formulas; they accept floats or numpy arrays ----------------------

def _logistic(a, x):
    return a * x * (1.0 - x)


def _tent(a, x):
    return a * (0.5 - abs(x - 0.5))


def _formula(family, params, x):
    if family is Family.LOGISTIC:
        return _logistic(params[0], x)
    if family is Family.TENT:
        return _tent(params[0], x)
    if family is Family.SAWTOOTH:
        a, b = params
        return _tent(b, _tent(a, x))
    if family is Family.QUARTIC:
        lam, mu = params
        return _logistic(mu, _logistic(lam, x))
    if family is Family.CUBIC:
        alpha, beta, sigma1 = params
        return ((alpha * x + beta) * x + (-sigma1 - alpha)) * x - beta
    raise MapError(f"unknown family {family!r}")


@dataclass(frozen=True)
class ModalMap:
    """An l-modal boundary-anchored interval map.

    ``critical_points`` are the interior turning points in increasing order;
    ``shape`` records whether the map increases on its first lap.  Calling
    the map evaluates it without the domain check and clips the result to the
    domain, which only ever removes a few ulps of rounding.
    """

    family: Family
    params: tuple
    domain: Interval
    critical_points: tuple
    shape: Shape

    @property
    def modality(self) -> int:
        return len(self.critical_points)

    def __call__(self, x):
        y = _formula(self.family, self.params, x)
        lo, hi = self.domain.lo, self.domain.hi
        if isinstance(y, np.ndarray):
            return np.clip(y, lo, hi)
        return lo if y < lo else hi if y > hi else y

    def __str__(self):
        args = ", ".join(f"{p:g}" for p in self.params)
        return f"{self.family.value}({args})"


def evaluate(fmap: ModalMap, x: float) -> float:
    """Return f(x), raising :class:`DomainError` if x is outside the domain."""
    if not (fmap.domain.lo <= x <= fmap.domain.hi):
        raise DomainError(f"x={x!r} outside [{fmap.domain.lo}, {fmap.domain.hi}]")
    return fmap(x)


def _validated(fmap: ModalMap) -> ModalMap:
    lo, hi = fmap.domain.lo, fmap.domain.hi
    for end in (lo, hi):
        y = _formula(fmap.family, fmap.params, end)
        if min(abs(y - lo), abs(y - hi)) > ANCHOR_TOL:
            raise MapError(f"{fmap} is not boundary anchored: f({end}) = {y}")
    for c in fmap.critical_points:
        if not lo < c < hi:
            raise MapError(f"critical point {c} of {fmap} not interior")
        y = _formula(fmap.family, fmap.params, c)
        if y < lo - ANCHOR_TOL or y > hi + ANCHOR_TOL:
            raise MapError(f"{fmap} does not map the domain into itself: f({c}) = {y}")
    return fmap


# --- critical points --------------------------------------------------------

def critical_points_cubic(p: CubicParams) -> tuple[float, float]:
    """Ordered zeros of f'(x) = 3 alpha x^2 + 2 beta x + (-sigma1 - alpha)."""
    disc = p.discriminant
    if p.alpha == 0 or not disc > 0:
        raise DegenerateMapError(
            f"cubic alpha={p.alpha}, beta={p.beta} has no distinct real critical points"
        )
    root = math.sqrt(disc)
    c1 = (-p.beta - root) / (3.0 * p.alpha)
    c2 = (-p.beta + root) / (3.0 * p.alpha)
    return (c1, c2) if c1 < c2 else (c2, c1)


def _inner_crosses_half(peak: float) -> bool:
    """Whether a unimodal inner factor with maximum ``peak`` crosses 1/2.

    For g o h with h, g unimodal on [0, 1] and turning at 1/2, the
    composition turns at 1/2 and, when h(1/2) clears 1/2, also at the two
    solutions of h(x) = 1/2.  Near-tangency collapses to the single point.
    """
    return peak > 0.5 + TANGENCY_TOL


def critical_points_quartic(p: QuarticParams) -> tuple:
    if not _inner_crosses_half(p.lam / 4.0):
        return (0.5,)
    d = math.sqrt(1.0 - 2.0 / p.lam)
    return ((1.0 - d) / 2.0, 0.5, (1.0 + d) / 2.0)


def critical_points_sawtooth(p: SawtoothParams) -> tuple:
    if not _inner_crosses_half(p.a / 2.0):
        return (0.5,)
    return (0.5 / p.a, 0.5, 1.0 - 0.5 / p.a)


def exact_sawtooth_entropy(p: SawtoothParams) -> float:
    """Entropy of the constant-slope map T_b o T_a, max(0, log a + log b)."""
    if p.a <= 0 or p.b <= 0:
        return 0.0
    return max(0.0, math.log(p.a) + math.log(p.b))


# --- constructors -----------------------------------------------------------

def _check_range(name, value, lo, hi):
    if not lo <= value <= hi:
        raise MapError(f"{name}={value} outside [{lo}, {hi}]")


def logistic(a: float) -> ModalMap:
    _check_range("a", a, 0.0, 4.0)
    crit = (0.5,) if a > 0 else ()
    return _validated(ModalMap(Family.LOGISTIC, (float(a),), UNIT, crit, Shape.POSITIVE))


def tent(a: float) -> ModalMap:
    _check_range("a", a, 0.0, 2.0)
    crit = (0.5,) if a > 0 else ()
    return _validated(ModalMap(Family.TENT, (float(a),), UNIT, crit, Shape.POSITIVE))


def sawtooth(a: float, b: float) -> ModalMap:
    """S = T_b o T_a (T_a is applied first)."""
    _check_range("a", a, 0.0, 2.0)
    _check_range("b", b, 0.0, 2.0)
    crit = critical_points_sawtooth(SawtoothParams(a, b)) if a > 0 and b > 0 else ()
    return _validated(
        ModalMap(Family.SAWTOOTH, (float(a), float(b)), UNIT, crit, Shape.POSITIVE)
    )


def quartic(lam: float, mu: float) -> ModalMap:
    """f = q_mu o q_lambda (q_lambda is applied first).

    A zero parameter makes f identically zero; such maps get no critical
    points at all.
    """
    _check_range("lambda", lam, 0.0, 4.0)
    _check_range("mu", mu, 0.0, 4.0)
    p = QuarticParams(float(lam), float(mu))
    crit = critical_points_quartic(p) if lam > 0 and mu > 0 else ()
    return _validated(ModalMap(Family.QUARTIC, (p.lam, p.mu), UNIT, crit, Shape.POSITIVE))


def cubic_bound(alpha: float) -> float:
    """Largest admissible |beta| for a given alpha, 2 sqrt|alpha| - |alpha|."""
    return 2.0 * math.sqrt(abs(alpha)) - abs(alpha)


def shape_sigma(shape: Shape) -> int:
    return -1 if shape is Shape.POSITIVE else 1


def cubic_params(alpha: float, beta: float, shape: Shape | None = None) -> CubicParams:
    """Build and range-check cubic parameters.

    The boundary value sigma1 follows the shape: -1 for positive shape
    (alpha > 0) and +1 for negative shape (alpha < 0).
    """
    if shape is None:
        shape = Shape.POSITIVE if alpha > 0 else Shape.NEGATIVE
    p = CubicParams(float(alpha), float(beta), shape_sigma(shape))
    # discriminant first so that alpha = +-1 reports as degenerate
    critical_points_cubic(p)
    if shape is Shape.POSITIVE:
        if not 1.0 < alpha <= 4.0:
            raise MapError(f"positive-shape cubic needs 1 < alpha <= 4, got {alpha}")
    elif not -4.0 <= alpha < -1.0:
        raise MapError(f"negative-shape cubic needs -4 <= alpha < -1, got {alpha}")
    if abs(beta) > cubic_bound(alpha) + ANCHOR_TOL:
        raise MapError(
            f"|beta|={abs(beta)} exceeds 2 sqrt|alpha| - |alpha| = {cubic_bound(alpha)}"
        )
    return p


def cubic(alpha: float, beta: float, shape: Shape | None = None) -> ModalMap:
    p = cubic_params(alpha, beta, shape)
    return _validated(
        ModalMap(
            Family.CUBIC,
            (p.alpha, p.beta, p.sigma1),
            SYMMETRIC,
            critical_points_cubic(p),
            p.shape,
        )
    )


def critical_values(fmap: ModalMap) -> tuple:
    return tuple(fmap(c) for c in fmap.critical_points)


def make_map(family: Family | str, *params, shape: Shape | None = None) -> ModalMap:
    """Dispatch to the family constructor; used by the CLI and the sweep."""
    family = Family(family)
    if family is Family.LOGISTIC:
        return logistic(*params)
    if family is Family.TENT:
        return tent(*params)
    if family is Family.SAWTOOTH:
        return sawtooth(*params)
    if family is Family.QUARTIC:
        return quartic(*params)
    return cubic(*params, shape=shape)
