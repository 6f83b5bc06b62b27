"""Kneading-data search for compositions of two unimodal maps.

The entropy of f = f_2 o f_1 is bracketed by sawtooth maps T_b o T_a,
whose entropy is known exactly (max(0, log ab)).  For a trial entropy h the
isentrope {log a + log b = h} is searched for a sawtooth whose d'itineraries
are comparable with those of (f_1, f_2); the result tells us on which side
of h the entropy of f lies, and an outer bisection on h closes the bracket.

Symbols are coded L=0, C=1, R=2 against the turning point 1/2 shared by
every factor (logistic and tent maps on [0, 1]).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from isentropes import kernels
from isentropes.lap_entropy import EntropyEstimate, Termination
from isentropes.maps import Family, ModalMap, QuarticParams, logistic, tent

LOG2 = math.log(2.0)
LOG4 = math.log(4.0)
H_MAX = math.log(4.1)
DEFAULT_EPSILON = 1e-4
DEFAULT_N_SYM = 64
# an Equal that only means "ran out of symbols" is retried with doubled length
DEFAULT_MAX_SYM = 4096
DEFAULT_MAX_ITER = 100
# the outer loop halves h1 - h0 each time; this is far more than ever needed
MAX_OUTER = 200
# beyond log 4 no sawtooth on [1/2, 2]^2 exists
ISENTROPE_SLACK = 1e-12

_KIND = {Family.TENT: kernels.TENT, Family.LOGISTIC: kernels.LOGISTIC}


class Side(Enum):
    L = 0
    C = 1
    R = 2


class Track(Enum):
    FIRST = 1
    SECOND = 2


@dataclass(frozen=True)
class DSymbol:
    side: Side
    track: Track

    def __str__(self):
        return f"{self.side.name}{self.track.value}"


class ComparisonResult(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    INCOMPARABLE = 2

    def reversed(self) -> "ComparisonResult":
        if self is ComparisonResult.LESS:
            return ComparisonResult.GREATER
        if self is ComparisonResult.GREATER:
            return ComparisonResult.LESS
        return self

    @property
    def le(self) -> bool:
        return self in (ComparisonResult.LESS, ComparisonResult.EQUAL)

    @property
    def ge(self) -> bool:
        return self in (ComparisonResult.GREATER, ComparisonResult.EQUAL)


class InnerOutcome(Enum):
    LOWER_BOUND_FOUND = "lower_bound_found"
    UPPER_BOUND_FOUND = "upper_bound_found"
    EQUAL_FOUND = "equal_found"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Ditinerary:
    """Symbol codes of a diorbit; ``codes[j]`` is 0, 1 or 2 for L, C, R."""

    codes: np.ndarray
    start_track: int

    def __len__(self):
        return len(self.codes)

    @property
    def symbols(self) -> list[DSymbol]:
        out = []
        track = self.start_track
        for c in self.codes.tolist():
            out.append(DSymbol(Side(c), Track(track)))
            track = 3 - track
        return out

    def __str__(self):
        return "".join(Side(c).name for c in self.codes.tolist())


@dataclass
class BisectionState:
    h0: float = 0.0
    h1: float = H_MAX
    history: list = field(default_factory=list)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.h0 + self.h1)


@dataclass(frozen=True)
class InnerStep:
    """One sawtooth candidate visited by :func:`inner_search`."""

    t: float
    a: float
    b: float
    c1: ComparisonResult
    c2: ComparisonResult


def _factor(fmap: ModalMap) -> tuple[int, float]:
    if fmap.family not in _KIND:
        raise ValueError(f"factor must be a logistic or tent map, got {fmap}")
    return _KIND[fmap.family], fmap.params[0]


def _codes(f1, f2, x0, start_track, n_sym):
    k1, p1 = f1
    k2, p2 = f2
    return kernels.ditinerary_codes(k1, p1, k2, p2, float(x0), int(start_track), int(n_sym))


def ditinerary(f1: ModalMap, f2: ModalMap, x0: float, start_track: int, n_sym: int) -> Ditinerary:
    """d'itinerary of x0 under the pair (f1, f2).

    From track 1 the diorbit is x0, f1(x0), f2(f1(x0)), ...; from track 2
    it starts with f2.
    """
    if start_track not in (1, 2):
        raise ValueError("start_track must be 1 or 2")
    return Ditinerary(_codes(_factor(f1), _factor(f2), x0, start_track, n_sym), start_track)


def compare(sigma: Ditinerary, tau: Ditinerary, start: int = 0) -> ComparisonResult:
    """Signed lexicographic order with L < C < R.

    Each R in the common prefix reverses the orientation; a shared C ends the
    comparison as Equal.  Sequences on different tracks or of different
    lengths are Incomparable.  ``start`` skips a common leading segment.
    """
    if sigma.start_track != tau.start_track or len(sigma) != len(tau):
        return ComparisonResult.INCOMPARABLE
    return ComparisonResult(int(kernels.compare_codes(sigma.codes[start:], tau.codes[start:])))


def kneading_data(f1: ModalMap, f2: ModalMap, n_sym: int = DEFAULT_N_SYM) -> tuple[Ditinerary, Ditinerary]:
    """d'itineraries of c_1 (track 1) and c_2 (track 2), n_sym + 1 symbols each.

    Both start with the symbol C of the critical point itself, so the
    informative part is ``codes[1:]``.
    """
    return ditinerary(f1, f2, 0.5, 1, n_sym + 1), ditinerary(f1, f2, 0.5, 2, n_sym + 1)


def isentrope_point(h_star: float, t: float) -> tuple[float, float]:
    """(a, b) on log a + log b = h_star; t=0 is (e^(h*-log 2), 2), t=1 is (2, e^(h*-log 2))."""
    log_a = (1.0 - t) * (h_star - LOG2) + t * LOG2
    a = math.exp(log_a)
    b = math.exp(h_star - log_a)
    return a, b


def _classify(r1: ComparisonResult, r2: ComparisonResult) -> InnerOutcome | None:
    if ComparisonResult.INCOMPARABLE in (r1, r2):
        return InnerOutcome.INCONCLUSIVE
    if r1 is ComparisonResult.EQUAL and r2 is ComparisonResult.EQUAL:
        return InnerOutcome.EQUAL_FOUND
    if r1.le and r2.le:
        return InnerOutcome.LOWER_BOUND_FOUND
    if r1.ge and r2.ge:
        return InnerOutcome.UPPER_BOUND_FOUND
    return None


def inner_search(
    h_star: float,
    target_c1: Ditinerary,
    target_c2: Ditinerary,
    max_iter: int = DEFAULT_MAX_ITER,
    n_sym: int | None = None,
    trace: list | None = None,
) -> InnerOutcome:
    """Search the sawtooth isentrope of entropy h_star for comparable kneading data.

    LowerBoundFound means a sawtooth of entropy h_star has kneading data
    below the target's, so h(f) >= h_star; UpperBoundFound is the reverse.

    Comparisons start from ``n_sym`` symbols (after the leading C).  When the
    targets are longer than that, an Equal reached by exhausting the symbols
    rather than at a shared C is recomputed with twice as many, up to the
    targets' length; slowly separating low-entropy orbits need this.
    """
    if not 0.0 <= h_star <= H_MAX:
        raise ValueError(f"h_star={h_star} outside [0, log 4.1]")
    if h_star > LOG4 + ISENTROPE_SLACK:
        return InnerOutcome.UPPER_BOUND_FOUND
    h_star = min(h_star, LOG4)
    n_max = len(target_c1) - 1
    n_start = n_max if n_sym is None else min(n_sym, n_max)
    k1, k2 = target_c1.codes, target_c2.codes

    def probe(t):
        a, b = isentrope_point(h_star, t)
        n = n_start
        while True:
            s1 = _codes((kernels.TENT, a), (kernels.TENT, b), 0.5, 1, n + 1)
            s2 = _codes((kernels.TENT, a), (kernels.TENT, b), 0.5, 2, n + 1)
            r1 = ComparisonResult(int(kernels.compare_codes(s1[1:], k1[1:n + 1])))
            r2 = ComparisonResult(int(kernels.compare_codes(s2[1:], k2[1:n + 1])))
            exhausted = (r1 is ComparisonResult.EQUAL and 1 not in s1[1:]) or (
                r2 is ComparisonResult.EQUAL and 1 not in s2[1:]
            )
            if not exhausted or n >= n_max:
                break
            n = min(2 * n, n_max)
        if trace is not None:
            trace.append(InnerStep(t, a, b, r1, r2))
        return r1, r2

    lo, hi = 0.0, 1.0
    for t in (lo, hi):
        outcome = _classify(*probe(t))
        if outcome is not None:
            return outcome
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        r1, r2 = probe(mid)
        outcome = _classify(r1, r2)
        if outcome is not None:
            return outcome
        if r1.le and r2.ge:
            lo = mid
        else:
            hi = mid
    return InnerOutcome.INCONCLUSIVE


def kneading_entropy(
    f1: ModalMap,
    f2: ModalMap,
    epsilon: float = DEFAULT_EPSILON,
    n_sym: int = DEFAULT_N_SYM,
    max_iter: int = DEFAULT_MAX_ITER,
    state: BisectionState | None = None,
    max_sym: int = DEFAULT_MAX_SYM,
) -> EntropyEstimate:
    """Entropy of f2 o f1 (f1 applied first) by bisection over sawtooth isentropes."""
    target_c1, target_c2 = kneading_data(f1, f2, max(n_sym, max_sym))
    state = BisectionState() if state is None else state
    iterations = 0
    termination = Termination.CONVERGED
    while state.h1 - state.h0 >= epsilon and iterations < MAX_OUTER:
        iterations += 1
        h = state.midpoint
        outcome = inner_search(h, target_c1, target_c2, max_iter, n_sym)
        state.history.append((h, outcome))
        if outcome is InnerOutcome.LOWER_BOUND_FOUND:
            state.h0 = h
        elif outcome is InnerOutcome.UPPER_BOUND_FOUND:
            state.h1 = h
        elif outcome is InnerOutcome.EQUAL_FOUND:
            state.h0 = state.h1 = h
        else:
            termination = Termination.MAX_ITERATIONS
            break
    if state.h1 - state.h0 >= epsilon:
        termination = Termination.MAX_ITERATIONS
    return EntropyEstimate(
        value=state.midpoint,
        iterations=iterations,
        termination=termination,
        last_delta=state.h1 - state.h0,
        bounds=(state.h0, state.h1),
    )


def radulescu_entropy(
    p: QuarticParams,
    epsilon: float = DEFAULT_EPSILON,
    n_sym: int = DEFAULT_N_SYM,
    max_iter: int = DEFAULT_MAX_ITER,
    max_sym: int = DEFAULT_MAX_SYM,
) -> EntropyEstimate:
    """Entropy of q_mu o q_lambda."""
    return kneading_entropy(
        logistic(p.lam), logistic(p.mu), epsilon, n_sym, max_iter, max_sym=max_sym
    )


def sawtooth_kneading_entropy(a: float, b: float, epsilon: float = DEFAULT_EPSILON, **kw) -> EntropyEstimate:
    """Kneading search applied to the sawtooth T_b o T_a itself."""
    return kneading_entropy(tent(a), tent(b), epsilon, **kw)
