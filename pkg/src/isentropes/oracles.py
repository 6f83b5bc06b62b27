"""Independent ground truth for the entropy algorithms.

* :func:`brute_force_laps` finds every turning point of f^n by root finding,
  refining the monotone pieces of f^m one iterate at a time.
* :func:`periodic_point_count` counts solutions of f^n(x) = x lap by lap.
* :func:`spectral_radius` is a shifted power method for non-negative
  transition matrices of Markov maps.

None of these share code with the min-max recursion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from isentropes.maps import ModalMap

MAX_BISECTIONS = 1100
FIXED_TOL = 1e-12
MAX_BREAKPOINTS = 10**7


class LapCountError(RuntimeError):
    """The lap decomposition would exceed the breakpoint guard."""


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class LapDecomposition:
    n: int
    breakpoints: np.ndarray

    @property
    def lap_count(self) -> int:
        return len(self.breakpoints) + 1


@dataclass(frozen=True)
class TransitionMatrix:
    """Row j, column k is 1 when f maps interval j over interval k."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"transition matrix must be square, got shape {m.shape}")
        if (m < 0).any():
            raise ValueError("transition matrix has negative entries")
        object.__setattr__(self, "entries", m.astype(float))


BUILTIN_MARKOV = {
    # T_2 on the partition [0, 1/2], [1/2, 1]
    "full-tent": TransitionMatrix(np.array([[1, 1], [1, 1]])),
    # tent map with slope equal to the golden ratio
    "fibonacci": TransitionMatrix(np.array([[0, 1], [1, 1]])),
}


def iterate(fmap: ModalMap, x, n: int):
    for _ in range(n):
        x = fmap(x)
    return x


def _bisect_level(fmap, m, lo, hi, level, increasing):
    """Solve f^m(x) = level on [lo, hi] (vectorised; f^m monotone there).

    Bisects down to adjacent doubles: laps of f^12 can be narrower than
    1e-13, so a fixed absolute tolerance would misplace roots.
    """
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        below = iterate(fmap, mid, m) < level
        go_right = (below == increasing) & active
        go_left = ~(below == increasing) & active
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_left, mid, hi)
    return 0.5 * (lo + hi)


def lap_decompositions(
    fmap: ModalMap, n: int, max_breakpoints: int = MAX_BREAKPOINTS
) -> list[LapDecomposition]:
    """Turning points of f^1, ..., f^n.

    The turning points of f^(m+1) are those of f^m together with the
    solutions of f^m(x) = c_j, found by bisection on each monotone piece of
    f^m whose image straddles c_j.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    lo, hi = fmap.domain.lo, fmap.domain.hi
    crit = np.array(fmap.critical_points, dtype=float)
    breakpoints = crit.copy()
    out = [LapDecomposition(1, breakpoints)]
    for m in range(1, n):
        edges = np.concatenate([[lo], breakpoints, [hi]])
        values = iterate(fmap, edges, m)
        left, right = edges[:-1], edges[1:]
        v_left, v_right = values[:-1], values[1:]
        vmin = np.minimum(v_left, v_right)
        vmax = np.maximum(v_left, v_right)
        roots = []
        for c in crit:
            hit = (vmin < c) & (c < vmax)
            if hit.any():
                if breakpoints.size + hit.sum() > max_breakpoints:
                    raise LapCountError(f"more than {max_breakpoints} breakpoints at n={m + 1}")
                increasing = (v_right > v_left)[hit]
                roots.append(_bisect_level(fmap, m, left[hit], right[hit], c, increasing))
        if roots:
            # the straddle test is strict, so roots are interior; only exact ties can repeat
            breakpoints = np.unique(np.concatenate([breakpoints, *roots]))
        if breakpoints.size > max_breakpoints:
            raise LapCountError(f"more than {max_breakpoints} breakpoints at n={m + 1}")
        out.append(LapDecomposition(m + 1, breakpoints))
    return out


def brute_force_laps(fmap: ModalMap, n: int, max_breakpoints: int = MAX_BREAKPOINTS) -> LapDecomposition:
    return lap_decompositions(fmap, n, max_breakpoints)[-1]


def periodic_point_count(fmap: ModalMap, n: int, max_breakpoints: int = MAX_BREAKPOINTS) -> int:
    """Number of solutions of f^n(x) = x.

    On each lap of f^n a sign change of f^n(x) - x is one solution; lap
    endpoints where f^n(x) = x to within 1e-12 are counted once each.
    """
    lo, hi = fmap.domain.lo, fmap.domain.hi
    bp = brute_force_laps(fmap, n, max_breakpoints).breakpoints
    edges = np.concatenate([[lo], bp, [hi]])
    g = iterate(fmap, edges, n) - edges
    at_edge = np.abs(g) <= FIXED_TOL
    sign = np.sign(np.where(at_edge, 0.0, g))
    crossings = (sign[:-1] * sign[1:]) < 0
    return int(at_edge.sum() + crossings.sum())


def spectral_radius(m, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Dominant eigenvalue of a non-negative matrix by the power method.

    Iterates with M + I, whose Perron root is rho(M) + 1 and strictly
    dominant whenever M is irreducible, so periodic matrices converge too.
    Convergence needs both the growth ratio and the normalised vector to
    settle; the ratio alone can repeat by accident on defective matrices.
    """
    entries = m.entries if isinstance(m, TransitionMatrix) else TransitionMatrix(np.asarray(m)).entries
    shifted = entries + np.eye(entries.shape[0])
    x = np.full(entries.shape[0], 1.0 / entries.shape[0])
    ratio = 0.0
    for _ in range(max_iter):
        y = shifted @ x
        new_ratio = y.sum()
        y /= new_ratio
        if abs(new_ratio - ratio) <= tol * new_ratio and np.abs(y - x).sum() <= tol:
            return float(new_ratio - 1.0)
        ratio, x = new_ratio, y
    raise ConvergenceError(f"power method did not converge in {max_iter} iterations")


def markov_entropy(m, tol: float = 1e-12) -> float:
    rho = spectral_radius(m, tol)
    return math.log(rho) if rho > 1.0 else 0.0
