"""Lap-number recursion for the entropy of boundary-anchored l-modal maps.

The orbit of every critical point is turned into a min-max sequence: each
f^n(c_i) gets a polarity (local minimum or maximum of f^n) and an address in
the critical partition I_1, C_1, I_2, ..., C_l, I_{l+1}.  Bad symbols with
respect to each critical line feed a linear recursion for the number s_i^(n)
of new solutions of f^n(x) = c_i, and the lap number follows as

    l(f^n) = 1 + sum_{k<n} s^(k) = (s^(n) + S^(n)) / l.

Two routes are provided.  :class:`MinMaxState` and :func:`recursion_step`
carry the recursion in exact integers and check every invariant per step;
:func:`lap_numbers` uses them.  :func:`entropy` runs the same recursion
through the kernel backend in rescaled floating point, which keeps runs of
thousands of steps cheap.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from isentropes import kernels
from isentropes.maps import ModalMap, Shape

CRIT_TOL = 1e-12
DEFAULT_EPSILON = 1e-4
DEFAULT_N_MAX = 2000
# the first few lap numbers of many maps are exact powers (2, 4, 8, ...),
# which passes the stopping test spuriously
DEFAULT_N_MIN = 16
FIRST_CHUNK = 256


class InternalConsistencyError(RuntimeError):
    """The recursion produced a negative count or a non-integer lap number."""


class Polarity(Enum):
    MIN = "m"
    MAX = "M"


class Address(NamedTuple):
    """A cell of the critical partition: lap I_index or singleton C_index (1-based)."""

    kind: str
    index: int

    @property
    def rank(self) -> int:
        """Position in the order I_1 < C_1 < I_2 < ... < C_l < I_{l+1}."""
        return 2 * self.index - 1 if self.kind == "C" else 2 * (self.index - 1)

    @classmethod
    def from_rank(cls, rank: int) -> "Address":
        if rank % 2:
            return cls("C", (rank + 1) // 2)
        return cls("I", rank // 2 + 1)

    def __str__(self):
        return f"{self.kind}{self.index}"


class MinMaxSymbol(NamedTuple):
    polarity: Polarity
    address: Address

    def __str__(self):
        return f"{self.polarity.value}^{self.address}"


class Termination(Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class EntropyEstimate:
    """Entropy in nats plus how the computation ended.

    ``bounds`` is set by bracketing methods (the kneading search); the lap
    recursion leaves it ``None``.
    """

    value: float
    iterations: int
    termination: Termination
    last_delta: float
    bounds: tuple | None = None

    @property
    def converged(self) -> bool:
        return self.termination is Termination.CONVERGED


def address_rank(y: float, critical_points, tol: float = CRIT_TOL) -> int:
    for j, c in enumerate(critical_points):
        if abs(y - c) < tol:
            return 2 * j + 1
    return 2 * bisect.bisect_left(critical_points, y)


def _next_is_max(prev_rank: int, prev_is_max: bool, negative: bool) -> bool:
    if prev_rank % 2:
        # landing on c_j: f has a maximum there when j is odd (positive shape)
        j = (prev_rank + 1) // 2
        return (j % 2 == 1) != negative
    lap = prev_rank // 2 + 1
    increasing = (lap % 2 == 1) != negative
    return prev_is_max if increasing else not prev_is_max


class SymbolTable:
    """Critical orbits and their min-max symbols, extended on demand.

    Row m-1 of ``ranks``/``is_max`` describes f^m(c_i) for each critical
    point i.  Orbits are iterated once; asking for more steps only computes
    the missing ones.
    """

    def __init__(self, fmap: ModalMap):
        self.fmap = fmap
        self.crit = list(fmap.critical_points)
        self.negative = fmap.shape is Shape.NEGATIVE
        self._points = list(self.crit)
        self._ranks = [[2 * i + 1 for i in range(len(self.crit))]]
        self._is_max = [[False] * len(self.crit)]
        self.orbit = [list(self.crit)]

    def __len__(self):
        return len(self._ranks) - 1

    def extend(self, n: int) -> None:
        f, crit, negative = self.fmap, self.crit, self.negative
        while len(self) < n:
            prev_r, prev_m = self._ranks[-1], self._is_max[-1]
            pts = [f(x) for x in self._points]
            self._points = pts
            self.orbit.append(pts)
            self._ranks.append([address_rank(y, crit) for y in pts])
            self._is_max.append(
                [_next_is_max(r, m, negative) for r, m in zip(prev_r, prev_m)]
            )

    def ranks(self, n: int) -> np.ndarray:
        self.extend(n)
        return np.array(self._ranks[1 : n + 1], dtype=np.int64).reshape(n, len(self.crit))

    def is_max(self, n: int) -> np.ndarray:
        self.extend(n)
        return np.array(self._is_max[1 : n + 1], dtype=bool).reshape(n, len(self.crit))

    def symbols(self, n: int) -> list[list[MinMaxSymbol]]:
        self.extend(n)
        return [
            [
                MinMaxSymbol(
                    Polarity.MAX if self._is_max[m][i] else Polarity.MIN,
                    Address.from_rank(self._ranks[m][i]),
                )
                for m in range(1, n + 1)
            ]
            for i in range(len(self.crit))
        ]

    def bad_table(self, n: int) -> np.ndarray:
        """uint8 array with ``[j-1, i, k]`` set when omega_k^(j) is in B_i."""
        ranks = self.ranks(n)[:, None, :]
        is_max = self.is_max(n)[:, None, :]
        line = (2 * np.arange(len(self.crit)) + 1)[None, :, None]
        bad = (is_max & (ranks <= line)) | (~is_max & (ranks >= line))
        return np.ascontiguousarray(bad, dtype=np.uint8)


def critical_orbits(fmap: ModalMap, n: int) -> np.ndarray:
    """Array of shape (l, n + 1) holding f^m(c_i) for m = 0..n."""
    table = SymbolTable(fmap)
    table.extend(n)
    return np.array(table.orbit, dtype=float).T.reshape(fmap.modality, n + 1)


def minmax_sequences(fmap: ModalMap, n: int) -> list[list[MinMaxSymbol]]:
    """omega_i^(1..n) for each critical point c_i."""
    return SymbolTable(fmap).symbols(n)


def bad_symbols(i: int, l: int) -> frozenset:
    """B_i: maxima at or left of C_i together with minima at or right of it."""
    if not 1 <= i <= l:
        raise ValueError(f"critical index {i} outside 1..{l}")
    line = 2 * i - 1
    return frozenset(
        MinMaxSymbol(pol, Address.from_rank(r))
        for r in range(2 * l + 1)
        for pol in Polarity
        if (pol is Polarity.MAX and r <= line) or (pol is Polarity.MIN and r >= line)
    )


@dataclass
class MinMaxState:
    """Exact-integer state of the recursion through step ``n``.

    ``bad_steps[i][j-1]`` lists the critical indices k (0-based) with
    omega_k^(j) in B_{i+1}; together these are the increments of K_i.
    """

    l: int
    symbols: list
    bad_sets: list = field(default_factory=list)
    bad_steps: list = field(default_factory=list)
    s_history: list = field(default_factory=list)
    s_totals: list = field(default_factory=list)
    big_s: list = field(default_factory=list)
    big_s_total: int = 0
    lap_numbers: list = field(default_factory=list)

    @classmethod
    def start(cls, symbols: list) -> "MinMaxState":
        l = len(symbols)
        return cls(
            l=l,
            symbols=symbols,
            bad_sets=[bad_symbols(i, l) for i in range(1, l + 1)],
            bad_steps=[[] for _ in range(l)],
            s_history=[[1] for _ in range(l)],
            s_totals=[l],
            big_s=[0] * l,
        )

    @property
    def n(self) -> int:
        return len(self.lap_numbers)


def recursion_step(state: MinMaxState, n: int) -> MinMaxState:
    """Advance ``state`` from step n-1 to step n, in place, and return it."""
    l = state.l
    if state.n != n - 1:
        raise ValueError(f"state is at step {state.n}, cannot compute step {n}")
    if any(len(seq) < n for seq in state.symbols):
        raise ValueError(f"min-max symbols for step {n} not available")
    for i in range(l):
        new = [k for k in range(l) if state.symbols[k][n - 1] in state.bad_sets[i]]
        state.bad_steps[i].append(new)
    state.big_s = [
        2 * sum(
            state.s_history[k][n - j]
            for j, ks in enumerate(state.bad_steps[i], start=1)
            for k in ks
        )
        for i in range(l)
    ]
    state.big_s_total = sum(state.big_s)
    cum = 1 + sum(state.s_totals)
    for i in range(l):
        s_i = cum - state.big_s[i]
        if s_i < 0:
            raise InternalConsistencyError(f"s_{i + 1}^({n}) = {s_i} < 0")
        state.s_history[i].append(s_i)
    s_total = sum(h[n] for h in state.s_history)
    state.s_totals.append(s_total)
    laps, rem = divmod(s_total + state.big_s_total, l)
    if rem or laps != cum or laps < 1:
        raise InternalConsistencyError(
            f"lap number at step {n}: ({s_total} + {state.big_s_total}) / {l} != {cum}"
        )
    if state.lap_numbers and laps < state.lap_numbers[-1]:
        raise InternalConsistencyError(f"lap number decreased at step {n}")
    state.lap_numbers.append(laps)
    return state


def lap_numbers(fmap: ModalMap, n: int) -> list[int]:
    """Exact l(f^1), ..., l(f^n)."""
    if fmap.modality == 0:
        return [1] * n
    state = MinMaxState.start(minmax_sequences(fmap, n))
    for step in range(1, n + 1):
        recursion_step(state, step)
    return state.lap_numbers


def log_lap_numbers(fmap: ModalMap, n: int, backend=None) -> np.ndarray:
    """log l(f^m) for m = 0..n through the kernel, without early stopping."""
    impl = backend or kernels
    if fmap.modality == 0:
        return np.zeros(n + 1)
    logs, status = impl.lap_log_sequence(SymbolTable(fmap).bad_table(n), -1.0)
    if status == kernels.INCONSISTENT:
        raise InternalConsistencyError(f"recursion broke down at step {len(logs)}")
    return logs


def _estimate(logs, n: int, estimator: str) -> float:
    if estimator == "mean":
        return logs[n] / n
    half = n // 2
    return (logs[n] - logs[half]) / (n - half)


def entropy(
    fmap: ModalMap,
    epsilon: float = DEFAULT_EPSILON,
    n_max: int = DEFAULT_N_MAX,
    estimator: str = "secant",
    n_min: int = DEFAULT_N_MIN,
    backend=None,
) -> EntropyEstimate:
    """Estimate h(f) from the growth of l(f^n).

    The recursion stops at the first n >= ``n_min`` with

        |(1/n) log l(f^n) - (1/(n-1)) log l(f^(n-1))| < epsilon,

    or after ``n_max`` steps.  With ``estimator="mean"`` the value reported
    is (1/n) log l(f^n); the default ``"secant"`` reports the growth rate
    over the second half of the run, (log l(f^n) - log l(f^m)) / (n - m)
    with m = n // 2, which cancels the constant prefactor of l(f^n) that
    biases the mean by O(1/n).  ``estimator="mean", n_min=2`` is the plain
    textbook procedure.

    ``backend`` selects a kernel module explicitly (see
    :func:`isentropes.kernels.backends`).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if estimator not in ("secant", "mean"):
        raise ValueError(f"unknown estimator {estimator!r}")
    impl = backend or kernels
    if fmap.modality == 0:
        # monotone or constant: a single lap for every iterate
        return EntropyEstimate(0.0, 1, Termination.CONVERGED, 0.0)
    n_min = min(max(n_min, 2), n_max)
    table = SymbolTable(fmap)
    steps = min(max(FIRST_CHUNK, n_min), n_max)
    while True:
        logs, status = impl.lap_log_sequence(table.bad_table(steps), epsilon, n_min)
        if status == kernels.EXHAUSTED and steps < n_max:
            steps = min(2 * steps, n_max)
            continue
        break
    n = len(logs) - 1
    if status == kernels.INCONSISTENT:
        raise InternalConsistencyError(f"recursion broke down for {fmap} at step {n + 1}")
    delta = abs(logs[n] / n - logs[n - 1] / (n - 1)) if n >= 2 else math.inf
    termination = (
        Termination.CONVERGED if status == kernels.CONVERGED else Termination.MAX_ITERATIONS
    )
    return EntropyEstimate(float(_estimate(logs, n, estimator)), n, termination, float(delta))
