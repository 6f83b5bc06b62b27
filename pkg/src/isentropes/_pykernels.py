"""Pure-Python implementations of the hot kernels.

These mirror ``_ckernels.pyx`` function for function and are used when the
compiled extension is unavailable.  Keep the two in step.
"""
import math

import numpy as np

CONVERGED = 0
EXHAUSTED = 1
INCONSISTENT = 2

# lap values are kept scaled by exp(-log_scale) so they never overflow
RESCALE_ABOVE = 1e200
RESCALE_BY = 1e-200
LOG_RESCALE = 200.0 * math.log(10.0)
NEGATIVE_SLACK = 1e-9

TENT = 0
LOGISTIC = 1
CRIT_TOL = 1e-12


def lap_log_sequence(bad, epsilon, n_min=2):
    """Run the min-max recursion over a precomputed bad-symbol table.

    ``bad[j - 1, i, k]`` is 1 when the step-j min-max symbol of critical
    point k is bad with respect to critical line i.  Returns ``(logs,
    status)`` where ``logs[n] = log l(f^n)`` for every step completed
    (``logs[0] = 0``) and ``status`` is CONVERGED, EXHAUSTED or
    INCONSISTENT.  The stopping test on (1/n) log l(f^n) is only applied
    from step ``max(n_min, 2)`` on.
    """
    bad = np.ascontiguousarray(bad, dtype=np.uint8)
    n_steps, l, _ = bad.shape
    badf = bad.astype(np.float64)
    s = np.zeros((n_steps + 1, l))
    s[0, :] = 1.0
    cum = 1.0 + l
    log_scale = 0.0
    logs = [0.0]
    for n in range(1, n_steps + 1):
        # s_k^(n-j) for j = 1..n, i.e. rows n-1 down to 0
        big_s = 2.0 * np.einsum("jik,jk->i", badf[:n], s[n - 1::-1])
        small = cum - big_s
        if small.min() < -NEGATIVE_SLACK * cum:
            return np.array(logs), INCONSISTENT
        small = np.maximum(small, 0.0)
        s[n] = small
        s_tot = small.sum()
        if abs((s_tot + big_s.sum()) / l - cum) > NEGATIVE_SLACK * cum:
            return np.array(logs), INCONSISTENT
        logs.append(math.log(cum) + log_scale)
        if n >= n_min and n >= 2 and abs(logs[n] / n - logs[n - 1] / (n - 1)) < epsilon:
            return np.array(logs), CONVERGED
        cum += s_tot
        if cum > RESCALE_ABOVE:
            s[: n + 1] *= RESCALE_BY
            cum *= RESCALE_BY
            log_scale += LOG_RESCALE
    return np.array(logs), EXHAUSTED


def _apply(kind, p, x):
    if kind == TENT:
        y = p * (0.5 - abs(x - 0.5))
    else:
        y = p * x * (1.0 - x)
    return 0.0 if y < 0.0 else 1.0 if y > 1.0 else y


def ditinerary_codes(kind1, p1, kind2, p2, x0, start_track, n_sym):
    """Symbol codes (L=0, C=1, R=2) of the diorbit of x0 under (f1, f2)."""
    codes = np.empty(n_sym, dtype=np.int8)
    x = x0
    track = start_track
    for j in range(n_sym):
        if abs(x - 0.5) < CRIT_TOL:
            codes[j] = 1
        elif x < 0.5:
            codes[j] = 0
        else:
            codes[j] = 2
        if track == 1:
            x = _apply(kind1, p1, x)
            track = 2
        else:
            x = _apply(kind2, p2, x)
            track = 1
    return codes


def compare_codes(s, t):
    """Signed lexicographic comparison of two equal-length code arrays."""
    sign = 1
    for a, b in zip(s.tolist(), t.tolist()):
        if a != b:
            return sign if a > b else -sign
        if a == 1:
            return 0
        if a == 2:
            sign = -sign
    return 0
