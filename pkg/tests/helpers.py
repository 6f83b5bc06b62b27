"""Seeded samplers of valid maps shared by the test modules."""
import numpy as np

from isentropes import maps


def random_cubics(rng, count, shape):
    out = []
    while len(out) < count:
        if shape is maps.Shape.POSITIVE:
            alpha = rng.uniform(1.0, 4.0)
        else:
            alpha = rng.uniform(-4.0, -1.0)
        bound = maps.cubic_bound(alpha)
        beta = rng.uniform(-bound, bound)
        try:
            out.append(maps.cubic(alpha, beta, shape=shape))
        except maps.MapError:
            continue  # alpha too close to +-1
    return out


def random_quartics(rng, count, unimodal=0):
    """``count`` quartics on [0, 4]^2, the first ``unimodal`` of them with lambda < 2."""
    out = [maps.quartic(rng.uniform(0.0, 2.0), rng.uniform(0.0, 4.0)) for _ in range(unimodal)]
    out += [maps.quartic(*rng.uniform(0.0, 4.0, 2)) for _ in range(count - unimodal)]
    return out


def random_sawtooth_params(rng, count):
    """(a, b) uniform on [1/2, 2]^2 conditioned on ab >= 1."""
    out = []
    while len(out) < count:
        a, b = rng.uniform(0.5, 2.0, 2)
        if a * b >= 1.0:
            out.append((float(a), float(b)))
    return out


def grid(values, resolution):
    return np.asarray(values, dtype=float).reshape(resolution, resolution)
