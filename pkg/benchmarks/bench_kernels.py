"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import timeit

from isentropes import kernels, maps
from isentropes.kneading import DEFAULT_N_SYM, kneading_entropy
from isentropes.lap_entropy import SymbolTable


def lap_case(impl, fmap, n):
    table = SymbolTable(fmap).bad_table(n)
    return lambda: impl.lap_log_sequence(table, -1.0)


def itinerary_case(impl, n_sym):
    def run():
        for k in range(200):
            a = 1.0 + k / 200.0
            s = impl.ditinerary_codes(kernels.TENT, a, kernels.TENT, 2.0, 0.5, 1, n_sym)
            t = impl.ditinerary_codes(kernels.LOGISTIC, 3.9, kernels.LOGISTIC, 3.7, 0.5, 1, n_sym)
            impl.compare_codes(s, t)
    return run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = kernels.backends()
    print(f"default backend: {kernels.BACKEND}; available: {', '.join(backends)}")
    cases = [
        ("lap recursion, quartic(4,4), n=300", lambda m: lap_case(m, maps.quartic(4, 4), 300)),
        ("lap recursion, cubic(3.3,0.2), n=600", lambda m: lap_case(m, maps.cubic(3.3, 0.2), 600)),
        ("200 d'itinerary pairs + compare", lambda m: itinerary_case(m, DEFAULT_N_SYM + 1)),
    ]
    timings = {}
    for label, make in cases:
        row = []
        for name, mod in backends.items():
            fn = make(mod)
            best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            timings[label, name] = best
            row.append(f"{name}={best * 1e3:9.3f} ms")
        speedup = ""
        if len(backends) == 2:
            speedup = f"  speedup x{timings[label, 'python'] / timings[label, 'cython']:.1f}"
        print(f"{label:42s} " + "  ".join(row) + speedup)

    # end to end with the default backend
    best = min(timeit.repeat(lambda: kneading_entropy(maps.logistic(3.9), maps.logistic(3.7)),
                             number=1, repeat=args.repeat))
    print(f"{'kneading search, quartic(3.9,3.7)':42s} {kernels.BACKEND}={best * 1e3:9.3f} ms")
    assert math.isfinite(best)


if __name__ == "__main__":
    main()
