"""Timing comparison of the compiled kernels against the numpy fallback.

Run from the repository root:

    python benchmarks/bench_backends.py

Covers the two hot paths: the restricted connection evaluation (dominates
trajectory integration and the controllability finite differences) and the
discretized-rod resistance (dominates the validation sweep).
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from microswim import _purepy

try:
    from microswim import _core
except ImportError:
    _core = None

ARGS = (0.3, -0.2, -0.5, 0.1, 0.1, 1.9925098, 3.9850197, 1.1938052e-3)


def best_of(fn, repeats: int, loops: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(loops):
            fn()
        best = min(best, (time.perf_counter() - t0) / loops)
    return best


def main() -> int:
    rows = []
    cases = [
        ("connection (6x4 solve)", lambda m: (lambda: m.connection_restricted(*ARGS)), 2000),
        (
            "oracle resistance, 500 segments",
            lambda m: (lambda: m.oracle_resistance(*ARGS, 500)),
            200,
        ),
        (
            "oracle resistance, 2000 segments",
            lambda m: (lambda: m.oracle_resistance(*ARGS, 2000)),
            50,
        ),
    ]
    for label, make, loops in cases:
        t_py = best_of(make(_purepy), 3, loops)
        if _core is not None:
            t_c = best_of(make(_core), 3, loops)
            a = _purepy.connection_restricted(*ARGS)
            b = _core.connection_restricted(*ARGS)
            assert np.abs(a - b).max() < 1e-12
            rows.append((label, t_py, t_c, t_py / t_c))
        else:
            rows.append((label, t_py, None, None))

    print(f"{'kernel':<36} {'numpy':>12} {'compiled':>12} {'speedup':>9}")
    for label, t_py, t_c, speedup in rows:
        py_s = f"{t_py * 1e6:.1f} us"
        if t_c is None:
            print(f"{label:<36} {py_s:>12} {'n/a':>12} {'n/a':>9}")
        else:
            print(
                f"{label:<36} {py_s:>12} {t_c * 1e6:>9.1f} us {speedup:>8.1f}x"
            )
    if _core is None:
        print("\ncompiled extension not built; run: python setup.py build_ext --inplace")
    return 0


if __name__ == "__main__":
    sys.exit(main())
