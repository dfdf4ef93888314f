"""Numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is checked for agreement first, then timed with the best of
``--repeat`` runs (numba timings exclude the first, compiling call).
"""

import argparse
import timeit

import numpy as np

from magicpower import _kernels
from magicpower.linalg import haar_state


def _cases(rng):
    states6 = np.stack([haar_state(64, rng) for _ in range(256)])
    states8 = np.stack([haar_state(256, rng) for _ in range(32)])
    state10 = haar_state(1024, rng)[None]
    spacings = np.abs(rng.normal(size=1 << 16))
    return [
        ("fourth moment, 256 states N=6", "pauli_fourth_moment", (states6,)),
        ("fourth moment, 32 states N=8", "pauli_fourth_moment", (states8,)),
        ("fourth moment, 1 state N=10", "pauli_fourth_moment", (state10,)),
        ("pauli squares, 1 state N=6", "pauli_squares", (states6[0],)),
        ("gap ratios, 65536 spacings", "gap_ratios", (spacings,)),
        ("apply pauli, 256 states N=6", "apply_pauli", (states6, 37, 21, 1j)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, name, call_args in _cases(rng):
        fast = getattr(_kernels, f"{name}_numba")
        slow = getattr(_kernels, f"{name}_numpy")
        a, b = fast(*call_args), slow(*call_args)
        if not np.allclose(a, b):
            raise SystemExit(f"{label}: backends disagree")
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat)) * 1e3
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:34s} {t_slow:10.3f} {t_fast:10.3f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
