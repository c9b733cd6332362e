"""Benchmark the numba gate-application kernel against the numpy fallback.

Applies random 2- and 3-qubit unitaries to state vectors of increasing
width and reports the mean per-call time of each backend plus the speedup.
Both implementations are imported directly, so the DACQO_DISABLE_NUMBA
environment flag does not affect this script.

Usage: python benchmarks/bench_kernels.py [--repeats 200]
"""

import argparse
import time

import numpy as np

from dacqo import _kernels


def _random_state(n, rng):
    state = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return state / np.linalg.norm(state)


def _random_unitary(k, rng):
    m = rng.standard_normal((2**k, 2**k)) + 1j * rng.standard_normal(
        (2**k, 2**k)
    )
    return np.linalg.qr(m)[0]


def _time_backend(fn, state, u, qubits, n, repeats):
    fn(state, u, qubits, n)  # warm-up (numba compilation, caches)
    start = time.perf_counter()
    for _ in range(repeats):
        fn(state, u, qubits, n)
    return (time.perf_counter() - start) / repeats


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    if not hasattr(_kernels, "apply_unitary_numba"):
        raise SystemExit(
            "numba backend unavailable (DACQO_DISABLE_NUMBA set or numba "
            "missing); nothing to compare"
        )

    rng = np.random.default_rng(0)
    print(f"{'n':>3} {'k':>2} {'numba (us)':>12} {'numpy (us)':>12} {'speedup':>8}")
    for n in (8, 12, 16, 20):
        for k in (2, 3):
            state = _random_state(n, rng)
            u = _random_unitary(k, rng)
            qubits = tuple(range(0, 2 * k, 2))[:k]
            t_nb = _time_backend(
                _kernels.apply_unitary_numba, state, u, qubits, n, args.repeats
            )
            t_np = _time_backend(
                _kernels.apply_unitary_numpy, state, u, qubits, n, args.repeats
            )
            a = _kernels.apply_unitary_numba(state, u, qubits, n)
            b = _kernels.apply_unitary_numpy(state, u, qubits, n)
            assert np.allclose(a, b, atol=1e-12), "backends disagree"
            print(
                f"{n:>3} {k:>2} {t_nb * 1e6:>12.1f} {t_np * 1e6:>12.1f} "
                f"{t_np / t_nb:>8.2f}x"
            )


if __name__ == "__main__":
    main()
