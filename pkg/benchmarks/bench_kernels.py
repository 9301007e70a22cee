"""Time the numba kernels against their numpy twins on sweep-sized inputs.

    python benchmarks/bench_kernels.py [--points 600] [--repeat 5]
"""
import argparse
import time

import numpy as np

from qlimit import _kernels
from qlimit.interferometer import InterferometerParams, assemble_detector
from qlimit.qcrb import GRID_POINTS, REFINE_LEVELS, detector_spectra


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=600)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=1_000_000)
    args = ap.parse_args()

    if _kernels.NUMBA_KERNELS is None:
        raise SystemExit("numba is not installed; nothing to compare")

    det = assemble_detector(InterferometerParams.fig3(400.0))
    omega = 2 * np.pi * np.geomspace(10, 1e4, args.points)
    spec = detector_spectra(det, omega=omega)
    num, den = spec.noise_form(), spec.signal_form()
    z = np.random.default_rng(0).standard_normal(args.samples)

    cases = {
        "scan_quadratic_ratio": lambda k: _kernels.scan_quadratic_ratio(
            num, den, GRID_POINTS, REFINE_LEVELS, kernels=k),
        "scan_abs_ratio": lambda k: _kernels.scan_abs_ratio(
            spec.s1f, spec.s2f, spec.chi1, spec.chi2, GRID_POINTS, REFINE_LEVELS, kernels=k),
        "squared_error_sums": lambda k: _kernels.squared_error_sums(z, 0.8, 0.1, kernels=k),
    }
    print(f"{'kernel':<22} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}  max rel diff")
    for name, run in cases.items():
        ref = run(_kernels.NUMPY_KERNELS)
        got = run(_kernels.NUMBA_KERNELS)  # also triggers compilation
        diff = max(float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.maximum(np.abs(a), 1e-300)))
                   for a, b in zip(ref, got))
        t_np = _best(lambda: run(_kernels.NUMPY_KERNELS), args.repeat)
        t_nb = _best(lambda: run(_kernels.NUMBA_KERNELS), args.repeat)
        print(f"{name:<22} {1e3 * t_np:>11.2f} {1e3 * t_nb:>11.2f} {t_np / t_nb:>7.1f}x  {diff:.2e}")


if __name__ == "__main__":
    main()
