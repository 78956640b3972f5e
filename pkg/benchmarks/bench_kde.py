"""Times the compiled density kernel against the pure-Python fallback.

Run from a checkout with the package installed:

    python3 benchmarks/bench_kde.py

Each workload evaluates the separable Gaussian kernel sum for n sample
points over a w x h grid of cell centers, which is the hot loop behind
density estimation. Reported numbers are the best of five runs.
"""

import time

import numpy as np

from gazechart.analysis import cell_centers
from gazechart.kernels import _kde_py

try:
    from gazechart.kernels import _kde_cy
except ImportError:
    _kde_cy = None

WORKLOADS = [
    # (points, width, height)  full frame and the downsampled grids the
    # analysis layer actually evaluates on
    (50, 256, 144),
    (200, 256, 144),
    (200, 1024, 576),
    (1000, 1024, 576),
]


def run(fn, px, py, cx, cy, h):
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        out = fn(px, py, cx, cy, h, h)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    rng = np.random.default_rng(42)
    print(f"{'workload':>22}  {'numpy':>10}  {'compiled':>10}  {'compiled/numpy':>14}")
    for n, w, h in WORKLOADS:
        px = rng.uniform(0, w, n)
        py = rng.uniform(0, h, n)
        cx = cell_centers(w, 1)
        cy = cell_centers(h, 1)
        t_py, out_py = run(_kde_py.gaussian_grid, px, py, cx, cy, 40.0)
        label = f"{n} pts on {w}x{h}"
        if _kde_cy is None:
            print(f"{label:>22}  {t_py * 1e3:>8.2f}ms  {'absent':>10}")
            continue
        t_cy, out_cy = run(_kde_cy.gaussian_grid, px, py, cx, cy, 40.0)
        gap = float(np.abs(np.asarray(out_py) - np.asarray(out_cy)).max())
        assert gap <= 1e-9, f"backends disagree by {gap}"
        print(f"{label:>22}  {t_py * 1e3:>8.2f}ms  {t_cy * 1e3:>8.2f}ms  "
              f"{t_cy / t_py:>13.1f}x")
    print()
    print("The numpy fallback hands the combine step to BLAS and wins on raw")
    print("throughput; the compiled kernel fixes the summation order instead,")
    print("so grids are bitwise identical on every machine. Both agree within")
    print("1e-9 before normalization. Force the fallback with")
    print("GAZECHART_PURE_PYTHON=1.")


if __name__ == "__main__":
    main()
