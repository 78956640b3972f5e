"""Pure numpy density kernel, used when the compiled extension is absent.

Exploits separability of the Gaussian kernel: per-point row and column
factors are formed once and combined with a single matrix product, so
cost is O(n * (W + H)) exponentials plus one (H, n) x (n, W) GEMM
instead of O(n * W * H) exponentials.
"""

import numpy as np


def gaussian_grid(points_x, points_y, centers_x, centers_y, h_x, h_y):
    """Sum of anisotropic Gaussian bumps evaluated on a grid.

    Returns an (H, W) float64 array with entry [j, i] equal to
    sum_p exp(-((cx[i]-px[p])^2 / (2 h_x^2) + (cy[j]-py[p])^2 / (2 h_y^2))).
    Normalization is the caller's job.
    """
    px = np.ascontiguousarray(points_x, dtype=np.float64)
    py = np.ascontiguousarray(points_y, dtype=np.float64)
    cx = np.ascontiguousarray(centers_x, dtype=np.float64)
    cy = np.ascontiguousarray(centers_y, dtype=np.float64)
    fx = np.exp(-0.5 * ((cx[None, :] - px[:, None]) / h_x) ** 2)  # (n, W)
    fy = np.exp(-0.5 * ((cy[None, :] - py[:, None]) / h_y) ** 2)  # (n, H)
    return fy.T @ fx
