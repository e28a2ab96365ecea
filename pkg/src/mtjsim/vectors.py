"""Small 3-vector helpers on numpy arrays of shape (..., 3).

A single magnetization is a shape-(3,) array; an ensemble is (n, 3).  All
routines broadcast over leading axes.
"""

from __future__ import annotations

import numpy as np


def dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise dot product, keeps leading axes."""
    return np.sum(a * b, axis=-1)


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.cross(a, b)


def norm(a: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(a * a, axis=-1))


def normalized(a: np.ndarray) -> np.ndarray:
    return a / norm(a)[..., None]


def unit_vector_from_angles(theta: float, phi: float) -> np.ndarray:
    """Unit vector at polar angle `theta` from +x, azimuth `phi` about x.

    phi = 0 lies in the x-y plane, so (theta, 0) sweeps from +x through +y
    to -x.
    """
    s = np.sin(theta)
    return np.array([np.cos(theta), s * np.cos(phi), s * np.sin(phi)])
