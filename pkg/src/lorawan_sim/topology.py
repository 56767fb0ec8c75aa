"""Device placement around a gateway at the origin."""

from __future__ import annotations

import numpy as np


def place_devices_uniform_disc(n: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """``n`` points i.i.d. uniform over a disc of ``radius``; shape (n, 2)."""
    if n < 1 or radius <= 0:
        raise ValueError("need n >= 1 and radius > 0")
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))
