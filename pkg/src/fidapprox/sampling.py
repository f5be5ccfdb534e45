"""Seeded samplers over the nonnegative octant of the Bloch ball."""

from __future__ import annotations

import numpy as np

from .errors import SamplingExhausted


def octant_ball(rng: np.random.Generator, n: int) -> np.ndarray:
    """n points uniform in {r : |r| <= 1, r >= 0}, shape (n, 3)."""
    d = np.abs(rng.standard_normal((n, 3)))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * rng.random(n)[:, None] ** (1.0 / 3.0)


def ball(rng: np.random.Generator, n: int) -> np.ndarray:
    """n points uniform in the full Bloch ball."""
    d = rng.standard_normal((n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * rng.random(n)[:, None] ** (1.0 / 3.0)


def rejection(rng, n: int, accept, batch: int = 20_000, max_draws: int | None = None):
    """Draw n octant-ball points satisfying the vectorized predicate ``accept``.

    Raises SamplingExhausted when ``max_draws`` candidates produce fewer than n
    hits, which in practice means the predicate describes an empty region.
    """
    max_draws = max_draws or max(2_000_000, 500 * n)
    found, drawn, total = [], 0, 0
    while total < n:
        if drawn >= max_draws:
            raise SamplingExhausted(
                f"only {total} of {n} points accepted after {drawn} draws"
            )
        pts = octant_ball(rng, batch)
        drawn += batch
        hit = pts[np.asarray(accept(pts[:, 0], pts[:, 1], pts[:, 2]), dtype=bool)]
        found.append(hit)
        total += len(hit)
    return np.concatenate(found)[:n]
