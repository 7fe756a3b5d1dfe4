"""Shared fixture builders for the grid-based test modules."""

import numpy as np

from balayage.gridpotential import GridDomain, GridFunction, solve_dirichlet


def make_subharmonic(d: GridDomain, rng, harmonic_only=False,
                     bump: float = 0.5) -> GridFunction:
    """Discretely subharmonic sample: Dirichlet solve of random boundary
    data, plus (unless harmonic_only) a max with a second harmonic field
    and a paraboloid whose defect is strictly positive."""
    g = GridFunction(d, rng.uniform(-2.0, 2.0, d.nx * d.ny))
    h = solve_dirichlet(d, g)
    if harmonic_only:
        return h
    cx, cy = rng.uniform(-1.0, 1.0, 2)
    para = GridFunction.from_callable(
        d, lambda x, y: bump * ((x - cx) ** 2 + (y - cy) ** 2))
    g2 = GridFunction(d, rng.uniform(-2.0, 2.0, d.nx * d.ny))
    h2 = solve_dirichlet(d, g2)
    return GridFunction(d, np.maximum(h.values, h2.values) + para.values)
