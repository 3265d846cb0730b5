"""Second-order central differences on a uniform cell-centred grid.

Periodic grids wrap.  Reflective grids mirror one ghost cell across each
wall: even fields (densities, temperature, normal stress) are copied,
odd fields (velocities and fluxes of scalars) change sign.  The derivative
of an even field is odd and vice versa.
"""

import numpy as np

from .state import Grid1D

EVEN = 1
ODD = -1


def pad(f, grid: Grid1D, parity=EVEN):
    f = np.asarray(f, dtype=float)
    if grid.bc == "periodic":
        return np.concatenate(([f[-1]], f, [f[0]]))
    return np.concatenate(([parity * f[0]], f, [parity * f[-1]]))


def ddx(f, grid: Grid1D, parity=EVEN):
    """Central first derivative; ``parity`` is only read on reflective grids."""
    g = pad(f, grid, parity)
    return (g[2:] - g[:-2]) / (2.0 * grid.dx)


def div(flux, grid: Grid1D, parity=ODD):
    """Divergence of a cell-centred flux.  Telescopes to zero on periodic grids."""
    return ddx(flux, grid, parity)
