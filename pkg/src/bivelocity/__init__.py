"""Bivelocity and volume-diffusion hydrodynamics in one dimension.

Four model variants share a cell-centred finite-difference core:
the Navier-Stokes-Fourier baseline, the reduced bivelocity set, the full
volume model with an evolving specific volume, and a Klimontovich-type
diffusive set.
"""

from .governing import ModelVariant, StateDerivative, make_rhs, rhs
from .solver import IntegratorConfig, Problem, SimulationDiverged, Trajectory, run, stable_dt
from .state import (FlowState, GasModel, Grid1D, TransportCoefficients, ValidationError,
                    derived_quantities, validate)

__version__ = "0.1.0"

__all__ = [
    "FlowState", "GasModel", "Grid1D", "IntegratorConfig", "ModelVariant", "Problem",
    "SimulationDiverged", "StateDerivative", "Trajectory", "TransportCoefficients",
    "ValidationError", "derived_quantities", "make_rhs", "rhs", "run", "stable_dt", "validate",
]
