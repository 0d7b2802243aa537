"""Computational toolkit for Lorentz-norm analysis on periodic grids:
rearrangement-based norms, dyadic frequency decompositions, fractional
derivatives, an inequality verification registry and energy-flux
diagnostics for divergence-free fields."""

from .field import AnalyticProfile, Grid, SampledField, dilate, lp_norm, sample
from .rearrange import (LayerProfile, decreasing_rearrangement,
                        distribution_function, lorentz_norm)
from .spectral import decompose, fractional_laplacian
from .spaces import SpaceParams, besov_lorentz_norm
from .inequalities import load_registry, ratio, solve_exponents, sweep
from .nse import VelocityField, flux, leray_project

__all__ = [
    "AnalyticProfile", "Grid", "SampledField", "dilate", "lp_norm", "sample",
    "LayerProfile", "decreasing_rearrangement", "distribution_function",
    "lorentz_norm", "decompose", "fractional_laplacian", "SpaceParams",
    "besov_lorentz_norm", "load_registry", "ratio", "solve_exponents",
    "sweep", "VelocityField", "flux", "leray_project",
]
