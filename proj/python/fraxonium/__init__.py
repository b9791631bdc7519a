"""Fraxonium qudit design toolkit (C++ core)."""

from ._core import (
    CircuitSpec,
    HarmonicTerm,
    KiteFitError,
    NumericalError,
    compare_with_exact,
    convergence_check,
    default_cycle,
    dipole_chart,
    displacement_element,
    effective_relation,
    evaluate_potential,
    fidelity,
    lowest_minima,
    holonomy,
    hopping,
    kite_potential,
    make_preset,
    parallel_compose,
    preset_names,
    retrace_cycle,
    series_negate,
    solve_coefficients,
    stirap,
    sweep_flux,
    tight_binding,
    wkb_hopping,
)

__all__ = [name for name in dir() if not name.startswith("_")]
