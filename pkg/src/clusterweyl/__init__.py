"""Cluster-algebraic realisations of Weyl group actions on periodic lattice quivers.

Modules
-------
lie_data
    Cartan data, Weyl group words and roots for the finite types.
symbolic
    Exact Laurent / rational-function arithmetic, log-canonical brackets and
    truncated series.
cluster_core
    Quivers, seeds, mutation (symbolic, tropical and F-polynomial) and
    greenness.
quiver_builders
    The lattice quivers ``Q(g)``, ``Q_m(g)`` and affine extensions.
weyl_action
    The mutation sequences ``R_i`` and their checks.
qchar_bridge
    The ``y``/``a`` lattices, the map ``beta`` and the action ``r_i``.
toda_bridge
    The ``s``/``tau`` lattices of the lattice Toda field.
cli
    Command-line entry point.
"""
from __future__ import annotations

from .lie_data import DynkinType, SUPPORTED_TYPES, cartan_data, parse_type
from .quiver_builders import build_periodic, build_window, circles
from .cluster_core import Quiver, initial_seed, mutate_seed, apply_sequence

__version__ = "0.1.0"

__all__ = [
    "DynkinType",
    "SUPPORTED_TYPES",
    "cartan_data",
    "parse_type",
    "build_periodic",
    "build_window",
    "circles",
    "Quiver",
    "initial_seed",
    "mutate_seed",
    "apply_sequence",
]
