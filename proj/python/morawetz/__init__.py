"""Pseudospectral defocusing-NLS simulator with Morawetz-type monotonicity
verification.

The heavy lifting lives in the compiled extension ``morawetz._core``; this
package re-exports its public surface.
"""

from ._core import (
    angular_average_weighted_l4,
    conserved_integrals,
    evolve,
    grid_coordinates,
    interaction_action_1d,
    interaction_action_2d,
    interaction_action_3d,
    l2_norm,
    run_config,
    sobolev_seminorm,
    spectral_derivative,
    strang_step,
    verify_field_identities,
    weighted_l4_direct_quadrature,
)

__all__ = [
    "angular_average_weighted_l4",
    "conserved_integrals",
    "evolve",
    "grid_coordinates",
    "interaction_action_1d",
    "interaction_action_2d",
    "interaction_action_3d",
    "l2_norm",
    "run_config",
    "sobolev_seminorm",
    "spectral_derivative",
    "strang_step",
    "verify_field_identities",
    "weighted_l4_direct_quadrature",
]
