"""Classical electrons on finite site geometries.

Ground-state energy profiles over a fixed external potential, density
functionals at fixed and at free electron count, dual potentials
certifying their values, convexity hardness of the energy profile, and
the dissociation limit of the corresponding quantum problem.
"""

from ._core import (
    CERTIFICATION_MARGIN,
    DEFAULT_VERIFICATION_SEED,
    MAX_SITES,
    Error,
    SiteConfiguration,
    certify,
    diamond,
    dissociation,
    dual_potential,
    energy_profile,
    ensemble_energy,
    ensemble_functional,
    functional,
    gap,
    ground_energy,
    hardness,
    minimize_hardness,
    random_search,
    run_suite,
    subset_energy,
)

__all__ = [
    "CERTIFICATION_MARGIN",
    "DEFAULT_VERIFICATION_SEED",
    "MAX_SITES",
    "Error",
    "SiteConfiguration",
    "certify",
    "diamond",
    "dissociation",
    "dual_potential",
    "energy_profile",
    "ensemble_energy",
    "ensemble_functional",
    "functional",
    "gap",
    "ground_energy",
    "hardness",
    "minimize_hardness",
    "random_search",
    "run_suite",
    "subset_energy",
]
