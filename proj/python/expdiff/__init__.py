"""Geodesic flows of right-invariant H^k metrics on circle diffeomorphisms."""

from ._expdiff import (  # noqa: F401
    BlowUp,
    ConfigError,
    Error,
    InvalidDiffeo,
    NoConvergence,
    ShockFormed,
    ShootingConfig,
    SolverConfig,
    a_k_apply,
    a_k_inverse,
    b_k_apply,
    burgers_lagrangian,
    burgers_oracle,
    compose,
    energy,
    exp_map,
    flow,
    grid,
    invert,
    log_map,
    momentum_density,
    monitors,
    run_config,
)
