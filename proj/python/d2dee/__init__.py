"""Energy-aware D2D relay selection: bounds, campaigns and acceptance checks."""

from ._core import (  # noqa: F401
    BoundPair,
    ConfigError,
    ContractViolation,
    DomainError,
    RangeError,
    ShadowScenario,
    SolverFailure,
    __version__,
    config_keys,
    direct_bound,
    direct_energy_j,
    e1,
    ei,
    erfi,
    min_uniform_mean,
    optimal_power,
    parse_config_text,
    q_function,
    relay_upper_bound,
    run_acceptance,
    run_campaign,
)
