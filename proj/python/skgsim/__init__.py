"""Group secret-key generation over erasure, deterministic, and Gaussian
state-dependent broadcast channels.

The heavy lifting lives in the compiled extension ``skgsim._core``: exact
finite-field protocol simulation with rank-certified secrecy, capacity
formulas and bounds, and the exact recursive solver for the layer power
allocation.
"""

from skgsim._core import (
    __version__,
    achievable_rate,
    db_to_linear,
    det_capacity,
    det_upper_bound,
    dof,
    dof_upper,
    erasure_capacity,
    grid_oracle,
    layer_rates,
    matrix_rank,
    mds_generator,
    optimize_power,
    run_deterministic,
    run_erasure,
    solve_kkt,
    upper_bound,
)

__all__ = [
    "__version__",
    "achievable_rate",
    "db_to_linear",
    "det_capacity",
    "det_upper_bound",
    "dof",
    "dof_upper",
    "erasure_capacity",
    "grid_oracle",
    "layer_rates",
    "matrix_rank",
    "mds_generator",
    "optimize_power",
    "run_deterministic",
    "run_erasure",
    "solve_kkt",
    "upper_bound",
]
