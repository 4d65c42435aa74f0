"""Newton-Leipnik chaotic system toolkit.

Simulation of the three-variable Newton-Leipnik system and its 1-D
reaction-diffusion master/slave pair, nonlinear synchronization controllers,
and numerical stability certificates (equilibrium spectra, dissipativity,
per-mode Hurwitz checks, Lyapunov-functional decay).
"""

__version__ = "0.1.0"

from .errors import BlowUpError, ConfigError
from .linalg3 import (
    CertificateReport,
    det3,
    eigenvalues3,
    hurwitz_certificate,
    second_additive_compound,
    trace3,
)
from .model import (
    EquilibriumReport,
    Params,
    dissipative,
    divergence,
    find_equilibria,
    jacobian,
    reaction_rhs,
    volume_decay,
)
from .ode import (
    LyapunovSpectrum,
    OdeRun,
    benettin_spectrum,
    ensemble_volume,
    integrate_ode,
    lyapunov_spectrum,
)
from .pde import (
    Field3,
    Grid1D,
    StepperConfig,
    imex_step,
    laplacian_apply,
    neumann_eigenvalue,
    trapezoid_weights,
)
from .sync import (
    ConditionReport,
    SyncResult,
    SyncTrace,
    check_condition_313,
    control_phi,
    error_matrix,
    error_rhs,
    lyapunov_decomposition,
    lyapunov_functional,
    mode_matrix,
    run_master_slave,
)

__all__ = [
    "__version__",
    "BlowUpError",
    "ConfigError",
    "CertificateReport",
    "det3",
    "trace3",
    "eigenvalues3",
    "second_additive_compound",
    "hurwitz_certificate",
    "Params",
    "EquilibriumReport",
    "reaction_rhs",
    "jacobian",
    "divergence",
    "dissipative",
    "volume_decay",
    "find_equilibria",
    "OdeRun",
    "LyapunovSpectrum",
    "integrate_ode",
    "lyapunov_spectrum",
    "benettin_spectrum",
    "ensemble_volume",
    "Grid1D",
    "Field3",
    "StepperConfig",
    "laplacian_apply",
    "neumann_eigenvalue",
    "trapezoid_weights",
    "imex_step",
    "ConditionReport",
    "SyncTrace",
    "SyncResult",
    "control_phi",
    "error_rhs",
    "error_matrix",
    "mode_matrix",
    "check_condition_313",
    "lyapunov_functional",
    "lyapunov_decomposition",
    "run_master_slave",
]
