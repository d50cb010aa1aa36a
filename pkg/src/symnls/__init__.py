"""Spectral solvers for the cubic nonlinear Schrödinger equation:
low-regularity time integrators, classical baselines, brute-force oracles,
and a convergence/conservation/timing benchmark harness."""

__version__ = "0.1.0"

from .spectral import (  # noqa: F401
    Boundary,
    Grid,
    OperatorKind,
    OperatorSpec,
    SpectralField,
    apply_operator,
    conjugate,
    dealias,
    forward_transform,
    frac_laplacian,
    frac_semigroup_diff,
    inverse_transform,
    l2_norm,
    phi1,
    read_snapshot,
    rough_data,
    semigroup,
    sobolev_norm,
    write_snapshot,
)
from .schemes import (  # noqa: F401
    NonConvergence,
    Scheme,
    StepperConfig,
    StepReport,
    Trajectory,
    evolve,
    nonlinearity,
    psi_E,
    psi_I,
    step_exp_euler,
    step_lie,
    step_lowreg1,
    step_strang,
    step_symmetric,
)
from .observables import ObservableSample, commutator, energy, mass  # noqa: F401
