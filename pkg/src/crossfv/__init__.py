"""
crossfv: structure-preserving finite-volume solver for nonlocal
cross-diffusion population systems on the one-dimensional torus.
"""

from .grid import Mesh, TimeGrid, bv_norm, diff, norm_lq, norm_w1q, seminorm_w1q
from .initial import HarmonicProfile, HatProfile, IndicatorProfile, InitialData
from .kernels import DiscreteKernel, KernelSpec, cell_average, convolve, transpose_kernel
from .mobility import LOGMEAN, UPWIND, chain_rule_defect, face_mobility, logmean
from .model import (
    ModelParams,
    assemble_pair_matrix,
    check_detailed_balance,
    coercivity_constant,
)
from .scheme import SchemeOperator, SolverOptions, State, StepReport, project_initial, run
from .entropy import boltzmann_entropy, dissipation_forms, ledger, rao_entropy
from .metrics import ErrorRecord, eoc, lp_error, restrict, wasserstein1
from .presets import REGISTRY, get_preset

__version__ = "0.1.0"

__all__ = [
    "Mesh",
    "TimeGrid",
    "diff",
    "norm_lq",
    "seminorm_w1q",
    "norm_w1q",
    "bv_norm",
    "InitialData",
    "IndicatorProfile",
    "HarmonicProfile",
    "HatProfile",
    "KernelSpec",
    "DiscreteKernel",
    "cell_average",
    "convolve",
    "transpose_kernel",
    "UPWIND",
    "LOGMEAN",
    "face_mobility",
    "logmean",
    "chain_rule_defect",
    "ModelParams",
    "check_detailed_balance",
    "assemble_pair_matrix",
    "coercivity_constant",
    "SchemeOperator",
    "SolverOptions",
    "State",
    "StepReport",
    "project_initial",
    "run",
    "boltzmann_entropy",
    "rao_entropy",
    "dissipation_forms",
    "ledger",
    "ErrorRecord",
    "restrict",
    "lp_error",
    "wasserstein1",
    "eoc",
    "REGISTRY",
    "get_preset",
]
