"""Quantum limits of linear continuous measurement for a cavity optomechanical detector."""
from ._kernels import BACKEND
from .config import RunConfig, preset
from .constants import HBAR
from .errors import (
    BlindQuadratureError,
    DomainError,
    QLimitError,
    SingularLoopError,
    UnboundedQCRBError,
    ValidationError,
)
from .interferometer import InterferometerParams, TestMass, assemble_detector
from .qcrb import detector_spectra, optimal_theta, sensitivity, sql
from .response import ObservableModes, symmetrized_spectrum, susceptibility_from_modes
from .single_shot import covariance, mc_estimate, optimal_angle
from .squeezing import VACUUM, SqueezeProfile
from .sweep import run_sweep

__version__ = "0.1.0"
