"""Quantum Fisher information of Gaussian and single-photon-subtracted/-added states."""

from .errors import (
    ContractError,
    DomainError,
    HeraldingError,
    NormalizationError,
    PhotonQfiError,
    ResourceError,
)
from .fock import effective_qfi, qfi_fock
from .phase_space import GaussianSpec, ParamJet, PolyGaussian, theta_derivative, wigner
from .qfi_closed import (
    QfiReport,
    cramer_rao_bound,
    qfi_added,
    qfi_asymptotic,
    qfi_coherent,
    qfi_gaussian,
    qfi_subtracted,
)
from .qfi_numeric import qfi_finite_difference, qfi_moment

__all__ = [
    "ContractError",
    "DomainError",
    "HeraldingError",
    "NormalizationError",
    "PhotonQfiError",
    "ResourceError",
    "GaussianSpec",
    "ParamJet",
    "PolyGaussian",
    "QfiReport",
    "wigner",
    "theta_derivative",
    "qfi_gaussian",
    "qfi_coherent",
    "qfi_subtracted",
    "qfi_added",
    "qfi_asymptotic",
    "qfi_moment",
    "qfi_finite_difference",
    "qfi_fock",
    "effective_qfi",
    "cramer_rao_bound",
]

__version__ = "0.1.0"
