"""Eigenvalue enclosures for Dirac operators with rigid matrix potentials."""

__version__ = "0.1.0"

from .clifford import DiracRep, dirac_matrices
from .rigidity import RigidPotential, example, verify, nonexistence_probe
from .norms import RadialProfile, lorentz_radial_norm, mt_norm, radial_lp_norm
from .regions import EnclosureSpec, boundary, disks, member
from .atlas import ExponentPoint, classify
from .lab import GridModel, birman_schwinger, perturbed_spectrum

__all__ = [
    "DiracRep",
    "dirac_matrices",
    "RigidPotential",
    "example",
    "verify",
    "nonexistence_probe",
    "RadialProfile",
    "lorentz_radial_norm",
    "mt_norm",
    "radial_lp_norm",
    "EnclosureSpec",
    "boundary",
    "disks",
    "member",
    "ExponentPoint",
    "classify",
    "GridModel",
    "birman_schwinger",
    "perturbed_spectrum",
]
