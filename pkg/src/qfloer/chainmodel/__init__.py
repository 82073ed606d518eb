"""Chain-level models of the closed/open operations and their identities."""

from .checks import CHECKERS, Report, build_tilde_phi1, run_all
from .cone import ConeComplex, build_cone, build_tilde_phi1T, cone_table, floer_table, hom_term
from .core import ChainModel, GradedSpace, ModelBuilder, MultiOp
from .homology import Cohomology
from .signs import from_ainfinity_convention, to_ainfinity_convention

__all__ = [
    "CHECKERS", "ChainModel", "Cohomology", "ConeComplex", "GradedSpace", "ModelBuilder", "MultiOp",
    "Report", "build_cone", "build_tilde_phi1", "build_tilde_phi1T", "cone_table", "floer_table",
    "from_ainfinity_convention", "hom_term", "run_all", "to_ainfinity_convention",
]
