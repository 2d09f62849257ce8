"""Numerical toolkit for quantum entropy and trace inequalities.

Dense density matrices, channels and measurements; verifiers for strong
subadditivity, monotonicity of relative entropy, Lieb-type trace
inequalities and the Holevo bound, with residuals of their equality
conditions.
"""

from .channels import (
    Ensemble,
    KrausChannel,
    Povm,
    StinespringIsometry,
    adjoint_apply,
    apply,
    qc_channel,
    stinespring,
)
from .entropy import INFINITE, relative_entropy, shannon_entropy, von_neumann_entropy
from .holevo import accessible_info, hall_bound, holevo_chi
from .inequalities import (
    check_joint_convexity,
    check_monotonicity,
    check_mpt,
    check_ssa,
    check_subadditivity,
    golden_thompson_gap,
    lieb_triple_gap,
)
from .reports import InfoReport, ResidualReport, VerdictReport
from .tensor import MultipartiteState, embed, partial_trace, purify

__version__ = "0.1.0"

__all__ = [
    "Ensemble", "KrausChannel", "Povm", "StinespringIsometry", "adjoint_apply", "apply",
    "qc_channel", "stinespring", "INFINITE", "relative_entropy", "shannon_entropy",
    "von_neumann_entropy", "accessible_info", "hall_bound", "holevo_chi",
    "check_joint_convexity", "check_monotonicity", "check_mpt", "check_ssa",
    "check_subadditivity", "golden_thompson_gap", "lieb_triple_gap", "InfoReport",
    "ResidualReport", "VerdictReport", "MultipartiteState", "embed", "partial_trace", "purify",
]
