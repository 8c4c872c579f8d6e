"""Numerical tools for the symmetrized polydisc and its operator theory."""

from .errors import *  # noqa: F401,F403
from .gamma_ops import (
    GammaTuple,
    FundamentalTuple,
    check_gamma_contraction,
    classify_tuple,
    fundamental_tuple,
    gamma3_to_gamma2,
    gamma_tuple,
    generate_pure,
    verify_fot_identities,
)
from .hardy_model import build_dilation, model_compression, verify_dilation_moments, verify_l0
from .joint_spectrum import commuting_tuple, match_distance, simultaneous_triangularize, taylor_spectrum
from .matrix_core import defect, numerical_radius, op_norm
from .polydisc_geometry import Region, SymPoint, classify, membership, symmetrize
from .variety import (
    VarietyRep,
    boundary_exit_report,
    build_variety,
    fiber,
    project_g3_to_g2,
    separation_certificate,
    trace,
    vn_inequality_check,
)

__version__ = "0.1.0"
