"""Chern-Ricci flow and solitons on Lie groups with left-invariant hermitian structures."""
from .chern import ChernRicciData, chern_ricci_form, chern_ricci_operator, eigenspace, singular_times
from .errors import ChernRicciError, DomainError, InvariantViolation, NonInvertibleError
from .flow import (
    FlowSolution,
    LimitResult,
    bracket_flow_at,
    bracket_norm,
    integrate_bracket_flow_numeric,
    integrate_crf_numeric,
    isomorphism_at,
    limit_lambda,
    limit_nu,
    metric_at,
    operator_at,
    scalar_curvature_at,
    solve,
)
from .hermitian import ComplexStructure, HermitianStructure, compatible_metric, d_omega, is_kahler
from .kernels import BACKEND
from .lie import LieBracket, Subspace, act_gl, validate_bracket
from .soliton import SolitonCertificate, build_semidirect, certify, soliton_evolution_check

__version__ = "0.1.0"
