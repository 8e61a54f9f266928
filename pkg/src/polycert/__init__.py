"""Exact certificates of global nonnegativity for multivariate polynomials."""

from .bounds import SizeProfile, critical_value_lower_bound, epsilon_bound, profile_of, radius_bound
from .certify import (
    Certificate,
    FailSignal,
    PertType,
    VerificationReport,
    certificate_from_json,
    certificate_to_json,
    hj_sos_neg,
    hj_sos_pos,
    hj_sos_rur,
    sos_rur,
    verify_certificate,
)
from .polycore import MvPoly, UvPoly, evaluate, gradient, homogenize, norms, parse_poly, serialize_poly, top_part
from .sospert import certify_sos_perturbed, psd_check, sos_pert_threshold
from .stereo import Witness, stereo_transform, witness_transport

__all__ = [
    "Certificate",
    "FailSignal",
    "MvPoly",
    "PertType",
    "SizeProfile",
    "UvPoly",
    "VerificationReport",
    "Witness",
    "certificate_from_json",
    "certificate_to_json",
    "certify_sos_perturbed",
    "critical_value_lower_bound",
    "epsilon_bound",
    "evaluate",
    "gradient",
    "hj_sos_neg",
    "hj_sos_pos",
    "hj_sos_rur",
    "homogenize",
    "norms",
    "parse_poly",
    "profile_of",
    "psd_check",
    "radius_bound",
    "serialize_poly",
    "sos_pert_threshold",
    "sos_rur",
    "stereo_transform",
    "top_part",
    "verify_certificate",
    "witness_transport",
]
