"""Exact certificates of identifiability for generic tensors of a given format."""
__version__ = "0.1.0"

from .varieties import (AmbientInfo, GaussianMoment1D, ParameterPoint, Segre, SegreVeronese,
                        SpecError, SpecParseError, Veronese, ambient, embed,
                        expected_secant_dim, format_spec, is_uniruled_by_lines, parse_spec,
                        sample_point)
from .linalg import (DEFAULT_PRIME, RETRY_PRIMES, PrimeFieldMatrix, RationalMatrix,
                     rank_exact_rational, rank_mod_p)
from .terracini import (TangentFrame, TerraciniMatrix, Witness, WitnessProvider,
                        gaussian_moments, jet_check, secant_dim_witness, tangent_frame,
                        terracini_matrix)
from .certify import (Certificate, CertifyConfig, Defectivity, TheoremId, Verdict, certify,
                      closed_form_e1, closed_form_ii2, closed_form_ip4, ii1_bound,
                      max_k_sweep, unbalanced_check, veronese_defectivity)

__all__ = [
    "AmbientInfo", "Certificate", "CertifyConfig", "DEFAULT_PRIME", "Defectivity",
    "GaussianMoment1D", "ParameterPoint", "PrimeFieldMatrix", "RETRY_PRIMES", "RationalMatrix",
    "Segre", "SegreVeronese", "SpecError", "SpecParseError", "TangentFrame", "TerraciniMatrix",
    "TheoremId", "Verdict", "Veronese", "Witness", "WitnessProvider", "ambient", "certify",
    "closed_form_e1", "closed_form_ii2", "closed_form_ip4", "embed", "expected_secant_dim",
    "format_spec", "gaussian_moments", "ii1_bound", "is_uniruled_by_lines", "jet_check",
    "max_k_sweep", "parse_spec", "rank_exact_rational", "rank_mod_p", "sample_point",
    "secant_dim_witness", "tangent_frame", "terracini_matrix", "unbalanced_check",
    "veronese_defectivity",
]
