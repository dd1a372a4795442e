"""Numerical laboratory for zeta-factorization identities on a Jacob's-ladder surrogate."""

from .crossbreed import HybridReport, run_formula
from .factorize import FactorizationCertificate, FunctionFamily, certificate, closed_form_mean
from .ladder import LadderModel, build_ladder, disconnected_set, load_cache, phi1, phi1_inverse, save_cache
from .zeta_eval import BACKEND, EvalConfig, hardy_z, riemann_siegel_theta, zeta_mod_sq

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EvalConfig",
    "FactorizationCertificate",
    "FunctionFamily",
    "HybridReport",
    "LadderModel",
    "build_ladder",
    "certificate",
    "closed_form_mean",
    "disconnected_set",
    "hardy_z",
    "load_cache",
    "phi1",
    "phi1_inverse",
    "riemann_siegel_theta",
    "run_formula",
    "save_cache",
    "zeta_mod_sq",
]
