"""Exact-arithmetic minimal points and determinant identities for
simultaneous rational approximation to (1, xi, ..., xi^n), n <= 3."""

from .exactreal import (AlgebraicReal, XiPolynomial, compare_abs_forms,
                        make_algebraic, refine_enclosure, sign_of_form)
from .intervals import Interval
from .latgeom import (MultiVector, compare_L, det_int, face_maps,
                      laplace_delta_expand, lattice_saturate, l_value,
                      primitive_check, subspace_height, veronese_factor, wedge)
from .maps import (C_map, E_map, contract_pair, prop43_witness, psi_map,
                   v_dim, xi_map)
from .minpoints import (MinimalPointRecord, best_for_x0, canonicalize_xi,
                        enumerate_minimal_points, verify_minimality_oracle)
from .structure import (chain_analyze, cij_table, exponent_report,
                        hypothesis_scan, schmidt_audit)
from .constants import ExponentConstants, build_constants, verify_identities

__version__ = "0.1.0"

__all__ = [
    "AlgebraicReal", "XiPolynomial", "Interval", "MultiVector",
    "MinimalPointRecord", "ExponentConstants",
    "make_algebraic", "refine_enclosure", "sign_of_form", "compare_abs_forms",
    "face_maps", "l_value", "compare_L", "det_int", "laplace_delta_expand",
    "wedge", "lattice_saturate", "subspace_height", "primitive_check",
    "veronese_factor",
    "C_map", "E_map", "psi_map", "xi_map", "contract_pair", "v_dim",
    "prop43_witness",
    "best_for_x0", "enumerate_minimal_points", "verify_minimality_oracle",
    "canonicalize_xi",
    "chain_analyze", "cij_table", "schmidt_audit", "exponent_report",
    "hypothesis_scan",
    "build_constants", "verify_identities",
]
