"""Canonical lifts modulo p^2 of ordinary projective hypersurfaces.

The obstruction to a lift over W_2(k) being canonical is computed on graded
dual modules; for the Dwork family it reduces to a closed form in
Hasse-Dwork polynomials, which the solver inverts.
"""

from ._backend import active_name as kernel_backend
from .arith import (
    FieldElement,
    FieldSpec,
    Witt2,
    field_inv,
    teichmuller,
    times_p,
    witt_add,
    witt_frobenius,
    witt_from_residue,
    witt_mul,
    witt_neg,
    witt_prime_iso,
)
from .dualmod import DualElement, Witt2Matrix, dual_act, dual_basis, dual_pairing, howell_kernel
from .dwork import (
    DworkParams,
    canonical_eta,
    closed_form_obstruction,
    dwork_poly,
    hd_coeff_oracle,
    hd_def,
    hd_mod,
    ratio_invariant,
)
from .obstruction import HypersurfaceContext, is_canonical, obstruction_kernel
from .poly import HomogPoly, parse_poly

__version__ = "0.1.0"

__all__ = [
    "DualElement",
    "DworkParams",
    "FieldElement",
    "FieldSpec",
    "HomogPoly",
    "HypersurfaceContext",
    "Witt2",
    "Witt2Matrix",
    "canonical_eta",
    "closed_form_obstruction",
    "dual_act",
    "dual_basis",
    "dual_pairing",
    "dwork_poly",
    "field_inv",
    "hd_coeff_oracle",
    "hd_def",
    "hd_mod",
    "howell_kernel",
    "is_canonical",
    "kernel_backend",
    "obstruction_kernel",
    "parse_poly",
    "ratio_invariant",
    "teichmuller",
    "times_p",
    "witt_add",
    "witt_frobenius",
    "witt_from_residue",
    "witt_mul",
    "witt_neg",
    "witt_prime_iso",
]
