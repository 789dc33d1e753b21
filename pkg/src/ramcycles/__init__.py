"""Ramification of periodic germs over finite fields and periodic points of maps
over non-archimedean fields, in exact arithmetic with explicit censoring."""

__version__ = "0.1.0"

from .errors import RamcyclesError
from .fields import FFElem, FieldSpec, ff_make, mult_order
from .series import AtLeast, CensoredNat, Exact, Germ, Series, compose, iterate, make_germ
from .ramification import TruncPolicy, is_almost_minimally_ramified, is_minimally_ramified, ram_index, ram_profile
from .normal_form import characterize_mr, iterative_residue, normalize
from .valued import LaurentTrunc, PadicTrunc, RationalExact, bound_valuation
from .okpoly import OKPoly
from .cycles import appendix_check, cycle_report, newton_polygon

__all__ = [
    "__version__", "RamcyclesError", "FFElem", "FieldSpec", "ff_make", "mult_order",
    "AtLeast", "CensoredNat", "Exact", "Germ", "Series", "compose", "iterate", "make_germ",
    "TruncPolicy", "is_almost_minimally_ramified", "is_minimally_ramified", "ram_index", "ram_profile",
    "characterize_mr", "iterative_residue", "normalize",
    "LaurentTrunc", "PadicTrunc", "RationalExact", "bound_valuation",
    "OKPoly", "appendix_check", "cycle_report", "newton_polygon",
]
