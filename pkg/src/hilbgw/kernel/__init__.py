"""Exact arithmetic: rationals, polynomials, rational functions, series."""

from .poly import GENS, Poly, Rat, as_rat
from .ratfunc import RatFunc, change_gens, parse_ratfunc, ratfunc_eq
from .series import (TruncSeries, ULaurent, series_exp, series_log, series_mul,
                     series_pow_with_symbolic_exponent)

__all__ = [
    "GENS", "Poly", "Rat", "as_rat", "RatFunc", "change_gens", "parse_ratfunc", "ratfunc_eq",
    "TruncSeries", "ULaurent", "series_exp", "series_log", "series_mul",
    "series_pow_with_symbolic_exponent",
]
