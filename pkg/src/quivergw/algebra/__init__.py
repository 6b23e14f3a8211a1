from .hbar import hbar_expand
from .laurent import ONE, SQRT_Q, ZERO, HalfLaurent, quantum_integer
from .poly import RationalFunctionQ, gl_order_poly, q_binomial
from .series import (
    ConfigurationError,
    QuantumTorusElement,
    SeriesDomainError,
    TruncatedSeries,
    qt_multiply,
    series_exp,
    series_inverse,
    series_log,
    skew,
)

__all__ = [
    "ConfigurationError",
    "HalfLaurent",
    "ONE",
    "QuantumTorusElement",
    "RationalFunctionQ",
    "SQRT_Q",
    "SeriesDomainError",
    "TruncatedSeries",
    "ZERO",
    "gl_order_poly",
    "hbar_expand",
    "q_binomial",
    "qt_multiply",
    "quantum_integer",
    "series_exp",
    "series_inverse",
    "series_log",
    "skew",
]
