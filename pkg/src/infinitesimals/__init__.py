"""Exact arithmetic in ordered fields with infinitesimals.

Modules, bottom-up: :mod:`ratfunc` (the field Q(x), x a positive
infinitesimal), :mod:`series` (truncated Laurent series in e),
:mod:`expr` (expression language and backends), :mod:`calculus`
(derivatives and limits by infinitesimal increments), :mod:`ultrapower`
(filters and sequence hyperreals), :mod:`scenes` and :mod:`render`
(Luzin's saw, the blancmange, SVG/CSV output).
"""

from .errors import InfinitesimalError
from .ratfunc import Classification, Ordering, RatFunc, Sign, classify, compare, standard_part
from .series import Series

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "InfinitesimalError",
    "Ordering",
    "RatFunc",
    "Series",
    "Sign",
    "classify",
    "compare",
    "standard_part",
]
