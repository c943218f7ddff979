"""Constrained topological sorting (CTS) and constrained shuffle (CSh) toolkit.

Decide whether a vertex-labeled DAG (or a tuple of strings) admits a
topological sort (interleaving) spelling a word of a fixed regular language,
classify languages by the algebraic structure of their transition monoids,
and generate NP-hard benchmark instances.
"""

from ctsort.errors import CapExceeded, CtsortError, RegexSyntaxError
from ctsort.config import Caps

__all__ = ["Caps", "CapExceeded", "CtsortError", "RegexSyntaxError"]
