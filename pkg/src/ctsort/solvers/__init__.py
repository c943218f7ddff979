"""Decision procedures for constrained topological sorting and shuffles."""

from ctsort.solvers.brute import solve_brute, solve_brute_multi
from ctsort.solvers.width import solve_bounded_width
from ctsort.solvers.monomial import Monomial, monomial_to_dfa, solve_monomial, solve_union
from ctsort.solvers.adhoc import (
    solve_aab,
    solve_ab_or_aa,
    solve_ab_star_btail,
    solve_apbp,
    solve_kprime_or_power,
)
from ctsort.solvers.group import (
    insertion_compress,
    reachable_set,
    realize_segmented,
    solve_group_csh,
)
from ctsort.solvers.district import DistrictGroupMonomial, district_to_dfa, solve_district_monomial
from ctsort.solvers.spec import LanguageSpec
from ctsort.solvers.dispatch import dispatch

__all__ = [
    "DistrictGroupMonomial",
    "LanguageSpec",
    "Monomial",
    "dispatch",
    "district_to_dfa",
    "insertion_compress",
    "monomial_to_dfa",
    "reachable_set",
    "realize_segmented",
    "solve_aab",
    "solve_ab_or_aa",
    "solve_ab_star_btail",
    "solve_apbp",
    "solve_brute",
    "solve_brute_multi",
    "solve_bounded_width",
    "solve_group_csh",
    "solve_kprime_or_power",
    "solve_monomial",
    "solve_union",
]
