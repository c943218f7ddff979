"""Route an instance/spec pair to the most specific applicable solver.

Ad-hoc routes are detected by exact language comparison against canonical
DFAs (robust to how the regex is spelled), and the width-dichotomy family
K' + A*(a^i+b^i)A* by testing the pattern's inclusion in the target
language.  Shuffle-only solvers are used only when the instance is a
disjoint union of paths.
"""

from __future__ import annotations

from functools import lru_cache

from ctsort.config import Caps, DEFAULT_CAPS
from ctsort.dag import LabeledDag, ShuffleInstance, chain_partition, dag_as_strings
from ctsort.errors import CtsortError
from ctsort.lang import Alphabet, Dfa, compile_regex, language_equal, language_subset
from ctsort.result import SolveResult
from ctsort.solvers.adhoc import (
    solve_aab,
    solve_ab_or_aa,
    solve_ab_star_btail,
    solve_apbp,
    solve_kprime_or_power,
)
from ctsort.solvers.brute import solve_brute, solve_brute_multi
from ctsort.solvers.district import solve_district_monomial
from ctsort.solvers.group import solve_group_csh
from ctsort.solvers.monomial import solve_monomial, solve_union
from ctsort.solvers.spec import LanguageSpec
from ctsort.solvers.width import solve_bounded_width

MAX_POWER_INDEX = 8


@lru_cache(maxsize=None)
def _canonical(pattern: str) -> Dfa:
    return compile_regex(pattern, Alphabet.of("ab"))


_AB_OR_AA = "(ab)*+(a+b)*aa(a+b)*"
_AAB = "(aa+b)*"
_APBP = "(aa*bb*aa*bb*)*"
_BTAIL = "(ab)*(ε+b(a+b)*)"


def _detect_power_index(d: Dfa) -> int | None:
    """Smallest i >= 2 with A*(a^i+b^i)A* included in L(d), if any."""
    if d.alphabet.symbols != ("a", "b"):
        return None
    for i in range(2, MAX_POWER_INDEX + 1):
        pattern = compile_regex(f"(a+b)*({'a' * i}+{'b' * i})(a+b)*", d.alphabet)
        if language_subset(pattern, d):
            return i
    return None


def dispatch(
    instance: LabeledDag | ShuffleInstance,
    spec: LanguageSpec,
    caps: Caps = DEFAULT_CAPS,
    want_witness: bool = False,
    forced: str | None = None,
    b_impl: int | None = None,
) -> SolveResult:
    if isinstance(instance, ShuffleInstance):
        g = instance.to_dag()
        inst = instance
    else:
        g = instance
        inst = dag_as_strings(g)

    if forced is not None:
        return _forced(g, inst, spec, forced, caps, want_witness, b_impl)

    if spec.kind == "semiautomaton":
        s, pairs = spec.semiautomaton_pair()
        return solve_brute_multi(g, s, pairs, caps, want_witness)

    if spec.kind == "monomial":
        return solve_monomial(g, spec.payload, want_witness)

    if spec.kind == "union":
        parts = [
            (p.kind, lambda gg, p=p: dispatch(gg, p, caps, want_witness, None, b_impl))
            for p in spec.payload
        ]
        return solve_union(g, parts)

    if spec.kind == "group":
        if inst is not None:
            core = ShuffleInstance(Alphabet(spec.payload.symbols), inst.strings)
            return solve_group_csh(core, spec.payload, b_impl, caps, want_witness)
        return _structural(g, inst, spec, caps, want_witness)

    if spec.kind == "district":
        if inst is not None:
            return solve_district_monomial(inst, spec.payload, b_impl, caps, want_witness)
        return _structural(g, inst, spec, caps, want_witness)

    # Regex: try the registered ad-hoc patterns (alphabet {a, b} only).
    if g.alphabet.symbols == ("a", "b") and g.is_single_letter:
        d = spec.to_dfa(g.alphabet)
        if language_equal(d, _canonical(_AB_OR_AA)):
            return solve_ab_or_aa(g, want_witness)
        if inst is not None and language_equal(d, _canonical(_AAB)):
            return solve_aab(inst, caps, want_witness)
        if inst is not None and language_equal(d, _canonical(_APBP)):
            return solve_apbp(inst, caps, want_witness)
        if language_equal(d, _canonical(_BTAIL)):
            return solve_ab_star_btail(g, want_witness)
        i = _detect_power_index(d)
        if i is not None:
            return solve_kprime_or_power(g, d, i, caps, want_witness)

    return _structural(g, inst, spec, caps, want_witness)


def _structural(g, inst, spec, caps, want_witness) -> SolveResult:
    d = spec.to_dfa(g.alphabet)
    if inst is not None and len(inst.strings) <= caps.dispatch_chains:
        cp = chain_partition(g)
        return solve_bounded_width(g, d, cp, caps, want_witness)
    return solve_brute(g, d, caps, want_witness)


def _forced(g, inst, spec, forced, caps, want_witness, b_impl) -> SolveResult:
    if forced == "brute":
        return solve_brute(g, spec.to_dfa(g.alphabet), caps, want_witness)
    if forced == "brute-multi":
        s, pairs = spec.semiautomaton_pair()
        return solve_brute_multi(g, s, pairs, caps, want_witness)
    if forced == "bounded-width":
        return solve_bounded_width(
            g, spec.to_dfa(g.alphabet), chain_partition(g), caps, want_witness
        )
    if forced == "monomial":
        return solve_monomial(g, spec.payload, want_witness)
    if forced == "union":
        parts = [
            (p.kind, lambda gg, p=p: dispatch(gg, p, caps, want_witness, None, b_impl))
            for p in spec.payload
        ]
        return solve_union(g, parts)
    if forced == "group":
        core = ShuffleInstance(Alphabet(spec.payload.symbols), inst.strings)
        return solve_group_csh(core, spec.payload, b_impl, caps, want_witness)
    if forced == "district":
        return solve_district_monomial(inst, spec.payload, b_impl, caps, want_witness)
    if forced == "ab-or-aa":
        return solve_ab_or_aa(g, want_witness)
    if forced == "aab":
        return solve_aab(inst, caps, want_witness)
    if forced == "apbp":
        return solve_apbp(inst, caps, want_witness)
    if forced == "ab-star-btail":
        return solve_ab_star_btail(g, want_witness)
    if forced == "kprime-or-power":
        d = spec.to_dfa(g.alphabet)
        i = _detect_power_index(d)
        if i is None:
            raise CtsortError("no power pattern found in the target language")
        return solve_kprime_or_power(g, d, i, caps, want_witness)
    raise CtsortError(f"unknown solver tag {forced!r}")
