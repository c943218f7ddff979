"""Solver for monomial languages A1* a1 A2* a2 ... an A(n+1)* and unions.

Pivot vertices (one per letter ai) are enumerated explicitly up front; for a
fixed choice, a recursive check peels the last pivot: its descendants must
all fit the final gap, and the instance shrinks to the ancestor-closed
vertex set that must be enumerated before it.  Work is polynomial in the
instance for a fixed monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ctsort.dag import LabeledDag
from ctsort.lang import (
    Alphabet,
    Alt,
    Cat,
    Dfa,
    Empty,
    Eps,
    Regex,
    Star,
    Sym,
    regex_to_dfa,
)
from ctsort.result import SolveResult, make_result


@dataclass(frozen=True)
class Monomial:
    """gaps[0]* pivots[0] gaps[1]* pivots[1] ... pivots[-1] gaps[-1]*."""

    gaps: tuple[frozenset[str], ...]
    pivots: tuple[str, ...]

    def __post_init__(self):
        if len(self.gaps) != len(self.pivots) + 1:
            raise ValueError("need exactly one more gap than pivots")

    def to_regex(self) -> Regex:
        def gap_regex(sub: frozenset[str]) -> Regex:
            if not sub:
                return Eps()
            node: Regex = None
            for ch in sorted(sub):
                node = Sym(ch) if node is None else Alt(node, Sym(ch))
            return Star(node)

        parts: list[Regex] = [gap_regex(self.gaps[0])]
        for i, p in enumerate(self.pivots):
            parts.append(Sym(p))
            parts.append(gap_regex(self.gaps[i + 1]))
        node = parts[-1]
        for part in reversed(parts[:-1]):
            node = Cat(part, node)
        return node

    @classmethod
    def from_json(cls, obj: dict) -> "Monomial":
        return cls(
            tuple(frozenset(g) for g in obj["gaps"]),
            tuple(obj["pivots"]),
        )

    def to_json(self) -> dict:
        return {
            "gaps": ["".join(sorted(g)) for g in self.gaps],
            "pivots": "".join(self.pivots),
        }


def monomial_to_dfa(m: Monomial, alphabet: Alphabet) -> Dfa:
    return regex_to_dfa(m.to_regex(), alphabet)


def _closure_up(g: LabeledDag, vs) -> int:
    """Bitmask of vs plus all their ancestors."""
    mask = 0
    for v in vs:
        mask |= (1 << v) | g.anc_mask[v]
    return mask


def _check_with_pivots(
    g: LabeledDag,
    m: Monomial,
    assignment: tuple[int, ...],
    active: int,
    level: int,
    build_witness: bool,
) -> tuple[bool, list[int] | None]:
    """Decide whether the vertex set ``active`` admits a sort achieving the
    monomial prefix of ``level`` pivots, with pivot vertices fixed."""
    if level == 0:
        gap = m.gaps[0]
        ok = all(
            g.labels[v] in gap for v in range(g.n) if active >> v & 1
        )
        if not ok:
            return False, None
        if not build_witness:
            return True, None
        return True, [v for v in g.topo_order if active >> v & 1]

    pivot = assignment[level - 1]
    earlier = set(assignment[: level - 1])
    tail_gap = m.gaps[level]
    if not active >> pivot & 1:
        return False, None

    # Every descendant of the pivot must fit the trailing gap and must not
    # be an earlier pivot.
    dm = g.desc_mask[pivot]
    for z in range(g.n):
        if active >> z & 1 and dm >> z & 1:
            if z in earlier or g.labels[z] not in tail_gap:
                return False, None

    # Vertices that must be enumerated before the pivot: ancestors of the
    # earlier pivots, strict ancestors of the pivot, and the ancestor
    # closure of anything incomparable to it whose label misses the gap.
    keep = _closure_up(g, earlier) | g.anc_mask[pivot]
    am = g.anc_mask[pivot]
    for w in range(g.n):
        if not active >> w & 1 or w == pivot:
            continue
        if dm >> w & 1 or am >> w & 1:
            continue
        if w in earlier or g.labels[w] not in tail_gap:
            keep |= (1 << w) | g.anc_mask[w]
    keep &= active
    if keep >> pivot & 1:
        return False, None

    ok, sub_witness = _check_with_pivots(
        g, m, assignment, keep, level - 1, build_witness
    )
    if not ok:
        return False, None
    if not build_witness:
        return True, None
    rest_mask = active & ~keep & ~(1 << pivot)
    rest = [v for v in g.topo_order if rest_mask >> v & 1]
    return True, sub_witness + [pivot] + rest


def solve_monomial(
    g: LabeledDag,
    m: Monomial,
    want_witness: bool = True,
    tag: str = "monomial",
) -> SolveResult:
    if not g.is_single_letter:
        raise ValueError("monomial solver needs single-letter labels")
    n_piv = len(m.pivots)
    candidates = [
        [v for v in range(g.n) if g.labels[v] == p] for p in m.pivots
    ]
    full = (1 << g.n) - 1
    acceptor = None
    if want_witness:
        dfa = monomial_to_dfa(m, g.alphabet)
        acceptor = dfa.accepts

    for assignment in product(*candidates):
        if len(set(assignment)) != n_piv:
            continue
        # Pivots must be enumerable in order: a later pivot reaching an
        # earlier one can never work.
        if any(
            g.reaches(assignment[j], assignment[i])
            for i in range(n_piv)
            for j in range(i + 1, n_piv)
        ):
            continue
        ok, witness = _check_with_pivots(g, m, assignment, full, n_piv, want_witness)
        if ok:
            return make_result(True, tag, g, witness, acceptor)
    return make_result(False, tag)


def solve_union(g: LabeledDag, parts) -> SolveResult:
    """Disjunction over (name, solver) pairs, tried in the given order.

    Each solver is a callable taking the instance and returning a
    SolveResult; the first positive answer wins.
    """
    complete = True
    for _name, solver in parts:
        res = solver(g)
        if res.decision:
            return SolveResult(True, res.witness, "union", res.complete)
        complete = complete and res.complete
    return make_result(False, "union", complete=complete)
