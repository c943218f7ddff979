"""Transition/syntactic monoids and their algebraic classification.

A transition monoid is the set of state transformations Q -> Q achieved by
words through a semiautomaton; products read left to right (x*y means
"apply x, then y", matching word concatenation).  Membership in the
varieties DA, DO and DS is decided by brute-force checks of their defining
equations; together with aperiodicity this yields the complexity verdicts
for the constrained topological sort and constrained shuffle problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from ctsort.config import Caps, DEFAULT_CAPS
from ctsort.errors import CapExceeded
from ctsort.lang import Dfa, Semiautomaton, minimize_dfa

Transformation = tuple[int, ...]


@dataclass(frozen=True)
class TransitionMonoid:
    """Finite monoid of state transformations with a full composition table.

    Elements are transformation vectors sorted lexicographically, so element
    indices (and hence violation witnesses) are deterministic.
    """

    elements: tuple[Transformation, ...]
    table: tuple[tuple[int, ...], ...]   # table[x][y] = index of x*y
    identity: int
    generator_map: dict[str, int]        # alphabet symbol -> element index
    omega: int

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            raise ValueError("negative power")
        acc = self.identity
        base = x
        while k:
            if k & 1:
                acc = self.table[acc][base]
            base = self.table[base][base]
            k >>= 1
        return acc

    def image_of_word(self, w: str) -> int:
        acc = self.identity
        for ch in w:
            acc = self.table[acc][self.generator_map[ch]]
        return acc


def _compose(x: Transformation, y: Transformation) -> Transformation:
    # x then y
    return tuple(y[q] for q in x)


def _element_omega(elements: tuple[Transformation, ...],
                   table: tuple[tuple[int, ...], ...],
                   identity: int) -> int:
    """Least omega >= 1 with x^(2*omega) = x^omega for every element."""
    max_preperiod = 1
    period_lcm = 1
    for x in range(len(elements)):
        seen: dict[int, int] = {}
        cur = x
        k = 1
        while cur not in seen:
            seen[cur] = k
            cur = table[cur][x]
            k += 1
        preperiod = seen[cur]          # first power index on the cycle
        period = k - seen[cur]
        max_preperiod = max(max_preperiod, preperiod)
        period_lcm = lcm(period_lcm, period)
    omega = period_lcm
    while omega < max_preperiod:
        omega += period_lcm
    return omega


def transition_monoid(s: Semiautomaton, caps: Caps = DEFAULT_CAPS) -> TransitionMonoid:
    """Closure of the generator transformations under composition (BFS)."""
    if s.n_states > caps.semiautomaton_states:
        raise CapExceeded(
            f"{s.n_states} states exceed semiautomaton cap {caps.semiautomaton_states}"
        )
    n = s.n_states
    identity = tuple(range(n))
    gens = {a: tuple(s.delta[q][i] for q in range(n)) for i, a in enumerate(s.alphabet.symbols)}

    found = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens.values():
                h = _compose(f, g)
                if h not in found:
                    if len(found) >= caps.monoid_elements:
                        raise CapExceeded(
                            f"monoid exceeds element cap {caps.monoid_elements}"
                        )
                    found.add(h)
                    nxt.append(h)
        frontier = nxt

    elements = tuple(sorted(found))
    index = {e: i for i, e in enumerate(elements)}
    table = tuple(
        tuple(index[_compose(x, y)] for y in elements) for x in elements
    )
    ident_idx = index[identity]
    gen_map = {a: index[g] for a, g in gens.items()}
    omega = _element_omega(elements, table, ident_idx)
    return TransitionMonoid(elements, table, ident_idx, gen_map, omega)


def syntactic_monoid(d: Dfa, caps: Caps = DEFAULT_CAPS) -> TransitionMonoid:
    """Transition monoid of the minimal DFA (re-minimized internally)."""
    return transition_monoid(Semiautomaton.from_dfa(minimize_dfa(d)), caps)


# ---------------------------------------------------------------------------
# Variety checks


def is_group(m: TransitionMonoid) -> bool:
    """True iff every element permutes the state set."""
    n_states = len(m.elements[0]) if m.elements else 0
    return all(len(set(e)) == n_states for e in m.elements)


def is_aperiodic(m: TransitionMonoid) -> bool:
    """x^(omega+1) = x^omega for every x (counter-freeness)."""
    w = m.omega
    return all(m.power(x, w + 1) == m.power(x, w) for x in range(len(m)))


def _first_violation(m: TransitionMonoid, holds) -> tuple[int, int] | None:
    for x in range(len(m)):
        for y in range(len(m)):
            if not holds(x, y):
                return (x, y)
    return None


def da_violation(m: TransitionMonoid) -> tuple[int, int] | None:
    """First (x, y) with (xy)^w x (xy)^w != (xy)^w, or None."""
    w = m.omega

    def holds(x: int, y: int) -> bool:
        e = m.power(m.mul(x, y), w)
        return m.mul(m.mul(e, x), e) == e

    return _first_violation(m, holds)


def do_violation(m: TransitionMonoid) -> tuple[int, int] | None:
    """First (x, y) with (xy)^w (yx)^w (xy)^w != (xy)^w, or None."""
    w = m.omega

    def holds(x: int, y: int) -> bool:
        e = m.power(m.mul(x, y), w)
        f = m.power(m.mul(y, x), w)
        return m.mul(m.mul(e, f), e) == e

    return _first_violation(m, holds)


def ds_violation(m: TransitionMonoid) -> tuple[int, int] | None:
    """First (x, y) with ((xy)^w (yx)^w (xy)^w)^w != (xy)^w, or None."""
    w = m.omega

    def holds(x: int, y: int) -> bool:
        e = m.power(m.mul(x, y), w)
        f = m.power(m.mul(y, x), w)
        return m.power(m.mul(m.mul(e, f), e), w) == e

    return _first_violation(m, holds)


def in_DA(m: TransitionMonoid) -> bool:
    return da_violation(m) is None


def in_DO(m: TransitionMonoid) -> bool:
    return do_violation(m) is None


def in_DS(m: TransitionMonoid) -> bool:
    return ds_violation(m) is None


# ---------------------------------------------------------------------------
# Classification


NL = "NL"
NP_COMPLETE = "NP-complete"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class ClassificationReport:
    is_group: bool
    is_aperiodic: bool
    in_da: bool
    in_do: bool
    in_ds: bool
    verdict_cts: str
    verdict_csh: str
    witness: tuple[Transformation, Transformation] | None

    def to_json(self) -> dict:
        return {
            "is_group": self.is_group,
            "is_aperiodic": self.is_aperiodic,
            "in_DA": self.in_da,
            "in_DO": self.in_do,
            "in_DS": self.in_ds,
            "verdict_cts": self.verdict_cts,
            "verdict_csh": self.verdict_csh,
            "witness": [list(self.witness[0]), list(self.witness[1])]
            if self.witness
            else None,
        }


def classify_monoid(m: TransitionMonoid) -> ClassificationReport:
    group = is_group(m)
    aperiodic = is_aperiodic(m)
    da_wit = da_violation(m)
    do_wit = do_violation(m)
    ds_wit = ds_violation(m)
    da, do, ds = da_wit is None, do_wit is None, ds_wit is None

    witness = None
    if aperiodic:
        if da:
            cts = csh = NL
        else:
            cts = csh = NP_COMPLETE
            witness = da_wit
    elif not ds:
        # CSh is NP-complete; CTS inherits hardness since CSh instances
        # are CTS instances.
        cts = csh = NP_COMPLETE
        witness = ds_wit
    elif do:
        csh = NL
        cts = UNKNOWN
    else:
        # DS \ DO: open on both sides.
        cts = csh = UNKNOWN

    if witness is not None:
        witness = (m.elements[witness[0]], m.elements[witness[1]])
    return ClassificationReport(group, aperiodic, da, do, ds, cts, csh, witness)


def classify(s: Semiautomaton, caps: Caps = DEFAULT_CAPS) -> ClassificationReport:
    return classify_monoid(transition_monoid(s, caps))
