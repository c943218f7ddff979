"""Language specifications: the tagged union accepted by the CLI and the
dispatcher.

JSON forms:
  {"regex": "..."}
  {"monomial": {"gaps": ["ab", "", ...], "pivots": "ab"}}
  {"union": [spec, ...]}
  {"group": {"table": [[...]], "mu": {"a": 0, ...}, "accepting": [...]}}
  {"district": {"segments": [...], "pivots": "c"}}
  {"semiautomaton": {...}, "pairs": [{"initial": ..., "finals": [...]}]}
"""

from __future__ import annotations

from dataclasses import dataclass

from ctsort.groups import GroupPresentation
from ctsort.lang import (
    Alphabet,
    Dfa,
    Semiautomaton,
    StatePairSpec,
    compile_regex,
    minimize_dfa,
    semiautomaton_from_json,
    state_pairs_from_json,
)
from ctsort.solvers.district import DistrictGroupMonomial, district_to_dfa
from ctsort.solvers.monomial import Monomial, monomial_to_dfa


@dataclass(frozen=True)
class LanguageSpec:
    kind: str          # regex | monomial | union | group | district | semiautomaton
    payload: object

    @classmethod
    def from_json(cls, obj: dict) -> "LanguageSpec":
        if "regex" in obj:
            return cls("regex", str(obj["regex"]))
        if "monomial" in obj:
            return cls("monomial", Monomial.from_json(obj["monomial"]))
        if "union" in obj:
            return cls("union", tuple(cls.from_json(o) for o in obj["union"]))
        if "group" in obj:
            return cls("group", GroupPresentation.from_json(obj["group"]))
        if "district" in obj:
            return cls("district", DistrictGroupMonomial.from_json(obj["district"]))
        if "semiautomaton" in obj:
            s, names = semiautomaton_from_json(obj["semiautomaton"])
            pairs = state_pairs_from_json(obj["pairs"], names)
            return cls("semiautomaton", (s, pairs))
        raise ValueError(f"unrecognized language spec keys: {sorted(obj)}")

    @classmethod
    def regex(cls, text: str) -> "LanguageSpec":
        return cls("regex", text)

    def to_dfa(self, alphabet: Alphabet) -> Dfa:
        """A DFA over ``alphabet`` for every kind except semiautomaton specs."""
        if self.kind == "regex":
            return compile_regex(self.payload, alphabet)
        if self.kind == "monomial":
            return monomial_to_dfa(self.payload, alphabet)
        if self.kind == "union":
            parts = [p.to_dfa(alphabet) for p in self.payload]
            return _union_dfas(alphabet, parts)
        if self.kind == "group":
            return group_to_dfa(self.payload, alphabet)
        if self.kind == "district":
            return district_to_dfa(self.payload, alphabet)
        raise ValueError("semiautomaton specs define no single DFA")

    def semiautomaton_pair(self) -> tuple[Semiautomaton, StatePairSpec]:
        if self.kind != "semiautomaton":
            raise ValueError("not a semiautomaton spec")
        return self.payload


def group_to_dfa(gp: GroupPresentation, alphabet: Alphabet) -> Dfa:
    """Group language as a DFA: states are group elements plus a sink for
    symbols outside the presentation."""
    n = len(gp)
    sink = n
    rows = []
    for h in range(n):
        row = []
        for ch in alphabet.symbols:
            row.append(gp.table[h][gp.mu[ch]] if ch in gp.mu else sink)
        rows.append(tuple(row))
    rows.append(tuple(sink for _ in alphabet.symbols))
    return minimize_dfa(
        Dfa(alphabet, tuple(rows), gp.identity, frozenset(gp.accepting))
    )


def _union_dfas(alphabet: Alphabet, parts: list[Dfa]) -> Dfa:
    if not parts:
        # empty union: the empty language
        return compile_regex("∅", alphabet)
    acc = parts[0]
    for d in parts[1:]:
        acc = _union_pair(alphabet, acc, d)
    return acc


def _union_pair(alphabet: Alphabet, d1: Dfa, d2: Dfa) -> Dfa:
    k = len(alphabet)
    index = {}
    order = []

    def key(q1: int, q2: int) -> int:
        s = (q1, q2)
        if s not in index:
            index[s] = len(order)
            order.append(s)
        return index[s]

    key(d1.initial, d2.initial)
    rows = []
    for q1, q2 in order:
        rows.append(
            tuple(key(d1.delta[q1][a], d2.delta[q2][a]) for a in range(k))
        )
    finals = frozenset(
        i for i, (q1, q2) in enumerate(order)
        if q1 in d1.finals or q2 in d2.finals
    )
    return minimize_dfa(Dfa(alphabet, tuple(rows), 0, finals))
