"""Regular-language toolkit: regexes, DFAs, semiautomata, shuffles, quotients.

Regex grammar: ``+`` is union, ``*`` is star, juxtaposition is concatenation,
parentheses group, ``ε`` (or ``@``) is the empty word, ``∅`` (or ``#``) the
empty language; whitespace is ignored.  DFAs are always complete (explicit
sink when needed) and minimal, so transition-monoid computation over them is
total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from ctsort.errors import CapExceeded, RegexSyntaxError

Word = str


@dataclass(frozen=True)
class Alphabet:
    """Ordered, duplicate-free symbol list; the order fixes Parikh indexing."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        for s in self.symbols:
            if len(s) != 1 or not s.isprintable():
                raise ValueError(f"bad alphabet symbol {s!r}")

    @classmethod
    def of(cls, text: str) -> "Alphabet":
        return cls(tuple(text))

    def __contains__(self, sym: str) -> bool:
        return sym in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, sym: str) -> int:
        return self.symbols.index(sym)

    def check_word(self, w: Word) -> None:
        for ch in w:
            if ch not in self.symbols:
                raise ValueError(
                    f"symbol {ch!r} not in alphabet {''.join(self.symbols)!r}"
                )


# ---------------------------------------------------------------------------
# Regex ASTs


class Regex:
    """Base class of regex AST nodes.  Nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Empty(Regex):
    """The empty language."""


@dataclass(frozen=True)
class Eps(Regex):
    """The language {ε}."""


@dataclass(frozen=True)
class Sym(Regex):
    ch: str


@dataclass(frozen=True)
class Cat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Alt(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


EPSILON_CHARS = "ε@"
EMPTYSET_CHARS = "∅#"


def parse_regex(text: str, alphabet: Alphabet) -> Regex:
    """Parse ``text`` into a regex AST over ``alphabet``.

    Raises RegexSyntaxError with the offending position on malformed input
    and on symbols outside the alphabet.
    """

    toks: list[tuple[str, int]] = [
        (ch, i) for i, ch in enumerate(text) if not ch.isspace()
    ]
    pos = 0

    def peek() -> str | None:
        return toks[pos][0] if pos < len(toks) else None

    def here() -> int:
        return toks[pos][1] if pos < len(toks) else len(text)

    def starts_atom(ch: str | None) -> bool:
        return ch is not None and ch not in "+*)"

    def parse_alt() -> Regex:
        nonlocal pos
        node = parse_cat()
        while peek() == "+":
            pos += 1
            node = Alt(node, parse_cat())
        return node

    def parse_cat() -> Regex:
        parts = []
        while starts_atom(peek()):
            parts.append(parse_star())
        if not parts:
            raise RegexSyntaxError("expected a symbol, 'ε', '∅' or '('", here())
        # Right-associated: "abc" -> Cat(a, Cat(b, c)).
        node = parts[-1]
        for p in reversed(parts[:-1]):
            node = Cat(p, node)
        return node

    def parse_star() -> Regex:
        nonlocal pos
        node = parse_atom()
        while peek() == "*":
            pos += 1
            node = Star(node)
        return node

    def parse_atom() -> Regex:
        nonlocal pos
        ch = peek()
        if ch == "(":
            open_at = here()
            pos += 1
            node = parse_alt()
            if peek() != ")":
                raise RegexSyntaxError("unbalanced '('", open_at)
            pos += 1
            return node
        if ch is not None and ch in EPSILON_CHARS:
            pos += 1
            return Eps()
        if ch is not None and ch in EMPTYSET_CHARS:
            pos += 1
            return Empty()
        if ch is None or ch in "+*)":
            raise RegexSyntaxError(f"unexpected {ch!r}", here())
        if ch not in alphabet:
            raise RegexSyntaxError(f"symbol {ch!r} not in alphabet", here())
        pos += 1
        return Sym(ch)

    node = parse_alt()
    if pos < len(toks):
        raise RegexSyntaxError(f"unexpected {peek()!r}", here())
    return node


# ---------------------------------------------------------------------------
# DFAs


@dataclass(frozen=True)
class Dfa:
    """Complete DFA over integer states 0..n-1.

    ``delta[q][i]`` is the successor of ``q`` on ``alphabet.symbols[i]``.
    """

    alphabet: Alphabet
    delta: tuple[tuple[int, ...], ...]
    initial: int
    finals: frozenset[int]

    def __post_init__(self):
        n = len(self.delta)
        if not (0 <= self.initial < n):
            raise ValueError("initial state out of range")
        if not all(0 <= f < n for f in self.finals):
            raise ValueError("final state out of range")
        for row in self.delta:
            if len(row) != len(self.alphabet) or not all(0 <= t < n for t in row):
                raise ValueError("delta is not total")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def step(self, q: int, sym: str) -> int:
        return self.delta[q][self.alphabet.index(sym)]

    def run(self, w: Word, start: int | None = None) -> int:
        q = self.initial if start is None else start
        index = self.alphabet.index
        for ch in w:
            q = self.delta[q][index(ch)]
        return q

    def accepts(self, w: Word) -> bool:
        self.alphabet.check_word(w)
        return self.run(w) in self.finals

    def is_empty(self) -> bool:
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            q = stack.pop()
            if q in self.finals:
                return False
            for t in self.delta[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return True


def dfa_accepts(d: Dfa, w: Word) -> bool:
    return d.accepts(w)


def _canonicalize(alphabet: Alphabet, delta, initial, finals) -> Dfa:
    """Renumber states in BFS order from the initial state (symbols in order)."""
    k = len(alphabet)
    order = [initial]
    seen = {initial: 0}
    for q in order:
        for a in range(k):
            t = delta[q][a]
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
    new_delta = tuple(
        tuple(seen[delta[q][a]] for a in range(k)) for q in order
    )
    new_finals = frozenset(seen[q] for q in finals if q in seen)
    return Dfa(alphabet, new_delta, 0, new_finals)


def minimize_dfa(d: Dfa) -> Dfa:
    """Minimal complete DFA via Moore partition refinement, canonically numbered."""
    k = len(d.alphabet)
    order = [d.initial]
    seen = {d.initial}
    for q in order:
        for t in d.delta[q]:
            if t not in seen:
                seen.add(t)
                order.append(t)
    remap = {q: i for i, q in enumerate(order)}
    delta = [tuple(remap[d.delta[q][a]] for a in range(k)) for q in order]
    finals = {remap[q] for q in d.finals if q in remap}
    n = len(delta)

    block = [1 if q in finals else 0 for q in range(n)]
    while True:
        sig: dict[tuple, int] = {}
        nxt = [0] * n
        for q in range(n):
            key = (block[q],) + tuple(block[t] for t in delta[q])
            nxt[q] = sig.setdefault(key, len(sig))
        if nxt == block:
            break
        block = nxt

    m = len(set(block))
    merged_delta = [None] * m
    merged_finals = set()
    for q in range(n):
        merged_delta[block[q]] = tuple(block[t] for t in delta[q])
        if q in finals:
            merged_finals.add(block[q])
    return _canonicalize(d.alphabet, merged_delta, block[remap[d.initial]], merged_finals)


def _thompson_nfa(r: Regex, alphabet: Alphabet):
    """Thompson construction: returns (n_states, eps_edges, sym_edges, start, accept)."""
    eps: list[tuple[int, int]] = []
    sym: list[tuple[int, str, int]] = []
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def build(node: Regex) -> tuple[int, int]:
        s, t = fresh(), fresh()
        if isinstance(node, Empty):
            pass
        elif isinstance(node, Eps):
            eps.append((s, t))
        elif isinstance(node, Sym):
            if node.ch not in alphabet:
                raise ValueError(f"regex symbol {node.ch!r} not in alphabet")
            sym.append((s, node.ch, t))
        elif isinstance(node, Cat):
            ls, lt = build(node.left)
            rs, rt = build(node.right)
            eps.extend([(s, ls), (lt, rs), (rt, t)])
        elif isinstance(node, Alt):
            ls, lt = build(node.left)
            rs, rt = build(node.right)
            eps.extend([(s, ls), (s, rs), (lt, t), (rt, t)])
        elif isinstance(node, Star):
            is_, it = build(node.inner)
            eps.extend([(s, is_), (it, s), (s, t)])
        else:  # pragma: no cover
            raise TypeError(f"unknown regex node {node!r}")
        return s, t

    start, accept = build(r)
    return counter[0], eps, sym, start, accept


def regex_to_dfa(r: Regex, alphabet: Alphabet) -> Dfa:
    """Minimal complete DFA for the regex language (Thompson + subset + Moore)."""
    n, eps, sym, start, accept = _thompson_nfa(r, alphabet)
    eps_adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in eps:
        eps_adj[u].append(v)
    sym_adj: list[dict[str, list[int]]] = [{} for _ in range(n)]
    for u, a, v in sym:
        sym_adj[u].setdefault(a, []).append(v)

    def closure(states: frozenset[int]) -> frozenset[int]:
        stack = list(states)
        out = set(states)
        while stack:
            q = stack.pop()
            for t in eps_adj[q]:
                if t not in out:
                    out.add(t)
                    stack.append(t)
        return frozenset(out)

    k = len(alphabet)
    init = closure(frozenset([start]))
    subset_index = {init: 0}
    order = [init]
    delta_rows: list[list[int]] = []
    for s in order:
        row = []
        for a in alphabet.symbols:
            nxt = closure(frozenset(t for q in s for t in sym_adj[q].get(a, ())))
            if nxt not in subset_index:
                subset_index[nxt] = len(order)
                order.append(nxt)
            row.append(subset_index[nxt])
        delta_rows.append(row)
    finals = frozenset(i for i, s in enumerate(order) if accept in s)
    d = Dfa(alphabet, tuple(tuple(r_) for r_ in delta_rows), 0, finals)
    return minimize_dfa(d)


def compile_regex(text: str, alphabet: Alphabet) -> Dfa:
    return regex_to_dfa(parse_regex(text, alphabet), alphabet)


def language_equal(d1: Dfa, d2: Dfa) -> bool:
    """Exact language equality (minimal canonical forms are unique)."""
    if d1.alphabet.symbols != d2.alphabet.symbols:
        return False
    m1, m2 = minimize_dfa(d1), minimize_dfa(d2)
    return m1.delta == m2.delta and m1.finals == m2.finals


def language_subset(d1: Dfa, d2: Dfa) -> bool:
    """True iff L(d1) ⊆ L(d2), by product-automaton emptiness of L(d1) \\ L(d2)."""
    if d1.alphabet.symbols != d2.alphabet.symbols:
        raise ValueError("alphabet mismatch")
    k = len(d1.alphabet)
    start = (d1.initial, d2.initial)
    seen = {start}
    stack = [start]
    while stack:
        q1, q2 = stack.pop()
        if q1 in d1.finals and q2 not in d2.finals:
            return False
        for a in range(k):
            t = (d1.delta[q1][a], d2.delta[q2][a])
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return True


def left_quotient(d: Dfa, u: Word) -> Dfa:
    """DFA for u⁻¹L(d): move the initial state along u, then re-minimize."""
    d.alphabet.check_word(u)
    q = d.run(u)
    return minimize_dfa(Dfa(d.alphabet, d.delta, q, d.finals))


# ---------------------------------------------------------------------------
# Shuffles


def shuffle_pair(u: Word, v: Word, cap: int = 14) -> set[Word]:
    """The set of interleavings of u and v; |u|+|v| must stay under ``cap``."""
    if len(u) + len(v) > cap:
        raise CapExceeded(f"shuffle of length {len(u) + len(v)} exceeds cap {cap}")
    total = len(u) + len(v)
    out: set[Word] = set()
    for positions in combinations(range(total), len(u)):
        chosen = set(positions)
        word = []
        iu = iv = 0
        for i in range(total):
            if i in chosen:
                word.append(u[iu])
                iu += 1
            else:
                word.append(v[iv])
                iv += 1
        out.add("".join(word))
    return out


def shuffle_tuple(words: list[Word] | tuple[Word, ...], cap: int = 14) -> set[Word]:
    """Shuffle of a tuple, by induction: ⧢() = {ε}, ⧢(U, u) = ⋃_{v∈⧢(U)} v ⧢ u."""
    if sum(len(w) for w in words) > cap:
        raise CapExceeded(f"shuffle of total length {sum(len(w) for w in words)} exceeds cap {cap}")
    acc: set[Word] = {""}
    for w in words:
        acc = {x for v in acc for x in shuffle_pair(v, w, cap=cap)}
    return acc


# ---------------------------------------------------------------------------
# Semiautomata


@dataclass(frozen=True)
class Semiautomaton:
    """Automaton without designated initial/final states; delta is total."""

    alphabet: Alphabet
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.delta)
        if n == 0:
            raise ValueError("semiautomaton needs at least one state")
        for row in self.delta:
            if len(row) != len(self.alphabet) or not all(0 <= t < n for t in row):
                raise ValueError("delta is not total")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def run(self, q: int, w: Word) -> int:
        index = self.alphabet.index
        for ch in w:
            q = self.delta[q][index(ch)]
        return q

    @classmethod
    def from_dfa(cls, d: Dfa) -> "Semiautomaton":
        return cls(d.alphabet, d.delta)


@dataclass(frozen=True)
class StatePairSpec:
    """Initial/final-state pairs for the semiautomaton problem phrasing."""

    pairs: tuple[tuple[int, frozenset[int]], ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("need at least one (initial, finals) pair")

    def validate(self, s: Semiautomaton) -> None:
        for init, finals in self.pairs:
            if not (0 <= init < s.n_states):
                raise ValueError("pair initial state out of range")
            if not all(0 <= f < s.n_states for f in finals):
                raise ValueError("pair final state out of range")


# ---------------------------------------------------------------------------
# JSON interchange

# DFA: {"states": [names], "alphabet": "ab", "delta": {"s": {"a": "t"}},
#       "initial": name, "finals": [names]}
# Semiautomaton: same without initial/finals; a sibling "pairs" array of
# {"initial": name, "finals": [names]} yields a StatePairSpec.


def dfa_to_json(d: Dfa, state_names: list[str] | None = None) -> dict:
    names = state_names or [f"q{i}" for i in range(d.n_states)]
    return {
        "states": list(names),
        "alphabet": "".join(d.alphabet.symbols),
        "delta": {
            names[q]: {a: names[d.delta[q][i]] for i, a in enumerate(d.alphabet.symbols)}
            for q in range(d.n_states)
        },
        "initial": names[d.initial],
        "finals": sorted(names[q] for q in d.finals),
    }


def _delta_from_json(obj: dict, alphabet: Alphabet) -> tuple[list[str], list[tuple[int, ...]]]:
    names = [str(s) for s in obj["states"]]
    if len(set(names)) != len(names):
        raise ValueError("duplicate state names")
    index = {s: i for i, s in enumerate(names)}
    rows = []
    for s in names:
        row_obj = obj["delta"][s]
        row = []
        for a in alphabet.symbols:
            if a not in row_obj:
                raise ValueError(f"delta missing entry for state {s!r}, symbol {a!r}")
            row.append(index[str(row_obj[a])])
        rows.append(tuple(row))
    return names, rows


def dfa_from_json(obj: dict) -> tuple[Dfa, list[str]]:
    alphabet = Alphabet.of(obj["alphabet"])
    names, rows = _delta_from_json(obj, alphabet)
    index = {s: i for i, s in enumerate(names)}
    d = Dfa(
        alphabet,
        tuple(rows),
        index[str(obj["initial"])],
        frozenset(index[str(f)] for f in obj["finals"]),
    )
    return d, names


def semiautomaton_from_json(obj: dict) -> tuple[Semiautomaton, list[str]]:
    alphabet = Alphabet.of(obj["alphabet"])
    names, rows = _delta_from_json(obj, alphabet)
    return Semiautomaton(alphabet, tuple(rows)), names


def state_pairs_from_json(pairs_obj: list, names: list[str]) -> StatePairSpec:
    index = {s: i for i, s in enumerate(names)}
    pairs = tuple(
        (index[str(p["initial"])], frozenset(index[str(f)] for f in p["finals"]))
        for p in pairs_obj
    )
    return StatePairSpec(pairs)


def semiautomaton_to_json(s: Semiautomaton, state_names: list[str] | None = None) -> dict:
    names = state_names or [f"q{i}" for i in range(s.n_states)]
    return {
        "states": list(names),
        "alphabet": "".join(s.alphabet.symbols),
        "delta": {
            names[q]: {a: names[s.delta[q][i]] for i, a in enumerate(s.alphabet.symbols)}
            for q in range(s.n_states)
        },
    }


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
