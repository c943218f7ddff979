"""Exhaustive solvers: memoized search over (down-set, automaton state).

These are the reference oracles for everything else.  Down-sets are vertex
bitmasks; for disjoint unions of paths the reachable masks are exactly the
per-string position tuples, so shuffle instances scale well beyond the
general-DAG vertex cap.
"""

from __future__ import annotations

from ctsort.config import Caps, DEFAULT_CAPS
from ctsort.dag import LabeledDag, dag_as_strings
from ctsort.errors import CapExceeded
from ctsort.lang import Dfa, Semiautomaton, StatePairSpec
from ctsort.result import SolveResult, make_result


def _check_brute_size(g: LabeledDag, caps: Caps) -> None:
    if dag_as_strings(g) is None and g.n > caps.brute_vertices:
        raise CapExceeded(
            f"{g.n} vertices exceed brute cap {caps.brute_vertices} for general DAGs"
        )


def _pred_masks(g: LabeledDag) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[v] |= 1 << u
    return masks


def solve_brute(
    g: LabeledDag,
    d: Dfa,
    caps: Caps = DEFAULT_CAPS,
    want_witness: bool = True,
    tag: str = "brute",
) -> SolveResult:
    """Exact decision by DFS over (consumed-vertex mask, DFA state)."""
    _check_brute_size(g, caps)
    if not g.is_single_letter:
        raise ValueError("solve_brute needs single-letter labels; see solve_brute_multi")
    n = g.n
    pred = _pred_masks(g)
    sym_index = [d.alphabet.index(lab) for lab in g.labels]
    full = (1 << n) - 1

    start = (0, d.initial)
    parent: dict[tuple[int, int], tuple[int, int, int] | None] = {start: None}
    stack = [start]
    goal = None
    while stack:
        mask, q = stack.pop()
        if mask == full:
            if q in d.finals:
                goal = (mask, q)
                break
            continue
        for v in range(n):
            bit = 1 << v
            if not mask & bit and pred[v] & mask == pred[v]:
                nxt = (mask | bit, d.delta[q][sym_index[v]])
                if nxt not in parent:
                    if len(parent) > caps.dp_states:
                        raise CapExceeded(
                            f"brute state space exceeds cap {caps.dp_states}"
                        )
                    parent[nxt] = (mask, q, v)
                    stack.append(nxt)

    if goal is None:
        return make_result(False, tag)
    if not want_witness:
        return make_result(True, tag)
    order: list[int] = []
    cur = goal
    while parent[cur] is not None:
        pmask, pq, v = parent[cur]
        order.append(v)
        cur = (pmask, pq)
    order.reverse()
    return make_result(True, tag, g, order, d.accepts)


def solve_brute_multi(
    g: LabeledDag,
    s: Semiautomaton,
    spec: StatePairSpec,
    caps: Caps = DEFAULT_CAPS,
    want_witness: bool = True,
) -> SolveResult:
    """Multi-letter variant: vertex labels are words, acceptance is the
    conjunction over all (initial, finals) pairs."""
    _check_brute_size(g, caps)
    spec.validate(s)
    n = g.n
    pred = _pred_masks(g)
    # Precompute, per vertex and state, where the label word leads.
    word_step = [
        tuple(s.run(q, g.labels[v]) for q in range(s.n_states)) for v in range(n)
    ]
    inits = tuple(p[0] for p in spec.pairs)
    finals = tuple(p[1] for p in spec.pairs)
    full = (1 << n) - 1

    start = (0, inits)
    parent: dict[tuple[int, tuple[int, ...]], tuple | None] = {start: None}
    stack = [start]
    goal = None
    while stack:
        mask, qs = stack.pop()
        if mask == full:
            if all(q in f for q, f in zip(qs, finals)):
                goal = (mask, qs)
                break
            continue
        for v in range(n):
            bit = 1 << v
            if not mask & bit and pred[v] & mask == pred[v]:
                nqs = tuple(word_step[v][q] for q in qs)
                nxt = (mask | bit, nqs)
                if nxt not in parent:
                    if len(parent) > caps.dp_states:
                        raise CapExceeded(
                            f"multi brute state space exceeds cap {caps.dp_states}"
                        )
                    parent[nxt] = (mask, qs, v)
                    stack.append(nxt)

    if goal is None:
        return make_result(False, "brute-multi")
    if not want_witness:
        return make_result(True, "brute-multi")
    order: list[int] = []
    cur = goal
    while parent[cur] is not None:
        pmask, pqs, v = parent[cur]
        order.append(v)
        cur = (pmask, pqs)
    order.reverse()

    def acceptor(word: str) -> bool:
        return all(s.run(i, word) in f for i, f in zip(inits, finals))

    # Witness verification must concatenate label words, which word_of does.
    return make_result(True, "brute-multi", g, order, acceptor)
