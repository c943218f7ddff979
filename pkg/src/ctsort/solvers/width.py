"""Dynamic programming over a chain partition: states are per-chain frontier
positions plus a DFA state.  Exact for any DAG once a valid chain partition
is supplied; the table size is the product of (chain length + 1) times the
DFA size."""

from __future__ import annotations

from math import prod

from ctsort.config import Caps, DEFAULT_CAPS
from ctsort.dag import ChainPartition, LabeledDag
from ctsort.errors import CapExceeded
from ctsort.lang import Dfa
from ctsort.result import SolveResult, make_result


def solve_bounded_width(
    g: LabeledDag,
    d: Dfa,
    cp: ChainPartition,
    caps: Caps = DEFAULT_CAPS,
    want_witness: bool = True,
    tag: str = "bounded-width",
) -> SolveResult:
    cp.validate(g)
    if not g.is_single_letter:
        raise ValueError("bounded-width DP needs single-letter labels")
    k = cp.width
    chains = cp.chains
    space = prod(len(c) + 1 for c in chains) * d.n_states
    if space > caps.dp_states:
        raise CapExceeded(f"DP space {space} exceeds cap {caps.dp_states}")

    # anc_count[v][c]: how many vertices of chain c are strict ancestors of v.
    # Ancestors within a chain always form a prefix (chains are totally
    # ordered), so v is ready iff every frontier has consumed that prefix.
    anc_count = [[0] * k for _ in range(g.n)]
    for v in range(g.n):
        am = g.anc_mask[v]
        for c, chain in enumerate(chains):
            anc_count[v][c] = sum(1 for u in chain if am >> u & 1)

    sym_index = [d.alphabet.index(lab) for lab in g.labels]
    done = tuple(len(c) for c in chains)
    start = (tuple([0] * k), d.initial)
    parent: dict[tuple, tuple | None] = {start: None}
    stack = [start]
    goal = None
    while stack:
        pos, q = stack.pop()
        if pos == done:
            if q in d.finals:
                goal = (pos, q)
                break
            continue
        for c in range(k):
            if pos[c] == len(chains[c]):
                continue
            v = chains[c][pos[c]]
            if all(pos[c2] >= anc_count[v][c2] for c2 in range(k)):
                npos = pos[:c] + (pos[c] + 1,) + pos[c + 1:]
                nxt = (npos, d.delta[q][sym_index[v]])
                if nxt not in parent:
                    parent[nxt] = (pos, q, v)
                    stack.append(nxt)

    if goal is None:
        return make_result(False, tag)
    if not want_witness:
        return make_result(True, tag)
    order: list[int] = []
    cur = goal
    while parent[cur] is not None:
        ppos, pq, v = parent[cur]
        order.append(v)
        cur = (ppos, pq)
    order.reverse()
    return make_result(True, tag, g, order, d.accepts)
