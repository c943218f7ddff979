"""Labeled DAGs, shuffle instances, and order-theoretic structure.

Vertices are indexed 0..n-1 internally; external ids (JSON) are kept on the
side.  Reachability, widths, minimum chain partitions (Dilworth, via maximum
bipartite matching on the transitive closure), rich antichains and
rare/frequent partitions all live here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from ctsort.config import Caps, DEFAULT_CAPS
from ctsort.errors import CapExceeded
from ctsort.lang import Alphabet, Word

ParikhVector = tuple[int, ...]


@dataclass(frozen=True)
class LabeledDag:
    """Vertex-labeled DAG; labels are single symbols, or words in multi-letter mode."""

    alphabet: Alphabet
    labels: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    ids: tuple = None  # external vertex names; defaults to 1..n

    def __post_init__(self):
        n = len(self.labels)
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
        for lab in self.labels:
            self.alphabet.check_word(lab)
        if self.ids is None:
            object.__setattr__(self, "ids", tuple(range(1, n + 1)))
        elif len(self.ids) != n:
            raise ValueError("ids/labels length mismatch")
        if self._has_cycle():
            raise ValueError("edge relation is cyclic")

    def _has_cycle(self) -> bool:
        n = len(self.labels)
        indeg = [0] * n
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            indeg[v] += 1
        stack = [v for v in range(n) if indeg[v] == 0]
        seen = 0
        while stack:
            u = stack.pop()
            seen += 1
            for v in adj[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    stack.append(v)
        return seen != n

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def is_single_letter(self) -> bool:
        return all(len(lab) == 1 for lab in self.labels)

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def desc_mask(self) -> tuple[int, ...]:
        """Bitmask of strict descendants per vertex (transitive closure)."""
        n = self.n
        masks = [0] * n
        for u in reversed(self.topo_order):
            m = 0
            for v in self.successors[u]:
                m |= masks[v] | (1 << v)
            masks[u] = m
        return tuple(masks)

    @cached_property
    def anc_mask(self) -> tuple[int, ...]:
        n = self.n
        masks = [0] * n
        for v in range(n):
            dm = self.desc_mask[v]
            for u in range(n):
                if dm >> u & 1:
                    masks[u] |= 1 << v
        return tuple(masks)

    @cached_property
    def topo_order(self) -> tuple[int, ...]:
        """One fixed topological order (lowest vertex index first among ready)."""
        import heapq

        indeg = [0] * self.n
        for _, v in self.edges:
            indeg[v] += 1
        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            u = heapq.heappop(heap)
            out.append(u)
            for v in self.successors[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(heap, v)
        return tuple(out)

    def reaches(self, u: int, v: int) -> bool:
        """True iff there is a directed path u -> ... -> v (strict)."""
        return bool(self.desc_mask[u] >> v & 1)

    def comparable(self, u: int, v: int) -> bool:
        return u != v and (self.reaches(u, v) or self.reaches(v, u))

    def word_of(self, sort: tuple[int, ...] | list[int]) -> Word:
        return "".join(self.labels[v] for v in sort)

    def is_topological_sort(self, sort) -> bool:
        if sorted(sort) != list(range(self.n)):
            return False
        pos = {v: i for i, v in enumerate(sort)}
        return all(pos[u] < pos[v] for u, v in self.edges)

    def induced(self, keep: set[int] | frozenset[int]) -> tuple["LabeledDag", list[int]]:
        """Induced sub-DAG on ``keep``; returns it plus the old-index map."""
        old = sorted(keep)
        new_index = {v: i for i, v in enumerate(old)}
        edges = frozenset(
            (new_index[u], new_index[v])
            for u, v in self.edges
            if u in keep and v in keep
        )
        sub = LabeledDag(
            self.alphabet,
            tuple(self.labels[v] for v in old),
            edges,
            tuple(self.ids[v] for v in old),
        )
        return sub, old


@dataclass(frozen=True)
class ShuffleInstance:
    """A tuple of strings; equivalently a disjoint union of directed paths."""

    alphabet: Alphabet
    strings: tuple[Word, ...]

    def __post_init__(self):
        for s in self.strings:
            self.alphabet.check_word(s)

    @property
    def total_length(self) -> int:
        return sum(len(s) for s in self.strings)

    def to_dag(self) -> LabeledDag:
        labels: list[str] = []
        edges: set[tuple[int, int]] = set()
        for s in self.strings:
            base = len(labels)
            labels.extend(s)
            for i in range(len(s) - 1):
                edges.add((base + i, base + i + 1))
        return LabeledDag(self.alphabet, tuple(labels), frozenset(edges))

    def vertex_of(self, string_idx: int, pos: int) -> int:
        """Vertex index in to_dag() for position ``pos`` of string ``string_idx``."""
        return sum(len(s) for s in self.strings[:string_idx]) + pos


def dag_as_strings(g: LabeledDag) -> ShuffleInstance | None:
    """If g is a disjoint union of directed paths, recover its strings (else None)."""
    n = g.n
    out_deg = [len(g.successors[v]) for v in range(n)]
    in_deg = [len(g.predecessors[v]) for v in range(n)]
    if any(d > 1 for d in out_deg) or any(d > 1 for d in in_deg):
        return None
    strings = []
    seen = [False] * n
    for v in range(n):
        if in_deg[v] == 0 and not seen[v]:
            chars = []
            cur = v
            while True:
                seen[cur] = True
                chars.append(g.labels[cur])
                if not g.successors[cur]:
                    break
                cur = g.successors[cur][0]
            if any(len(c) != 1 for c in chars):
                return None
            strings.append("".join(chars))
    if not all(seen):
        return None
    return ShuffleInstance(g.alphabet, tuple(strings))


# ---------------------------------------------------------------------------
# Topological sort enumeration


def iter_topological_sorts(g: LabeledDag):
    """Stream all linear extensions (no cap; lexicographic by vertex index)."""
    n = g.n
    indeg = [len(g.predecessors[v]) for v in range(n)]
    prefix: list[int] = []

    def rec():
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(n):
            if indeg[v] == 0:
                indeg[v] = -1
                for w in g.successors[v]:
                    indeg[w] -= 1
                prefix.append(v)
                yield from rec()
                prefix.pop()
                for w in g.successors[v]:
                    indeg[w] += 1
                indeg[v] = 0

    return rec()


def topological_sorts(g: LabeledDag, caps: Caps = DEFAULT_CAPS) -> list[tuple[int, ...]]:
    """Materialize all linear extensions; vertex count must stay under cap."""
    if g.n > caps.toposort_vertices:
        raise CapExceeded(
            f"{g.n} vertices exceed materialization cap {caps.toposort_vertices}"
        )
    return list(iter_topological_sorts(g))


def count_topological_sorts(g: LabeledDag) -> int:
    """Linear-extension count by DP over down-sets (independent of enumeration)."""
    n = g.n
    full = (1 << n) - 1
    memo = {0: 1}

    def count(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        total = 0
        for v in range(n):
            bit = 1 << v
            if mask & bit:
                # v can come last in the down-set iff none of its successors is in it
                if not any(mask >> w & 1 for w in g.successors[v]):
                    total += count(mask ^ bit)
        memo[mask] = total
        return total

    return count(full)


# ---------------------------------------------------------------------------
# Parikh images


def parikh_image(x, alphabet: Alphabet | None = None) -> ParikhVector:
    """Per-symbol occurrence counts of a word, DAG labeling, or instance."""
    if isinstance(x, LabeledDag):
        alphabet = x.alphabet
        text = "".join(x.labels)
    elif isinstance(x, ShuffleInstance):
        alphabet = x.alphabet
        text = "".join(x.strings)
    else:
        if alphabet is None:
            raise ValueError("alphabet required for plain words")
        text = x
    counts = [0] * len(alphabet)
    for ch in text:
        counts[alphabet.index(ch)] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# Width, antichains, chain partitions (Dilworth via bipartite matching)


def _closure_matching(g: LabeledDag) -> list[int]:
    """Deterministic maximum bipartite matching on the transitive closure.

    Left copy u may be matched to right copy v iff u reaches v.  Returns
    match_right: for each right vertex v, its matched left vertex or -1.
    Left vertices are processed in index order and neighbors scanned in index
    order, so the matching (hence the chain partition) is reproducible.
    """
    n = g.n
    match_left = [-1] * n
    match_right = [-1] * n

    def augment(u: int, visited: list[bool]) -> bool:
        dm = g.desc_mask[u]
        for v in range(n):
            if dm >> v & 1 and not visited[v]:
                visited[v] = True
                if match_right[v] == -1 or augment(match_right[v], visited):
                    match_left[u] = v
                    match_right[v] = u
                    return True
        return False

    for u in range(n):
        augment(u, [False] * n)
    return match_right


@dataclass(frozen=True)
class ChainPartition:
    """Partition of the vertices into totally ordered chains of minimum count."""

    chains: tuple[tuple[int, ...], ...]

    @property
    def width(self) -> int:
        return len(self.chains)

    @cached_property
    def chain_of(self) -> dict[int, int]:
        return {v: i for i, chain in enumerate(self.chains) for v in chain}

    def validate(self, g: LabeledDag) -> None:
        seen: set[int] = set()
        for chain in self.chains:
            for a, b in zip(chain, chain[1:]):
                if not g.reaches(a, b):
                    raise ValueError(f"chain not totally ordered at ({a},{b})")
            seen.update(chain)
        if seen != set(range(g.n)):
            raise ValueError("chains do not partition the vertex set")


def chain_partition(g: LabeledDag) -> ChainPartition:
    """Minimum chain partition via Fulkerson's matching reduction."""
    n = g.n
    match_right = _closure_matching(g)
    succ_of = {}
    for v in range(n):
        if match_right[v] != -1:
            succ_of[match_right[v]] = v
    starts = [v for v in range(n) if match_right[v] == -1]
    chains = []
    for s in sorted(starts):
        chain = [s]
        while chain[-1] in succ_of:
            chain.append(succ_of[chain[-1]])
        chains.append(tuple(chain))
    cp = ChainPartition(tuple(chains))
    cp.validate(g)
    return cp


def width_and_antichain(g: LabeledDag) -> tuple[int, tuple[int, ...]]:
    """Width plus a realizing maximum antichain (Koenig's theorem)."""
    n = g.n
    if n == 0:
        return 0, ()
    match_right = _closure_matching(g)
    match_left = [-1] * n
    for v in range(n):
        if match_right[v] != -1:
            match_left[match_right[v]] = v

    # Koenig: alternating BFS from unmatched left vertices.
    visited_left = [False] * n
    visited_right = [False] * n
    queue = [u for u in range(n) if match_left[u] == -1]
    for u in queue:
        visited_left[u] = True
    while queue:
        nxt = []
        for u in queue:
            dm = g.desc_mask[u]
            for v in range(n):
                if dm >> v & 1 and not visited_right[v]:
                    visited_right[v] = True
                    w = match_right[v]
                    if w != -1 and not visited_left[w]:
                        visited_left[w] = True
                        nxt.append(w)
        queue = nxt
    # Min vertex cover: unvisited left + visited right; the antichain is the
    # set of vertices covered on neither side.
    antichain = tuple(
        v for v in range(n) if visited_left[v] and not visited_right[v]
    )
    width = len(antichain)
    return width, antichain


def max_antichain_brute(g: LabeledDag) -> int:
    """Exhaustive maximum-antichain size (test oracle)."""
    best = 0
    vs = list(range(g.n))
    for r in range(g.n, 0, -1):
        if r <= best:
            break
        for sub in combinations(vs, r):
            if all(not g.comparable(u, v) for u, v in combinations(sub, 2)):
                best = max(best, r)
                break
    return best


# ---------------------------------------------------------------------------
# Rich antichains


def rich_antichain(
    g: LabeledDag,
    n: int,
    sub: frozenset[str] | set[str],
    caps: Caps = DEFAULT_CAPS,
) -> tuple[int, ...] | None:
    """An antichain with >= n vertices per symbol of ``sub``, or None.

    Disjoint unions of paths are decided exactly by bipartite matching
    (strings vs. demand slots); other DAGs fall back to exhaustive search
    over the sub-labeled candidate vertices.
    """
    sub = frozenset(sub)
    if n == 0 or not sub:
        return ()
    inst = dag_as_strings(g)
    if inst is not None:
        return _rich_antichain_paths(g, inst, n, sub)
    candidates = [v for v in range(g.n) if g.labels[v] in sub]
    if len(candidates) > caps.antichain_exhaustive:
        raise CapExceeded(
            f"{len(candidates)} candidates exceed exhaustive antichain cap "
            f"{caps.antichain_exhaustive} (general DAGs only)"
        )
    return _rich_antichain_exhaustive(g, candidates, n, sub)


def _rich_antichain_paths(g, inst, n, sub):
    # Demand slots (symbol, copy) matched to distinct strings containing the symbol.
    slots = [(a, i) for a in sorted(sub) for i in range(n)]
    strings = inst.strings
    slot_match: dict[int, int] = {}   # string index -> slot index
    adj = [
        [j for j, s in enumerate(strings) if slots[i][0] in s]
        for i in range(len(slots))
    ]

    def augment(i: int, visited: set[int]) -> bool:
        for j in adj[i]:
            if j in visited:
                continue
            visited.add(j)
            if j not in slot_match or augment(slot_match[j], visited):
                slot_match[j] = i
                return True
        return False

    for i in range(len(slots)):
        if not augment(i, set()):
            return None
    picks = []
    for j, i in sorted(slot_match.items()):
        sym = slots[i][0]
        pos = strings[j].index(sym)
        picks.append(inst.vertex_of(j, pos))
    return tuple(sorted(picks))


def _rich_antichain_exhaustive(g, candidates, n, sub):
    need = {a: n for a in sub}
    order = sorted(candidates)
    best: list[tuple[int, ...]] = []

    def rec(idx: int, chosen: list[int], remaining: dict[str, int]):
        if best:
            return
        if all(v <= 0 for v in remaining.values()):
            best.append(tuple(chosen))
            return
        if idx == len(order):
            return
        # prune: not enough candidates left per symbol
        for a, r in remaining.items():
            if r > 0 and sum(1 for v in order[idx:] if g.labels[v] == a) < r:
                return
        v = order[idx]
        if all(not g.comparable(v, u) for u in chosen):
            remaining2 = dict(remaining)
            remaining2[g.labels[v]] = remaining2.get(g.labels[v], 0) - 1
            rec(idx + 1, chosen + [v], remaining2)
            if best:
                return
        rec(idx + 1, chosen, remaining)

    rec(0, [], dict(need))
    return best[0] if best else None


# ---------------------------------------------------------------------------
# Rare / frequent partitions


@dataclass(frozen=True)
class RareFrequentPartition:
    rare_letters: frozenset[str]
    frequent_letters: frozenset[str]
    rare_strings: frozenset[int]
    richness: int

    def frequent_strings(self, inst: ShuffleInstance) -> list[int]:
        return [i for i in range(len(inst.strings)) if i not in self.rare_strings]


def rare_frequent(inst: ShuffleInstance, richness: int) -> RareFrequentPartition:
    """Fixpoint: letters in too few frequent strings become rare, dragging
    their host strings into the rare set."""
    k = len(inst.alphabet)
    threshold = richness * k
    freq_letters = set(inst.alphabet.symbols)
    freq_strings = set(range(len(inst.strings)))

    changed = True
    while changed:
        changed = False
        for a in sorted(freq_letters):
            hosts = [i for i in freq_strings if a in inst.strings[i]]
            if len(hosts) < threshold:
                freq_letters.discard(a)
                freq_strings.difference_update(hosts)
                changed = True
                break

    rare_strings = frozenset(set(range(len(inst.strings))) - freq_strings)
    return RareFrequentPartition(
        rare_letters=frozenset(set(inst.alphabet.symbols) - freq_letters),
        frequent_letters=frozenset(freq_letters),
        rare_strings=rare_strings,
        richness=richness,
    )


# ---------------------------------------------------------------------------
# JSON interchange

# {"alphabet":"ab","vertices":[{"id":1,"label":"a"},...],"edges":[[1,2],...]}
# or {"alphabet":"ab","strings":["ab","ba"]}; multi-letter labels permitted.


def instance_from_json(obj: dict) -> LabeledDag | ShuffleInstance:
    alphabet = Alphabet.of(obj["alphabet"])
    if "strings" in obj:
        return ShuffleInstance(alphabet, tuple(str(s) for s in obj["strings"]))
    verts = obj["vertices"]
    ids = [v["id"] for v in verts]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate vertex ids")
    index = {vid: i for i, vid in enumerate(ids)}
    labels = tuple(str(v["label"]) for v in verts)
    edges = frozenset((index[u], index[v]) for u, v in obj.get("edges", []))
    return LabeledDag(alphabet, labels, edges, tuple(ids))


def instance_to_json(x: LabeledDag | ShuffleInstance) -> dict:
    if isinstance(x, ShuffleInstance):
        return {"alphabet": "".join(x.alphabet.symbols), "strings": list(x.strings)}
    return {
        "alphabet": "".join(x.alphabet.symbols),
        "vertices": [
            {"id": x.ids[v], "label": x.labels[v]} for v in range(x.n)
        ],
        "edges": sorted([list(map(lambda i: x.ids[i], e)) for e in x.edges]),
    }


def parse_compact_instance(text: str) -> ShuffleInstance:
    """Compact CSh format: ``strings: ab,ba`` (alphabet inferred)."""
    body = text.strip()
    if body.startswith("strings:"):
        body = body[len("strings:"):]
    strings = tuple(s.strip() for s in body.split(",") if s.strip())
    symbols = sorted({ch for s in strings for ch in s})
    if not symbols:
        symbols = ["a"]
    return ShuffleInstance(Alphabet(tuple(symbols)), strings)
