"""Group-language shuffle solving via Parikh images.

The key primitives:

* ``reachable_set``: all group elements achievable by words with a given
  Parikh image, computed by DP with per-symbol saturation (validated at
  runtime, caps doubled on failure).
* ``insertion_compress``: shrink an insertion pattern to constantly many
  insertions without changing either morphism image, by repeatedly splicing
  out identity-colored triangles.
* ``realize_segmented``: build a topological sort split into k segments with
  prescribed images, by peeling short sub-antichains off a rich antichain.
* ``solve_group_csh``: the full decision procedure: rare/frequent string
  partition, then DP over the rare strings with a bounded number of inserted
  subgroup elements whose product must be Parikh-reachable from the frequent
  strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm, prod

from ctsort.config import Caps, DEFAULT_CAPS
from ctsort.dag import (
    LabeledDag,
    ShuffleInstance,
    parikh_image,
    rare_frequent,
    rich_antichain,
)
from ctsort.errors import CapExceeded
from ctsort.groups import GroupPresentation
from ctsort.result import SolveResult, make_result

ParikhVector = tuple[int, ...]


# ---------------------------------------------------------------------------
# Commutative-closure reachability


def _clamp(p: ParikhVector, caps_per_symbol: tuple[int, ...], orders: tuple[int, ...]) -> ParikhVector:
    out = []
    for x, cap, o in zip(p, caps_per_symbol, orders):
        if x > cap:
            x = cap + (x - cap) % o
            # stay in the window [cap, cap + o)
        out.append(x)
    return tuple(out)


def reachable_set(
    gp: GroupPresentation,
    p: ParikhVector,
    symbols: tuple[str, ...] | None = None,
) -> frozenset[int]:
    """{mu(v) : PI(v) = p}, with p indexed by ``symbols`` (default gp.symbols).

    Coordinates are saturated at |H| * order(mu(a)); appending order(mu(a))
    copies of a never changes the result below that threshold.  Saturation is
    validated per call by one extra increment; on failure the cap doubles.
    """
    symbols = symbols or gp.symbols
    if len(p) != len(symbols):
        raise ValueError("Parikh vector length mismatch")
    gens = tuple(gp.mu[s] for s in symbols)
    orders = tuple(gp.order_of(g) for g in gens)
    factor = len(gp)
    while True:
        caps_per_symbol = tuple(factor * o for o in orders)
        clamped = _clamp(p, caps_per_symbol, orders)
        memo: dict[ParikhVector, frozenset[int]] = {}

        def compute(q: ParikhVector) -> frozenset[int]:
            stack = [q]
            while stack:
                top = stack.pop()
                if top in memo:
                    continue
                if not any(top):
                    memo[top] = frozenset([gp.identity])
                    continue
                missing = []
                for i, c in enumerate(top):
                    if c > 0:
                        prev = top[:i] + (c - 1,) + top[i + 1:]
                        if prev not in memo:
                            missing.append(prev)
                if missing:
                    stack.append(top)
                    stack.extend(missing)
                    continue
                acc = set()
                for i, c in enumerate(top):
                    if c > 0:
                        prev = top[:i] + (c - 1,) + top[i + 1:]
                        g = gens[i]
                        acc.update(gp.table[x][g] for x in memo[prev])
                memo[top] = frozenset(acc)
            return memo[q]

        result = compute(clamped)
        ok = True
        for i, (x, cap, o) in enumerate(zip(p, caps_per_symbol, orders)):
            if x > cap:  # coordinate was clamped; validate saturation
                bumped = clamped[:i] + (clamped[i] + o,) + clamped[i + 1:]
                if compute(bumped) != result:
                    ok = False
                    break
        if ok:
            return result
        factor *= 2


def reachable_set_brute(
    gp: GroupPresentation, p: ParikhVector, symbols: tuple[str, ...] | None = None
) -> frozenset[int]:
    """Oracle: enumerate all distinct permutations of the multiset (test use)."""
    from itertools import permutations

    symbols = symbols or gp.symbols
    multiset = []
    for s, c in zip(symbols, p):
        multiset.extend([s] * c)
    return frozenset(
        gp.word_image("".join(perm)) for perm in set(permutations(multiset))
    )


# ---------------------------------------------------------------------------
# Insertion compression (constructive triangle splicing)


def insertion_compress(
    words: list[str],
    insertions: list[str],
    gp: GroupPresentation,
) -> set[int]:
    """Indices J of insertions to keep so that dropping the others preserves
    both the image of the interleaved word and the product of the insertions.

    The pair table colors (i, j) with the images of words[i:j], of the
    interleaving words[i] ins[i] ... words[j-1] ins[j-1], and of
    ins[i] ... ins[j-1]; an equal-colored triple l < m < r lets the whole
    middle block's insertions be spliced out.  Each splice shrinks the word
    list, so the scan terminates.
    """
    n = len(words)
    if len(insertions) != n + 1:
        raise ValueError("need exactly one more insertion slot than words")
    cur_words = [gp.word_image(w) for w in words]
    cur_ins = [(j, gp.word_image(w)) for j, w in enumerate(insertions)]

    while True:
        m = len(cur_words)
        found = None
        if m >= 3:
            # prefix[t] = images over words[0:t] (plain / interleaved / ins-only)
            plain = [gp.identity]
            mixed = [gp.identity]
            ins_only = [gp.identity]
            for i in range(m):
                plain.append(gp.mul(plain[-1], cur_words[i]))
                step = gp.mul(cur_words[i], cur_ins[i + 1][1])
                mixed.append(gp.mul(mixed[-1], step))
                ins_only.append(gp.mul(ins_only[-1], cur_ins[i + 1][1]))

            inv = gp.inverse

            def color(i: int, j: int) -> tuple[int, int, int]:
                return (
                    gp.mul(inv[plain[i]], plain[j]),
                    gp.mul(inv[mixed[i]], mixed[j]),
                    gp.mul(inv[ins_only[i]], ins_only[j]),
                )

            # Vertices are the gaps 0..m-1 (the final word joins no block, so
            # the leading and trailing insertion slots are never dropped).
            for l in range(m - 2):
                if found:
                    break
                for mid in range(l + 1, m - 1):
                    if found:
                        break
                    c1 = color(l, mid)
                    for r in range(mid + 1, m):
                        if c1 == color(mid, r) == color(l, r):
                            found = (l, mid, r)
                            break
        if not found:
            break
        l, _, r = found
        # Slots strictly inside words[l..r] are dropped, so the block glues
        # words[l..r] into a single word; its trailing slot is the one after
        # words[r], which survives.
        block = gp.identity
        for i in range(l, r + 1):
            block = gp.mul(block, cur_words[i])
        cur_words = cur_words[:l] + [block] + cur_words[r + 1:]
        cur_ins = cur_ins[: l + 1] + cur_ins[r + 1:]

    return {j for j, _ in cur_ins}


# ---------------------------------------------------------------------------
# Thresholds


def worst_subset_gamma(gp: GroupPresentation, symbols: tuple[str, ...]) -> int:
    """Max over nonempty symbol subsets A' of the eccentricity of the Cayley
    graph of the subgroup generated by mu(A') (shortest-word lengths over A').

    Rare/frequent thresholds must hold for whichever subalphabet ends up
    frequent, hence the worst case over subsets."""
    from itertools import combinations

    best = 1
    syms = list(symbols)
    for r in range(1, len(syms) + 1):
        for sub in combinations(syms, r):
            gens = [gp.mu[s] for s in sub]
            dist = {gp.identity: 0}
            frontier = [gp.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = gp.table[x][g]
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            nxt.append(y)
                frontier = nxt
            best = max(best, max(dist.values()))
    return best


def commutative_idempotent_bound(gp: GroupPresentation, symbols: tuple[str, ...]) -> int:
    """Stand-in for the idempotent power of the commutative monoid recognizing
    the commutative closures: |H| times the lcm of the generator orders (an
    upper bound on any per-symbol stabilization period/threshold)."""
    orders = [gp.order_of(gp.mu[s]) for s in symbols]
    return len(gp) * lcm(*orders) if orders else len(gp)


def richness_threshold(gp: GroupPresentation, symbols: tuple[str, ...], b_impl: int) -> int:
    return commutative_idempotent_bound(gp, symbols) + (b_impl - 1) * worst_subset_gamma(gp, symbols)


# ---------------------------------------------------------------------------
# Segmented realization (antichain peeling)


def realize_segmented(
    freq: ShuffleInstance,
    gp: GroupPresentation,
    targets: list[int],
    caps: Caps = DEFAULT_CAPS,
) -> list[list[int]]:
    """Topological sort of ``freq`` split into len(targets) segments whose
    mu-images are the targets.  Preconditions (checked): the instance has an
    n_k-rich antichain for n_k = omega_N + (k-1)*gamma, and the product of
    the targets is Parikh-reachable.  Raises ValueError otherwise."""
    k = len(targets)
    if k == 0:
        raise ValueError("need at least one target")
    symbols = tuple(sorted({ch for s in freq.strings for ch in s}))
    if not symbols:
        if all(t == gp.identity for t in targets):
            return [[] for _ in targets]
        raise ValueError("empty instance cannot realize non-identity targets")
    gamma = worst_subset_gamma(gp, symbols)
    n_k = commutative_idempotent_bound(gp, symbols) + (k - 1) * gamma
    g = freq.to_dag()
    rich = rich_antichain(g, n_k, set(symbols), caps)
    if rich is None:
        raise ValueError(f"no {n_k}-rich antichain; precondition violated")
    pi = parikh_image(freq)
    pi_sym = tuple(pi[freq.alphabet.index(s)] for s in symbols)
    product = gp.product(targets)
    if product not in reachable_set(gp, pi_sym, symbols):
        raise ValueError("Parikh condition fails; targets unreachable")
    segs = _realize_rec(g, gp, symbols, list(targets), set(rich), caps)
    flat = [v for seg in segs for v in seg]
    if not g.is_topological_sort(flat):
        raise AssertionError("segmented realization broke the topological order")
    for seg, tgt in zip(segs, targets):
        if gp.word_image(g.word_of(seg)) != tgt:
            raise AssertionError("segment image mismatch in realization")
    return segs


def _maximal_antichain(g: LabeledDag, seed: set[int]) -> set[int]:
    C = set(seed)
    for v in range(g.n):
        if v not in C and all(not g.comparable(v, u) for u in C):
            C.add(v)
    return C


def _word_with_parikh_and_image(
    gp: GroupPresentation, symbols, counts: dict[str, int], target: int, caps: Caps
) -> str | None:
    """Exact DP with witness: a word using each symbol exactly counts[s]
    times whose image is target."""
    syms = [s for s in symbols if counts.get(s, 0) > 0]
    if prod(counts[s] + 1 for s in syms) * len(gp) > caps.dp_states:
        raise CapExceeded("Parikh witness DP exceeds state cap")
    start = (tuple(0 for _ in syms), gp.identity)
    parent = {start: None}
    stack = [start]
    goal_vec = tuple(counts[s] for s in syms)
    while stack:
        vec, h = stack.pop()
        if vec == goal_vec:
            if h == target:
                out = []
                cur = (vec, h)
                while parent[cur] is not None:
                    pvec, ph, s = parent[cur]
                    out.append(s)
                    cur = (pvec, ph)
                return "".join(reversed(out))
            continue
        for i, s in enumerate(syms):
            if vec[i] < counts[s]:
                nvec = vec[:i] + (vec[i] + 1,) + vec[i + 1:]
                nh = gp.table[h][gp.mu[s]]
                if (nvec, nh) not in parent:
                    parent[(nvec, nh)] = (vec, h, s)
                    stack.append((nvec, nh))
    return None


def _realize_rec(g, gp, symbols, targets, rich_seed, caps) -> list[list[int]]:
    C = _maximal_antichain(g, rich_seed)
    c_mask = sum(1 << v for v in C)
    minus = 0
    plus = 0
    for v in C:
        minus |= g.anc_mask[v]
        plus |= g.desc_mask[v]
    minus &= ~c_mask
    plus &= ~c_mask
    sort_minus = [v for v in g.topo_order if minus >> v & 1]
    sort_plus = [v for v in g.topo_order if plus >> v & 1]
    img = gp.word_image

    if len(targets) == 1:
        # Sort C to achieve mu(sort_minus)^-1 * g1 * mu(sort_plus)^-1.
        h = gp.mul(
            gp.mul(gp.inverse[img(g.word_of(sort_minus))], targets[0]),
            gp.inverse[img(g.word_of(sort_plus))],
        )
        counts: dict[str, int] = {}
        for v in C:
            counts[g.labels[v]] = counts.get(g.labels[v], 0) + 1
        word = _word_with_parikh_and_image(gp, symbols, counts, h, caps)
        if word is None:
            raise ValueError("antichain cannot realize required element")
        pool: dict[str, list[int]] = {}
        for v in sorted(C):
            pool.setdefault(g.labels[v], []).append(v)
        c_sort = [pool[ch].pop() for ch in word]
        return [sort_minus + c_sort + sort_plus]

    # Peel a short sub-antichain realizing g_k * mu(sort_plus)^-1, then recurse.
    g_last = targets[-1]
    h = gp.mul(g_last, gp.inverse[img(g.word_of(sort_plus))])
    word = _shortest_word(gp, symbols, h)
    if word is None:
        raise ValueError("target not in subgroup spanned by instance symbols")
    pool = {}
    for v in sorted(C):
        pool.setdefault(g.labels[v], []).append(v)
    try:
        peeled = [pool[ch].pop() for ch in word]
    except (KeyError, IndexError):
        raise ValueError("antichain not rich enough to peel; precondition violated")
    last_segment = peeled + sort_plus

    remaining_mask = ((1 << g.n) - 1) & ~plus & ~sum(1 << v for v in peeled)
    sub, old = g.induced({v for v in range(g.n) if remaining_mask >> v & 1})
    new_rich = {old.index(v) for v in (C - set(peeled))}
    inner = _realize_rec(sub, gp, symbols, targets[:-1], new_rich, caps)
    segs = [[old[v] for v in seg] for seg in inner]
    segs.append(last_segment)
    return segs


def _shortest_word(gp: GroupPresentation, symbols, target: int) -> str | None:
    dist: dict[int, str] = {gp.identity: ""}
    frontier = [gp.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in symbols:
                y = gp.table[x][gp.mu[s]]
                if y not in dist:
                    dist[y] = dist[x] + s
                    nxt.append(y)
        frontier = nxt
    return dist.get(target)


# ---------------------------------------------------------------------------
# The solver


def solve_group_csh(
    inst: ShuffleInstance,
    gp: GroupPresentation,
    b_impl: int | None = None,
    caps: Caps = DEFAULT_CAPS,
    want_witness: bool = False,
    trust_threshold: int | None = None,
) -> SolveResult:
    """Decide whether some interleaving of ``inst`` maps into gp.accepting.

    Sound unconditionally (accepted insertion patterns are realizable by the
    rich frequent antichain); complete for B at the insertion-lemma bound,
    which is astronomically large, so negative answers below the trust
    threshold carry complete=False.
    """
    tag = "group"
    for s in inst.strings:
        for ch in s:
            if ch not in gp.mu:
                raise ValueError(f"symbol {ch!r} has no morphism image")
    b = b_impl if b_impl is not None else 2 * len(gp)
    trust = trust_threshold if trust_threshold is not None else 2 * len(gp)
    symbols = tuple(inst.alphabet.symbols)
    richness = richness_threshold(gp, symbols, b)
    rf = rare_frequent(inst, richness)
    rare_idx = sorted(rf.rare_strings)
    freq_idx = [i for i in range(len(inst.strings)) if i not in rf.rare_strings]
    freq_inst = ShuffleInstance(inst.alphabet, tuple(inst.strings[i] for i in freq_idx))
    h_freq = sorted(gp.generated_by({gp.mu[a] for a in rf.frequent_letters})
                    if rf.frequent_letters else {gp.identity})

    pi_freq = parikh_image(freq_inst)
    pi_freq_sym = tuple(pi_freq[inst.alphabet.index(s)] for s in symbols)
    target_products = reachable_set(gp, pi_freq_sym, symbols)

    rare = [inst.strings[i] for i in rare_idx]
    exact = not freq_idx

    # DP over (positions in rare strings, current image, #insertions,
    # insertion product, just-inserted flag).  Consecutive insertions are
    # collapsed (the subgroup is closed under products).
    done = tuple(len(s) for s in rare)
    start = (tuple(0 for _ in rare), gp.identity, 0, gp.identity, False)
    parent: dict[tuple, tuple | None] = {start: None}
    stack = [start]
    accept_state = None
    while stack:
        state = stack.pop()
        pos, h, used, ins_prod, just = state
        if pos == done and h in gp.accepting and ins_prod in target_products:
            accept_state = state
            break
        if len(parent) > caps.dp_states:
            raise CapExceeded(f"group DP exceeds state cap {caps.dp_states}")
        for i, s in enumerate(rare):
            if pos[i] < len(s):
                ch = s[pos[i]]
                npos = pos[:i] + (pos[i] + 1,) + pos[i + 1:]
                nxt = (npos, gp.table[h][gp.mu[ch]], used, ins_prod, False)
                if nxt not in parent:
                    parent[nxt] = (state, ("advance", i))
                    stack.append(nxt)
        if not just and used < b and len(h_freq) > 1:
            for x in h_freq:
                if x == gp.identity:
                    continue  # identity insertions change nothing
                nxt = (pos, gp.table[h][x], used + 1, gp.table[ins_prod][x], True)
                if nxt not in parent:
                    parent[nxt] = (state, ("insert", x))
                    stack.append(nxt)

    if accept_state is None:
        complete = exact or b >= trust
        return make_result(False, tag, complete=complete)
    if not want_witness:
        return make_result(True, tag)
    return _group_witness(
        inst, gp, caps, rare_idx, freq_idx, parent, accept_state, tag
    )


def _group_witness(inst, gp, caps, rare_idx, freq_idx, parent, accept_state, tag):
    # Replay the accepted DP path: a stream of rare-vertex advances with
    # insertion markers; each inserted element becomes one frequent segment.
    steps = []
    cur = accept_state
    while parent[cur] is not None:
        prev, action = parent[cur]
        steps.append(action)
        cur = prev
    steps.reverse()

    targets = [x for kind, x in steps if kind == "insert"]
    freq_inst = ShuffleInstance(
        inst.alphabet, tuple(inst.strings[i] for i in freq_idx)
    )
    if targets:
        freq_segments = realize_segmented(freq_inst, gp, targets, caps)
    elif freq_inst.strings:
        # No explicit insertions: the whole frequent part forms one
        # identity-image block up front (the DP checked e is reachable).
        freq_segments = [realize_segmented(freq_inst, gp, [gp.identity], caps)[0]]
    else:
        freq_segments = []

    def rare_vertex(i_rare: int, p: int) -> int:
        return inst.vertex_of(rare_idx[i_rare], p)

    base_of_freq_string = {}
    base = 0
    for j in freq_idx:
        base_of_freq_string[base] = j
        base += len(inst.strings[j])

    def freq_vertex(v: int) -> int:
        lo = max(b for b in base_of_freq_string if b <= v)
        return inst.vertex_of(base_of_freq_string[lo], v - lo)

    order: list[int] = []
    if not targets and freq_segments:
        order.extend(freq_vertex(v) for v in freq_segments[0])
    positions = [0] * len(rare_idx)
    seg = 0
    for kind, x in steps:
        if kind == "advance":
            order.append(rare_vertex(x, positions[x]))
            positions[x] += 1
        else:
            order.extend(freq_vertex(v) for v in freq_segments[seg])
            seg += 1

    g = inst.to_dag()

    def acceptor(word: str) -> bool:
        return gp.word_image(word) in gp.accepting

    return make_result(True, tag, g, order, acceptor)
