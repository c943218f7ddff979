"""District group monomials K0 a1 K1 ... am Km (each Ki a group language
over its own subalphabet) and their shuffle solver.

The NL guesses of the slicing argument are replaced by explicit enumeration:
pivot vertices are placed (their host strings join the rare set), slice
boundaries inside rare strings are explored by the DP itself, and frequent
strings are allocated whole to slices.  A rich slice contributes a Parikh
budget checked through reachable_set and licenses bounded insertions; a
small non-rich slice contributes its exact interleaving image set and no
insertions.  Solutions that would split a frequent string across slices are
not searched, so negative answers with a nonempty frequent part carry
complete=False.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod

from ctsort.config import Caps, DEFAULT_CAPS
from ctsort.dag import ShuffleInstance, rare_frequent, rich_antichain
from ctsort.errors import CapExceeded
from ctsort.groups import GroupPresentation
from ctsort.lang import Alphabet, Dfa, minimize_dfa
from ctsort.result import SolveResult, make_result
from ctsort.solvers.brute import solve_brute
from ctsort.solvers.group import reachable_set, richness_threshold, solve_group_csh


@dataclass(frozen=True)
class DistrictGroupMonomial:
    segments: tuple[tuple[frozenset[str], GroupPresentation], ...]
    pivots: tuple[str, ...]

    def __post_init__(self):
        if len(self.segments) != len(self.pivots) + 1:
            raise ValueError("need exactly one more segment than pivots")
        for sub, gp in self.segments:
            if frozenset(gp.mu) != sub:
                raise ValueError("segment morphism must cover exactly its subalphabet")

    @classmethod
    def from_json(cls, obj: dict) -> "DistrictGroupMonomial":
        segments = tuple(
            (frozenset(seg["alphabet"]), GroupPresentation.from_json(seg))
            for seg in obj["segments"]
        )
        return cls(segments, tuple(obj["pivots"]))

    def to_json(self) -> dict:
        return {
            "segments": [
                {"alphabet": "".join(sorted(sub)), **gp.to_json()}
                for sub, gp in self.segments
            ],
            "pivots": "".join(self.pivots),
        }


def district_to_dfa(dm: DistrictGroupMonomial, alphabet: Alphabet) -> Dfa:
    """Minimal DFA for the district language over ``alphabet`` (subset
    construction over (segment, group element) NFA states)."""
    m = len(dm.pivots)
    nfa_states = [
        (j, h) for j, (_sub, gp) in enumerate(dm.segments) for h in range(len(gp))
    ]
    index = {s: i for i, s in enumerate(nfa_states)}

    def moves(state: tuple[int, int], ch: str) -> list[tuple[int, int]]:
        j, h = state
        sub, gp = dm.segments[j]
        out = []
        if ch in sub:
            out.append((j, gp.table[h][gp.mu[ch]]))
        if j < m and ch == dm.pivots[j] and h in gp.accepting:
            out.append((j + 1, dm.segments[j + 1][1].identity))
        return out

    init = frozenset([index[(0, dm.segments[0][1].identity)]])
    subsets = {init: 0}
    order = [init]
    rows: list[list[int]] = []
    for s in order:
        row = []
        for ch in alphabet.symbols:
            nxt = frozenset(index[t] for i in s for t in moves(nfa_states[i], ch))
            if nxt not in subsets:
                subsets[nxt] = len(order)
                order.append(nxt)
            row.append(subsets[nxt])
        rows.append(row)
    last_gp = dm.segments[-1][1]
    finals = frozenset(
        i
        for i, s in enumerate(order)
        if any(
            nfa_states[x][0] == m and nfa_states[x][1] in last_gp.accepting
            for x in s
        )
    )
    return minimize_dfa(Dfa(alphabet, tuple(tuple(r) for r in rows), 0, finals))


def _pivot_placements(inst: ShuffleInstance, pivots: tuple[str, ...]):
    """All assignments of pivots to string positions, label-matching, with
    same-string placements in increasing position order."""
    options = []
    for p in pivots:
        opts = [
            (j, q)
            for j, s in enumerate(inst.strings)
            for q in range(len(s))
            if s[q] == p
        ]
        options.append(opts)

    for combo in product(*options):
        if len(set(combo)) != len(combo):
            continue
        ok = True
        for a in range(len(combo)):
            for b in range(a + 1, len(combo)):
                if combo[a][0] == combo[b][0] and combo[a][1] > combo[b][1]:
                    ok = False
        if ok:
            yield combo


class _SliceBudget:
    """Per-slice result of a frequent allocation: the set of segment-image
    products certified for the slice, plus whether insertions are licensed
    (only rich slices may be torn apart by insertions)."""

    __slots__ = ("targets", "insertion_letters")

    def __init__(self, targets: frozenset[int], insertion_letters: frozenset[str]):
        self.targets = targets
        self.insertion_letters = insertion_letters


def _exact_interleaving_images(strings: list[str], gp: GroupPresentation, caps: Caps) -> frozenset[int] | None:
    space = prod(len(s) + 1 for s in strings) * len(gp)
    if space > caps.dp_states:
        return None
    done = tuple(len(s) for s in strings)
    seen = {(tuple(0 for _ in strings), gp.identity)}
    stack = list(seen)
    out = set()
    while stack:
        pos, h = stack.pop()
        if pos == done:
            out.add(h)
            continue
        for i, s in enumerate(strings):
            if pos[i] < len(s):
                npos = pos[:i] + (pos[i] + 1,) + pos[i + 1:]
                nxt = (npos, gp.table[h][gp.mu[s[pos[i]]]])
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return frozenset(out)


def _frequent_allocations(inst, dm, freq_idx, r_base, caps):
    """Whole-string slice assignments; yields dicts slice -> _SliceBudget."""
    m = len(dm.pivots)
    if not freq_idx:
        yield {
            j: _SliceBudget(frozenset([gp.identity]), frozenset())
            for j, (_s, gp) in enumerate(dm.segments)
        }
        return

    n_alloc = (m + 1) ** len(freq_idx)
    if n_alloc > caps.district_enum:
        raise CapExceeded(
            f"{n_alloc} frequent allocations exceed cap {caps.district_enum}"
        )
    letters_of = {i: set(inst.strings[i]) for i in freq_idx}
    for assign in product(range(m + 1), repeat=len(freq_idx)):
        slices: dict[int, list[int]] = {j: [] for j in range(m + 1)}
        ok = True
        for idx, j in zip(freq_idx, assign):
            if not letters_of[idx] <= dm.segments[j][0]:
                ok = False
                break
            slices[j].append(idx)
        if not ok:
            continue
        out = {}
        for j, (sub, gp) in enumerate(dm.segments):
            strings = [inst.strings[i] for i in slices[j]]
            used = sorted({ch for s in strings for ch in s})
            if not used:
                out[j] = _SliceBudget(frozenset([gp.identity]), frozenset())
                continue
            sub_inst = ShuffleInstance(Alphabet(tuple(used)), tuple(strings))
            if rich_antichain(sub_inst.to_dag(), r_base, set(used), caps) is not None:
                counts = tuple(sum(s.count(sym) for s in strings) for sym in gp.symbols)
                out[j] = _SliceBudget(
                    reachable_set(gp, counts), frozenset(used)
                )
            else:
                exact = _exact_interleaving_images(strings, gp, caps)
                if exact is None:
                    ok = False
                    break
                out[j] = _SliceBudget(exact, frozenset())
        if ok:
            yield out


def _rare_dp(inst, dm, rare_idx, placement, alloc, b, caps) -> bool:
    """DP over the rare strings for a fixed pivot placement and frequent
    allocation: advance letters within the current segment, consume pivots
    in order, insert bounded-many licensed subgroup elements per segment."""
    rare = [inst.strings[i] for i in rare_idx]
    rare_pos_of_string = {j: i for i, j in enumerate(rare_idx)}
    pivot_at = {}
    for piv_idx, (j, q) in enumerate(placement):
        pivot_at[(rare_pos_of_string[j], q)] = piv_idx

    seg_groups = [gp for _s, gp in dm.segments]
    seg_subs = [sub for sub, _g in dm.segments]
    m = len(dm.pivots)
    ins_pool = []
    for j, gp in enumerate(seg_groups):
        letters = alloc[j].insertion_letters
        gens = {gp.mu[a] for a in letters}
        pool = sorted(gp.generated_by(gens)) if gens else []
        ins_pool.append([x for x in pool if x != gp.identity])

    done = tuple(len(s) for s in rare)
    start = (
        tuple(0 for _ in rare), 0, seg_groups[0].identity,
        0, seg_groups[0].identity, False,
    )
    seen = {start}
    stack = [start]
    while stack:
        pos, j, h, used, qrun, just = stack.pop()
        gp = seg_groups[j]
        if pos == done and j == m and h in gp.accepting and qrun in alloc[j].targets:
            return True
        if len(seen) > caps.dp_states:
            raise CapExceeded(f"district DP exceeds state cap {caps.dp_states}")
        for i, s in enumerate(rare):
            if pos[i] >= len(s):
                continue
            ch = s[pos[i]]
            npos = pos[:i] + (pos[i] + 1,) + pos[i + 1:]
            piv = pivot_at.get((i, pos[i]))
            if piv is not None:
                # The chosen pivot occurrence closes its segment.
                if piv == j and h in gp.accepting and qrun in alloc[j].targets:
                    ngp = seg_groups[j + 1]
                    nxt = (npos, j + 1, ngp.identity, 0, ngp.identity, False)
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            elif ch in seg_subs[j]:
                nxt = (npos, j, gp.table[h][gp.mu[ch]], used, qrun, False)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if not just and used < b:
            for x in ins_pool[j]:
                nxt = (pos, j, gp.table[h][x], used + 1, gp.table[qrun][x], True)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return False


def solve_district_monomial(
    inst: ShuffleInstance,
    dm: DistrictGroupMonomial,
    b_impl: int | None = None,
    caps: Caps = DEFAULT_CAPS,
    want_witness: bool = False,
    trust_threshold: int | None = None,
) -> SolveResult:
    tag = "district"
    m = len(dm.pivots)

    if m == 0:
        sub, gp = dm.segments[0]
        if any(ch not in sub for s in inst.strings for ch in s):
            return make_result(False, tag)
        core = ShuffleInstance(Alphabet(gp.symbols), inst.strings)
        res = solve_group_csh(core, gp, b_impl, caps, want_witness, trust_threshold)
        return SolveResult(res.decision, res.witness, tag, res.complete)

    b = b_impl if b_impl is not None else 2 * max(len(gp) for _s, gp in dm.segments)
    r_base = max(richness_threshold(gp, gp.symbols, b) for _s, gp in dm.segments)
    r_glob = (m + 1) * (r_base + 2)
    rf = rare_frequent(inst, r_glob)

    budget = caps.district_enum
    positive = False
    any_frequent = False
    for placement in _pivot_placements(inst, dm.pivots):
        hosts = {j for j, _q in placement}
        rare_idx = sorted(set(rf.rare_strings) | hosts)
        freq_idx = [i for i in range(len(inst.strings)) if i not in set(rare_idx)]
        any_frequent = any_frequent or bool(freq_idx)
        for alloc in _frequent_allocations(inst, dm, freq_idx, r_base, caps):
            budget -= 1
            if budget < 0:
                raise CapExceeded(
                    f"district enumeration exceeds cap {caps.district_enum}"
                )
            if _rare_dp(inst, dm, rare_idx, placement, alloc, b, caps):
                positive = True
                break
        if positive:
            break

    if positive:
        if not want_witness:
            return make_result(True, tag)
        dfa = district_to_dfa(dm, inst.alphabet)
        res = solve_brute(inst.to_dag(), dfa, caps, want_witness=True, tag=tag)
        if res.decision:
            return res
        raise AssertionError("district decision and witness search disagree")
    # Exact when nothing was frequent: the DP then explored every slicing of
    # every string with no insertion approximation at all.
    return make_result(False, tag, complete=not any_frequent)
