"""Finite group presentations used by the group-language solvers.

A group is given by its multiplication table; the morphism mu maps alphabet
symbols to generators.  mu must be surjective (the generator images generate
the whole group); the solvers rely on this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations

from ctsort.lang import Alphabet


@dataclass(frozen=True)
class GroupPresentation:
    table: tuple[tuple[int, ...], ...]
    identity: int
    mu: dict[str, int]                 # symbol -> element
    accepting: frozenset[int]

    def __post_init__(self):
        n = len(self.table)
        for row in self.table:
            if len(row) != n or not all(0 <= x < n for x in row):
                raise ValueError("malformed multiplication table")
        e = self.identity
        if any(self.table[e][x] != x or self.table[x][e] != x for x in range(n)):
            raise ValueError("identity is not neutral")
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                        raise ValueError("table is not associative")
        for x in range(n):
            if e not in self.table[x]:
                raise ValueError(f"element {x} has no inverse")
        if not all(0 <= g < n for g in self.mu.values()):
            raise ValueError("mu image out of range")
        if self.generated_by(set(self.mu.values())) != set(range(n)):
            raise ValueError("mu images do not generate the group (mu not surjective)")
        if not all(0 <= g < n for g in self.accepting):
            raise ValueError("accepting element out of range")

    def __len__(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def product(self, elems) -> int:
        acc = self.identity
        for x in elems:
            acc = self.table[acc][x]
        return acc

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self)
        for x in range(len(self)):
            inv[x] = self.table[x].index(self.identity)
        return tuple(inv)

    def order_of(self, x: int) -> int:
        k, cur = 1, x
        while cur != self.identity:
            cur = self.table[cur][x]
            k += 1
        return k

    def word_image(self, w: str) -> int:
        acc = self.identity
        for ch in w:
            acc = self.table[acc][self.mu[ch]]
        return acc

    def generated_by(self, gens: set[int]) -> set[int]:
        out = {self.identity} | set(gens)
        frontier = list(out)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in out:
                    out.add(y)
                    frontier.append(y)
        return out

    @cached_property
    def is_abelian(self) -> bool:
        n = len(self)
        return all(
            self.table[x][y] == self.table[y][x] for x in range(n) for y in range(n)
        )

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(sorted(self.mu))

    def alphabet(self) -> Alphabet:
        return Alphabet(self.symbols)

    def shortest_word_lengths(self) -> dict[int, int]:
        """min |u| with mu(u) = g, per element (BFS over the Cayley graph)."""
        dist = {self.identity: 0}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.mu.values():
                    y = self.table[x][g]
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        return dist

    def gamma(self) -> int:
        """max over g of the shortest word length mapping to g."""
        return max(self.shortest_word_lengths().values())

    # -- constructors -------------------------------------------------------

    @classmethod
    def cyclic(cls, n: int, mu: dict[str, int], accepting) -> "GroupPresentation":
        table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        return cls(table, 0, dict(mu), frozenset(accepting))

    @classmethod
    def from_permutations(
        cls,
        degree: int,
        gens: dict[str, tuple[int, ...]],
        accepting_perms=(),
    ) -> tuple["GroupPresentation", dict[tuple[int, ...], int]]:
        """Closure of permutation generators; returns (group, perm -> index)."""
        identity = tuple(range(degree))
        elems = [identity]
        index = {identity: 0}
        frontier = [identity]
        gen_perms = list(gens.values())
        while frontier:
            nxt = []
            for p in frontier:
                for q in gen_perms:
                    r = tuple(q[p[i]] for i in range(degree))  # p then q
                    if r not in index:
                        index[r] = len(elems)
                        elems.append(r)
                        nxt.append(r)
            frontier = nxt
        table = tuple(
            tuple(index[tuple(y[x[i]] for i in range(degree))] for y in elems)
            for x in elems
        )
        group = cls(
            table,
            0,
            {a: index[p] for a, p in gens.items()},
            frozenset(index[p] for p in accepting_perms),
        )
        return group, index

    @classmethod
    def symmetric3(cls, accepting_perms=()) -> tuple["GroupPresentation", dict]:
        """S3 generated by the transpositions (12) and (13): mu(a)=(12), mu(b)=(13)."""
        return cls.from_permutations(
            3, {"a": (1, 0, 2), "b": (2, 1, 0)}, accepting_perms
        )

    def to_json(self) -> dict:
        return {
            "table": [list(r) for r in self.table],
            "mu": dict(sorted(self.mu.items())),
            "accepting": sorted(self.accepting),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GroupPresentation":
        table = tuple(tuple(int(x) for x in row) for row in obj["table"])
        n = len(table)
        identity = next(
            e
            for e in range(n)
            if all(table[e][x] == x and table[x][e] == x for x in range(n))
        )
        return cls(
            table,
            identity,
            {str(k): int(v) for k, v in obj["mu"].items()},
            frozenset(int(x) for x in obj["accepting"]),
        )
