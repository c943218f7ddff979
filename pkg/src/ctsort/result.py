"""Solver results with enforced witness integrity.

Every witness-carrying result is built through ``make_result``, which
re-verifies that the witness is a topological sort of the instance and that
its spelled word is accepted by the target language.  A broken witness is a
bug, so it raises instead of degrading.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ctsort.dag import LabeledDag

Acceptor = Callable[[str], bool]


@dataclass(frozen=True)
class SolveResult:
    decision: bool
    witness: tuple[int, ...] | None
    solver_tag: str
    complete: bool = True

    def witness_ids(self, g: LabeledDag) -> list | None:
        if self.witness is None:
            return None
        return [g.ids[v] for v in self.witness]


def make_result(
    decision: bool,
    solver_tag: str,
    g: LabeledDag | None = None,
    witness: tuple[int, ...] | list[int] | None = None,
    acceptor: Acceptor | None = None,
    complete: bool = True,
) -> SolveResult:
    if witness is not None:
        if not decision:
            raise ValueError("witness attached to a negative result")
        if g is None or acceptor is None:
            raise ValueError("witness verification needs the DAG and an acceptor")
        witness = tuple(witness)
        if not g.is_topological_sort(witness):
            raise ValueError(f"invalid witness (not a topological sort): {witness}")
        word = g.word_of(witness)
        if not acceptor(word):
            raise ValueError(f"invalid witness (word {word!r} rejected)")
    return SolveResult(decision, witness, solver_tag, complete)
