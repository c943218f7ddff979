"""Resource caps for solvers and enumerators.

Every cap is explicit; nothing is silently truncated.  The CLI exposes all
of them through ``--cap name=value`` flags and the ``CTS_CAPS`` environment
variable (a comma list such as ``brute_vertices=30,shuffle_length=16``).
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Caps:
    shuffle_length: int = 14          # |u|+|v| bound for materialized shuffle sets
    toposort_vertices: int = 12       # cap when materializing all topological sorts
    semiautomaton_states: int = 12    # |Q| bound before monoid computation
    monoid_elements: int = 100_000    # transition-monoid closure bound
    brute_vertices: int = 24          # general-DAG bound for the brute-force solver
    dp_states: int = 2_000_000        # memo-table bound for position/state DPs
    dispatch_chains: int = 6          # max strings routed to the bounded-width DP
    district_enum: int = 200_000      # slicing-enumeration bound for district solving
    antichain_exhaustive: int = 26    # candidate-vertex bound for exhaustive antichain search

    def override(self, **kwargs: int) -> "Caps":
        return replace(self, **kwargs)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_spec(cls, text: str, base: "Caps | None" = None) -> "Caps":
        """Parse a comma list like ``brute_vertices=30,dp_states=10``."""
        caps = base or cls()
        if not text.strip():
            return caps
        updates: dict[str, int] = {}
        for item in text.split(","):
            name, _, value = item.partition("=")
            name = name.strip()
            if name not in cls.field_names():
                raise ValueError(f"unknown cap {name!r}")
            updates[name] = int(value)
        return caps.override(**updates)


DEFAULT_CAPS = Caps()
