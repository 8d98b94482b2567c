"""Edge-crossing paths in the dual graph of a triangulation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence


class DualStep(NamedTuple):
    from_triangle: str
    crossed_edge: int


@dataclass(frozen=True)
class DualLoop:
    """A closed dual path: leave ``base_triangle`` and cross edges one by one.

    Chaining (each step starts where the previous one lands, the last step
    lands back on the base) depends on the gluings, so it is checked when the
    loop is developed on a concrete surface, not here.
    """

    base_triangle: str
    steps: tuple[DualStep, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps",
                           tuple(DualStep(str(t), int(k)) for t, k in self.steps))

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> list:
        return [[s.from_triangle, s.crossed_edge] for s in self.steps]

    @classmethod
    def from_json(cls, base: str, steps: Sequence) -> DualLoop:
        return cls(base, tuple((str(t), int(k)) for t, k in steps))


def parse_path(text: str) -> tuple[DualStep, ...]:
    """Parse the compact ``"t0:1,t1:0"`` step notation."""
    steps = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        tri, _, edge = token.rpartition(":")
        if not tri:
            raise ValueError(f"bad path step {token!r}; expected triangle:edge")
        steps.append(DualStep(tri, int(edge)))
    return tuple(steps)
