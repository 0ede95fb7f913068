"""Layered neighbourhoods around a target node of an estimated graph."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Mark, MixedGraph


@dataclass(frozen=True)
class BlanketReport:
    """Nodes within two adjacency steps of ``target``.

    ``marks[v]`` is ``(mark at v, mark at target)`` on the edge ``v - target``
    for every ``v`` in ``layer1``, so ``(TAIL, ARROW)`` reads ``v -> target``
    and ``(ARROW, TAIL)`` reads ``target -> v``.
    """

    target: int
    layer1: frozenset[int]
    layer2: frozenset[int]
    marks: dict[int, tuple[Mark, Mark]]
    node_names: tuple[str, ...]

    def to_dict(self) -> dict:
        nm = self.node_names
        return {
            "target": nm[self.target],
            "layer1": [nm[v] for v in sorted(self.layer1)],
            "layer2": [nm[v] for v in sorted(self.layer2)],
            "edges": [
                {"u": nm[v], "v": nm[self.target],
                 "mark_at_u": self.marks[v][0].label, "mark_at_v": self.marks[v][1].label}
                for v in sorted(self.layer1)
            ],
        }


def markov_blanket_layers(g: MixedGraph, target) -> BlanketReport:
    """First layer: nodes adjacent to ``target``. Second layer: nodes adjacent
    to the first layer, other than ``target`` and the first layer itself.

    Endpoint marks do not affect membership; they are reported alongside.
    """
    t = g.index(target)
    layer1 = frozenset(g.neighbors(t))
    reach = set()
    for v in layer1:
        reach.update(g.neighbors(v))
    layer2 = frozenset(reach - layer1 - {t})
    marks = {v: (g.mark(t, v), g.mark(v, t)) for v in layer1}
    return BlanketReport(t, layer1, layer2, marks, tuple(g.node_names))
