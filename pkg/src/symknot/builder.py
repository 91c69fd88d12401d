"""Assemble knot diagrams from unoriented crossings and plain wires.

Constructions (symmetric unions, band boundaries, tangle closures) describe
a diagram locally: each crossing is four ports in counterclockwise order
with one diagonal pair marked as the under-strand, and ports are joined by
wires. `build` walks the resulting closed curve once, picks the
orientation, numbers the arcs in traversal order and emits PD crossings
starting at the incoming under-strand.
"""
from __future__ import annotations

from .diagram import KnotDiagram
from .errors import DiagramError

Port = tuple


class DiagramBuilder:
    def __init__(self) -> None:
        self._under: list[int] = []  # 0: slots 0-2 are under, 1: slots 1-3
        self._wires = 0
        self._link: dict[Port, Port] = {}

    def crossing(self, under_pair: int = 0) -> int:
        """New crossing; its ports are ``('x', id, slot)`` counterclockwise."""
        self._under.append(under_pair)
        return len(self._under) - 1

    @staticmethod
    def port(cid: int, slot: int) -> Port:
        return ("x", cid, slot % 4)

    def wire(self) -> tuple[Port, Port]:
        """A crossing-free arc; returns its two ends."""
        w = self._wires
        self._wires += 1
        return ("w", w, 0), ("w", w, 1)

    def join(self, p: Port, q: Port) -> None:
        for a in (p, q):
            if a in self._link:
                raise DiagramError("assembly", f"port {a} joined twice")
        self._link[p] = q
        self._link[q] = p

    def under_pair(self, cid: int) -> int:
        return self._under[cid]

    @property
    def crossing_total(self) -> int:
        return len(self._under)

    def walk(self, port: Port) -> Port:
        """Leave through ``port`` and follow wires to a crossing port or an unjoined end.

        Starting from a wire end first crosses that wire. An unjoined
        crossing port leads to itself.
        """
        p = port
        if p[0] == "w":
            p = ("w", p[1], 1 - p[2])
        while True:
            q = self._link.get(p)
            if q is None:
                return p
            if q[0] == "x":
                return q
            p = ("w", q[1], 1 - q[2])

    def _all_ports(self):
        for c in range(len(self._under)):
            for s in range(4):
                yield ("x", c, s)
        for w in range(self._wires):
            yield ("w", w, 0)
            yield ("w", w, 1)

    def _next_entry(self, exit_port: Port, seen_wires: set | None = None) -> Port:
        """Follow wires from a crossing exit to the next crossing entry."""
        p = self._link[exit_port]
        while p[0] == "w":
            if seen_wires is not None:
                seen_wires.add(p[1])
            p = self._link[("w", p[1], 1 - p[2])]
        return p

    def component_count(self) -> int:
        missing = [p for p in self._all_ports() if p not in self._link]
        if missing:
            raise DiagramError("assembly", f"{len(missing)} unjoined ports, e.g. {missing[0]}")
        seen: set[tuple[int, int]] = set()
        seen_wires: set[int] = set()
        comps = 0
        for c in range(len(self._under)):
            for pair in range(2):
                if (c, pair) in seen:
                    continue
                comps += 1
                seen.add((c, pair))
                cur, exit_slot = c, pair + 2
                while True:
                    ent = self._next_entry(("x", cur, exit_slot), seen_wires)
                    key = (ent[1], ent[2] % 2)
                    if key in seen:
                        break
                    seen.add(key)
                    cur, exit_slot = ent[1], (ent[2] + 2) % 4
        for w in range(self._wires):
            if w in seen_wires:
                continue
            comps += 1
            p = ("w", w, 0)
            while True:
                seen_wires.add(p[1])
                q = self._link[("w", p[1], 1 - p[2])]
                if q[0] != "w" or q[1] in seen_wires:
                    break
                p = q
        return comps

    def build(self) -> KnotDiagram:
        return self.build_with_map()[0]

    def build_with_map(self) -> tuple[KnotDiagram, list[tuple[int, ...]]]:
        """Also return the PD tuple emitted for each builder crossing id."""
        d, crossings, _ = self._assemble()
        return d, crossings

    def build_labelled(self) -> tuple[KnotDiagram, dict[Port, int]]:
        """Also return the arc label at every crossing port."""
        d, _, labels = self._assemble()
        return d, {p: v for p, v in labels.items() if p[0] == "x"}

    def _assemble(self):
        comps = self.component_count()
        if comps != 1:
            raise DiagramError(f"component count {comps}", "assembled curve is not a knot")
        if not self._under:
            return KnotDiagram((), 1), [], {}
        labels: dict[Port, int] = {}
        rotation: dict[int, int] = {}
        cur_entry = ("x", 0, self._under[0])
        label = 0
        while True:
            _, c, s = cur_entry
            if s % 2 == self._under[c]:
                rotation[c] = s
            exit_port = ("x", c, (s + 2) % 4)
            label += 1
            nxt = self._next_entry(exit_port)
            labels[exit_port] = label
            labels[nxt] = label
            cur_entry = nxt
            if cur_entry == ("x", 0, self._under[0]):
                break
        if len(labels) != 4 * len(self._under):
            raise DiagramError("assembly", "traversal missed some crossing slots")
        crossings = []
        for c in range(len(self._under)):
            k = rotation[c]
            crossings.append(tuple(labels[("x", c, (k + i) % 4)] for i in range(4)))
        return KnotDiagram.from_crossings(crossings), crossings, labels
