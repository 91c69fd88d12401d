"""Oriented knot diagrams in planar-diagram (PD) notation.

A crossing ``X(a,b,c,d)`` lists the four arc labels counterclockwise,
starting from the incoming under-strand, so the under-strand runs a -> c.
The over-strand runs d -> b at a positive crossing and b -> d at a
negative one. Arc labels only have to be positive and appear exactly
twice; `relabel` renumbers them 1..n along the orientation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import DiagramError

Crossing = tuple[int, int, int, int]

_TOKEN = re.compile(r"X\((\d+),(\d+),(\d+),(\d+)\)")


@dataclass(frozen=True)
class KnotDiagram:
    crossings: tuple[Crossing, ...]
    arc_count: int

    @classmethod
    def from_crossings(cls, crossings) -> "KnotDiagram":
        xs = tuple(sorted(tuple(int(v) for v in x) for x in crossings))
        labels = {v for x in xs for v in x}
        return cls(xs, max(1, len(labels)))

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @cached_property
    def _structure(self) -> "_Structure":
        return _Structure.build(self.crossings)

    @property
    def signs(self) -> tuple[int, ...]:
        return self._structure.signs

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def __str__(self) -> str:
        return serialize_pd(self)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    errors: tuple[str, ...] = ()


@dataclass(frozen=True)
class SeifertData:
    circle_count: int
    crossing_count: int
    genus: int
    euler_characteristic: int


@dataclass
class _Structure:
    """Orientation data derived once per diagram."""

    crossings: tuple[Crossing, ...]
    occurrences: dict[int, list[tuple[int, int]]]
    over_in: list[int] = field(default_factory=list)

    @classmethod
    def build(cls, crossings) -> "_Structure":
        occ: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(crossings):
            for s, label in enumerate(x):
                occ.setdefault(label, []).append((ci, s))
        st = cls(tuple(crossings), occ)
        errors = _multiplicity_errors(occ)
        if errors:
            raise DiagramError("arc multiplicity", "; ".join(errors))
        st.over_in = _resolve_orientation(st)
        return st

    def other_end(self, ci: int, slot: int) -> tuple[int, int]:
        a, b = self.occurrences[self.crossings[ci][slot]]
        return b if a == (ci, slot) else a

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if s == 3 else -1 for s in self.over_in)

    def out_slot(self, ci: int, in_slot: int) -> int:
        return (in_slot + 2) % 4

    def head(self, label: int) -> tuple[int, int]:
        for ci, s in self.occurrences[label]:
            if s == 0 or s == self.over_in[ci]:
                return ci, s
        raise DiagramError("inconsistent orientation", f"arc {label} has no head")

    def successor(self, label: int) -> int:
        ci, s = self.head(label)
        return self.crossings[ci][(s + 2) % 4]


def _multiplicity_errors(occ) -> list[str]:
    return [f"arc {label} used {len(v)} times" for label, v in sorted(occ.items()) if len(v) != 2]


def _strand_components(crossings, occ) -> int:
    """Number of closed strands, ignoring orientation."""
    seen: set[tuple[int, int]] = set()
    comps = 0
    for ci in range(len(crossings)):
        for s in range(4):
            if (ci, s) in seen:
                continue
            comps += 1
            cur = (ci, s)
            while cur not in seen:
                seen.add(cur)
                exit_slot = (cur[0], (cur[1] + 2) % 4)
                seen.add(exit_slot)
                a, b = occ[crossings[exit_slot[0]][exit_slot[1]]]
                cur = b if a == exit_slot else a
    return comps


def _resolve_orientation(st: _Structure) -> list[int]:
    """Walk every strand from an incoming under slot and record over entries."""
    n = len(st.crossings)
    over_in = [-1] * n
    visited: set[tuple[int, int]] = set()
    for start in range(n):
        if (start, 0) in visited:
            continue
        cur = (start, 0)
        while cur not in visited:
            visited.add(cur)
            ci, s = cur
            nxt = st.other_end(ci, (s + 2) % 4)
            cj, t = nxt
            if t == 2:
                raise DiagramError("inconsistent orientation",
                                   f"under-strand enters crossing {cj + 1} at slot c")
            if t in (1, 3):
                if over_in[cj] not in (-1, t):
                    raise DiagramError("inconsistent orientation",
                                       f"over-strand of crossing {cj + 1} runs both ways")
                over_in[cj] = t
            cur = nxt
    if -1 in over_in:
        raise DiagramError("inconsistent orientation", "over-strand never traversed")
    return over_in


def parse_pd(text: str) -> KnotDiagram:
    """Parse and validate whitespace-separated ``X(a,b,c,d)`` tokens."""
    crossings = []
    for tok in text.split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise DiagramError("malformed token", repr(tok))
        values = tuple(int(g) for g in m.groups())
        if min(values) <= 0:
            raise DiagramError("malformed token", f"{tok}: labels must be positive")
        crossings.append(values)
    d = KnotDiagram.from_crossings(crossings)
    report = validate(d)
    if not report.ok:
        kind, _, detail = report.errors[0].partition(": ")
        raise DiagramError(kind, detail)
    return d


def serialize_pd(d: KnotDiagram) -> str:
    return " ".join("X({},{},{},{})".format(*x) for x in sorted(d.crossings))


def validate(d: KnotDiagram) -> ValidationReport:
    if not d.crossings:
        return ValidationReport(True)
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(d.crossings):
        for s, label in enumerate(x):
            occ.setdefault(label, []).append((ci, s))
    errors = [f"arc multiplicity: {e}" for e in _multiplicity_errors(occ)]
    if errors:
        return ValidationReport(False, tuple(errors))
    comps = _strand_components(d.crossings, occ)
    if comps != 1:
        errors.append(f"component count {comps}: diagram is a link, not a knot")
    try:
        d._structure
    except DiagramError as exc:
        errors.append(f"{exc.kind}: {exc.detail}")
    if not errors:
        nf = len(faces(d))
        if nf != len(d.crossings) + 2:
            errors.append(f"non-planar: {nf} faces for {len(d.crossings)} crossings")
    return ValidationReport(not errors, tuple(errors))


def require_valid(d: KnotDiagram) -> None:
    report = validate(d)
    if not report.ok:
        kind, _, detail = report.errors[0].partition(": ")
        raise DiagramError(kind, detail)


def faces(d: KnotDiagram) -> list[list[tuple[int, int]]]:
    """Faces as cyclic lists of (crossing, slot) half-edges, face on the left."""
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(d.crossings):
        for s, label in enumerate(x):
            occ.setdefault(label, []).append((ci, s))

    def other(ci: int, s: int) -> tuple[int, int]:
        a, b = occ[d.crossings[ci][s]]
        return b if a == (ci, s) else a

    seen: set[tuple[int, int]] = set()
    out = []
    for ci in range(len(d.crossings)):
        for s in range(4):
            if (ci, s) in seen:
                continue
            face = []
            cur = (ci, s)
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                cj, t = other(*cur)
                cur = (cj, (t - 1) % 4)
            out.append(face)
    return out


def relabel(d: KnotDiagram, start: int | None = None) -> KnotDiagram:
    """Renumber arcs 1..n consecutively along the orientation."""
    if not d.crossings:
        return KnotDiagram((), 1)
    st = d._structure
    label = min(st.occurrences) if start is None else start
    mapping: dict[int, int] = {}
    while label not in mapping:
        mapping[label] = len(mapping) + 1
        label = st.successor(label)
    return KnotDiagram.from_crossings(tuple(mapping[v] for v in x) for x in d.crossings)


def mirror(d: KnotDiagram) -> KnotDiagram:
    """Change every crossing; the planar picture is kept."""
    out = []
    for x, over_in in zip(d.crossings, d._structure.over_in):
        k = over_in
        out.append(tuple(x[(k + i) % 4] for i in range(4)))
    return KnotDiagram.from_crossings(out)


def connected_sum(d1: KnotDiagram, d2: KnotDiagram) -> KnotDiagram:
    """Splice the highest-numbered arc of d1 with the highest-numbered arc of d2."""
    require_valid(d1)
    require_valid(d2)
    if not d1.crossings:
        return relabel(d2)
    if not d2.crossings:
        return relabel(d1)
    shift = max(v for x in d1.crossings for v in x)
    xs1 = [list(x) for x in d1.crossings]
    xs2 = [[v + shift for v in x] for x in d2.crossings]
    h1 = shift
    h2 = max(v for x in xs2 for v in x)
    st1, st2 = d1._structure, d2._structure
    head1 = st1.head(h1)
    head2 = st2.head(h2 - shift)
    fresh = h2 + 1
    # arc h1 now runs from its old tail into the head of h2;
    # a fresh arc runs from the tail of h2 into the old head of h1
    xs1[head1[0]][head1[1]] = fresh
    tail2 = next(p for p in st2.occurrences[h2 - shift] if p != head2)
    xs2[head2[0]][head2[1]] = h1
    xs2[tail2[0]][tail2[1]] = fresh
    return relabel(KnotDiagram.from_crossings(xs1 + xs2))


def seifert_circles(d: KnotDiagram) -> list[list[int]]:
    """Arc labels of each Seifert circle of the oriented smoothing."""
    if not d.crossings:
        return [[1]]
    st = d._structure
    seen: set[int] = set()
    circles = []
    for label in sorted(st.occurrences):
        if label in seen:
            continue
        circle = []
        cur = label
        while cur not in seen:
            seen.add(cur)
            circle.append(cur)
            ci, s = st.head(cur)
            nxt_slot = (st.over_in[ci] + 2) % 4 if s == 0 else 2
            cur = d.crossings[ci][nxt_slot]
        circles.append(circle)
    return circles


def seifert_data(d: KnotDiagram) -> SeifertData:
    require_valid(d)
    s = len(seifert_circles(d))
    c = d.crossing_count
    return SeifertData(s, c, (c - s + 1) // 2, s - c)
