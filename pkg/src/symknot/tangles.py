"""Four-ended tangles, partial sums, and the ribbon family K_n.

A tangle is drawn in a disk with its ends NW, SW, SE, NE in counterclockwise
order. Crossings use the half-tangle convention: slots counterclockwise,
slots 0 and 2 on the under-strand; labels are positive ints for inner arcs
and end names for arcs running to the boundary.

K_n is the closure of T2 + ... + T2 + T1 (n copies of T2, horizontal partial
sums). T1 is the boundary of a two-singularity flat band cut open across one
band segment; T2 is a full twist of that band segment. The band with the
n full twists put back is the ribbon disk of K_n.
"""
from __future__ import annotations

from dataclasses import dataclass

from .builder import DiagramBuilder
from .diagram import KnotDiagram
from .errors import DiagramError, TangleError
from .flatband import FlatBandDiagram, HalfTwist, _BandBoundary, parse_band
from .invariants import BoundsReport, bounds_report

ENDS = ("NW", "SW", "SE", "NE")
MAX_FAMILY_N = 8

# two clasps whose boundary has Alexander polynomial (t^2 - t + 1)^2
BASE_BAND = "S1c+ S2t+ S1t+ S2c+ ; embedding: 1:co,to,ci,ti 2:co,to,ci,ti"
# T2 sits between the second and third pass, away from the band's ends
CUT_EVENT = 2

Label = int | str


@dataclass(frozen=True)
class Tangle:
    """``blocks`` lists crossing indices of marked summands (one per copy of T2)."""

    crossings: tuple[tuple[Label, Label, Label, Label], ...] = ()
    arcs: tuple[tuple[str, str], ...] = ()
    blocks: tuple[tuple[int, ...], ...] = ()

    def ends(self) -> dict[tuple, tuple]:
        """Partner map on ``('x', crossing, slot)`` and ``('e', name)``."""
        where: dict[Label, list[tuple]] = {}
        for ci, x in enumerate(self.crossings):
            for s, v in enumerate(x):
                where.setdefault(v, []).append(("x", ci, s))
        partner: dict[tuple, tuple] = {}
        for v, spots in where.items():
            if isinstance(v, str):
                if v not in ENDS or len(spots) != 1:
                    raise TangleError("endpoint", f"end {v!r} used {len(spots)} times")
                a, b = spots[0], ("e", v)
            else:
                if len(spots) != 2:
                    raise TangleError("arc multiplicity", f"arc {v} used {len(spots)} times")
                a, b = spots
            partner[a], partner[b] = b, a
        for e1, e2 in self.arcs:
            a, b = ("e", e1), ("e", e2)
            if e1 not in ENDS or e2 not in ENDS or a in partner or b in partner or a == b:
                raise TangleError("endpoint", f"arc ({e1},{e2}) reuses or misnames an end")
            partner[a], partner[b] = b, a
        return partner

    @property
    def strand_count(self) -> int:
        return len(self.strands())

    def strands(self) -> list[tuple[str, str]]:
        """End pairs joined by each strand; raises on closed loops or missing ends."""
        partner = self.ends()
        missing = [e for e in ENDS if ("e", e) not in partner]
        if missing:
            raise TangleError("endpoint", f"missing ends {missing}")
        seen: set[tuple] = set()
        pairs = []
        for e in ENDS:
            if ("e", e) in seen:
                continue
            cur = ("e", e)
            seen.add(cur)
            nxt = partner[cur]
            while nxt[0] == "x":
                seen.add(nxt)
                out = ("x", nxt[1], (nxt[2] + 2) % 4)
                seen.add(out)
                nxt = partner[out]
            seen.add(nxt)
            pairs.append((e, nxt[1]))
        if len(seen) != len(partner):
            raise TangleError("closed component", "the tangle contains a closed loop")
        return pairs


def validate_tangle(t: Tangle) -> None:
    """Four ends, two strands, no loops, and a planar drawing in the disk."""
    if t.strand_count != 2:
        raise TangleError("strand count", f"{t.strand_count} strands")
    _check_planar(t)


def _check_planar(t: Tangle) -> None:
    # planar map: crossings, the four ends on a boundary circle, faces by rotation
    partner = t.ends()
    rotation: dict[tuple, list[tuple]] = {}
    for ci in range(len(t.crossings)):
        rotation[("x", ci)] = [("x", ci, s) for s in range(4)]
    for e in ENDS:
        rotation[("e", e)] = [("b", e, "next"), ("e", e), ("b", e, "prev")]
    link = dict(partner)
    for k, e in enumerate(ENDS):
        nxt = ENDS[(k + 1) % 4]
        link[("b", e, "next")] = ("b", nxt, "prev")
        link[("b", nxt, "prev")] = ("b", e, "next")

    where = {h: (v, i) for v, hs in rotation.items() for i, h in enumerate(hs)}
    seen = set()
    faces = 0
    for start in link:
        if start in seen:
            continue
        faces += 1
        h = start
        while h not in seen:
            seen.add(h)
            arrive = link[h]
            v, i = where[arrive]
            h = rotation[v][(i - 1) % len(rotation[v])]
    vertices = len(rotation)
    edges = len(link) // 2
    if vertices - edges + faces != 2:
        raise TangleError("not planar", f"Euler characteristic {vertices - edges + faces}")


def _relabel(crossing_count: int, partner: dict[tuple, tuple], blocks) -> Tangle:
    labels: dict[tuple, Label] = {}
    arcs = []
    fresh = 1
    for a, b in partner.items():
        if a in labels:
            continue
        if a[0] == "e" and b[0] == "e":
            arcs.append(tuple(sorted((a[1], b[1]), key=ENDS.index)))
            name = a[1]
        elif a[0] == "e" or b[0] == "e":
            name = a[1] if a[0] == "e" else b[1]
        else:
            name, fresh = fresh, fresh + 1
        labels[a] = labels[b] = name
    crossings = tuple(tuple(labels[("x", ci, s)] for s in range(4)) for ci in range(crossing_count))
    return Tangle(crossings, tuple(arcs), tuple(blocks))


_GLUINGS = {
    # a's side -> b's side, and which ends of a and b survive under which names
    "horizontal": ((("NE", "NW"), ("SE", "SW")), {"NW": "a", "SW": "a", "SE": "b", "NE": "b"}),
    "vertical": ((("SW", "NW"), ("SE", "NE")), {"NW": "a", "NE": "a", "SW": "b", "SE": "b"}),
}
HORIZONTAL = _GLUINGS["horizontal"][0]
VERTICAL = _GLUINGS["vertical"][0]


def partial_sum(a: Tangle, b: Tangle, gluing=HORIZONTAL) -> Tangle:
    """Glue two adjacent ends of ``a`` to the facing ends of ``b``.

    ``gluing`` is ((a_end, b_end), (a_end, b_end)); the supported sides are
    a's east to b's west (horizontal) and a's south to b's north (vertical).
    """
    gluing = tuple(tuple(p) for p in gluing)
    kind = next((k for k, (g, _) in _GLUINGS.items() if set(g) == set(gluing)), None)
    if kind is None:
        raise TangleError("unsupported gluing", f"{gluing}: glue a facing pair of sides")
    owner = _GLUINGS[kind][1]
    pa, pb = a.ends(), b.ends()
    shift = len(a.crossings)

    def tag(node, side):
        if node[0] == "x":
            return ("x", node[1] + (shift if side == "b" else 0), node[2])
        return ("e", side, node[1])

    merged: dict[tuple, tuple] = {}
    for side, p in (("a", pa), ("b", pb)):
        for u, v in p.items():
            merged[tag(u, side)] = tag(v, side)
    glued = {}
    for ea, eb in gluing:
        glued[("e", "a", ea)] = ("e", "b", eb)
        glued[("e", "b", eb)] = ("e", "a", ea)
    final: dict[tuple, tuple] = {}
    for u in merged:
        if u in glued:
            continue
        v = merged[u]
        steps = 0
        while v in glued:
            v = merged[glued[v]]
            steps += 1
            if steps > 4:
                raise TangleError("closed component", "gluing closes a loop")
        final[_rename(u, owner)] = _rename(v, owner)
    blocks = list(a.blocks) + [tuple(c + shift for c in blk) for blk in b.blocks]
    out = _relabel(shift + len(b.crossings), final, blocks)
    try:
        validate_tangle(out)
    except TangleError as exc:
        raise TangleError(exc.kind, f"partial sum: {exc.detail}") from exc
    return out


def _rename(node, owner):
    if node[0] == "x":
        return node
    side, name = node[1], node[2]
    if owner.get(name) != side:
        raise TangleError("unsupported gluing", f"end {name} of {side} is neither glued nor kept")
    return ("e", name)


def _tangle_from_builder(b: DiagramBuilder, ends: dict[str, tuple], blocks=()) -> Tangle:
    named = {port: name for name, port in ends.items()}
    partner: dict[tuple, tuple] = {}

    def node(port):
        return ("e", named[port]) if port in named else ("x", port[1], _slot(b, port))

    for c in range(b.crossing_total):
        for s in range(4):
            p = b.port(c, s)
            q = p if p in named else b.walk(p)
            partner[node(p) if p not in named else ("x", c, _slot(b, p))] = node(q)
    for name, port in ends.items():
        if port[0] == "w":
            partner[("e", name)] = node(b.walk(port))
        else:
            partner[("e", name)] = ("x", port[1], _slot(b, port))
    return _relabel(b.crossing_total, partner, blocks)


def _slot(b: DiagramBuilder, port) -> int:
    # re-index so the under pair sits at slots 0 and 2
    return (port[2] - b.under_pair(port[1])) % 4


def twist_tangle(half_twists: int = 2) -> Tangle:
    """A band segment running west to east with half twists; the left rail enters at NW."""
    b = DiagramBuilder()
    sign = 1 if half_twists > 0 else -1
    ne, nw, sw, se = 0, 1, 2, 3
    cs = [b.crossing(0 if sign > 0 else 1) for _ in range(abs(half_twists))]
    for c1, c2 in zip(cs, cs[1:]):
        b.join(b.port(c1, ne), b.port(c2, nw))
        b.join(b.port(c1, se), b.port(c2, sw))
    if not cs:
        return Tangle((), (("NW", "NE"), ("SW", "SE")))
    ends = {"NW": b.port(cs[0], nw), "SW": b.port(cs[0], sw),
            "NE": b.port(cs[-1], ne), "SE": b.port(cs[-1], se)}
    return _tangle_from_builder(b, ends, blocks=(tuple(range(len(cs))),))


def builtin_tangles() -> tuple[Tangle, Tangle]:
    """T1: the two-clasp band cut open; T2: one full twist of a band segment."""
    base = parse_band(BASE_BAND)
    shape = _BandBoundary(base, cut=CUT_EVENT)
    o = shape.open_ends
    # seen from outside the cut, the resumed rails come first counterclockwise
    ends = {"NW": o["resume_left"], "SW": o["resume_right"],
            "SE": o["arriving_right"], "NE": o["arriving_left"]}
    t1 = _tangle_from_builder(shape.b, ends)
    t2 = twist_tangle(2)
    for t in (t1, t2):
        validate_tangle(t)
    return t1, t2


def numerator_closure(t: Tangle) -> tuple[KnotDiagram, list[tuple[int, ...]]]:
    """Join NW to NE and SW to SE; also return the PD tuple of every tangle crossing."""
    b = DiagramBuilder()
    ids = [b.crossing(0) for _ in t.crossings]
    partner = t.ends()
    ends = {}
    for u, v in partner.items():
        if u[0] == "x" and v[0] == "x":
            if u < v:
                b.join(b.port(ids[u[1]], u[2]), b.port(ids[v[1]], v[2]))
        elif u[0] == "x":
            ends[v[1]] = b.port(ids[u[1]], u[2])
    for e1, e2 in t.arcs:
        ends[e1], ends[e2] = b.wire()
    for e1, e2 in (("NW", "NE"), ("SW", "SE")):
        w0, w1 = b.wire()
        b.join(ends[e1], w0)
        b.join(w1, ends[e2])
    try:
        return b.build_with_map()
    except DiagramError as exc:
        raise TangleError(exc.kind, "closure is not a knot") from exc


@dataclass(frozen=True)
class SphereMarker:
    """A circle around one copy of T2; ``arcs`` are the PD arcs it crosses."""

    index: int
    arcs: tuple[int, ...]


@dataclass(frozen=True)
class FamilyKnot:
    n: int
    diagram: KnotDiagram
    ribbon_band: FlatBandDiagram
    sphere_markers: tuple[SphereMarker, ...]
    tangle: Tangle


def family_band(n: int) -> FlatBandDiagram:
    base = parse_band(BASE_BAND)
    events = base.events[:CUT_EVENT] + (HalfTwist(1),) * (2 * n) + base.events[CUT_EVENT:]
    return FlatBandDiagram(events, base.embedding)


def build_kn(n: int) -> FamilyKnot:
    if not 1 <= n <= MAX_FAMILY_N:
        raise TangleError("family index", f"n = {n} outside 1..{MAX_FAMILY_N}")
    t1, t2 = builtin_tangles()
    chain = t2
    for _ in range(n - 1):
        chain = partial_sum(chain, t2)
    whole = partial_sum(chain, t1)
    diagram, emitted = numerator_closure(whole)
    markers = []
    for k, blk in enumerate(whole.blocks):
        count: dict[int, int] = {}
        for c in blk:
            for label in emitted[c]:
                count[label] = count.get(label, 0) + 1
        markers.append(SphereMarker(k + 1, tuple(sorted(v for v, m in count.items() if m == 1))))
    return FamilyKnot(n, diagram, family_band(n), tuple(markers), whole)


def kn_report(n: int) -> BoundsReport:
    """Bounds for K_n with the two-singularity band as the ribbon witness."""
    return bounds_report(build_kn(n).diagram, 2)
