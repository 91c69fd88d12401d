"""Symmetric union presentations.

A presentation is a half-tangle R drawn in the right half-plane with its
open ends E1..E2m on the vertical axis (E1 on top), together with twist
insertions on the axis. The realization is R, its reflection L across the
axis, and the axis pieces:

* the pair (E1, E2) crosses the axis horizontally, joining R to L;
* every later pair (E2j-1, E2j) is capped on each side, unless an insertion
  at site 2j-1 replaces the two caps by a vertical twist region of n
  crossings stacked on the axis.

Reflection keeps over/under, so off-axis crossings come in mirror pairs of
opposite sign; without insertions the realization is K # mirror(K) where K
is the partial knot obtained by capping every pair of R.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .builder import DiagramBuilder
from .diagram import KnotDiagram, validate
from .errors import DiagramError, SymmetricUnionError

Label = int | str

_LABEL = r"(\d+|E\d+)"
_X_TOKEN = re.compile(rf"X\({_LABEL},{_LABEL},{_LABEL},{_LABEL}\)")
_A_TOKEN = re.compile(r"A\((E\d+),(E\d+)\)")
_AXIS_TOKEN = re.compile(r"\((\d+),(-?\d+)\)")


def _label(text: str) -> Label:
    return text if text.startswith("E") else int(text)


def _endpoint_index(label: Label) -> int | None:
    return int(label[1:]) if isinstance(label, str) else None


@dataclass(frozen=True)
class HalfTangle:
    """Crossings use PD-style slots counterclockwise with slots 0 and 2 under.

    Labels are positive ints for arcs inside the half-plane and ``"E<k>"``
    for an arc running to the k-th axis endpoint. ``arcs`` lists strands
    without crossings, as pairs of endpoint labels.
    """

    crossings: tuple[tuple[Label, Label, Label, Label], ...] = ()
    arcs: tuple[tuple[str, str], ...] = ()

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def endpoint_count(self) -> int:
        labels = [v for x in self.crossings for v in x] + [v for a in self.arcs for v in a]
        return sum(1 for v in labels if isinstance(v, str))

    @property
    def strand_count(self) -> int:
        return self.endpoint_count // 2

    def tokens(self) -> list[str]:
        out = ["X({},{},{},{})".format(*x) for x in self.crossings]
        out += ["A({},{})".format(*a) for a in self.arcs]
        return out

    def ends(self) -> dict[tuple, tuple]:
        """Partner map on ends ``('x', crossing, slot)`` and ``('e', k)``."""
        where: dict[Label, list[tuple]] = {}
        for ci, x in enumerate(self.crossings):
            for s, v in enumerate(x):
                where.setdefault(v, []).append(("x", ci, s))
        partner: dict[tuple, tuple] = {}
        for v, spots in where.items():
            k = _endpoint_index(v)
            if k is None:
                if len(spots) != 2:
                    raise SymmetricUnionError("arc multiplicity", f"arc {v} used {len(spots)} times")
                a, b = spots
            else:
                if len(spots) != 1:
                    raise SymmetricUnionError("endpoint multiplicity", f"{v} used {len(spots)} times")
                a, b = spots[0], ("e", k)
            partner[a], partner[b] = b, a
        for e1, e2 in self.arcs:
            a, b = ("e", _endpoint_index(e1)), ("e", _endpoint_index(e2))
            if a in partner or b in partner or a == b:
                raise SymmetricUnionError("endpoint multiplicity", f"A({e1},{e2}) reuses an endpoint")
            partner[a], partner[b] = b, a
        return partner


@dataclass(frozen=True)
class AxisInsertion:
    site: int
    half_twists: int


@dataclass(frozen=True)
class SymmetricUnionDiagram:
    half: HalfTangle
    insertions: tuple[AxisInsertion, ...] = ()

    @property
    def singularity_count(self) -> int:
        return self.half.crossing_count

    def twists_at(self, site: int) -> int:
        return next((i.half_twists for i in self.insertions if i.site == site), 0)

    def __str__(self) -> str:
        return serialize_su(self)


@dataclass(frozen=True)
class ProjectionCurve:
    """The core arc of the symmetric ribbon disk, as an immersed arc.

    ``visits`` lists double-point passes in order as (id, branch) with
    branch +1 on the over-strand of the half-tangle crossing and -1 on the
    under-strand. ``twists`` records (visits so far, site, half twists) for
    every capped pair carrying an insertion. ``rotation`` gives, for each
    double point, its four half-edges counterclockwise as (visit index,
    "in" | "out").
    """

    visits: tuple[tuple[int, int], ...]
    twists: tuple[tuple[int, int, int], ...]
    rotation: tuple[tuple[int, tuple[tuple[int, str], ...]], ...] = field(default=())

    @property
    def double_point_count(self) -> int:
        return len({dp for dp, _ in self.visits})


def parse_half(text: str) -> HalfTangle:
    crossings, arcs = [], []
    for tok in text.split():
        m = _X_TOKEN.fullmatch(tok)
        if m:
            crossings.append(tuple(_label(g) for g in m.groups()))
            continue
        m = _A_TOKEN.fullmatch(tok)
        if m:
            arcs.append((m.group(1), m.group(2)))
            continue
        raise SymmetricUnionError("malformed token", repr(tok))
    return HalfTangle(tuple(crossings), tuple(arcs))


def parse_su(text: str) -> SymmetricUnionDiagram:
    """Parse ``half: <tokens> ; axis: (site,n) ...`` and validate it."""
    head, sep, tail = text.strip().partition(";")
    if not head.strip().startswith("half:") or not sep or not tail.strip().startswith("axis:"):
        raise SymmetricUnionError("malformed presentation", "expected 'half: ... ; axis: ...'")
    half = parse_half(head.strip()[len("half:"):])
    insertions = []
    for tok in tail.strip()[len("axis:"):].split():
        m = _AXIS_TOKEN.fullmatch(tok)
        if not m:
            raise SymmetricUnionError("malformed token", repr(tok))
        insertions.append(AxisInsertion(int(m.group(1)), int(m.group(2))))
    return build_symmetric_union(half, insertions)


def serialize_su(su: SymmetricUnionDiagram) -> str:
    axis = " ".join(f"({i.site},{i.half_twists})" for i in su.insertions)
    return f"half: {' '.join(su.half.tokens())} ; axis:" + (f" {axis}" if axis else "")


def _check_half(half: HalfTangle) -> dict[tuple, tuple]:
    for x in half.crossings:
        for v in x:
            if isinstance(v, int) and v <= 0:
                raise SymmetricUnionError("malformed token", "arc labels must be positive")
    partner = half.ends()
    ends = sorted(key[1] for key in partner if key[0] == "e")
    n = len(ends)
    if n < 2 or n % 2 or ends != list(range(1, n + 1)):
        raise SymmetricUnionError("axis endpoints", f"expected E1..E2m, got {ends}")
    # every strand must run from the axis back to the axis
    seen = set()
    for k in ends:
        cur = ("e", k)
        if cur in seen:
            continue
        seen.add(cur)
        cur = partner[cur]
        while cur[0] == "x":
            seen.add(cur)
            nxt = ("x", cur[1], (cur[2] + 2) % 4)
            seen.add(nxt)
            cur = partner[nxt]
        seen.add(cur)
    if len(seen) != len(partner):
        raise SymmetricUnionError("closed component", "the half-tangle contains a closed loop")
    return partner


def _check_insertions(half: HalfTangle, insertions) -> tuple[AxisInsertion, ...]:
    m = half.endpoint_count // 2
    out = {}
    for ins in insertions:
        if ins.site in out:
            raise SymmetricUnionError("overlapping sites", f"site {ins.site} used twice")
        if ins.site % 2 == 0 or ins.site < 3 or ins.site + 1 > 2 * m:
            raise SymmetricUnionError(
                "illegal site", f"site {ins.site}: twists sit between E2j-1 and E2j for 2 <= j <= {m}")
        out[ins.site] = ins
    return tuple(out[s] for s in sorted(out) if out[s].half_twists != 0)


class _Realization:
    """Builder state for a symmetric union: ids of mirrored and axis crossings."""

    def __init__(self, su: SymmetricUnionDiagram, *, insertions: bool = True, mirror: bool = True):
        half = su.half
        b = DiagramBuilder()
        self.builder = b
        self.right = self._add_half(half, mirrored=False)
        self.left = self._add_half(half, mirrored=True) if mirror else None
        self.axis: list[int] = []
        m = half.endpoint_count // 2
        r, l = self.right, self.left
        if mirror:
            b.join(r[1], l[1])
            b.join(r[2], l[2])
        else:
            b.join(r[1], r[2])
        for j in range(2, m + 1):
            top, bot = 2 * j - 1, 2 * j
            n = su.twists_at(top) if insertions else 0
            if not mirror or n == 0:
                b.join(r[top], r[bot])
                if mirror:
                    b.join(l[top], l[bot])
                continue
            # ports counterclockwise 0=SE, 1=NE, 2=NW, 3=SW; n > 0 puts SW-NE over
            east, west = r[top], l[top]
            for _ in range(abs(n)):
                c = b.crossing(0 if n > 0 else 1)
                self.axis.append(c)
                b.join(east, b.port(c, 1))
                b.join(west, b.port(c, 2))
                east, west = b.port(c, 0), b.port(c, 3)
            b.join(east, r[bot])
            b.join(west, l[bot])

    def _add_half(self, half: HalfTangle, mirrored: bool) -> dict[int, tuple]:
        b = self.builder
        ids = [b.crossing(0) for _ in half.crossings]
        if mirrored:
            self.left_ids = ids
        else:
            self.right_ids = ids

        def port(ci: int, s: int):
            # reflection reverses the counterclockwise order and keeps the under pair
            return b.port(ids[ci], -s if mirrored else s)

        endpoint: dict[int, tuple] = {}
        for a, p in half.ends().items():
            if a[0] == "x" and p[0] == "x":
                if a < p:
                    b.join(port(a[1], a[2]), port(p[1], p[2]))
            elif a[0] == "x":
                endpoint[p[1]] = port(a[1], a[2])
        for e1, e2 in half.arcs:
            w0, w1 = b.wire()
            endpoint[_endpoint_index(e1)] = w0
            endpoint[_endpoint_index(e2)] = w1
        return endpoint

    def build(self) -> tuple[KnotDiagram, list[tuple[int, ...]]]:
        try:
            return self.builder.build_with_map()
        except DiagramError as exc:
            if exc.kind.startswith("component count"):
                raise SymmetricUnionError(exc.kind, "symmetric diagram of a link, not a knot") from exc
            raise


def build_symmetric_union(half: HalfTangle, insertions=()) -> SymmetricUnionDiagram:
    _check_half(half)
    su = SymmetricUnionDiagram(half, _check_insertions(half, insertions))
    for kwargs in ({"mirror": False}, {"insertions": False}, {}):
        d, _ = _Realization(su, **kwargs).build()
        report = validate(d)
        if not report.ok:
            raise SymmetricUnionError("invalid realization", report.errors[0])
    return su


def to_knot_diagram(su: SymmetricUnionDiagram) -> KnotDiagram:
    return _Realization(su).build()[0]


def mirror_pairs(su: SymmetricUnionDiagram) -> tuple[KnotDiagram, list[tuple[int, int]], list[int]]:
    """The realization, the signs of each (right, left) crossing pair, and the axis signs."""
    real = _Realization(su)
    d, emitted = real.build()
    index = {x: k for k, x in enumerate(d.crossings)}
    sign = [d.signs[index[x]] for x in emitted]
    pairs = [(sign[a], sign[b]) for a, b in zip(real.right_ids, real.left_ids)]
    return d, pairs, [sign[c] for c in real.axis]


def partial_knot(su: SymmetricUnionDiagram) -> KnotDiagram:
    """Close the half-tangle by capping (E1,E2), (E3,E4), ... on the axis."""
    return _Realization(su, mirror=False).build()[0]


def smooth_axis(su: SymmetricUnionDiagram) -> SymmetricUnionDiagram:
    return SymmetricUnionDiagram(su.half, ())


def projection_curve(su: SymmetricUnionDiagram) -> ProjectionCurve:
    """Walk the capped half-tangle from E1 to E2."""
    partner = su.half.ends()
    visits: list[tuple[int, int]] = []
    slots: list[tuple[int, int, int]] = []
    twists: list[tuple[int, int, int]] = []
    cur = partner[("e", 1)]
    while True:
        if cur[0] == "x":
            _, ci, s = cur
            visits.append((ci + 1, 1 if s % 2 else -1))
            slots.append((ci, s, (s + 2) % 4))
            cur = partner[("x", ci, (s + 2) % 4)]
            continue
        k = cur[1]
        if k == 2:
            break
        other = k + 1 if k % 2 else k - 1
        n = su.twists_at(min(k, other))
        if n:
            twists.append((len(visits), min(k, other), n))
        cur = partner[("e", other)]
    tag: dict[tuple[int, int], tuple[int, str]] = {}
    for v, (ci, s_in, s_out) in enumerate(slots):
        tag[(ci, s_in)] = (v, "in")
        tag[(ci, s_out)] = (v, "out")
    rotation = tuple(
        (ci + 1, tuple(tag[(ci, s)] for s in range(4))) for ci in range(su.half.crossing_count)
    )
    return ProjectionCurve(tuple(visits), tuple(twists), rotation)


def _random_matching(rng: random.Random, points: list[int]) -> list[tuple[int, int]]:
    """Uniform-ish non-crossing perfect matching of points in order."""
    if not points:
        return []
    k = rng.randrange(0, len(points), 2) + 1
    return ([(points[0], points[k])] + _random_matching(rng, points[1:k])
            + _random_matching(rng, points[k + 1:]))


def random_half(rng: random.Random, pairs: int, crossings: int) -> HalfTangle:
    """Plat-like half: 2m strands leave the axis, braid, and close by a matching."""
    strands = 2 * pairs
    # every strand segment gets an id; joins merge ids; a segment end is a crossing slot or an endpoint
    segment_ends: dict[int, list] = {}
    current = list(range(strands))
    for i in range(strands):
        segment_ends[i] = [f"E{i + 1}"]
    next_id = strands
    xs = []
    # mostly alternating plats, which rarely collapse to the unknot
    alternating = rng.random() < 0.7
    for _ in range(crossings if strands > 1 else 0):
        i = rng.randrange(strands - 1)
        upper, lower = current[i], current[i + 1]
        new_upper, new_lower = next_id, next_id + 1
        next_id += 2
        ci = len(xs)
        # ports counterclockwise NE, NW, SW, SE; the under-strand is chosen at random
        nw, sw, ne, se = upper, lower, new_upper, new_lower
        if (i % 2 == 0) if alternating else rng.random() < 0.5:
            slots = [sw, se, ne, nw]
        else:
            slots = [nw, sw, se, ne]
        xs.append(slots)
        for s, seg in enumerate(slots):
            segment_ends.setdefault(seg, []).append(("x", ci, s))
        current[i], current[i + 1] = new_upper, new_lower
    for a, b in _random_matching(rng, list(range(strands))):
        sa, sb = current[a], current[b]
        segment_ends[sa] = segment_ends[sa] + segment_ends.pop(sb)
        for s_list in xs:
            for k, seg in enumerate(s_list):
                if seg == sb:
                    s_list[k] = sa
    labels: dict[int, Label] = {}
    arcs = []
    fresh = 1
    for seg, ends in segment_ends.items():
        named = [e for e in ends if isinstance(e, str)]
        if len(named) == 2:
            arcs.append(tuple(sorted(named, key=lambda e: int(e[1:]))))
        elif named:
            labels[seg] = named[0]
        else:
            labels[seg] = fresh
            fresh += 1
    crossing_tokens = tuple(tuple(labels[seg] for seg in s) for s in xs)
    return HalfTangle(crossing_tokens, tuple(arcs))


def random_symmetric_union(rng: random.Random, max_pairs: int = 3, max_crossings: int = 8,
                           max_twists: int = 3) -> SymmetricUnionDiagram:
    """Random presentation whose partial knot and realization are knots."""
    while True:
        pairs = rng.randint(1, max_pairs)
        half = random_half(rng, pairs, rng.randint(0, max_crossings))
        insertions = [AxisInsertion(2 * j - 1, rng.randint(-max_twists, max_twists))
                      for j in range(2, pairs + 1)]
        try:
            return build_symmetric_union(half, insertions)
        except SymmetricUnionError:
            continue
