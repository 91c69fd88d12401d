"""Flat band diagrams: ribbon disks drawn as one immersed band.

The band follows an immersed core arc. Its events, in order along the
core, are half twists and passes through ribbon singularities. A
singularity k is met twice: once by the clasp piece (the band that carries
the slit) and once by the through piece (the band pushed through the slit).

Local picture at a singularity, with the clasp core running east:

* ``kappa`` says which way the through core crosses: +1 from the clasp's
  right to its left (northwards), -1 southwards;
* ``sigma`` says how the through band passes the slit: +1 over the clasp's
  left rail and under its right rail, -1 the other way round.

Tokens: ``T+`` / ``T-`` for half twists, ``S<k>t<sigma>`` for the through
pass and ``S<k>c<kappa>`` for the clasp pass. The embedding block stores
the counterclockwise order of the four core half-edges at every double
point (``ci``/``co`` clasp in/out, ``ti``/``to`` through in/out).
"""
from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass

from .builder import DiagramBuilder
from .diagram import KnotDiagram
from .errors import BandError, DiagramError, InconsistencyError

_PASS = re.compile(r"S(\d+)([tc])([+-])")
_ROTATION = re.compile(r"(\d+):(\w\w),(\w\w),(\w\w),(\w\w)")
_HALF_EDGES = ("ci", "co", "ti", "to")

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HalfTwist:
    sign: int

    def token(self) -> str:
        return "T+" if self.sign > 0 else "T-"


@dataclass(frozen=True)
class SingPass:
    sid: int
    role: str  # "through" or "clasp"
    sign: int  # sigma on a through pass, kappa on a clasp pass

    def token(self) -> str:
        return f"S{self.sid}{self.role[0]}{'+' if self.sign > 0 else '-'}"


Event = HalfTwist | SingPass


def rotation_for(kappa: int) -> tuple[str, str, str, str]:
    return ("co", "to", "ci", "ti") if kappa > 0 else ("co", "ti", "ci", "to")


def kappa_of(rotation) -> int | None:
    """+1 / -1 if the rotation is a transverse crossing, else None."""
    rot = list(rotation)
    if sorted(rot) != sorted(_HALF_EDGES):
        return None
    k = rot.index("co")
    rot = rot[k:] + rot[:k]
    if rot[2] != "ci":
        return None
    return 1 if rot[1] == "to" else -1


@dataclass(frozen=True)
class FlatBandDiagram:
    events: tuple[Event, ...] = ()
    embedding: tuple[tuple[int, tuple[str, str, str, str]], ...] = ()

    @property
    def singularity_count(self) -> int:
        return len({e.sid for e in self.events if isinstance(e, SingPass)})

    @property
    def twist_count(self) -> int:
        return sum(1 for e in self.events if isinstance(e, HalfTwist))

    def passes(self, sid: int) -> dict[str, SingPass]:
        return {e.role: e for e in self.events if isinstance(e, SingPass) and e.sid == sid}

    def sigma(self, sid: int) -> int:
        return self.passes(sid)["through"].sign

    def kappa(self, sid: int) -> int:
        return self.passes(sid)["clasp"].sign

    def __str__(self) -> str:
        return serialize_band(self)


@dataclass(frozen=True)
class BandValidation:
    ok: bool
    errors: tuple[str, ...] = ()


@dataclass(frozen=True)
class BandSeifertCounts:
    circle_count: int
    euler_characteristic: int
    genus: int
    twist_circles: int


def with_embedding(events) -> FlatBandDiagram:
    """Attach the embedding block implied by the clasp signs."""
    events = tuple(events)
    ids = sorted({e.sid for e in events if isinstance(e, SingPass)})
    kappas = {e.sid: e.sign for e in events if isinstance(e, SingPass) and e.role == "clasp"}
    return FlatBandDiagram(events, tuple((k, rotation_for(kappas.get(k, 1))) for k in ids))


def parse_band(text: str) -> FlatBandDiagram:
    body, sep, emb = text.strip().partition(";")
    emb = emb.strip()
    if not sep or not emb.startswith("embedding:"):
        raise BandError("malformed band", "expected '<events> ; embedding: ...'")
    events: list[Event] = []
    for tok in body.split():
        if tok in ("T+", "T-"):
            events.append(HalfTwist(1 if tok == "T+" else -1))
            continue
        m = _PASS.fullmatch(tok)
        if not m:
            raise BandError("malformed token", repr(tok))
        role = "through" if m.group(2) == "t" else "clasp"
        events.append(SingPass(int(m.group(1)), role, 1 if m.group(3) == "+" else -1))
    rotations = []
    for tok in emb[len("embedding:"):].split():
        m = _ROTATION.fullmatch(tok)
        if not m:
            raise BandError("malformed token", repr(tok))
        rotations.append((int(m.group(1)), tuple(m.group(i) for i in range(2, 6))))
    bd = FlatBandDiagram(tuple(events), tuple(rotations))
    report = validate_flat(bd)
    if not report.ok:
        kind, _, detail = report.errors[0].partition(": ")
        raise BandError(kind, detail)
    return bd


def serialize_band(bd: FlatBandDiagram) -> str:
    body = " ".join(e.token() for e in bd.events)
    emb = " ".join(f"{k}:{','.join(rot)}" for k, rot in bd.embedding)
    head = f"{body} ; embedding:" if body else "; embedding:"
    return head + (f" {emb}" if emb else "")


def _core_walks(bd: FlatBandDiagram) -> list[list[tuple[int, int]]]:
    """Faces of the immersed core as cycles of darts, each face on the left.

    Segment i runs from pass i to pass i+1 (the start of the core is pass 0,
    its end pass P+1). A dart (i, 0) runs along segment i forwards, (i, 1)
    backwards. At either end of the core a walk turns back.
    """
    rot = dict(bd.embedding)
    passes = [e for e in bd.events if isinstance(e, SingPass)]
    last = len(passes)
    at_vertex: dict[tuple[int, int], tuple[int, int]] = {}
    ccw: dict[int, list] = {}
    for i, p in enumerate(passes, start=1):
        names = {f"{p.role[0]}i": (i - 1, 1), f"{p.role[0]}o": (i, 0)}
        order = ccw.setdefault(p.sid, [None] * 4)
        for slot, name in enumerate(rot[p.sid]):
            if name in names:
                order[slot] = names[name]
    for sid, order in ccw.items():
        for slot, he in enumerate(order):
            at_vertex[he] = (sid, slot)
    seen = set()
    walks = []
    for seg in range(last + 1):
        for start in (0, 1):
            if (seg, start) in seen:
                continue
            walk = []
            cur = (seg, start)
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                arrive = (cur[0], 1 - cur[1])
                if arrive in ((0, 0), (last, 1)):
                    cur = arrive
                    continue
                sid, slot = at_vertex[arrive]
                cur = ccw[sid][(slot - 1) % 4]
            walks.append(walk)
    return walks


def _core_faces(bd: FlatBandDiagram) -> int:
    return len(_core_walks(bd))


def validate_flat(bd: FlatBandDiagram) -> BandValidation:
    errors = []
    ids = sorted({e.sid for e in bd.events if isinstance(e, SingPass)})
    for k in ids:
        roles = [e.role for e in bd.events if isinstance(e, SingPass) and e.sid == k]
        if sorted(roles) != ["clasp", "through"]:
            errors.append(f"duplicate roles: singularity {k} has passes {roles}")
    for e in bd.events:
        if e.sign not in (1, -1):
            errors.append(f"malformed token: sign {e.sign}")
    rot = dict(bd.embedding)
    if len(rot) != len(bd.embedding) or sorted(rot) != ids:
        errors.append(f"unrealizable code: embedding covers {sorted(rot)}, singularities are {ids}")
    if errors:
        return BandValidation(False, tuple(errors))
    for k in ids:
        kappa = kappa_of(rot[k])
        if kappa is None:
            errors.append(f"unrealizable code: rotation at {k} is not a transverse crossing")
        elif kappa != bd.kappa(k):
            errors.append(f"unrealizable code: rotation at {k} contradicts clasp sign")
    if not errors:
        faces = _core_faces(bd)
        if faces != len(ids) + 1:
            errors.append(f"unrealizable code: core has {faces} faces, planar needs {len(ids) + 1}")
    return BandValidation(not errors, tuple(errors))


def require_flat(bd: FlatBandDiagram) -> None:
    report = validate_flat(bd)
    if not report.ok:
        kind, _, detail = report.errors[0].partition(": ")
        raise BandError(kind, detail)


class _BandBoundary:
    """Builder for the boundary of the band: two rails plus end caps."""

    # crossing ports counterclockwise: 0=E, 1=N, 2=W, 3=S
    E, N, W, S = range(4)

    def __init__(self, bd: FlatBandDiagram, cut: int | None = None):
        """With ``cut = k`` both rails are left open just before event k."""
        self.b = b = DiagramBuilder()
        self.blocks: dict[int, dict[str, int]] = {}
        for k in sorted({e.sid for e in bd.events if isinstance(e, SingPass)}):
            sigma = bd.sigma(k)
            # sigma=+1: through rails over the clasp's left rail (north row), under the right rail
            north_under = 0 if sigma > 0 else 1
            south_under = 1 if sigma > 0 else 0
            self.blocks[k] = {
                "NW": b.crossing(north_under), "NE": b.crossing(north_under),
                "SW": b.crossing(south_under), "SE": b.crossing(south_under),
            }
        start_l, start_r = b.wire()
        self.left, self.right = start_l, start_r
        self.twists: list[int] = []
        # ports of each block joined inside the block; the rest cross the ball around it
        self.internal: dict[int, set] = {k: set() for k in self.blocks}
        self.open_ends: dict[str, tuple] = {}
        for k, e in enumerate(bd.events + (None,)):
            if k == cut:
                self._open()
            if e is None:
                break
            if isinstance(e, HalfTwist):
                self._twist(e.sign)
            elif e.role == "clasp":
                blk = self.blocks[e.sid]
                self.left = self._chain(e.sid, self.left, [(blk["NW"], self.W, self.E), (blk["NE"], self.W, self.E)])
                self.right = self._chain(e.sid, self.right, [(blk["SW"], self.W, self.E), (blk["SE"], self.W, self.E)])
            else:
                blk = self.blocks[e.sid]
                if bd.kappa(e.sid) > 0:
                    up = (self.S, self.N)
                    self.left = self._chain(e.sid, self.left, [(blk["SW"], *up), (blk["NW"], *up)])
                    self.right = self._chain(e.sid, self.right, [(blk["SE"], *up), (blk["NE"], *up)])
                else:
                    down = (self.N, self.S)
                    self.left = self._chain(e.sid, self.left, [(blk["NE"], *down), (blk["SE"], *down)])
                    self.right = self._chain(e.sid, self.right, [(blk["NW"], *down), (blk["SW"], *down)])
        b.join(self.left, self.right)

    def _open(self) -> None:
        self.open_ends["arriving_left"], self.open_ends["arriving_right"] = self.left, self.right
        (self.open_ends["resume_left"], self.left), (self.open_ends["resume_right"], self.right) = (
            self.b.wire(), self.b.wire())

    def _chain(self, sid, end, steps):
        for k, (c, port_in, port_out) in enumerate(steps):
            self.b.join(end, self.b.port(c, port_in))
            if k:
                self.internal[sid].update((end, self.b.port(c, port_in)))
            end = self.b.port(c, port_out)
        return end

    def _twist(self, sign: int) -> None:
        # ports counterclockwise NE=0, NW=1, SW=2, SE=3 with the core running east
        b = self.b
        ne, nw, sw, se = 0, 1, 2, 3
        # T+ puts the incoming left rail (NW -> SE) over, so NE-SW (slots 0, 2) is under
        c = b.crossing(0 if sign > 0 else 1)
        self.twists.append(c)
        b.join(self.left, b.port(c, nw))
        b.join(self.right, b.port(c, sw))
        self.left, self.right = b.port(c, ne), b.port(c, se)


def boundary_knot(bd: FlatBandDiagram) -> KnotDiagram:
    require_flat(bd)
    try:
        return _BandBoundary(bd).b.build()
    except DiagramError as exc:
        raise BandError("disconnected boundary", exc.detail) from exc


def from_symmetric_disk(su, *, sigma: int = 1, twist_sign: int = 1,
                        clasp_on_over: bool = True) -> FlatBandDiagram:
    from .symunion import projection_curve

    pc = projection_curve(su)
    rot = dict(pc.rotation)
    twists: dict[int, list[int]] = {}
    for pos, _, n in pc.twists:
        twists.setdefault(pos, []).append(n)
    clasp_visit = {}
    for v, (dp, branch) in enumerate(pc.visits):
        if (branch > 0) == clasp_on_over:
            clasp_visit[dp] = v

    def kappa(dp: int) -> int:
        order = list(rot[dp])
        j = order.index((clasp_visit[dp], "out"))
        return 1 if order[(j + 1) % 4][1] == "out" else -1

    events: list[Event] = []

    def add_twists(pos: int) -> None:
        for n in twists.get(pos, []):
            events.extend([HalfTwist(twist_sign * (1 if n > 0 else -1))] * abs(n))

    for v, (dp, _) in enumerate(pc.visits):
        add_twists(v)
        if clasp_visit[dp] == v:
            events.append(SingPass(dp, "clasp", kappa(dp)))
        else:
            events.append(SingPass(dp, "through", sigma))
    add_twists(len(pc.visits))
    return with_embedding(events)


def _outer_arc(bd: FlatBandDiagram) -> list[tuple[int, int]]:
    """Darts from the start of the core round to its end along their common face."""
    last = sum(1 for e in bd.events if isinstance(e, SingPass))
    for walk in _core_walks(bd):
        if (0, 0) not in walk:
            continue
        k = walk.index((0, 0))
        walk = walk[k:] + walk[:k]
        if (last, 0) not in walk:
            raise BandError("no symmetric form", "the two ends of the core lie in different faces")
        return walk[: walk.index((last, 0)) + 1]
    raise BandError("unrealizable code", "start of the core not found")


def _gather_twists(bd: FlatBandDiagram, reachable: set[int]) -> dict[int, int]:
    """Net half twists per reachable segment, sliding each twist across through passes only."""
    passes = [e for e in bd.events if isinstance(e, SingPass)]
    net: dict[int, int] = {}
    seg = 0
    for e in bd.events:
        if isinstance(e, SingPass):
            seg += 1
            continue
        target = None
        for dist in range(len(passes) + 1):
            for cand, crossed in ((seg - dist, range(seg - dist + 1, seg + 1)),
                                  (seg + dist, range(seg + 1, seg + dist + 1))):
                if 0 <= cand <= len(passes) and cand in reachable and all(
                        passes[k - 1].role == "through" for k in crossed):
                    target = cand
                    break
            if target is not None:
                break
        if target is None:
            raise BandError("no symmetric form",
                            f"a half twist on core segment {seg} cannot reach the axis face")
        net[target] = net.get(target, 0) + e.sign
    return {k: n for k, n in net.items() if n}


def _positive_through(bd: FlatBandDiagram) -> FlatBandDiagram:
    """Rewrite every sigma = -1 singularity as T+ (clasp pass) T- with sigma = +1."""
    flipped = {e.sid for e in bd.events if isinstance(e, SingPass) and e.role == "through" and e.sign < 0}
    events: list[Event] = []
    for e in bd.events:
        if isinstance(e, SingPass) and e.sid in flipped:
            if e.role == "through":
                events.append(SingPass(e.sid, "through", 1))
            else:
                events.extend([HalfTwist(1), e, HalfTwist(-1)])
        else:
            events.append(e)
    return FlatBandDiagram(tuple(events), bd.embedding)


def reverse_core(bd: FlatBandDiagram) -> FlatBandDiagram:
    """The same band traversed from its other end: left and right rails swap, so sigma flips."""
    events = []
    for e in reversed(bd.events):
        if isinstance(e, SingPass) and e.role == "through":
            e = SingPass(e.sid, "through", -e.sign)
        events.append(e)
    return with_embedding(events)


def to_symmetric_union(bd: FlatBandDiagram):
    """Symmetric union whose ribbon disk is the band: the core becomes the half-tangle.

    Each crossing of the half-tangle is a singularity with the clasp piece
    over. The core starts at E1 and ends at E2; every twisted segment gets a
    cap on the axis, reached through the face that holds both ends of the
    core, and carries the net twist of its segment. Half twists slide freely
    across through passes but not across clasp passes; if some twist cannot
    reach the axis face from either end of the core, BandError is raised.
    """
    require_flat(bd)
    try:
        return _symmetric_form(bd)
    except BandError as first:
        try:
            return _symmetric_form(reverse_core(bd))
        except BandError:
            raise first from None


def _symmetric_form(bd: FlatBandDiagram):
    from .symunion import AxisInsertion, HalfTangle, build_symmetric_union

    bd = _positive_through(bd)
    passes = [e for e in bd.events if isinstance(e, SingPass)]
    arc = _outer_arc(bd)
    first_dart: dict[int, int] = {}
    for seg, direction in arc:
        first_dart.setdefault(seg, direction)
    net = _gather_twists(bd, set(first_dart))
    # caps met along the outer arc climb the axis from the bottom
    capped = sorted(net, key=lambda seg: arc.index((seg, first_dart[seg])))
    m = len(capped) + 1
    cap_of = {seg: m - k for k, seg in enumerate(capped)}
    # pieces of the core between consecutive endpoints and passes, caps excluded
    pieces: list[list] = [["E1"]]
    for seg in range(len(passes) + 1):
        if seg in cap_of:
            j = cap_of[seg]
            lower, upper = f"E{2 * j}", f"E{2 * j - 1}"
            first, second = (upper, lower) if first_dart[seg] else (lower, upper)
            pieces[-1].append(first)
            pieces.append([second])
        if seg < len(passes):
            pieces[-1].append(seg + 1)
            pieces.append([seg + 1])
    pieces[-1].append("E2")
    arcs, labels_at = [], {}
    fresh = 1
    for a, b in pieces:
        if isinstance(a, str) and isinstance(b, str):
            arcs.append(tuple(sorted((a, b), key=lambda e: int(e[1:]))))
            continue
        if isinstance(a, str) or isinstance(b, str):
            name = a if isinstance(a, str) else b
        else:
            name, fresh = fresh, fresh + 1
        if not isinstance(a, str):
            labels_at[(a, "out")] = name
        if not isinstance(b, str):
            labels_at[(b, "in")] = name
    where = {(p.sid, p.role): i for i, p in enumerate(passes, start=1)}
    crossings = []
    for sid, rot in bd.embedding:
        half_edge = {}
        for role in ("through", "clasp"):
            i = where[(sid, role)]
            half_edge[role[0] + "i"] = labels_at[(i, "in")]
            half_edge[role[0] + "o"] = labels_at[(i, "out")]
        rot = list(rot)
        k = rot.index("ti")
        crossings.append(tuple(half_edge[h] for h in rot[k:] + rot[:k]))
    half = HalfTangle(tuple(crossings), tuple(arcs))
    insertions = [AxisInsertion(2 * cap_of[seg] - 1, n) for seg, n in net.items()]
    return build_symmetric_union(half, insertions)



def _pass_parities(bd: FlatBandDiagram) -> dict[tuple[int, str], int]:
    """Half twists before each pass, mod 2: whether the left rail runs against the core."""
    parity, out = 0, {}
    for e in bd.events:
        if isinstance(e, HalfTwist):
            parity ^= 1
        else:
            out[(e.sid, e.role)] = parity
    return out


def configuration(bd: FlatBandDiagram, sid: int) -> int:
    """Oriented configuration 1..4 of a singularity.

    The rails of the clasp piece and of the through piece are each oriented
    with or against their core. In configurations 1 and 2 both agree, so the
    four boundary arcs circulate around the slit; 3 and 4 are their flips.
    kappa separates 1 from 2 (and 3 from 4).
    """
    par = _pass_parities(bd)
    mixed = par[(sid, "clasp")] != par[(sid, "through")]
    return (3 if mixed else 1) + (0 if bd.kappa(sid) > 0 else 1)


def normalize_orientations(bd: FlatBandDiagram) -> FlatBandDiagram:
    """Flip the clasp piece of every singularity in configuration 3 or 4.

    The flip wraps the clasp pass in opposite half twists and changes sigma,
    which keeps the disk's boundary up to isotopy.
    """
    require_flat(bd)
    par = _pass_parities(bd)
    flip = {k for k, _ in bd.embedding if par[(k, "clasp")] != par[(k, "through")]}
    if not flip:
        return bd
    events: list[Event] = []
    for e in bd.events:
        if not isinstance(e, SingPass) or e.sid not in flip:
            events.append(e)
        elif e.role == "through":
            events.append(SingPass(e.sid, "through", -e.sign))
        else:
            # sigma -1 equals T+ c T- with sigma +1, and sigma +1 equals T- c T+ with sigma -1
            outer = 1 if bd.sigma(e.sid) < 0 else -1
            events.extend([HalfTwist(outer), e, HalfTwist(-outer)])
    return FlatBandDiagram(tuple(events), bd.embedding)


def band_seifert_counts(bd: FlatBandDiagram) -> BandSeifertCounts:
    """Seifert circles of the band surface, checked against 2r + 1 circles and genus r.

    Half twists are discounted: the circles they add are the difference
    between the boundary with and without its twist events.
    """
    from .diagram import seifert_data

    bd = normalize_orientations(bd)
    r = bd.singularity_count
    plain = FlatBandDiagram(tuple(e for e in bd.events if isinstance(e, SingPass)), bd.embedding)
    full = seifert_data(boundary_knot(bd))
    flat = seifert_data(boundary_knot(plain))
    counts = BandSeifertCounts(
        circle_count=flat.circle_count,
        euler_characteristic=flat.euler_characteristic,
        genus=flat.genus,
        twist_circles=full.circle_count - flat.circle_count,
    )
    expected = (2 * r + 1, 1 - 2 * r, r)
    if (counts.circle_count, counts.euler_characteristic, counts.genus) != expected:
        raise InconsistencyError(
            f"band surface has (circles, chi, genus) = {counts.circle_count, counts.euler_characteristic, counts.genus},"
            f" expected {expected}")
    return counts


@dataclass(frozen=True)
class RibbonComplex:
    """Cell structure of the immersed disk: the band cut at every pass, slits glued across.

    ``edges`` are (tail, head) vertex pairs; a face is a cycle of (edge, +-1).
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.edges) + len(self.faces)


def ribbon_complex(bd: FlatBandDiagram) -> RibbonComplex:
    """The image of the disk: rectangles between cuts, each slit glued to a through arc.

    Cut c runs across the band at pass c (0 and P+1 are the two end edges).
    Along a clasp cut the slit is the middle of three edges; it is
    identified with the through cut of the same singularity.
    """
    require_flat(bd)
    passes = [e for e in bd.events if isinstance(e, SingPass)]
    cuts = len(passes) + 2
    parent: list[int] = []

    def vertex() -> int:
        parent.append(len(parent))
        return len(parent) - 1

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    chains, left, right = [], [], []
    for c in range(cuts):
        pts = [vertex(), vertex()]
        if 0 < c < cuts - 1 and passes[c - 1].role == "clasp":
            pts[1:1] = [vertex(), vertex()]
        chains.append(pts)
        left.append(pts[0])
        right.append(pts[-1])
    through_at = {p.sid: c for c, p in enumerate(passes, start=1) if p.role == "through"}
    slit_of = {}
    for c, p in enumerate(passes, start=1):
        if p.role == "clasp":
            t = through_at[p.sid]
            slit_of[t] = c
            parent[find(chains[t][0])] = find(chains[c][1])
            parent[find(chains[t][1])] = find(chains[c][2])
    raw_edges: list[tuple[int, int]] = []
    edge_key: dict[tuple, int] = {}

    def edge(key, tail: int, head: int) -> int:
        if key not in edge_key:
            edge_key[key] = len(raw_edges)
            raw_edges.append((tail, head))
        return edge_key[key]

    cross: list[list[int]] = []
    for c, pts in enumerate(chains):
        ids = []
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            key = ("slit", c) if len(pts) == 4 and k == 1 else ("cross", c, k)
            if c in slit_of:
                key = ("slit", slit_of[c])
            ids.append(edge(key, a, b))
        cross.append(ids)
    faces = []
    for c in range(cuts - 1):
        l_edge = edge(("left", c), left[c], left[c + 1])
        r_edge = edge(("right", c), right[c], right[c + 1])
        boundary = [(e, 1) for e in cross[c]] + [(r_edge, 1)]
        boundary += [(e, -1) for e in reversed(cross[c + 1])] + [(l_edge, -1)]
        faces.append(tuple(boundary))
    roots = sorted({find(v) for v in range(len(parent))})
    index = {v: i for i, v in enumerate(roots)}
    edges = tuple((index[find(a)], index[find(b)]) for a, b in raw_edges)
    return RibbonComplex(len(roots), edges, tuple(faces))


def _h1_rank(cx: RibbonComplex) -> int:
    from .linalg import rank

    d1 = [[0] * len(cx.edges) for _ in range(cx.vertex_count)]
    for j, (a, b) in enumerate(cx.edges):
        d1[a][j] -= 1
        d1[b][j] += 1
    d2 = [[0] * len(cx.faces) for _ in cx.edges]
    for f, cycle in enumerate(cx.faces):
        for e, s in cycle:
            d2[e][f] += s
    return len(cx.edges) - rank(d1) - (rank(d2) if cx.faces else 0)


def disk_complement_h1_rank(bd: FlatBandDiagram) -> int:
    """Rank of H1 of the complement of the disk.

    By Alexander duality this is the rank of H1 of the disk's image, which
    is computed from the ribbon complex. The relator-elimination pass of
    `free_rank` is run alongside; a failure there is logged.
    """
    cx = ribbon_complex(bd)
    h1 = _h1_rank(cx)
    free = free_rank(cx)
    if free is None:
        log.warning("relator elimination left relators for %s", serialize_band(bd))
    elif free != h1:
        raise InconsistencyError(f"free rank {free} differs from H1 rank {h1}")
    return h1


def _reduce(word: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for g, s in word:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    while len(out) > 1 and out[0] == (out[-1][0], -out[-1][1]):
        out = out[1:-1]
    return out


def free_rank(cx: RibbonComplex) -> int | None:
    """Rank of the fundamental group if Tietze eliminations kill every relator, else None.

    Generators are edges outside a spanning tree; each face gives a relator.
    A relator in which some generator occurs exactly once is solved for it.
    """
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(cx.vertex_count)}
    for j, (a, b) in enumerate(cx.edges):
        adj[a].append((b, j, 1))
        adj[b].append((a, j, -1))
    tree: set[int] = set()
    seen = {0}
    stack = [0] if cx.vertex_count else []
    while stack:
        v = stack.pop()
        for w, j, _ in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(j)
                stack.append(w)
    gens = {j for j in range(len(cx.edges)) if j not in tree}
    relators = [_reduce([(e, s) for e, s in face if e in gens]) for face in cx.faces]
    relators = [w for w in relators if w]
    while relators:
        for i, w in enumerate(relators):
            counts: dict[int, int] = {}
            for g, _ in w:
                counts[g] = counts.get(g, 0) + 1
            g = next((g for g, n in counts.items() if n == 1), None)
            if g is not None:
                break
        else:
            return None
        k = next(k for k, (h, _) in enumerate(w) if h == g)
        sign = w[k][1]
        # w = u g^s v, so g^s = u^-1 v^-1
        inv = lambda word: [(h, -s) for h, s in reversed(word)]
        value = inv(w[:k]) + inv(w[k + 1:])
        if sign < 0:
            value = inv(value)
        rest = []
        for j, other in enumerate(relators):
            if j == i:
                continue
            new = []
            for h, s in other:
                new.extend(value if (h == g and s > 0) else inv(value) if h == g else [(h, s)])
            new = _reduce(new)
            if new:
                rest.append(new)
        relators = rest
        gens.discard(g)
    return len(gens)


@dataclass(frozen=True)
class SingularityBall:
    """A ball around one singularity; ``arcs`` are the boundary arcs crossing its sphere."""

    sid: int
    arcs: tuple[int, ...]

    @property
    def points(self) -> int:
        return len(self.arcs)

    @property
    def cover_genus(self) -> int:
        # the double cover of a ball branched over n/2 unknotted arcs is a handlebody of genus n/2 - 1
        return self.points // 2 - 1


@dataclass(frozen=True)
class HeegaardCertificate:
    bound: int
    balls: tuple[SingularityBall, ...]
    tubes: tuple[tuple[int, int], ...]


def heegaard_upper_bound(bd: FlatBandDiagram) -> HeegaardCertificate:
    """Upper bound 3r on the Heegaard genus of the branched double cover.

    Each singularity ball meets the boundary knot in eight points and lifts
    to a genus-3 handlebody; tubes along the core join the balls in a tree,
    which adds no genus. Arc labels refer to `boundary_knot(bd)`.
    """
    require_flat(bd)
    if not bd.embedding:
        return HeegaardCertificate(0, (), ())
    shape = _BandBoundary(bd)
    try:
        _, labels = shape.b.build_labelled()
    except DiagramError as exc:
        raise BandError("disconnected boundary", exc.detail) from exc
    balls = []
    for sid, blk in shape.blocks.items():
        ports = [shape.b.port(c, s) for c in blk.values() for s in range(4)]
        arcs = tuple(sorted(labels[p] for p in ports if p not in shape.internal[sid]))
        balls.append(SingularityBall(sid, arcs))
    order = list(dict.fromkeys(e.sid for e in bd.events if isinstance(e, SingPass)))
    tubes = tuple(zip(order, order[1:]))
    bound = sum(b.cover_genus for b in balls)
    if bound != 3 * bd.singularity_count or any(b.points != 8 for b in balls):
        raise InconsistencyError(f"singularity balls give genus {bound}, expected {3 * bd.singularity_count}")
    return HeegaardCertificate(bound, tuple(balls), tubes)


def random_flat_band(rng: random.Random, max_pairs: int = 3, max_crossings: int = 6,
                     max_twists: int = 4, scramble: bool = True) -> FlatBandDiagram:
    """Random flat band with a connected boundary.

    Starts from the disk of a random symmetric union; with ``scramble`` the
    twists are moved to random places and sigma is redrawn per singularity.
    """
    from .symunion import random_symmetric_union

    while True:
        su = random_symmetric_union(rng, max_pairs=max_pairs, max_crossings=max_crossings)
        bd = from_symmetric_disk(su)
        if scramble:
            events: list[Event] = [
                SingPass(e.sid, e.role, rng.choice((1, -1))) if e.role == "through" else e
                for e in bd.events if isinstance(e, SingPass)]
            for _ in range(rng.randint(0, max_twists)):
                events.insert(rng.randint(0, len(events)), HalfTwist(rng.choice((1, -1))))
            bd = FlatBandDiagram(tuple(events), bd.embedding)
        try:
            boundary_knot(bd)
        except BandError:
            continue
        return bd
