"""Seifert matrices for arbitrary PD diagrams.

Nugatory crossings are untwisted first; this is an isotopy of the canonical
Seifert surface, so its genus and Seifert form do not change. The diagram
is then isotoped into closed-braid form by Vogel's moves (Reidemeister II
moves between incoherently oriented Seifert circles that share a face). The braid closure's canonical surface has a Seifert matrix
given by local rules in the braid word (Collins' algorithm). Vogel moves
add one handle each, so the resulting matrix is then cut down by removing
elementary enlargements until its size is twice the genus of the canonical
surface of the input diagram. Every step is an S-equivalence, so the
Alexander polynomial, determinant and signature are those of the input.
"""
from __future__ import annotations

from graphlib import CycleError, TopologicalSorter

from . import linalg
from .builder import DiagramBuilder
from .diagram import KnotDiagram, faces, require_valid, seifert_circles, seifert_data
from .errors import DiagramError, InconsistencyError

MAX_VOGEL_MOVES = 500


def _circle_index(d: KnotDiagram) -> dict[int, int]:
    return {label: k for k, circle in enumerate(seifert_circles(d)) for label in circle}


def _is_tail(d: KnotDiagram, ci: int, slot: int) -> bool:
    return slot == 2 or slot == (d._structure.over_in[ci] + 2) % 4


def _find_vogel_pair(d: KnotDiagram):
    """A face with two edges on different, incoherent Seifert circles."""
    circle = _circle_index(d)
    for face in faces(d):
        edges = [(ci, s, d.crossings[ci][s], _is_tail(d, ci, s)) for ci, s in face]
        for i, e1 in enumerate(edges):
            for e2 in edges[i + 1:]:
                if circle[e1[2]] != circle[e2[2]] and e1[3] == e2[3] and e1[2] != e2[2]:
                    return e1, e2
    return None


def vogel_move(d: KnotDiagram, e1, e2) -> KnotDiagram:
    """Push edge e1 over edge e2 across their common face (two new crossings)."""
    st = d._structure
    b = DiagramBuilder()
    ids = [b.crossing(0) for _ in d.crossings]
    x, y = b.crossing(0), b.crossing(0)
    port = b.port
    skip = {e1[2], e2[2]}
    for label, occ in st.occurrences.items():
        if label in skip:
            continue
        (c1, s1), (c2, s2) = occ
        b.join(port(ids[c1], s1), port(ids[c2], s2))

    def far_end(e):
        ci, s = e[0], e[1]
        cj, t = st.other_end(ci, s)
        return port(ids[cj], t)

    # X and Y ports counterclockwise: 0=E, 1=N, 2=W, 3=S; e2 is the E-W under-strand
    p1, q1 = port(ids[e1[0]], e1[1]), far_end(e1)
    p2, q2 = port(ids[e2[0]], e2[1]), far_end(e2)
    b.join(p1, port(x, 3))
    b.join(port(x, 1), port(y, 1))
    b.join(port(y, 3), q1)
    b.join(p2, port(y, 0))
    b.join(port(y, 2), port(x, 0))
    b.join(port(x, 2), q2)
    return b.build()


def to_braid_form(d: KnotDiagram) -> KnotDiagram:
    cur = d
    for _ in range(MAX_VOGEL_MOVES):
        pair = _find_vogel_pair(cur)
        if pair is None:
            return cur
        cur = vogel_move(cur, *pair)
    raise InconsistencyError("Vogel moves did not terminate")


def braid_word(d: KnotDiagram) -> tuple[int, list[tuple[int, int]]]:
    """Return (strand count, word) with letters (generator index >= 0, sign)."""
    require_valid(d)
    if not d.crossings:
        return 1, []
    b = to_braid_form(d)
    st = b._structure
    circles = seifert_circles(b)
    circle = {label: k for k, c in enumerate(circles) for label in c}
    meets = []
    for ci, x in enumerate(b.crossings):
        meets.append((circle[x[0]], circle[x[st.over_in[ci]]]))
    adj: dict[int, set[int]] = {k: set() for k in range(len(circles))}
    for u, v in meets:
        adj[u].add(v)
        adj[v].add(u)
    ends = [k for k, nb in adj.items() if len(nb) <= 1]
    if len(circles) > 1 and (len(ends) != 2 or any(len(nb) > 2 for nb in adj.values())):
        raise InconsistencyError("Seifert circles are not a chain after Vogel moves")
    level = {ends[0]: 0}
    order = [ends[0]]
    while len(order) < len(circles):
        nxt = next(v for v in adj[order[-1]] if v not in level)
        level[nxt] = len(order)
        order.append(nxt)

    def crossings_on(k: int) -> list[int]:
        out = []
        for label in circles[k]:
            ci, _ = st.head(label)
            out.append(ci)
        return out

    gen = [min(level[u], level[v]) for u, v in meets]
    linear = [crossings_on(order[0])]
    for k in range(1, len(order)):
        first = next(ci for ci in linear[k - 1] if gen[ci] == k - 1)
        cyc = crossings_on(order[k])
        i = cyc.index(first)
        linear.append(cyc[i:] + cyc[:i])
    ts: TopologicalSorter = TopologicalSorter()
    for ci in range(len(b.crossings)):
        ts.add(ci)
    for seq in linear:
        for a, c in zip(seq, seq[1:]):
            ts.add(c, a)
    try:
        sweep = list(ts.static_order())
    except CycleError as exc:
        raise InconsistencyError("braid sweep order is cyclic") from exc
    signs = b.signs
    return len(order), [(gen[ci], signs[ci]) for ci in sweep]


def braid_seifert_matrix(word: list[tuple[int, int]]) -> list[list[int]]:
    """Seifert matrix of the canonical surface of a closed braid."""
    by_gen: dict[int, list[int]] = {}
    for pos, (g, _) in enumerate(word):
        by_gen.setdefault(g, []).append(pos)
    gens = []
    for g in sorted(by_gen):
        occ = by_gen[g]
        gens += [(g, occ[m], occ[m + 1]) for m in range(len(occ) - 1)]
    index = {(g, p): k for k, (g, p, _) in enumerate(gens)}
    n = len(gens)
    m = [[0] * n for _ in range(n)]
    sign = [s for _, s in word]
    for k, (g, p, q) in enumerate(gens):
        if sign[p] == sign[q]:
            m[k][k] = -sign[p]
        nxt = index.get((g, q))
        if nxt is not None:
            if sign[q] > 0:
                m[nxt][k] = 1
            else:
                m[k][nxt] = -1
        for l, (h, p2, q2) in enumerate(gens):
            if h != g + 1:
                continue
            if p2 < p < q2 < q:
                m[l][k] = 1
            elif p < p2 < q < q2:
                m[l][k] = -1
    return m


def _drop_enlargements(v: list[list[int]]) -> list[list[int]] | None:
    """Split off one elementary enlargement per left (or right) kernel vector.

    With U a basis of the left kernel, A = VU has a left inverse because
    V - V^T is unimodular. Vectors X with X^T A = I, U itself, and a
    complement on which both pairings vanish give a basis in which V reads
    [[W, *, 0], [*, *, I], [0, 0, 0]], a stack of elementary enlargements
    of W. Returns None if V is nonsingular.
    """
    for transposed in (False, True):
        a = linalg.transpose(v) if transposed else v
        us = linalg.integer_kernel(linalg.transpose(a))
        if not us:
            continue
        n = len(a)
        au = [[sum(a[i][j] * u[j] for j in range(n)) for i in range(n)] for u in us]
        xs = linalg.unit_solutions(au)
        duals = linalg.unit_solutions(us)
        gs = []
        for g0 in duals:
            coeff = [sum(p * q for p, q in zip(g0, x)) for x in xs]
            gs.append([g0[k] - sum(c * w[k] for c, w in zip(coeff, au)) for k in range(n)])
        rest = linalg.integer_kernel(au + gs, n)
        small = _congruence(a, rest)
        return linalg.transpose(small) if transposed else small
    return None


def _congruence(a: list[list[int]], basis: list[list[int]]) -> list[list[int]]:
    """B^T a B for the matrix B whose columns are the (mostly sparse) basis vectors."""
    cols = [{i: x for i, x in enumerate(vec) if x} for vec in basis]
    n = len(a)
    a_cols = []
    for col in cols:
        out = [0] * n
        for k, x in col.items():
            for i in range(n):
                if a[i][k]:
                    out[i] += x * a[i][k]
        a_cols.append(out)
    return [[sum(x * ab[i] for i, x in row.items()) for ab in a_cols] for row in cols]


def seifert_matrix(d: KnotDiagram) -> list[list[int]]:
    """Integer Seifert matrix of size 2g, g the genus of the canonical surface of d."""
    require_valid(d)
    target = 2 * seifert_data(d).genus
    if target == 0:
        return []
    core = remove_nugatory(d)
    if 2 * seifert_data(core).genus != target:
        raise InconsistencyError("untwisting a nugatory crossing changed the canonical genus")
    _, word = braid_word(core)
    v = braid_seifert_matrix(word)
    while len(v) > target:
        smaller = _drop_enlargements(v)
        if smaller is None:
            raise InconsistencyError("Seifert matrix cannot be reduced to the canonical genus")
        v = smaller
    skew = [[v[i][j] - v[j][i] for j in range(len(v))] for i in range(len(v))]
    if abs(linalg.bareiss_det(skew)) != 1:
        raise InconsistencyError("V - V^T is not unimodular")
    return v


def _nugatory(d: KnotDiagram) -> int | None:
    face_of = {he: k for k, f in enumerate(faces(d)) for he in f}
    for ci in range(len(d.crossings)):
        if face_of[(ci, 0)] == face_of[(ci, 2)] or face_of[(ci, 1)] == face_of[(ci, 3)]:
            return ci
    return None


def remove_nugatory(d: KnotDiagram) -> KnotDiagram:
    """Untwist nugatory crossings; genus of the canonical surface is unchanged."""
    cur = d
    while cur.crossings:
        ci = _nugatory(cur)
        if ci is None:
            return cur
        st = cur._structure
        for pairing in (((0, 1), (2, 3)), ((0, 3), (1, 2))):
            b = DiagramBuilder()
            ids = {cj: b.crossing(0) for cj in range(len(cur.crossings)) if cj != ci}
            wires = {}
            for s1, s2 in pairing:
                w0, w1 = b.wire()
                wires[s1], wires[s2] = w0, w1
            for label, ((c1, s1), (c2, s2)) in st.occurrences.items():
                ends = []
                for c, s in ((c1, s1), (c2, s2)):
                    ends.append(wires[s] if c == ci else b.port(ids[c], s))
                b.join(*ends)
            try:
                cur = b.build()
                break
            except DiagramError:
                continue
        else:
            raise InconsistencyError("nugatory crossing could not be removed")
    return cur
