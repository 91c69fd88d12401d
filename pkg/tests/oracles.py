"""Independent reference computations used only by the tests."""
from __future__ import annotations

from symknot import linalg
from symknot.diagram import KnotDiagram
from symknot.invariants import LaurentPolynomial


def fox_alexander(d: KnotDiagram) -> LaurentPolynomial:
    """Alexander polynomial from the Wirtinger presentation by Fox calculus."""
    if not d.crossings:
        return LaurentPolynomial(((0, 1),))
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in d.crossings:
        parent[find(x[1])] = find(x[3])
        find(x[0])
        find(x[2])
    gens = sorted({find(v) for x in d.crossings for v in x})
    col = {g: i for i, g in enumerate(gens)}
    n = len(d.crossings)
    const = [[0] * len(gens) for _ in range(n)]
    lin = [[0] * len(gens) for _ in range(n)]
    for r, (x, sign) in enumerate(zip(d.crossings, d.signs)):
        o, a, c = col[find(x[1])], col[find(x[0])], col[find(x[2])]
        if sign > 0:
            const[r][o] += 1
            lin[r][o] -= 1
            lin[r][a] += 1
            const[r][c] -= 1
        else:
            const[r][o] -= 1
            lin[r][o] += 1
            const[r][a] += 1
            lin[r][c] -= 1
    a0 = [row[:-1] for row in const[:-1]]
    a1 = [row[:-1] for row in lin[:-1]]
    coeffs = linalg.poly_det(a0, a1)
    return LaurentPolynomial.from_coefficients(coeffs).normalized()


def braid_closure(word, strands: int) -> KnotDiagram:
    """Closure of a braid word given as signed 1-based generators."""
    from symknot.builder import DiagramBuilder

    b = DiagramBuilder()
    # crossing ports counterclockwise: 0=SE, 1=NE, 2=NW, 3=SW; strands run upward
    ends = [None] * strands
    starts = [None] * strands
    for i in range(strands):
        lo, hi = b.wire()
        starts[i] = lo
        ends[i] = hi
    for g in word:
        k = abs(g) - 1
        c = b.crossing(0 if g > 0 else 1)
        b.join(ends[k], b.port(c, 3))
        b.join(ends[k + 1], b.port(c, 0))
        ends[k], ends[k + 1] = b.port(c, 2), b.port(c, 1)
    for i in range(strands):
        b.join(ends[i], starts[i])
    return b.build()


def random_knot(rng, max_crossings: int = 10) -> KnotDiagram:
    """A random braid closure that happens to be a knot."""
    while True:
        strands = rng.randint(1, 4)
        if strands == 1:
            return KnotDiagram((), 1)
        length = rng.randint(strands - 1, max_crossings)
        word = [rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(length)]
        perm = list(range(strands))
        for g in word:
            k = abs(g) - 1
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
        seen, i = {0}, perm[0]
        while i not in seen:
            seen.add(i)
            i = perm[i]
        if len(seen) == strands:
            return braid_closure(word, strands)


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict[int, int] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _poly_add(p: dict, q: dict) -> dict:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


_LOOP = {2: -1, -2: -1}


def _contract(edges: list[tuple[int, int]]) -> tuple[frozenset, int]:
    """Join paths through labels of degree two; return (end pairs, closed loops)."""
    incident: dict[int, list[int]] = {}
    for k, (p, q) in enumerate(edges):
        incident.setdefault(p, []).append(k)
        incident.setdefault(q, []).append(k)
    used = [False] * len(edges)
    pairs = []
    for start, ks in incident.items():
        if len(ks) != 1 or used[ks[0]]:
            continue
        cur, k = start, ks[0]
        while True:
            used[k] = True
            p, q = edges[k]
            cur = q if p == cur else p
            nxt = [j for j in incident[cur] if not used[j]]
            if not nxt:
                break
            k = nxt[0]
        pairs.append(frozenset((start, cur)) if start != cur else frozenset((start,)))
    loops = 0
    for k in range(len(edges)):
        if used[k]:
            continue
        loops += 1
        cur = edges[k][0]
        while True:
            used[k] = True
            p, q = edges[k]
            cur = q if p == cur else p
            nxt = [j for j in incident[cur] if not used[j]]
            if not nxt:
                break
            k = nxt[0]
    return frozenset(pairs), loops


def kauffman_bracket(d: KnotDiagram) -> dict:
    """Normalized bracket (-A^3)^(-w) <D> as {exponent of A: coefficient}.

    Crossings are contracted one at a time; the state keeps, for every
    pairing of the still-open arc labels, the accumulated polynomial.
    """
    if not d.crossings:
        return dict(_LOOP)
    remaining = list(d.crossings)
    states: dict[frozenset, dict] = {frozenset(): {0: 1}}
    open_labels: set[int] = set()
    while remaining:
        remaining.sort(key=lambda x: -sum(v in open_labels for v in x))
        a, b, c, e = remaining.pop(0)
        new_states: dict[frozenset, dict] = {}
        for pairing, poly in states.items():
            old = [tuple(p) for p in pairing]
            for weight, extra in ((1, [(a, b), (c, e)]), (-1, [(a, e), (b, c)])):
                key, loops = _contract(old + extra)
                term = {weight: 1}
                for _ in range(loops):
                    term = _poly_mul(term, _LOOP)
                new_states[key] = _poly_add(new_states.get(key, {}), _poly_mul(poly, term))
        states = {k: v for k, v in new_states.items() if v}
        open_labels ^= {a, b, c, e}
    # the final closed loop contributes one extra factor of the loop value, kept as is
    bracket = states.get(frozenset(), {})
    w = d.writhe
    # (-A^3)^(-w) = (-1)^w A^(-3w)
    return {e - 3 * w: c * (-1) ** (w % 2) for e, c in bracket.items()}
