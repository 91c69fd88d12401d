"""Command-line front end: ``symknot analyze | family | convert``.

Every report is a JSON object carrying ``schema_version``. Exit codes are
0 on success, 2 for input errors and 3 when two computations that must agree
disagree.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from pathlib import Path

from .diagram import KnotDiagram, parse_pd, seifert_data, serialize_pd
from .errors import BandError, InconsistencyError, InputError
from .flatband import (
    FlatBandDiagram,
    HalfTwist,
    SingPass,
    band_seifert_counts,
    boundary_knot,
    disk_complement_h1_rank,
    free_rank,
    from_symmetric_disk,
    heegaard_upper_bound,
    normalize_orientations,
    parse_band,
    ribbon_complex,
    serialize_band,
    to_symmetric_union,
)
from .invariants import (
    alexander_polynomial,
    bounds_report,
    determinant,
    h1_double_cover,
    rs_lower_bound,
)
from .symunion import parse_su, serialize_su, to_knot_diagram
from .tangles import MAX_FAMILY_N, build_kn

SCHEMA_VERSION = 1
DEFAULT_MAX_CROSSINGS = 64
EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT = 0, 2, 3

log = logging.getLogger(__name__)


def max_crossings() -> int:
    raw = os.environ.get("SYMKNOT_MAX_CROSSINGS", str(DEFAULT_MAX_CROSSINGS))
    try:
        value = int(raw)
    except ValueError:
        raise InputError("bad environment", f"SYMKNOT_MAX_CROSSINGS={raw!r} is not an integer")
    if value < 0:
        raise InputError("bad environment", "SYMKNOT_MAX_CROSSINGS must be non-negative")
    return value


def detect_format(text: str) -> str:
    stripped = text.strip()
    if stripped.startswith("half:"):
        return "su"
    if "embedding:" in stripped:
        return "band"
    return "pd"


def parse_input(text: str):
    """Return (format, object) for PD, SU or band-code text."""
    fmt = detect_format(text)
    parser = {"su": parse_su, "band": parse_band, "pd": parse_pd}[fmt]
    return fmt, parser(text)


def read_source(source: str) -> str:
    """Read ``source`` as a file path, ``-`` for stdin, or inline code."""
    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if path.is_file():
        return path.read_text()
    return source


def _check_size(d: KnotDiagram) -> None:
    cap = max_crossings()
    if d.crossing_count > cap:
        raise InputError("input too large", f"{d.crossing_count} crossings exceeds cap {cap}")


def _poly_json(poly) -> dict:
    return {"coefficients": [c for _, c in poly.terms] if poly.terms else [],
            "lowest_exponent": poly.terms[0][0] if poly.terms else 0,
            "text": str(poly)}


def _is_odd_square(n: int) -> bool:
    return n % 2 == 1 and math.isqrt(n) ** 2 == n


def knot_invariants(d: KnotDiagram) -> dict:
    alex = alexander_polynomial(d)
    det = determinant(d)
    group = h1_double_cover(d)
    sd = seifert_data(d)
    return {
        "crossings": d.crossing_count,
        "determinant": det,
        "determinant_odd_square": _is_odd_square(det),
        "alexander": _poly_json(alex),
        "h1_double_cover": {"invariant_factors": list(group.invariant_factors),
                            "min_generators": group.min_generators,
                            "text": str(group)},
        "seifert": asdict(sd),
        "genus_lower": alex.span // 2,
    }


def band_section(bd: FlatBandDiagram, boundary: KnotDiagram) -> dict:
    """Closed-form counts and certificates for a flat band, cross-checked."""
    r = bd.singularity_count
    normal = normalize_orientations(bd)
    counts = band_seifert_counts(bd)
    certificate = heegaard_upper_bound(bd)
    complex_ = ribbon_complex(bd)
    rank = disk_complement_h1_rank(bd)
    if rank != r:
        raise InconsistencyError(f"disk complement H1 rank {rank} differs from r = {r}")
    if certificate.bound != 3 * r:
        raise InconsistencyError(f"Heegaard certificate genus {certificate.bound} differs from 3r")
    free = free_rank(complex_)
    if free is None:
        log.info("relator elimination did not finish for %s", serialize_band(bd))
    return {
        "code": serialize_band(bd),
        "normalized_code": serialize_band(normal),
        "singularities": r,
        "half_twists": bd.twist_count,
        "junctions": 0,
        "band_crossings": 0,
        "seifert": asdict(counts),
        "disk_complement_h1_rank": rank,
        "free_rank": free,
        "euler_characteristic": complex_.euler_characteristic,
        "heegaard_certificate": {
            "bound": certificate.bound,
            "balls": [{"singularity": b.sid, "arcs": list(b.arcs), "cover_genus": b.cover_genus}
                      for b in certificate.balls],
            "tubes": len(certificate.tubes),
        },
        "boundary_crossings": boundary.crossing_count,
    }


def _same_knot_invariants(a: KnotDiagram, b: KnotDiagram) -> None:
    if determinant(a) != determinant(b):
        raise InconsistencyError("band boundary and realized diagram differ in determinant")
    if alexander_polynomial(a) != alexander_polynomial(b):
        raise InconsistencyError("band boundary and realized diagram differ in Alexander polynomial")


def analyze_text(text: str, timing: bool = True) -> dict:
    start = time.perf_counter()
    fmt, obj = parse_input(text)
    report: dict = {"schema_version": SCHEMA_VERSION, "input": {"format": fmt}}
    su = bd = None
    if fmt == "su":
        su = obj
        diagram = to_knot_diagram(su)
        _check_size(diagram)
        bd = from_symmetric_disk(su)
        if bd.singularity_count != su.singularity_count:
            raise InconsistencyError("band conversion changed the singularity count")
        report["input"]["code"] = serialize_su(su)
    elif fmt == "band":
        bd = obj
        diagram = boundary_knot(bd)
        _check_size(diagram)
        report["input"]["code"] = serialize_band(bd)
        try:
            su = to_symmetric_union(bd)
        except BandError as exc:
            report["symmetric_union_note"] = str(exc)
    else:
        diagram = obj
        _check_size(diagram)
        report["input"]["code"] = serialize_pd(diagram)

    report["invariants"] = knot_invariants(diagram)
    if su is not None:
        report["symmetric_union"] = {"code": serialize_su(su),
                                     "singularities": su.singularity_count}
    if bd is not None:
        boundary = boundary_knot(bd)
        _same_knot_invariants(boundary, diagram)
        report["band"] = band_section(bd, boundary)
        report["bounds"] = _bounds_json(diagram, bd.singularity_count)
    else:
        inv = report["invariants"]
        h_lower = inv["h1_double_cover"]["min_generators"]
        report["bounds"] = {"heegaard_lower": h_lower,
                            "heegaard_lower_method": "lower bound via H1",
                            "rs_lower": rs_lower_bound(h_lower),
                            "genus_lower": inv["genus_lower"],
                            "note": "no ribbon presentation given; upper bounds unavailable"}
    if timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report


def _bounds_json(d: KnotDiagram, r: int) -> dict:
    b = bounds_report(d, r)
    if b.flags:
        raise InconsistencyError("; ".join(b.flags))
    out = asdict(b)
    out["h1_factors"] = list(b.h1_factors)
    out["flags"] = list(b.flags)
    out["heegaard_lower_method"] = "lower bound via H1"
    return out


def family_report(n: int, timing: bool = True) -> dict:
    start = time.perf_counter()
    fk = build_kn(n)
    boundary = boundary_knot(fk.ribbon_band)
    _same_knot_invariants(boundary, fk.diagram)
    inv = knot_invariants(fk.diagram)
    if not inv["determinant_odd_square"]:
        raise InconsistencyError(f"det(K_{n}) = {inv['determinant']} is not an odd square")
    report = {
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "diagram": serialize_pd(fk.diagram),
        "invariants": inv,
        "nontrivial": inv["alexander"]["coefficients"] != [1],
        "ribbon_band": band_section(fk.ribbon_band, boundary),
        "sphere_markers": [{"index": m.index, "arcs": list(m.arcs)} for m in fk.sphere_markers],
        "bounds": _bounds_json(fk.diagram, fk.ribbon_band.singularity_count),
        "note": "H1 generator count is measured; no growth in n is asserted",
    }
    if timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report


def convert_text(text: str, target: str) -> str:
    """Convert between formats; the output is re-parsed and checked."""
    fmt, obj = parse_input(text)
    if fmt == "pd" and target != "pd":
        raise InputError("unsupported direction", "a PD code carries no ribbon disk")
    if target == "svg":
        bd = obj if fmt == "band" else from_symmetric_disk(obj)
        return band_svg(bd)
    if target == fmt:
        out = {"su": serialize_su, "band": serialize_band, "pd": serialize_pd}[fmt](obj)
    elif target == "band":
        out = serialize_band(from_symmetric_disk(obj))
    elif target == "su":
        out = serialize_su(to_symmetric_union(obj))
    elif target == "pd":
        d = to_knot_diagram(obj) if fmt == "su" else boundary_knot(obj)
        out = serialize_pd(d)
    else:
        raise InputError("unsupported direction", f"{fmt} -> {target}")
    _check_round_trip(obj, fmt, out, target)
    return out


def _realize(obj, fmt: str) -> KnotDiagram:
    if fmt == "su":
        return to_knot_diagram(obj)
    if fmt == "band":
        return boundary_knot(obj)
    return obj


def _check_round_trip(source, fmt: str, out: str, target: str) -> None:
    _, back = parse_input(out)
    if fmt != "pd" and target != "pd" and back.singularity_count != source.singularity_count:
        raise InconsistencyError("conversion changed the singularity count")
    _same_knot_invariants(_realize(source, fmt), _realize(back, target))


_SVG_SEG = 60
_SVG_Y = 120


def band_svg(bd: FlatBandDiagram) -> str:
    """Schematic picture: the band drawn straight, passes as marks along it.

    Clasp passes get a slit glyph, through passes a tick, half-twists a
    cross; an arc above the band joins the two passes of each singularity.
    """
    events = bd.events
    width = _SVG_SEG * (len(events) + 1) + 40
    x = {i: 20 + _SVG_SEG * (i + 1) for i in range(len(events))}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="200" '
        f'viewBox="0 0 {width} 200">',
        f'<rect class="band" x="20" y="{_SVG_Y - 10}" width="{width - 40}" height="20" '
        'fill="#cfe3f7" stroke="#1f4e79"/>',
    ]
    through_x: dict[int, int] = {}
    clasp_x: dict[int, int] = {}
    for i, e in enumerate(events):
        xi = x[i]
        if isinstance(e, HalfTwist):
            parts.append(f'<path class="twist" d="M{xi - 6},{_SVG_Y - 10} L{xi + 6},{_SVG_Y + 10} '
                         f'M{xi + 6},{_SVG_Y - 10} L{xi - 6},{_SVG_Y + 10}" stroke="#1f4e79"/>'
                         f'<text x="{xi}" y="{_SVG_Y + 28}" text-anchor="middle" '
                         f'font-size="10">{e.token()}</text>')
        elif isinstance(e, SingPass) and e.role == "clasp":
            clasp_x[e.sid] = xi
            parts.append(f'<rect class="singularity" x="{xi - 3}" y="{_SVG_Y - 10}" width="6" '
                         f'height="20" fill="#c00000"/>'
                         f'<text x="{xi}" y="{_SVG_Y + 28}" text-anchor="middle" '
                         f'font-size="10">{e.token()}</text>')
        elif isinstance(e, SingPass):
            through_x[e.sid] = xi
            parts.append(f'<line class="through" x1="{xi}" y1="{_SVG_Y - 14}" x2="{xi}" '
                         f'y2="{_SVG_Y + 14}" stroke="#c00000" stroke-dasharray="2,2"/>'
                         f'<text x="{xi}" y="{_SVG_Y + 28}" text-anchor="middle" '
                         f'font-size="10">{e.token()}</text>')
    for sid in sorted(clasp_x):
        a, b = sorted((clasp_x[sid], through_x[sid]))
        rise = 20 + (b - a) // 4
        parts.append(f'<path class="chord" d="M{a},{_SVG_Y - 12} C{a},{_SVG_Y - 12 - rise} '
                     f'{b},{_SVG_Y - 12 - rise} {b},{_SVG_Y - 12}" fill="none" stroke="#888"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _error_json(exc: Exception, code: int) -> dict:
    kind = getattr(exc, "kind", type(exc).__name__)
    detail = getattr(exc, "detail", str(exc))
    return {"schema_version": SCHEMA_VERSION,
            "error": {"kind": kind, "detail": detail, "exit_code": code}}


def _guarded(fn, *args):
    """Run ``fn``; map library errors to (exit code, JSON payload)."""
    try:
        return EXIT_OK, fn(*args)
    except InputError as exc:
        return EXIT_INPUT, _error_json(exc, EXIT_INPUT)
    except InconsistencyError as exc:
        return EXIT_INCONSISTENT, _error_json(exc, EXIT_INCONSISTENT)


def _emit(results: list[tuple[int, dict]]) -> int:
    code = max((c for c, _ in results), default=EXIT_OK)
    if len(results) == 1:
        payload = results[0][1]
    else:
        payload = {"schema_version": SCHEMA_VERSION, "reports": [p for _, p in results]}
    stream = sys.stdout if code == EXIT_OK or len(results) > 1 else sys.stderr
    print(_dump(payload), file=stream)
    return code


def cmd_analyze(args) -> int:
    sources = [read_source(s) for s in args.inputs]
    timing = not args.no_timing
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(lambda t: _guarded(analyze_text, t, timing), sources))
    if args.svg:
        if len(sources) != 1:
            return _emit([(EXIT_INPUT, _error_json(
                InputError("bad flags", "--svg takes exactly one input"), EXIT_INPUT))])
        code, payload = results[0]
        if code == EXIT_OK and "band" in payload:
            bd = parse_band(payload["band"]["code"])
            Path(args.svg).write_text(band_svg(bd))
    return _emit(results)


def cmd_family(args) -> int:
    ns = list(range(1, args.n + 1)) if args.all and args.n >= 1 else [args.n]
    timing = not args.no_timing
    results = [_guarded(family_report, n, timing) for n in ns]
    return _emit(results)


def cmd_convert(args) -> int:
    code, out = _guarded(convert_text, read_source(args.input), args.to)
    if code != EXIT_OK:
        return _emit([(code, out)])
    if args.output:
        Path(args.output).write_text(out if out.endswith("\n") else out + "\n")
    else:
        sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symknot", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")

    an = sub.add_parser("analyze", parents=[common], help="report invariants and bounds")
    an.add_argument("inputs", nargs="+", help="file path, '-' for stdin, or inline code")
    an.add_argument("--svg", metavar="PATH", help="also write the band picture")
    an.add_argument("--jobs", type=int, default=1, help="analyses to run concurrently")
    an.set_defaults(func=cmd_analyze)

    fam = sub.add_parser("family", parents=[common], help=f"report K_n for 1 <= n <= {MAX_FAMILY_N}")
    fam.add_argument("--n", type=int, required=True)
    fam.add_argument("--all", action="store_true", help="sweep 1..n")
    fam.set_defaults(func=cmd_family)

    conv = sub.add_parser("convert", help="convert between su, band, pd and svg")
    conv.add_argument("input", help="file path, '-' for stdin, or inline code")
    conv.add_argument("--to", choices=["band", "su", "pd", "svg"], required=True)
    conv.add_argument("-o", "--output", metavar="PATH")
    conv.set_defaults(func=cmd_convert)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
