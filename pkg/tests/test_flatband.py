import random

import pytest

from conftest import EMPTY_SU, TREFOIL_HALF_SU
from oracles import kauffman_bracket
from symknot.diagram import seifert_data
from symknot.errors import BandError
from symknot.flatband import (
    FlatBandDiagram,
    HalfTwist,
    SingPass,
    band_seifert_counts,
    boundary_knot,
    configuration,
    disk_complement_h1_rank,
    free_rank,
    from_symmetric_disk,
    heegaard_upper_bound,
    normalize_orientations,
    parse_band,
    random_flat_band,
    reverse_core,
    ribbon_complex,
    serialize_band,
    to_symmetric_union,
    validate_flat,
)
from symknot.invariants import alexander_polynomial, determinant
from symknot.symunion import parse_su, random_symmetric_union, to_knot_diagram
from symknot.tangles import BASE_BAND

BARE = FlatBandDiagram()


def random_bands(seed, count, **kwargs):
    rng = random.Random(seed)
    return [random_flat_band(rng, **kwargs) for _ in range(count)]


def base_band(twists=0):
    base = parse_band(BASE_BAND)
    return FlatBandDiagram(base.events[:2] + (HalfTwist(1),) * twists + base.events[2:], base.embedding)


def test_bare_band():
    assert validate_flat(BARE).ok
    assert BARE.singularity_count == 0
    assert boundary_knot(BARE).crossing_count == 0
    assert serialize_band(BARE) == "; embedding:"
    assert parse_band("; embedding:") == BARE


def test_two_through_passes_rejected():
    bd = FlatBandDiagram((SingPass(1, "through", 1), SingPass(1, "through", 1)),
                         ((1, ("co", "to", "ci", "ti")),))
    report = validate_flat(bd)
    assert not report.ok and report.errors[0].startswith("duplicate roles")


@pytest.mark.parametrize("text, kind", [
    ("S1t+ S1c+", "malformed band"),
    ("S1x+ S1c+ ; embedding: 1:co,to,ci,ti", "malformed token"),
    ("S1t+ S1c+ ; embedding: 1:co,ci,to,ti", "unrealizable code"),
    ("S1t+ S1c+ ; embedding: 1:co,ti,ci,to", "unrealizable code"),
    ("S1t+ S1c+ ; embedding:", "unrealizable code"),
    ("S1t+ S1t- ; embedding: 1:co,to,ci,ti", "duplicate roles"),
])
def test_parse_errors(text, kind):
    with pytest.raises(BandError) as info:
        parse_band(text)
    assert info.value.kind == kind


def test_nonplanar_code_rejected():
    with pytest.raises(BandError, match="core has 1 faces"):
        parse_band("S1t+ S2t+ S1c+ S2c+ ; embedding: 1:co,to,ci,ti 2:co,to,ci,ti")


def test_band_code_round_trip_byte_exact():
    for bd in random_bands(41, 40):
        text = serialize_band(bd)
        assert serialize_band(parse_band(text)) == text


def test_empty_presentation_gives_bare_band():
    bd = from_symmetric_disk(parse_su(EMPTY_SU))
    assert bd == BARE
    assert to_symmetric_union(BARE).half.crossing_count == 0


def test_trefoil_half_band():
    su = parse_su(TREFOIL_HALF_SU)
    bd = from_symmetric_disk(su)
    assert bd.singularity_count == 3
    assert determinant(boundary_knot(bd)) == 9
    assert heegaard_upper_bound(bd).bound == 9


def test_disk_boundary_matches_realization():
    rng = random.Random(42)
    for _ in range(50):
        su = random_symmetric_union(rng, max_crossings=6)
        bd = from_symmetric_disk(su)
        assert validate_flat(bd).ok
        assert bd.singularity_count == su.singularity_count
        boundary, real = boundary_knot(bd), to_knot_diagram(su)
        assert determinant(boundary) == determinant(real)
        assert alexander_polynomial(boundary) == alexander_polynomial(real)


def test_disk_boundary_is_same_knot_by_bracket():
    rng = random.Random(43)
    for _ in range(25):
        su = random_symmetric_union(rng, max_crossings=4, max_twists=2)
        bd = from_symmetric_disk(su)
        assert kauffman_bracket(boundary_knot(bd)) == kauffman_bracket(to_knot_diagram(su))


def test_round_trip_through_band():
    rng = random.Random(44)
    for _ in range(50):
        su = random_symmetric_union(rng)
        back = to_symmetric_union(from_symmetric_disk(su))
        assert back.singularity_count == su.singularity_count
        a, b = to_knot_diagram(su), to_knot_diagram(back)
        assert determinant(a) == determinant(b)
        assert alexander_polynomial(a) == alexander_polynomial(b)


def test_scrambled_bands_convert_or_refuse():
    converted = refused = 0
    for bd in random_bands(45, 40, max_crossings=4):
        try:
            su = to_symmetric_union(bd)
        except BandError:
            refused += 1
            continue
        converted += 1
        assert su.singularity_count == bd.singularity_count
        assert kauffman_bracket(to_knot_diagram(su)) == kauffman_bracket(boundary_knot(bd))
    assert converted > refused


def test_reverse_core_keeps_boundary():
    for bd in random_bands(46, 20, max_crossings=4):
        assert kauffman_bracket(boundary_knot(reverse_core(bd))) == kauffman_bracket(boundary_knot(bd))


def test_boundary_crossing_count():
    for bd in random_bands(47, 40):
        assert boundary_knot(bd).crossing_count == 4 * bd.singularity_count + bd.twist_count


def test_normalize_idempotent_and_preserves_boundary():
    for bd in random_bands(48, 50):
        n = normalize_orientations(bd)
        assert normalize_orientations(n) == n
        assert all(configuration(n, k) in (1, 2) for k, _ in n.embedding)
        assert determinant(boundary_knot(n)) == determinant(boundary_knot(bd))
        assert n.singularity_count == bd.singularity_count


def test_normalize_keeps_bracket():
    for bd in random_bands(49, 20, max_crossings=4):
        assert kauffman_bracket(boundary_knot(normalize_orientations(bd))) == kauffman_bracket(boundary_knot(bd))


def test_normalized_band_unchanged():
    bd = from_symmetric_disk(parse_su(TREFOIL_HALF_SU))
    n = normalize_orientations(bd)
    assert normalize_orientations(n) == n


@pytest.mark.parametrize("twists", [0, 5])
def test_seifert_counts_r2(twists):
    c = band_seifert_counts(base_band(twists))
    assert (c.circle_count, c.euler_characteristic, c.genus) == (5, -3, 2)


def test_seifert_counts_bare():
    c = band_seifert_counts(BARE)
    assert (c.circle_count, c.genus, c.twist_circles) == (1, 0, 0)


def test_seifert_counts_match_scratch_algorithm():
    for bd in random_bands(50, 40, max_twists=6):
        r = bd.singularity_count
        c = band_seifert_counts(bd)
        n = normalize_orientations(bd)
        untwisted = FlatBandDiagram(tuple(e for e in n.events if isinstance(e, SingPass)), n.embedding)
        scratch = seifert_data(boundary_knot(untwisted))
        assert (scratch.circle_count, scratch.euler_characteristic, scratch.genus) == (2 * r + 1, 1 - 2 * r, r)
        assert seifert_data(boundary_knot(n)).circle_count - c.twist_circles == 2 * r + 1


def test_complement_rank_examples():
    assert disk_complement_h1_rank(BARE) == 0
    one = from_symmetric_disk(parse_su("half: X(E1,E2,1,1) ; axis:"))
    assert one.singularity_count == 1
    assert disk_complement_h1_rank(one) == 1


def test_complement_rank_and_euler_characteristic():
    for bd in random_bands(51, 40):
        r = bd.singularity_count
        cx = ribbon_complex(bd)
        assert cx.euler_characteristic == 1 - r
        assert disk_complement_h1_rank(bd) == r
        free = free_rank(cx)
        assert free is None or free == r


def test_free_rank_on_shipped_examples():
    for bd in (BARE, base_band(), from_symmetric_disk(parse_su(TREFOIL_HALF_SU))):
        assert free_rank(ribbon_complex(bd)) == bd.singularity_count


def test_heegaard_certificate():
    assert heegaard_upper_bound(BARE).bound == 0
    cert = heegaard_upper_bound(base_band())
    assert cert.bound == 6
    assert [len(b.arcs) for b in cert.balls] == [8, 8]
    for bd in random_bands(52, 30):
        cert = heegaard_upper_bound(bd)
        assert cert.bound == 3 * bd.singularity_count
        assert len(cert.balls) == bd.singularity_count
        assert all(b.points == 8 and b.cover_genus == 3 for b in cert.balls)
