import random

import pytest

from fracube.core import (
    CUBE_GROUP,
    Digit,
    DigitSet,
    apply_isometry,
    canonical_code,
    canonical_form,
    cell_index,
    digit_from_cell,
    parse_digitset,
    transform_code,
)
from fracube.errors import DuplicateDigit, OutOfRange, ParseError

PLUS = "011_101_110_111_112_121_211"


def random_digitset(rng, n=3, size=7):
    return DigitSet.from_code(sum(1 << c for c in rng.sample(range(n ** 3), size)), n=n)


def test_cell_index_examples():
    assert cell_index(Digit(0, 0, 0), 3) == 0
    assert cell_index(Digit(2, 2, 2), 3) == 26
    assert cell_index(Digit(1, 0, 2), 3) == 19


def test_cell_index_bijection():
    for n in (2, 3, 4, 5):
        seen = {cell_index(digit_from_cell(c, n), n) for c in range(n ** 3)}
        assert seen == set(range(n ** 3))


def test_parse_compact_matches_listing():
    ds = parse_digitset("020_101_110_111_112_121_202")
    assert {tuple(d) for d in ds.digits} == {
        (0, 2, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 0, 2)}
    cells = [cell_index(d, 3) for d in ds.digits]
    assert cells == sorted(cells)


def test_parse_braced_equals_compact():
    a = parse_digitset("{(0,2,0), (1,0,1), (1,1,0), (1,1,1), (1,1,2), (1,2,1), (2,0,2)}")
    b = parse_digitset("020_101_110_111_112_121_202")
    assert a == b
    # whitespace tolerance
    c = parse_digitset(" { (0,2,0),(1,0,1),(1,1,0),(1,1,1),(1,1,2),(1,2,1),(2,0,2) } ")
    assert c == b


def test_parse_singleton():
    assert parse_digitset("000").digits == (Digit(0, 0, 0),)


def test_parse_errors():
    with pytest.raises(DuplicateDigit):
        parse_digitset("000_000_111")
    with pytest.raises(OutOfRange):
        parse_digitset("003")
    with pytest.raises(ParseError):
        parse_digitset("00_111")
    with pytest.raises(ParseError):
        parse_digitset("{(0,0,0), nonsense}")
    with pytest.raises(ParseError):
        parse_digitset("")
    with pytest.raises(OutOfRange):
        parse_digitset("021", n=2)


def test_render_round_trip():
    rng = random.Random(11)
    for _ in range(50):
        ds = random_digitset(rng)
        assert parse_digitset(ds.render_compact()) == ds
        assert parse_digitset(ds.render_braced()) == ds
    small = random_digitset(rng, n=2, size=3)
    assert parse_digitset(small.render_compact(), n=2) == small


def test_group_has_48_distinct_elements():
    assert len(CUBE_GROUP) == 48
    assert len({(g.perm, g.flips) for g in CUBE_GROUP}) == 48


def test_group_closure_and_inverses():
    members = {(g.perm, g.flips) for g in CUBE_GROUP}
    for g in CUBE_GROUP:
        inv = g.inverse()
        assert (inv.perm, inv.flips) in members
        assert g.compose(inv).is_identity
        assert inv.compose(g).is_identity
    rng = random.Random(5)
    for _ in range(200):
        g, h = rng.choice(CUBE_GROUP), rng.choice(CUBE_GROUP)
        assert (g.compose(h).perm, g.compose(h).flips) in members


def test_group_action_is_faithful_on_cells():
    # distinct group elements act differently on the 27 cells
    images = {tuple(transform_code(i, 1 << c, 3) for c in range(27)) for i in range(48)}
    assert len(images) == 48


def test_apply_isometry_examples():
    ds = parse_digitset("020_101_110_111_112_121_202")
    assert apply_isometry(CUBE_GROUP[0], ds) == ds
    flip_x = next(g for g in CUBE_GROUP if g.perm == (0, 1, 2) and g.flips == (True, False, False))
    assert apply_isometry(flip_x, parse_digitset("000")) == parse_digitset("200")
    plus = parse_digitset(PLUS)
    for g in CUBE_GROUP:
        assert apply_isometry(g, plus) == plus


def test_apply_isometry_preserves_size_and_inverts():
    rng = random.Random(3)
    for _ in range(20):
        ds = random_digitset(rng)
        for g in rng.sample(CUBE_GROUP, 6):
            img = apply_isometry(g, ds)
            assert len(img) == len(ds)
            assert apply_isometry(g.inverse(), img) == ds


def test_offsets_map_to_offsets():
    offsets = [(a, b, c) for a in (-1, 0, 1) for b in (-1, 0, 1) for c in (-1, 0, 1)
               if (a, b, c) != (0, 0, 0)]
    for g in CUBE_GROUP:
        assert sorted(g.apply_offset(v) for v in offsets) == sorted(offsets)


def test_canonical_form_examples():
    plus = canonical_form(parse_digitset(PLUS))
    assert plus.orbit_size == 1 and plus.stabilizer_size == 48

    corner = canonical_form(parse_digitset("000"))
    assert corner.canonical == parse_digitset("000")
    assert corner.orbit_size == 8


def test_canonical_form_invariance_and_idempotence():
    rng = random.Random(17)
    for _ in range(25):
        ds = random_digitset(rng)
        cf = canonical_form(ds)
        assert cf.orbit_size * cf.stabilizer_size == 48
        assert apply_isometry(cf.witness, ds) == cf.canonical
        again = canonical_form(cf.canonical)
        assert again.canonical == cf.canonical
        for g in CUBE_GROUP:
            assert canonical_form(apply_isometry(g, ds)).canonical == cf.canonical


def test_canonical_code_matches_canonical_form():
    rng = random.Random(23)
    for _ in range(50):
        ds = random_digitset(rng)
        assert canonical_code(ds.code, 3) == canonical_form(ds).canonical.code


def test_from_code_validation():
    with pytest.raises(OutOfRange):
        DigitSet.from_code(0)
    with pytest.raises(OutOfRange):
        DigitSet.from_code(1 << 27, n=3)
    with pytest.raises(OutOfRange):
        DigitSet.from_digits([(0, 0, 0)], n=7)
