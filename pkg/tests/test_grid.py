import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binshape.constructions import hole_lattice
from binshape.grid import BinaryImage, EdgeId, ParseError, area, emit_image, parse_image

from conftest import all_images, img


def test_parse_smallest_pbm():
    x = parse_image("P1\n1 1\n1", "pbm-p1")
    assert (x.width, x.height, x.cells) == (1, 1, (1,))


def test_parse_ascii_all_ones():
    x = parse_image("##\n##", "ascii-grid")
    assert x.shape == (2, 2)
    assert area(x) == 4


def test_parse_pbm_reading_order():
    x = parse_image("P1\n2 2\n1 0 0 1", "pbm")
    assert x.cells == (1, 0, 0, 1)
    assert area(x) == 2


def test_parse_pbm_comments_and_packed_raster():
    text = "P1 # magic\n# a comment line\n3 2 # dims\n101\n0 1 0\n"
    x = parse_image(text, "pbm")
    assert x.cells == (1, 0, 1, 0, 1, 0)


def test_parse_ascii_digit_alphabet():
    assert parse_image("01\n10\n", "ascii") == img(".#", "#.")


def test_auto_format_sniffing():
    assert parse_image("P1\n1 1\n1") == img("#")
    assert parse_image("#.\n") == img("#.")


def test_emit_pbm_bit_exact():
    assert emit_image(img("#"), "pbm") == "P1\n1 1\n1\n"
    assert emit_image(img("#.#", "..#"), "pbm") == "P1\n3 2\n1 0 1\n0 0 1\n"


def test_emit_ascii():
    assert emit_image(img("##", "##"), "ascii-grid") == "##\n##\n"


@pytest.mark.parametrize(
    "text, fmt, line, column",
    [
        ("P1\n2 2\n1 0 1", "pbm", 3, 5),  # too few values
        ("P1\n1 1\n1 1", "pbm", 3, 3),  # too many values
        ("P1\n2 1\n1 2", "pbm", 3, 3),  # illegal raster character
        ("P2\n1 1\n1", "pbm", 1, 1),  # wrong magic
        ("P1\n0 3\n", "pbm", 2, 3),  # empty grid
        ("P1\nx 1\n1", "pbm", 2, 1),
        ("", "pbm", 1, 1),
        ("##\n#\n", "ascii", 2, 2),  # ragged rows
        ("#.\n#x\n", "ascii", 2, 2),
        ("#.\n#1\n", "ascii", 2, 2),  # mixed alphabets
        ("", "ascii", 1, 1),
        ("\n\n", "ascii", 1, 1),
    ],
)
def test_parse_errors_report_position(text, fmt, line, column):
    with pytest.raises(ParseError) as info:
        parse_image(text, fmt)
    assert (info.value.line, info.value.column) == (line, column)


def test_exterior_reads_as_zero():
    x = img("#")
    assert x.value(0, 0) == 1
    assert x.value(-1, 0) == x.value(0, 1) == x.value(5, 5) == 0


def test_image_is_immutable():
    x = img("#.")
    with pytest.raises(ValueError):
        x.array[0, 0] = 0


def test_code_round_trip():
    x = img("#..", ".#.")
    assert x.code == 0b10001
    assert BinaryImage.from_code(x.code, 3, 2) == x


def test_edge_cells():
    assert EdgeId("V", 2, 3).cells() == ((2, 2), (2, 3))
    assert EdgeId("H", 2, 3).cells() == ((1, 3), (2, 3))


@pytest.mark.parametrize("fmt", ["pbm", "ascii"])
def test_round_trip_exhaustive_3x3(fmt):
    for x in all_images(3, 3):
        assert parse_image(emit_image(x, fmt), fmt) == x


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 8).flatmap(
        lambda h: st.integers(1, 8).flatmap(
            lambda w: st.lists(st.integers(0, 1), min_size=h * w, max_size=h * w).map(
                lambda v: BinaryImage(np.array(v, np.uint8).reshape(h, w))
            )
        )
    ),
    st.sampled_from(["pbm", "ascii"]),
)
def test_round_trip_random(x, fmt):
    assert parse_image(emit_image(x, fmt), fmt) == x
    assert area(x) + int((x.array == 0).sum()) == x.width * x.height


def test_round_trip_hole_lattice():
    x = hole_lattice(3, 2)
    y = parse_image(emit_image(x, "pbm"), "pbm")
    assert y.shape == (20, 20)
    assert all(x.value(r, c) == y.value(r, c) for r in range(20) for c in range(20))


def test_area_examples():
    assert area(BinaryImage.zeros(3, 3)) == 0
    assert area(BinaryImage(np.ones((5, 5)))) == 25
    assert area(hole_lattice(3, 2)) == 400 - 36
