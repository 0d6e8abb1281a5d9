"""Text format round-trips and diagnostics."""

import pytest

from dimerdual import catalog
from dimerdual.core import validate, with_derived_offsets
from dimerdual.dimerfile import DimerFileError, parse, serialize

from conftest import HANDWRITTEN


def test_catalog_files_parse_and_validate():
    for name in HANDWRITTEN:
        D = validate(parse(catalog.source(name)))
        assert D.name == name


def test_parse_serialize_identity_on_canonical():
    for name in HANDWRITTEN:
        D = validate(parse(catalog.source(name)))
        canonical = serialize(D)
        again = serialize(validate(parse(canonical)))
        assert again == canonical


def test_serialize_parse_reproduces_model():
    # identity up to the canonical face rotation that serialize applies
    for name in HANDWRITTEN:
        D = validate(parse(catalog.source(name)))
        if name != "genus2":
            D = with_derived_offsets(D)
        D2 = validate(parse(serialize(D)))
        assert D2.arrows == D.arrows
        assert D2.head == D.head and D2.tail == D.tail
        assert D2.offsets == D.offsets
        assert D2.vertex_names == D.vertex_names
        assert serialize(D2) == serialize(D)
        assert {(f.sign, frozenset(f.boundary)) for f in D2.faces} == {
            (f.sign, frozenset(f.boundary)) for f in D.faces
        }


def test_offsets_round_trip():
    D = with_derived_offsets(validate(parse(catalog.source("p2"))))
    D2 = validate(parse(serialize(D)))
    assert D2.offsets == D.offsets


def test_positions_parse():
    text = (
        "dimer t\n"
        "vertex 1 0 1/2\n"
        "arrow x 1 1\narrow y 1 1\narrow z 1 1\n"
        "face + x y z\nface - x z y\n"
    )
    D = validate(parse(text))
    assert D.positions is not None
    from fractions import Fraction

    assert D.positions[0] == (Fraction(0), Fraction(1, 2))
    assert "1/2" in serialize(D)


def test_partial_offsets_default_to_zero():
    text = (
        "dimer t\n"
        "arrow x 1 1 1 0\narrow y 1 1\narrow z 1 1\n"
        "face + x y z\nface - x z y\n"
    )
    raw = parse(text)
    assert raw.offsets == {"x": (1, 0), "y": (0, 0), "z": (0, 0)}


@pytest.mark.parametrize(
    "text,msg",
    [
        ("arrow x 1 1\nface + x\nface - x\n", "missing dimer line"),
        ("dimer a\ndimer b\narrow x 1 1\n", "repeated dimer"),
        ("dimer a\narrow x 1\n", "arrow A TAIL HEAD"),
        ("dimer a\narrow x 1 1\narrow x 1 1\n", "declared twice"),
        ("dimer a\nvertex v 2 0\narrow x v v\n", "outside"),
        ("dimer a\nwhat x\n", "unknown directive"),
        ("dimer a\nface * x y z\n", "face"),
        ("dimer a\n", "no arrows"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(DimerFileError, match=msg):
        parse(text)
