from __future__ import annotations

import pytest

from charbetti.errors import FormatError
from charbetti.ideals import ideal_to_text, parse_ideal_text


def test_header_and_comments():
    text = """
# a comment
vars: x y z   # trailing comment
x^2 y
z
"""
    ideal = parse_ideal_text(text)
    assert ideal.context.names == ("x", "y", "z")
    assert sorted(str(g) for g in ideal.gens) == ["x^2 y", "z"]


def test_first_appearance_order_without_header():
    ideal = parse_ideal_text("b a\nc\n")
    assert ideal.context.names == ("b", "a", "c")


def test_unit_and_zero():
    assert parse_ideal_text("vars: x y\n1\n").is_unit()
    zero = parse_ideal_text("vars: x y\n")
    assert zero.is_zero() and zero.context.names == ("x", "y")


def test_round_trip_is_byte_exact():
    text = "vars: x y z\nx^2 y\nx z\n"
    assert ideal_to_text(parse_ideal_text(text)) == text


def test_repeated_token_multiplies():
    ideal = parse_ideal_text("x x y\n")
    assert [str(g) for g in ideal.gens] == ["x^2 y"]


@pytest.mark.parametrize(
    "bad",
    [
        "vars: x x\ny\n",          # duplicate name
        "x^0\n",                   # zero exponent
        "x^-2\n",                  # negative exponent
        "x^\n",                    # missing exponent
        "vars: x\nx\nvars: y\n",   # header after generators
        "vars: 1\n",               # invalid name
    ],
)
def test_malformed_inputs(bad):
    with pytest.raises(FormatError):
        parse_ideal_text(bad)


def test_unknown_variable_with_header():
    with pytest.raises(FormatError):
        parse_ideal_text("vars: x\ny\n")
