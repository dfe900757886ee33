from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ckp.errors import FormatError
from ckp.fileio import (
    parse_inequality,
    parse_instance,
    parse_point,
    serialize_inequality,
    serialize_instance,
    serialize_point,
)
from ckp.model import LinearInequality, Point, VarRef

from conftest import make_instance, random_instance

EX = """\
# toy instance
ckp 1
b 21
group 1 a 2 c 2
group 2 a 10 6 c 10 6
"""


def test_parse_instance():
    inst = parse_instance(EX)
    assert inst.capacity == 21
    assert inst.m == 2
    assert inst.group(2).weights == (Fraction(10), Fraction(6))


def test_comments_and_blanks_ignored():
    messy = "\n\n# hi\nckp 1   # header\n\nb 3\ngroup 1 a 1 c 1\n"
    assert parse_instance(messy).capacity == 3


def test_instance_round_trip(ex_a, ex_b, ex_c):
    for inst in (ex_a, ex_b, ex_c):
        assert parse_instance(serialize_instance(inst)) == inst


@given(st.integers(0, 2 ** 40))
def test_big_integer_capacity_survives(cap):
    inst = make_instance([(1,)], cap)
    assert parse_instance(serialize_instance(inst)).capacity == cap


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "empty"),
        ("ckp 2\nb 1\ngroup 1 a 1 c 1\n", "line 1"),
        ("ckp 1\n", "capacity"),
        ("ckp 1\nb x\ngroup 1 a 1 c 1\n", "line 2"),
        ("ckp 1\nb 1\ngrp 1 a 1 c 1\n", "line 3"),
        ("ckp 1\nb 1\ngroup 2 a 1 c 1\n", "line 3"),
        ("ckp 1\nb 1\ngroup 0 a c\n", "line 3"),
        ("ckp 1\nb 1\n", "no groups"),
    ],
)
def test_instance_errors_name_the_line(text, fragment):
    with pytest.raises(FormatError) as err:
        parse_instance(text)
    assert fragment in str(err.value)


def test_inequality_round_trip():
    q = LinearInequality(
        [(VarRef(1, 1), Fraction(7, 2)), (VarRef(3, 2), Fraction(-1, 3))],
        Fraction(22),
    )
    text = serialize_inequality(q)
    assert text == "ineq 1\nrhs 22\nterm 1 1 7/2\nterm 3 2 -1/3\n"
    assert parse_inequality(text) == q


def test_inequality_errors():
    with pytest.raises(FormatError):
        parse_inequality("ineq 1\n")
    with pytest.raises(FormatError) as err:
        parse_inequality("ineq 1\nrhs 5\nterm 0 1 2\n")
    assert "1-based" in str(err.value)
    with pytest.raises(FormatError):
        parse_inequality("ineq 1\nrhs 5\nterm 1 1\n")


def test_point_round_trip():
    p = Point([(VarRef(2, 1), Fraction(1, 3)), (VarRef(1, 1), 1)])
    text = serialize_point(p)
    # entries come back sorted by (group, slot)
    assert text == "point 1\nval 1 1 1\nval 2 1 1/3\n"
    assert parse_point(text) == p


def test_point_header_error():
    with pytest.raises(FormatError) as err:
        parse_point("pt 1\n")
    assert "point 1" in str(err.value)


def test_serialization_is_stable(rng):
    # serialize -> parse -> serialize must be a fixed point (golden-file safety)
    for _ in range(10):
        inst = random_instance(rng)
        once = serialize_instance(inst)
        assert serialize_instance(parse_instance(once)) == once
