"""Line-oriented text formats for instances, inequalities, and points.

All three formats are UTF-8, ``#`` starts a comment, blank lines are
ignored, and every rational is printed in canonical lowest-terms form so
serialization is bit-stable.
"""

from __future__ import annotations

from .errors import FormatError
from .model import Group, Instance, LinearInequality, Point, VarRef
from .numeric import format_rational, parse_rational


def _logical_lines(text: str):
    """(line_number, tokens) for every non-blank, non-comment line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _fail(lineno: int, message: str):
    raise FormatError("line %d: %s" % (lineno, message))


def parse_instance(text: str) -> Instance:
    lines = list(_logical_lines(text))
    if not lines:
        raise FormatError("empty instance file")
    lineno, tokens = lines[0]
    if tokens != ["ckp", "1"]:
        _fail(lineno, "expected header 'ckp 1'")
    if len(lines) < 2:
        raise FormatError("missing capacity line")
    lineno, tokens = lines[1]
    if len(tokens) != 2 or tokens[0] != "b":
        _fail(lineno, "expected 'b <rational>'")
    capacity = _rational_at(lineno, tokens[1])
    groups = []
    for lineno, tokens in lines[2:]:
        if tokens[0] != "group":
            _fail(lineno, "expected a 'group' line")
        if len(tokens) < 2:
            _fail(lineno, "missing group size")
        try:
            n = int(tokens[1])
        except ValueError:
            _fail(lineno, "group size is not an integer: %r" % tokens[1])
        if n < 1:
            _fail(lineno, "group size must be >= 1")
        expected = 2 + 1 + n + 1 + n  # 'group n' + 'a' weights + 'c' profits
        if len(tokens) != expected or tokens[2] != "a" or tokens[3 + n] != "c":
            _fail(lineno, "expected 'group %d a <%d rationals> c <%d rationals>'" % (n, n, n))
        weights = tuple(_rational_at(lineno, t) for t in tokens[3:3 + n])
        profits = tuple(_rational_at(lineno, t) for t in tokens[4 + n:4 + 2 * n])
        groups.append(Group(weights, profits))
    if not groups:
        raise FormatError("instance has no groups")
    return Instance(tuple(groups), capacity)


def _rational_at(lineno, token):
    try:
        return parse_rational(token)
    except FormatError as exc:
        _fail(lineno, str(exc))


def serialize_instance(instance: Instance) -> str:
    out = ["ckp 1", "b %s" % format_rational(instance.capacity)]
    for g in instance.groups:
        parts = ["group", str(g.size), "a"]
        parts += [format_rational(a) for a in g.weights]
        parts.append("c")
        parts += [format_rational(c) for c in g.profits]
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def parse_inequality(text: str) -> LinearInequality:
    lines = list(_logical_lines(text))
    if not lines:
        raise FormatError("empty inequality file")
    lineno, tokens = lines[0]
    if tokens != ["ineq", "1"]:
        _fail(lineno, "expected header 'ineq 1'")
    if len(lines) < 2:
        raise FormatError("missing rhs line")
    lineno, tokens = lines[1]
    if len(tokens) != 2 or tokens[0] != "rhs":
        _fail(lineno, "expected 'rhs <rational>'")
    rhs = _rational_at(lineno, tokens[1])
    coeffs = []
    for lineno, tokens in lines[2:]:
        coeffs.append(_indexed_entry(lineno, tokens, "term"))
    return LinearInequality(coeffs, rhs)


def serialize_inequality(q: LinearInequality) -> str:
    out = ["ineq 1", "rhs %s" % format_rational(q.rhs)]
    for ref, value in q.terms:
        out.append("term %d %d %s" % (ref.group, ref.slot, format_rational(value)))
    return "\n".join(out) + "\n"


def parse_point(text: str) -> Point:
    lines = list(_logical_lines(text))
    if not lines:
        raise FormatError("empty point file")
    lineno, tokens = lines[0]
    if tokens != ["point", "1"]:
        _fail(lineno, "expected header 'point 1'")
    entries = []
    for lineno, tokens in lines[1:]:
        entries.append(_indexed_entry(lineno, tokens, "val"))
    return Point(entries)


def serialize_point(point: Point) -> str:
    out = ["point 1"]
    for ref, value in point.entries:
        out.append("val %d %d %s" % (ref.group, ref.slot, format_rational(value)))
    return "\n".join(out) + "\n"


def _indexed_entry(lineno, tokens, keyword):
    if len(tokens) != 4 or tokens[0] != keyword:
        _fail(lineno, "expected '%s <i> <j> <rational>'" % keyword)
    try:
        i, j = int(tokens[1]), int(tokens[2])
    except ValueError:
        _fail(lineno, "indices must be integers")
    if i < 1 or j < 1:
        _fail(lineno, "indices are 1-based")
    return (VarRef(i, j), _rational_at(lineno, tokens[3]))
