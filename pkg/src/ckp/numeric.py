"""Exact rational scalars and small exact linear algebra helpers.

Rationals are ``fractions.Fraction`` throughout the package.  The text form
is ``p`` or ``p/q`` with an optional leading minus sign and q > 0; parsing
canonicalizes (lowest terms, sign on the numerator).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .errors import FormatError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` (q > 0).  Raises FormatError on anything else."""
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise FormatError("not a rational: %r" % (text,))
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 0:
        raise FormatError("zero denominator: %r" % (text,))
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Canonical text form: ``p`` for integers, else ``p/q`` in lowest terms."""
    if value.denominator == 1:
        return str(value.numerator)
    return "%d/%d" % (value.numerator, value.denominator)


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of an exact rational matrix via Gaussian elimination."""
    work = [list(row) for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(work)):
            if work[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = prow[col]
        for r in range(rank + 1, len(work)):
            factor = work[r][col]
            if factor == 0:
                continue
            row = work[r]
            scale = factor / inv
            for c in range(col, ncols):
                row[c] -= scale * prow[c]
        rank += 1
        if rank == len(work):
            break
    return rank


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull of ``points`` (-1 for the empty set).

    Points are dense coordinate vectors of equal length.
    """
    if not points:
        return -1
    base = points[0]
    diffs = [[x - b for x, b in zip(p, base)] for p in points[1:]]
    return matrix_rank(diffs)
