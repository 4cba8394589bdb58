"""Digit sets on the n x n x n grid and the 48 symmetries of the cube.

A digit set selects N of the n^3 subcubes kept at each subdivision step of
the unit cube; it is stored both as a sorted tuple of coordinate triples and
as an n^3-bit occupancy code (bit c set iff the cell with index c is kept).
Cell indices run x-fastest: c = x + n*y + n^2*z.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import DuplicateDigit, OutOfRange, ParseError

MIN_ORDER = 2
MAX_ORDER = 5


class Digit(NamedTuple):
    x: int
    y: int
    z: int

    def __repr__(self) -> str:
        return f"({self.x},{self.y},{self.z})"


def cell_index(d: Digit, n: int) -> int:
    """Bijection Digit <-> {0, ..., n^3 - 1}, x-fastest."""
    return d[0] + n * d[1] + n * n * d[2]


def digit_from_cell(c: int, n: int) -> Digit:
    """Inverse of :func:`cell_index`."""
    return Digit(c % n, (c // n) % n, c // (n * n))


def _check_order(n: int) -> None:
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise OutOfRange(f"order must be in [{MIN_ORDER}, {MAX_ORDER}], got {n}")


@dataclass(frozen=True)
class DigitSet:
    """Immutable digit set of order ``n`` with occupancy code ``code``."""

    n: int
    digits: tuple[Digit, ...]
    code: int

    @classmethod
    def from_digits(cls, digits: Iterable[tuple[int, int, int]], n: int = 3) -> "DigitSet":
        _check_order(n)
        seen: dict[int, Digit] = {}
        for raw in digits:
            d = Digit(*raw)
            if not all(0 <= c < n for c in d):
                raise OutOfRange(f"digit {d} out of range for order {n}")
            c = cell_index(d, n)
            if c in seen:
                raise DuplicateDigit(f"digit {d} listed twice")
            seen[c] = d
        if not seen:
            raise ParseError("digit set must contain at least one digit")
        cells = sorted(seen)
        code = 0
        for c in cells:
            code |= 1 << c
        return cls(n=n, digits=tuple(seen[c] for c in cells), code=code)

    @classmethod
    def from_code(cls, code: int, n: int = 3) -> "DigitSet":
        _check_order(n)
        if code <= 0 or code >> n ** 3:
            raise OutOfRange(f"occupancy code {code:#x} invalid for order {n}")
        digits = tuple(digit_from_cell(c, n) for c in range(n ** 3) if code >> c & 1)
        return cls(n=n, digits=digits, code=code)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def cells(self) -> tuple[int, ...]:
        return tuple(cell_index(d, self.n) for d in self.digits)

    def render_compact(self) -> str:
        """Canonical text form: underscore-joined xyz strings, sorted."""
        return "_".join(f"{d.x}{d.y}{d.z}" for d in self.digits)

    def render_braced(self) -> str:
        """Brace-and-tuple text form, e.g. ``{(0,2,0), (1,0,1)}``."""
        return "{" + ", ".join(f"({d.x},{d.y},{d.z})" for d in self.digits) + "}"

    def __str__(self) -> str:
        return self.render_compact()


_TUPLE_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_digitset(text: str, n: int = 3) -> DigitSet:
    """Parse either compact (``020_101_...``) or braced (``{(0,2,0), ...}``) form.

    Input order is irrelevant; the result is sorted by cell index.
    """
    _check_order(n)
    s = text.strip()
    if not s:
        raise ParseError("empty digit-set literal")
    if "(" in s or "{" in s:
        body = s.strip()
        if body.startswith("{"):
            if not body.endswith("}"):
                raise ParseError("unbalanced braces in digit-set literal")
            body = body[1:-1]
        triples = _TUPLE_RE.findall(body)
        residue = _TUPLE_RE.sub("", body).replace(",", "").strip()
        if not triples or residue:
            raise ParseError(f"malformed tuple list: {text!r}")
        return DigitSet.from_digits([tuple(map(int, t)) for t in triples], n=n)
    digits = []
    for token in s.split("_"):
        if len(token) != 3 or not token.isdigit():
            raise ParseError(f"malformed digit token {token!r}")
        digits.append(tuple(int(ch) for ch in token))
    return DigitSet.from_digits(digits, n=n)


@dataclass(frozen=True)
class Isometry:
    """Signed coordinate permutation: d[i] -> flip_i(d[perm[i]]).

    ``flips[i]`` sends coordinate c to (n-1)-c after the permutation; the
    same map acts on offsets in {-1,0,1}^3 by negation instead.
    """

    perm: tuple[int, int, int]
    flips: tuple[bool, bool, bool]

    def apply_digit(self, d: Digit, n: int) -> Digit:
        return Digit(*((n - 1 - d[p]) if f else d[p] for p, f in zip(self.perm, self.flips)))

    def apply_offset(self, v: tuple[int, int, int]) -> tuple[int, int, int]:
        return tuple((-v[p]) if f else v[p] for p, f in zip(self.perm, self.flips))

    def apply_point(self, point):
        """Affine action on [0,1]^3 (works on any numeric coordinates)."""
        return tuple((1 - point[p]) if f else point[p] for p, f in zip(self.perm, self.flips))

    def compose(self, other: "Isometry") -> "Isometry":
        """Return self o other (apply ``other`` first)."""
        perm = tuple(other.perm[p] for p in self.perm)
        flips = tuple(f ^ other.flips[p] for p, f in zip(self.perm, self.flips))
        return Isometry(perm, flips)

    def inverse(self) -> "Isometry":
        inv_perm = [0, 0, 0]
        for i, p in enumerate(self.perm):
            inv_perm[p] = i
        flips = tuple(self.flips[inv_perm[i]] for i in range(3))
        return Isometry(tuple(inv_perm), flips)

    @property
    def is_identity(self) -> bool:
        return self.perm == (0, 1, 2) and not any(self.flips)


# Fixed, deterministic order: permutations lexicographic, then flip bits.
CUBE_GROUP: tuple[Isometry, ...] = tuple(
    Isometry(perm, flips)
    for perm in itertools.permutations((0, 1, 2))
    for flips in itertools.product((False, True), repeat=3)
)

IDENTITY = CUBE_GROUP[0]


def apply_isometry(g: Isometry, ds: DigitSet) -> DigitSet:
    """Image of a digit set under one cube symmetry."""
    return DigitSet.from_digits((g.apply_digit(d, ds.n) for d in ds.digits), n=ds.n)


@lru_cache(maxsize=8)
def _cell_permutations(n: int) -> list[list[int]]:
    """For each group element, the induced permutation of cell indices."""
    tables = []
    for g in CUBE_GROUP:
        tables.append([cell_index(g.apply_digit(digit_from_cell(c, n), n), n) for c in range(n ** 3)])
    return tables


def transform_code(g_index: int, code: int, n: int) -> int:
    """Apply CUBE_GROUP[g_index] to an occupancy code."""
    table = _cell_permutations(n)[g_index]
    out = 0
    while code:
        low = code & -code
        out |= 1 << table[low.bit_length() - 1]
        code ^= low
    return out


@dataclass(frozen=True)
class CanonicalForm:
    """Orbit minimum of a digit set under the 48 cube symmetries."""

    canonical: DigitSet
    orbit_size: int
    stabilizer_size: int
    witness: Isometry

    def __post_init__(self) -> None:
        assert self.orbit_size * self.stabilizer_size == len(CUBE_GROUP)


def canonical_code(code: int, n: int) -> int:
    """Minimum occupancy code over the 48 images (hot-path helper)."""
    tables = _cell_permutations(n)
    best = code
    for g_index in range(1, 48):
        table = tables[g_index]
        rest = code
        img = 0
        while rest:
            low = rest & -rest
            img |= 1 << table[low.bit_length() - 1]
            rest ^= low
        if img < best:
            best = img
    return best


def canonical_form(ds: DigitSet) -> CanonicalForm:
    """Canonical representative, orbit size, stabilizer size and a witness."""
    images = [transform_code(i, ds.code, ds.n) for i in range(len(CUBE_GROUP))]
    best = min(images)
    orbit = len(set(images))
    stabilizer = sum(1 for img in images if img == ds.code)
    witness = CUBE_GROUP[images.index(best)]
    return CanonicalForm(
        canonical=DigitSet.from_code(best, n=ds.n),
        orbit_size=orbit,
        stabilizer_size=stabilizer,
        witness=witness,
    )
