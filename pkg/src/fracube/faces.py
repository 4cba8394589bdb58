"""Exact classification of the face sets F(v) = K intersect (K + v).

For a digit set D of order n, a labeled automaton on the 26 offsets
v in {-1,0,1}^3 \\ {0} encodes the faces: an edge u -> w labeled (d, d')
with d, d' in D exists when w = n*u + d' - d lands back in the offset set,
and F(u) is nonempty iff an infinite path starts at u.  Points of F(u) are
read off the first labels d along infinite paths, x = sum d_i / n^i.

Two label paths describe the same point iff every partial difference state
s_m = n*s_{m-1} + (d_m - e_m) stays inside {-1,0,1}^3 (the tail of the
difference series is bounded by 1 in sup norm).  Searching the product of
the live subautomaton with the 27 difference states therefore decides
"singleton or bigger" exactly; no floating point is involved anywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .core import Digit, DigitSet, cell_index, digit_from_cell
from .errors import NotSingleton, OutOfRange

Triple = tuple[int, int, int]

# Offsets encoded as (x+1) + 3(y+1) + 9(z+1); 13 is the zero vector.
ZERO_ENC = 13
OFFSET_ENCS: tuple[int, ...] = tuple(e for e in range(27) if e != ZERO_ENC)
OFFSETS: tuple[Triple, ...] = tuple(
    (e % 3 - 1, e // 3 % 3 - 1, e // 9 - 1) for e in OFFSET_ENCS
)
_IDX_OF_ENC = {e: i for i, e in enumerate(OFFSET_ENCS)}


def offset_enc(v: Triple) -> int:
    if len(v) != 3 or not all(c in (-1, 0, 1) for c in v) or v == (0, 0, 0):
        raise OutOfRange(f"{v} is not a nonzero offset in {{-1,0,1}}^3")
    return (v[0] + 1) + 3 * (v[1] + 1) + 9 * (v[2] + 1)


def offset_index(v: Triple) -> int:
    return _IDX_OF_ENC[offset_enc(v)]


def negate_index(idx: int) -> int:
    """Index of -v given the index of v."""
    return _IDX_OF_ENC[26 - OFFSET_ENCS[idx]]


class _Tables:
    """Static per-order tables shared by the automaton and the pipeline.

    compat[u_idx] lists the offsets w reachable from u in one step together
    with the cell mask and index shift realizing delta = w - n*u: the digit
    pairs (d, d+delta) are exactly the labels of the edge u -> w.
    """

    def __init__(self, n: int):
        self.n = n
        ncells = n ** 3
        self.ncells = ncells
        self.coords = [digit_from_cell(c, n) for c in range(ncells)]
        d = 2 * n - 1
        self.dwidth = d
        self.d3 = d ** 3

        compat = []
        for u in OFFSETS:
            row = []
            axes = [(u[k],) if u[k] else (-1, 0, 1) for k in range(3)]
            for w in product(*axes):
                assert w != (0, 0, 0)  # unreachable from a nonzero offset
                delta = tuple(w[k] - n * u[k] for k in range(3))
                vmask = 0
                for c, xyz in enumerate(self.coords):
                    if all(0 <= xyz[k] + delta[k] < n for k in range(3)):
                        vmask |= 1 << c
                shift = delta[0] + n * delta[1] + n * n * delta[2]
                row.append((_IDX_OF_ENC[offset_enc(w)], vmask, shift))
            compat.append(tuple(row))
        self.compat = tuple(compat)

        # next2[s_enc * d3 + diff_enc] -> next difference state, -1 = escaped
        next2 = [-1] * (27 * self.d3)
        for s_enc in range(27):
            s = (s_enc % 3 - 1, s_enc // 3 % 3 - 1, s_enc // 9 - 1)
            for diff_enc in range(self.d3):
                t = (diff_enc % d - (n - 1), diff_enc // d % d - (n - 1), diff_enc // (d * d) - (n - 1))
                nxt = tuple(n * s[k] + t[k] for k in range(3))
                if all(-1 <= c <= 1 for c in nxt):
                    next2[s_enc * self.d3 + diff_enc] = (nxt[0] + 1) + 3 * (nxt[1] + 1) + 9 * (nxt[2] + 1)
        self.next2 = next2

        # pair_off[a * ncells + b] = index of digit(a) - digit(b), 255 = far apart
        pair_off = bytearray([255]) * (ncells * ncells)
        for b, xyz in enumerate(self.coords):
            for idx, v in enumerate(OFFSETS):
                ax, ay, az = xyz[0] + v[0], xyz[1] + v[1], xyz[2] + v[2]
                if 0 <= ax < n and 0 <= ay < n and 0 <= az < n:
                    pair_off[(ax + n * ay + n * n * az) * ncells + b] = idx
        self.pair_off = bytes(pair_off)

    def diff_enc(self, a: int, b: int) -> int:
        """Encoded coordinate difference digit(a) - digit(b)."""
        da, db = self.coords[a], self.coords[b]
        d, n = self.dwidth, self.n
        return (da[0] - db[0] + n - 1) + d * (da[1] - db[1] + n - 1) + d * d * (da[2] - db[2] + n - 1)


@lru_cache(maxsize=8)
def tables_for_order(n: int) -> _Tables:
    return _Tables(n)


def _scc_live(succ: list[int]) -> int:
    """Bitmask of offsets with an infinite outgoing path.

    Tarjan's algorithm over the 26 offsets; a component is live when it
    contains a cycle (size > 1 or a self-loop) or reaches a live one.
    Components are emitted in reverse topological order, so one pass over
    the emission order settles reachability.
    """
    index = [-1] * 26
    low = [0] * 26
    on_stack = 0
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(26):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, stage = work.pop()
            if stage == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack |= 1 << node
            advanced = False
            w = succ[node]
            # iterate successors, resuming after the first `stage` bits
            emitted = 0
            while w:
                bit = w & -w
                child = bit.bit_length() - 1
                w ^= bit
                emitted += 1
                if emitted <= stage:
                    continue
                if index[child] == -1:
                    work.append((node, emitted))
                    work.append((child, 0))
                    advanced = True
                    break
                if on_stack >> child & 1:
                    if low[child] < low[node]:
                        low[node] = low[child]
            if advanced:
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    top = stack.pop()
                    on_stack &= ~(1 << top)
                    comp.append(top)
                    if top == node:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
    live = 0
    for comp in sccs:
        is_live = False
        if len(comp) > 1:
            is_live = True
        else:
            u = comp[0]
            if succ[u] >> u & 1 or succ[u] & live:
                is_live = True
        if not is_live:
            is_live = any(succ[u] & live for u in comp)
        if is_live:
            for u in comp:
                live |= 1 << u
    return live


def _escape_reachable(edge_lists, diffs, nlabels: int, start_idx: int, next2, d3: int) -> bool:
    """True iff two live label paths from the start offset can diverge."""
    start = (start_idx * 26 + start_idx) * 27 + ZERO_ENC
    seen = {start}
    todo = [(start_idx, start_idx, ZERO_ENC)]
    while todo:
        u1, u2, s = todo.pop()
        sbase = s * d3
        for v1, l1 in edge_lists[u1]:
            row = l1 * nlabels
            for v2, l2 in edge_lists[u2]:
                ns = next2[sbase + diffs[row + l2]]
                if ns < 0:
                    return True
                key = (v1 * 26 + v2) * 27 + ns
                if key not in seen:
                    seen.add(key)
                    todo.append((v1, v2, ns))
    return False


class FaceKind(enum.Enum):
    EMPTY = "empty"
    POINT = "point"
    MULTI = "multi"


@dataclass(frozen=True, eq=False)
class TriadicPoint:
    """Exact point with eventually periodic base-n coordinate expansions."""

    n: int
    preperiod: tuple[Digit, ...]
    period: tuple[Digit, ...]
    value: tuple[Fraction, Fraction, Fraction]

    @classmethod
    def from_digits(cls, n: int, preperiod, period) -> "TriadicPoint":
        pre = tuple(Digit(*d) for d in preperiod)
        per = tuple(Digit(*d) for d in period)
        if not per:
            raise ValueError("periodic part must be nonempty")
        p, q = len(pre), len(per)
        value = []
        for k in range(3):
            a = 0
            for d in pre:
                a = a * n + d[k]
            b = 0
            for d in per:
                b = b * n + d[k]
            value.append(Fraction(a * (n ** q - 1) + b, n ** p * (n ** q - 1)))
        return cls(n=n, preperiod=pre, period=per, value=tuple(value))

    def __eq__(self, other) -> bool:
        return isinstance(other, TriadicPoint) and self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.value) + ")"


@dataclass(frozen=True)
class FaceClass:
    kind: FaceKind
    point: TriadicPoint | None = None

    @property
    def is_empty(self) -> bool:
        return self.kind is FaceKind.EMPTY

    @property
    def is_point(self) -> bool:
        return self.kind is FaceKind.POINT

    @property
    def is_multi(self) -> bool:
        return self.kind is FaceKind.MULTI


class NeighborAutomaton:
    """Labeled offset graph of a digit set, with liveness flags.

    ``edges[u]`` holds (d, d', target) triples sorted by label; ``live``
    is the set of offsets that start an infinite path, i.e. have a
    nonempty face.
    """

    def __init__(self, digitset: DigitSet):
        self.digitset = digitset
        n = digitset.n
        code = digitset.code
        tables = tables_for_order(n)
        cells = digitset.cells()
        cell_label = {c: i for i, c in enumerate(cells)}

        # (v_idx, shift, mask of first labels) per offset, plus successor sets
        raw: list[list[tuple[int, int, int]]] = []
        succ = [0] * 26
        for u_idx, entries in enumerate(tables.compat):
            row = []
            for v_idx, vmask, shift in entries:
                m = code & vmask
                if m:
                    m &= (code >> shift) if shift >= 0 else (code << -shift)
                    if m:
                        row.append((v_idx, shift, m))
                        succ[u_idx] |= 1 << v_idx
            raw.append(row)
        self._live_mask = _scc_live(succ)

        edges: dict[Triple, tuple[tuple[Digit, Digit, Triple], ...]] = {}
        walk: list[tuple[tuple[int, int, int], ...]] = []
        elists: list[tuple[tuple[int, int], ...]] = []
        for u_idx, row in enumerate(raw):
            triples = []
            walk_row = []
            elist = []
            for v_idx, shift, amask in row:
                target = OFFSETS[v_idx]
                target_live = self._live_mask >> v_idx & 1
                m = amask
                while m:
                    low = m & -m
                    a = low.bit_length() - 1
                    m ^= low
                    b = a + shift  # d' = d + delta, valid by construction of vmask
                    triples.append((tables.coords[a], tables.coords[b], target))
                    if target_live:
                        walk_row.append((a, b, v_idx))
                        elist.append((v_idx, cell_label[a]))
            triples.sort(key=lambda t: (cell_index(t[0], n), cell_index(t[1], n)))
            walk_row.sort()
            edges[OFFSETS[u_idx]] = tuple(triples)
            walk.append(tuple(walk_row))
            elists.append(tuple(elist))
        self.edges = edges
        self._walk = walk
        self._edge_lists = elists
        nlab = len(cells)
        self._diffs = [tables.diff_enc(a, b) for a in cells for b in cells]
        self._nlabels = nlab
        self._tables = tables

    @property
    def live(self) -> frozenset[Triple]:
        return frozenset(OFFSETS[i] for i in range(26) if self._live_mask >> i & 1)

    def is_live(self, v: Triple) -> bool:
        return self._live_mask >> offset_index(v) & 1 == 1

    def dump_edges(self) -> str:
        """Plain-text edge list ``u -> v : (d,d')`` for inspection."""
        lines = []
        for u in OFFSETS:
            for d, dp, v in self.edges[u]:
                lines.append(f"{u} -> {v} : ({d},{dp})")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=4096)
def build_automaton(digitset: DigitSet) -> NeighborAutomaton:
    """Construct (and cache) the neighbor automaton of a digit set."""
    return NeighborAutomaton(digitset)


def _extract_point(auto: NeighborAutomaton, start_idx: int) -> TriadicPoint:
    """Walk lexicographically smallest live edges until an offset repeats."""
    n = auto.digitset.n
    seen_at: dict[int, int] = {}
    labels: list[Digit] = []
    u = start_idx
    while u not in seen_at:
        seen_at[u] = len(labels)
        a, _, v = auto._walk[u][0]
        labels.append(auto._tables.coords[a])
        u = v
    t = seen_at[u]
    return TriadicPoint.from_digits(n, labels[:t], labels[t:])


@lru_cache(maxsize=65536)
def classify_face(digitset: DigitSet, alpha: Triple) -> FaceClass:
    """Exact three-way classification of F(alpha): empty, singleton or bigger."""
    idx = offset_index(alpha)
    auto = build_automaton(digitset)
    if not auto._live_mask >> idx & 1:
        return FaceClass(FaceKind.EMPTY)
    if _escape_reachable(auto._edge_lists, auto._diffs, auto._nlabels, idx,
                         auto._tables.next2, auto._tables.d3):
        return FaceClass(FaceKind.MULTI)
    return FaceClass(FaceKind.POINT, _extract_point(auto, idx))


def face_point(digitset: DigitSet, alpha: Triple) -> TriadicPoint:
    """The unique point of a singleton face F(alpha)."""
    fc = classify_face(digitset, alpha)
    if not fc.is_point:
        raise NotSingleton(f"face {alpha} of {digitset} is {fc.kind.value}")
    return fc.point
