"""Independent brute-force checks for the exact face classification.

Two deliberately separate routes re-derive face facts from first principles:

* voxel iterates of the unit cube certify face *emptiness* (one-sided: the
  iterate contains the attractor, so disjoint closed cell unions prove the
  face empty, while overlap proves nothing);
* breadth-first enumeration of label paths, memoized by (offset pair,
  difference state), re-decides the full empty/one/many trichotomy without
  the liveness precomputation or early-exit search used by the main path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .core import DigitSet
from .errors import BudgetExceeded, DepthTooSmall
from .faces import OFFSETS, offset_enc
from . import faces

Triple = tuple[int, int, int]

DEFAULT_CELL_BUDGET = 2_000_000

# Paths of this length pass through more states than the pair automaton has,
# so the frontier provably stabilizes within the cap.
STABILIZATION_CAP = 26 * 26 * 27 + 1


@dataclass(frozen=True)
class VoxelSet:
    """Cells of the m-th subdivision iterate of the unit cube."""

    digitset: DigitSet
    depth: int
    cells: frozenset[Triple]

    def coarsen(self) -> frozenset[Triple]:
        """Cells at depth-1 resolution containing depth-level cells."""
        n = self.digitset.n
        return frozenset((x // n, y // n, z // n) for x, y, z in self.cells)

    def boundary_slab(self, axis: int, side: int) -> frozenset[Triple]:
        """Cells with the axis coordinate pinned to the grid boundary."""
        return _boundary_slabs(self)[axis, side]


@lru_cache(maxsize=8)
def _boundary_slabs(vox: VoxelSet) -> dict[tuple[int, int], frozenset[Triple]]:
    edge = vox.digitset.n ** vox.depth - 1
    slabs: dict[tuple[int, int], set[Triple]] = {
        (axis, side): set() for axis in range(3) for side in (0, edge)}
    for cell in vox.cells:
        for axis in range(3):
            if cell[axis] == 0:
                slabs[axis, 0].add(cell)
            elif cell[axis] == edge:
                slabs[axis, edge].add(cell)
    return {key: frozenset(val) for key, val in slabs.items()}


def voxelize(ds: DigitSet, depth: int, budget: int = DEFAULT_CELL_BUDGET) -> VoxelSet:
    """Union of all depth-digit subdivision cells of the digit set."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if len(ds) ** depth > budget:
        raise BudgetExceeded(f"{len(ds)}^{depth} cells exceed budget {budget}")
    cells: Iterable[Triple] = [(0, 0, 0)]
    scale = 1
    for _ in range(depth):
        cells = [
            (x + scale * d[0], y + scale * d[1], z + scale * d[2])
            for (x, y, z) in cells
            for d in ds.digits
        ]
        scale *= ds.n
    out = frozenset(cells)
    assert len(out) == len(ds) ** depth
    return VoxelSet(digitset=ds, depth=depth, cells=out)


class EmptinessCheck(enum.Enum):
    CERTIFIED_EMPTY = "certified_empty"
    UNKNOWN = "unknown"


def oracle_face_empty(ds: DigitSet, alpha: Triple, depth: int,
                      budget: int = DEFAULT_CELL_BUDGET,
                      vox: VoxelSet | None = None) -> EmptinessCheck:
    """Certify F(alpha) empty when the closed voxel regions do not touch.

    Closed cells c and c' of A_m and A_m + n^m*alpha can only intersect when
    c sits on the grid face pointed at by alpha and c' on the opposite one
    (the axis difference n^m*alpha_k +/- 1 forces c_k = 0, c'_k = n^m - 1),
    so only boundary slabs are compared, within distance 1 on the free axes.
    Pass ``vox`` to reuse a precomputed iterate of the same digit set.
    """
    offset_enc(alpha)  # validate
    if vox is None:
        vox = voxelize(ds, depth, budget=budget)
    elif vox.digitset != ds or vox.depth != depth:
        raise ValueError("precomputed voxel set does not match the request")
    edge = ds.n ** depth - 1
    free = [k for k in range(3) if alpha[k] == 0]
    near: set[Triple] | frozenset[Triple] | None = None
    far: set[Triple] | frozenset[Triple] | None = None
    for k in range(3):
        if alpha[k] == 0:
            continue
        near_slab = vox.boundary_slab(k, 0 if alpha[k] > 0 else edge)
        far_slab = vox.boundary_slab(k, edge if alpha[k] > 0 else 0)
        near = near_slab if near is None else near & near_slab
        far = far_slab if far is None else far & far_slab
    if not near or not far:
        return EmptinessCheck.CERTIFIED_EMPTY
    far_proj = {tuple(cell[k] for k in free) for cell in far}
    deltas = list(_neighbor_offsets(len(free)))
    for cell in near:
        proj = tuple(cell[k] for k in free)
        for d in deltas:
            if tuple(proj[k] + d[k] for k in range(len(free))) in far_proj:
                return EmptinessCheck.UNKNOWN
    return EmptinessCheck.CERTIFIED_EMPTY


def _neighbor_offsets(dim: int):
    if dim == 0:
        yield ()
        return
    for rest in _neighbor_offsets(dim - 1):
        for d in (-1, 0, 1):
            yield (d,) + rest


class FaceCardinality(enum.Enum):
    EMPTY = "empty"
    ONE = "one"
    AT_LEAST_TWO = "at_least_two"


def _label_edges(ds: DigitSet) -> dict[Triple, list[tuple[Triple, Triple]]]:
    """offset -> [(first label d, target offset)] by direct enumeration."""
    n = ds.n
    out: dict[Triple, list[tuple[Triple, Triple]]] = {u: [] for u in OFFSETS}
    offset_set = set(OFFSETS)
    for u in OFFSETS:
        for d in ds.digits:
            for dp in ds.digits:
                v = (n * u[0] + dp[0] - d[0], n * u[1] + dp[1] - d[1], n * u[2] + dp[2] - d[2])
                if v in offset_set:
                    out[u].append((tuple(d), v))
    return out


def _has_long_path(edges: dict[Triple, list[tuple[Triple, Triple]]], start: Triple, length: int) -> bool:
    """True iff some label path of the given length leaves ``start``."""
    frontier = {start}
    for _ in range(length):
        frontier = {v for u in frontier for _, v in edges[u]}
        if not frontier:
            return False
    return True


def oracle_face_cardinality(ds: DigitSet, alpha: Triple,
                            depth: int = STABILIZATION_CAP) -> FaceCardinality:
    """Re-decide #F(alpha) in {0, 1, >=2} by breadth-first path expansion.

    A path of 26 steps must revisit an offset, so faces are nonempty iff a
    26-step path exists.  Pairs of paths are expanded level by level with
    their difference state; a pair that escapes {-1,0,1}^3 and still admits
    26 more steps on both sides witnesses two distinct points.
    """
    offset_enc(alpha)  # validate
    n = ds.n
    edges = _label_edges(ds)
    if not _has_long_path(edges, alpha, 26):
        return FaceCardinality.EMPTY

    extendable = {u for u in OFFSETS if _has_long_path(edges, u, 26)}
    # pair states: (offset of path 1, offset of path 2, difference of partial sums)
    frontier: set[tuple[Triple, Triple, Triple]] = {(alpha, alpha, (0, 0, 0))}
    visited = set(frontier)
    for _ in range(depth):
        if not frontier:
            return FaceCardinality.ONE
        nxt = set()
        for u1, u2, s in frontier:
            for d1, v1 in edges[u1]:
                if v1 not in extendable:
                    continue
                for d2, v2 in edges[u2]:
                    if v2 not in extendable:
                        continue
                    ns = tuple(n * s[k] + d1[k] - d2[k] for k in range(3))
                    if any(c < -1 or c > 1 for c in ns):
                        return FaceCardinality.AT_LEAST_TWO
                    state = (v1, v2, ns)
                    if state not in visited:
                        visited.add(state)
                        nxt.add(state)
        frontier = nxt
    raise DepthTooSmall(f"pair frontier still growing after {depth} levels")


def export_cells(vox: VoxelSet) -> str:
    """Raw cell list, one ``x y z`` triple per line, sorted."""
    return "\n".join(f"{x} {y} {z}" for x, y, z in sorted(vox.cells)) + "\n"


_CUBE_CORNERS = (
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
    (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
)
# Two triangles per cube face, indices into the corner list above.
_CUBE_TRIANGLES = (
    (0, 2, 1), (0, 3, 2),  # bottom
    (4, 5, 6), (4, 6, 7),  # top
    (0, 1, 5), (0, 5, 4),  # front
    (1, 2, 6), (1, 6, 5),  # right
    (2, 3, 7), (2, 7, 6),  # back
    (3, 0, 4), (3, 4, 7),  # left
)


def export_obj(vox: VoxelSet) -> str:
    """Wavefront-style triangle mesh: one cube (8 vertices, 12 faces) per cell.

    Every exported cell contains a point of the attractor within
    sqrt(3) * n^-depth, so the mesh over-approximates it tightly.
    """
    scale = vox.digitset.n ** vox.depth
    lines = [f"# voxel mesh of {vox.digitset} at depth {vox.depth}: {len(vox.cells)} cells"]
    index = 0
    for cx, cy, cz in sorted(vox.cells):
        for ox, oy, oz in _CUBE_CORNERS:
            lines.append(f"v {(cx + ox) / scale:.9f} {(cy + oy) / scale:.9f} {(cz + oz) / scale:.9f}")
        for a, b, c in _CUBE_TRIANGLES:
            lines.append(f"f {index + a + 1} {index + b + 1} {index + c + 1}")
        index += 8
    return "\n".join(lines) + "\n"


def export_mesh(vox: VoxelSet, fmt: str) -> str:
    if fmt == "cells":
        return export_cells(vox)
    if fmt == "obj":
        return export_obj(vox)
    raise ValueError(f"unknown mesh format {fmt!r}")


def faces_agree(ds: DigitSet, alpha: Triple, voxel_depth: int | None = None) -> bool:
    """Cross-validate the exact classifier against both oracle routes."""
    exact = faces.classify_face(ds, alpha)
    card = oracle_face_cardinality(ds, alpha)
    expected = {
        FaceCardinality.EMPTY: faces.FaceKind.EMPTY,
        FaceCardinality.ONE: faces.FaceKind.POINT,
        FaceCardinality.AT_LEAST_TWO: faces.FaceKind.MULTI,
    }[card]
    if exact.kind is not expected:
        return False
    if voxel_depth is not None:
        if oracle_face_empty(ds, alpha, voxel_depth) is EmptinessCheck.CERTIFIED_EMPTY:
            return exact.kind is faces.FaceKind.EMPTY
    return True
