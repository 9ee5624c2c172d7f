"""Closed 3D cell complexes on a torus, 4-colored lattices, and their duals.

A lattice here is a cell complex whose 3-cells can be 4-colored so that
cells sharing a face get different colors, with every vertex 4-valent and
touching cells of all four colors.  Faces inherit the color pair of their
two cells and edges take the single color missing from their three cells.

The dual complex swaps dimensions: qubits live on dual 3-cells (which are
tetrahedra), X checks on dual vertices, Z checks on dual edges.  Index
identity is preserved throughout: the i-cells of the dual are indexed by
the (3-i)-cells of the primal complex, in order.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import gf2

__all__ = [
    "Color",
    "COLORS",
    "COLOR_PAIRS",
    "complement_pair",
    "CellComplex",
    "Colex",
    "DualComplex",
    "Violation",
    "ValidationReport",
    "build_bcc_colex",
    "validate_colex",
    "dual",
    "first_betti_number",
    "colex_to_dict",
    "colex_from_dict",
    "save_colex",
    "load_colex",
]


class Color(enum.IntEnum):
    """3-cell colors, canonical order r < g < b < y."""

    R = 0
    G = 1
    B = 2
    Y = 3

    @property
    def label(self) -> str:
        return "rgby"[int(self)]

    @classmethod
    def from_label(cls, label: str) -> "Color":
        try:
            return cls("rgby".index(label))
        except ValueError:
            raise ValueError(f"unknown color label {label!r}") from None


COLORS: tuple[Color, ...] = tuple(Color)
COLOR_PAIRS: tuple[tuple[Color, Color], ...] = tuple(itertools.combinations(COLORS, 2))


def complement_pair(c1: Color, c2: Color) -> tuple[Color, Color]:
    """The two colors not in {c1, c2}, in canonical order."""
    if c1 == c2:
        raise ValueError("colors must be distinct")
    rest = tuple(c for c in COLORS if c not in (c1, c2))
    return rest


@dataclass(frozen=True)
class CellComplex:
    """A 3D cell complex stored as indexed incidence lists.

    Primary data: edges as vertex pairs, faces as aligned cyclic vertex and
    edge lists (edge i of a face joins cyclic vertices i and i+1), 3-cells
    as face id lists.  Everything else is derived and cached.
    """

    n_vertices: int
    edge_vertices: tuple[tuple[int, int], ...]
    face_vertices: tuple[tuple[int, ...], ...]
    face_edges: tuple[tuple[int, ...], ...]
    cell_faces: tuple[tuple[int, ...], ...]

    @property
    def counts(self) -> tuple[int, int, int, int]:
        """(vertices, edges, faces, 3-cells)."""
        return (
            self.n_vertices,
            len(self.edge_vertices),
            len(self.face_vertices),
            len(self.cell_faces),
        )

    @property
    def euler_characteristic(self) -> int:
        v, e, f, c = self.counts
        return v - e + f - c

    @cached_property
    def vertex_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for e, (u, v) in enumerate(self.edge_vertices):
            out[u].append(e)
            if v != u:
                out[v].append(e)
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def edge_faces(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(len(self.edge_vertices))]
        for f, edges in enumerate(self.face_edges):
            for e in set(edges):
                out[e].append(f)
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def face_cells(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(len(self.face_vertices))]
        for c, faces in enumerate(self.cell_faces):
            for f in set(faces):
                out[f].append(c)
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def cell_edges(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for faces in self.cell_faces:
            edges: set[int] = set()
            for f in faces:
                edges.update(self.face_edges[f])
            out.append(tuple(sorted(edges)))
        return tuple(out)

    @cached_property
    def cell_vertices(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for faces in self.cell_faces:
            verts: set[int] = set()
            for f in faces:
                verts.update(self.face_vertices[f])
            out.append(tuple(sorted(verts)))
        return tuple(out)

    @cached_property
    def edge_cells(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(len(self.edge_vertices))]
        for c, edges in enumerate(self.cell_edges):
            for e in edges:
                out[e].append(c)
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def vertex_cells(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for c, verts in enumerate(self.cell_vertices):
            for v in verts:
                out[v].append(c)
        return tuple(tuple(sorted(x)) for x in out)

    # Boundary operators as GF(2) incidence matrices.

    @cached_property
    def boundary_1(self) -> np.ndarray:
        """Vertices x edges incidence."""
        v, e, _, _ = self.counts
        m = np.zeros((v, e), dtype=np.uint8)
        for j, (a, b) in enumerate(self.edge_vertices):
            m[a, j] ^= 1
            m[b, j] ^= 1
        return m

    @cached_property
    def boundary_2(self) -> np.ndarray:
        """Edges x faces incidence."""
        _, e, f, _ = self.counts
        m = np.zeros((e, f), dtype=np.uint8)
        for j, edges in enumerate(self.face_edges):
            for a in edges:
                m[a, j] ^= 1
        return m

    @cached_property
    def boundary_3(self) -> np.ndarray:
        """Faces x 3-cells incidence."""
        _, _, f, c = self.counts
        m = np.zeros((f, c), dtype=np.uint8)
        for j, faces in enumerate(self.cell_faces):
            for a in faces:
                m[a, j] ^= 1
        return m

    @cached_property
    def cell_edge_matrix(self) -> np.ndarray:
        """Edges x 3-cells incidence (edge belongs to cell)."""
        _, e, _, c = self.counts
        m = np.zeros((e, c), dtype=np.uint8)
        for j, edges in enumerate(self.cell_edges):
            for a in edges:
                m[a, j] = 1
        return m

    @cached_property
    def cell_vertex_matrix(self) -> np.ndarray:
        """Vertices x 3-cells incidence (vertex belongs to cell)."""
        v, _, _, c = self.counts
        m = np.zeros((v, c), dtype=np.uint8)
        for j, verts in enumerate(self.cell_vertices):
            for a in verts:
                m[a, j] = 1
        return m


@dataclass(frozen=True)
class Colex:
    """A cell complex together with a 4-coloring of its 3-cells."""

    complex: CellComplex
    cell_colors: tuple[Color, ...]
    vertex_coords: tuple[tuple[int, int, int], ...] | None = None

    @cached_property
    def face_colors(self) -> tuple[frozenset[Color], ...]:
        """Color set of each face's incident cells (size 2 when valid)."""
        return tuple(
            frozenset(self.cell_colors[c] for c in cells)
            for cells in self.complex.face_cells
        )

    @cached_property
    def edge_colors(self) -> tuple[Color | None, ...]:
        """The one color absent from an edge's incident cells, else None."""
        out: list[Color | None] = []
        for cells in self.complex.edge_cells:
            missing = set(COLORS) - {self.cell_colors[c] for c in cells}
            out.append(missing.pop() if len(missing) == 1 else None)
        return tuple(out)

    def cells_of_color(self, color: Color) -> tuple[int, ...]:
        return tuple(
            i for i, c in enumerate(self.cell_colors) if c == color
        )


@dataclass(frozen=True)
class DualComplex:
    """Dual of a valid colex.

    i-cells are indexed by the (3-i)-cells of the primal complex, in order,
    so ids carry over both ways: dual vertex i is primal 3-cell i, dual edge
    j is primal face j, dual face k is primal edge k, dual 3-cell m is
    primal vertex m.  Every dual 3-cell is a tetrahedron whose vertices
    carry the four colors.
    """

    complex: CellComplex
    primal: Colex
    vertex_colors: tuple[Color, ...]
    edge_colors: tuple[frozenset[Color], ...]
    face_colors: tuple[Color, ...]

    @property
    def n_qubits(self) -> int:
        """Qubits sit on dual 3-cells (primal vertices)."""
        return self.complex.counts[3]


@dataclass(frozen=True)
class Violation:
    kind: str
    dim: int
    cell_id: int
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(
            f"[{v.kind}] dim={v.dim} id={v.cell_id}: {v.message}"
            for v in self.violations
        )


def _is_single_cycle(
    edge_ids: Sequence[int], edge_vertices: Sequence[tuple[int, int]]
) -> bool:
    """True when the edges form one closed cycle with every vertex degree 2."""
    if len(edge_ids) < 2:
        return False
    degree: dict[int, int] = {}
    adjacency: dict[int, list[int]] = {}
    for e in edge_ids:
        u, v = edge_vertices[e]
        if u == v:
            return False
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    if any(d != 2 for d in degree.values()):
        return False
    if len(degree) != len(edge_ids):
        return False
    # connectivity of the cycle graph
    start = next(iter(adjacency))
    seen = {start}
    stack = [start]
    while stack:
        cur = stack.pop()
        for nxt in adjacency[cur]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(degree)


def validate_colex(colex: Colex) -> ValidationReport:
    """Check the structural and coloring invariants of a colex.

    Returns a report listing every violated invariant with the offending
    cell id; an empty report means the colex is valid.
    """
    cx = colex.complex
    v, e, f, c = cx.counts
    violations: list[Violation] = []

    if len(colex.cell_colors) != c:
        violations.append(
            Violation("color-count", 3, -1, f"{len(colex.cell_colors)} colors for {c} cells")
        )
        return ValidationReport(violations)

    for i, (a, b) in enumerate(cx.edge_vertices):
        if a == b or not (0 <= a < v and 0 <= b < v):
            violations.append(
                Violation("edge-endpoints", 1, i, f"endpoints ({a}, {b}) invalid")
            )

    for i, edges in enumerate(cx.face_edges):
        if not _is_single_cycle(edges, cx.edge_vertices):
            violations.append(
                Violation("face-cycle", 2, i, "edge list is not a single closed cycle")
            )

    for i, cells in enumerate(cx.face_cells):
        if len(cells) != 2:
            violations.append(
                Violation("face-cell-count", 2, i, f"face lies in {len(cells)} cells, expected 2")
            )
        elif colex.cell_colors[cells[0]] == colex.cell_colors[cells[1]]:
            violations.append(
                Violation(
                    "face-color-clash", 2, i,
                    f"cells {cells[0]} and {cells[1]} share color "
                    f"{colex.cell_colors[cells[0]].label}",
                )
            )

    for i, edges in enumerate(cx.vertex_edges):
        if len(edges) != 4:
            violations.append(
                Violation("vertex-degree", 0, i, f"degree {len(edges)}, expected 4")
            )

    for i, cells in enumerate(cx.vertex_cells):
        if len(cells) != 4:
            violations.append(
                Violation("vertex-cell-count", 0, i, f"lies in {len(cells)} cells, expected 4")
            )
        colors = {colex.cell_colors[j] for j in cells}
        if len(colors) != 4:
            violations.append(
                Violation(
                    "vertex-colors", 0, i,
                    f"incident cells carry colors {sorted(col.label for col in colors)}",
                )
            )

    for i, cells in enumerate(cx.edge_cells):
        if len(cells) != 3:
            violations.append(
                Violation("edge-cell-count", 1, i, f"lies in {len(cells)} cells, expected 3")
            )
        elif colex.edge_colors[i] is None:
            violations.append(
                Violation("edge-color", 1, i, "incident cells do not leave one missing color")
            )

    if e != 2 * v:
        violations.append(
            Violation("edge-count", 1, -1, f"E = {e}, expected 2V = {2 * v}")
        )
    if cx.euler_characteristic != 0:
        violations.append(
            Violation("euler", 3, -1, f"Euler characteristic {cx.euler_characteristic}, expected 0")
        )

    return ValidationReport(violations)


def dual(colex: Colex) -> DualComplex:
    """Build the dual complex of a valid colex.

    Raises ValueError when validation fails.  Dual faces are triangles (one
    per primal edge, bounded by the three primal faces at that edge) and
    dual 3-cells are tetrahedra (one per primal vertex).
    """
    report = validate_colex(colex)
    if not report.ok:
        raise ValueError("invalid colex:\n" + report.summary())

    cx = colex.complex
    v, e, f, c = cx.counts

    dual_edge_vertices = tuple(
        (cells[0], cells[1]) for cells in cx.face_cells
    )

    dual_face_vertices: list[tuple[int, ...]] = []
    dual_face_edges: list[tuple[int, ...]] = []
    for i in range(e):
        cells = cx.edge_cells[i]
        by_pair: dict[frozenset[int], int] = {}
        for fc in cx.edge_faces[i]:
            pair = frozenset(cx.face_cells[fc])
            if pair in by_pair:
                raise ValueError(f"edge {i}: two faces between the same cell pair")
            by_pair[pair] = fc
        c0, c1, c2 = cells
        try:
            cycle_edges = (
                by_pair[frozenset((c0, c1))],
                by_pair[frozenset((c1, c2))],
                by_pair[frozenset((c2, c0))],
            )
        except KeyError:
            raise ValueError(f"edge {i}: cells around it are not pairwise adjacent") from None
        dual_face_vertices.append((c0, c1, c2))
        dual_face_edges.append(cycle_edges)

    dual_cell_faces = tuple(cx.vertex_edges[m] for m in range(v))

    dual_cx = CellComplex(
        n_vertices=c,
        edge_vertices=dual_edge_vertices,
        face_vertices=tuple(dual_face_vertices),
        face_edges=tuple(dual_face_edges),
        cell_faces=dual_cell_faces,
    )

    edge_colors = colex.face_colors
    face_colors = tuple(col for col in colex.edge_colors if col is not None)
    if len(face_colors) != e:
        raise ValueError("edge coloring incomplete")

    return DualComplex(
        complex=dual_cx,
        primal=colex,
        vertex_colors=colex.cell_colors,
        edge_colors=edge_colors,
        face_colors=face_colors,
    )


def first_betti_number(cx: CellComplex) -> int:
    """dim of the first GF(2) homology group: cycles modulo face boundaries."""
    e = cx.counts[1]
    return e - gf2.rank(cx.boundary_1) - gf2.rank(cx.boundary_2)


# ---------------------------------------------------------------------------
# Generator: periodic bitruncated cubic honeycomb (truncated octahedra on two
# interpenetrating cubic sublattices), the canonical 4-colorable lattice.
# ---------------------------------------------------------------------------


def _cycle_sorted(points: list[tuple[int, int, int]], normal) -> list[tuple[int, int, int]]:
    """Order coplanar points into a cycle by angle around their centroid."""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    ref = np.array([1.0, 0.0, 0.0])
    if abs(float(np.dot(ref, n))) > 0.9:
        ref = np.array([0.0, 1.0, 0.0])
    u = ref - np.dot(ref, n) * n
    u = u / np.linalg.norm(u)
    w = np.cross(n, u)
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    rel = pts - centroid
    angles = np.arctan2(rel @ w, rel @ u)
    order = np.argsort(angles)
    return [points[i] for i in order]


def _truncated_octahedron() -> tuple[list[tuple[int, int, int]], list[tuple[int, ...]]]:
    """Vertex offsets and cyclically ordered faces of a truncated octahedron.

    Vertices are the 24 permutations of (0, +-1, +-2); faces are 6 squares
    (one per axis direction) and 8 hexagons (one per octant).
    """
    offsets: set[tuple[int, int, int]] = set()
    for perm in itertools.permutations((0, 1, 2)):
        for s1 in (1, -1):
            for s2 in (1, -1):
                signs = {0: 1, 1: s1, 2: s2}
                offsets.add(tuple(x * signs[x] for x in perm))
    offs = sorted(offsets)
    index = {off: i for i, off in enumerate(offs)}

    faces: list[tuple[int, ...]] = []
    for axis in range(3):
        for s in (2, -2):
            pts = [o for o in offs if o[axis] == s]
            normal = tuple(s if a == axis else 0 for a in range(3))
            cyc = _cycle_sorted(pts, normal)
            faces.append(tuple(index[p] for p in cyc))
    for sx in (1, -1):
        for sy in (1, -1):
            for sz in (1, -1):
                pts = [o for o in offs if sx * o[0] + sy * o[1] + sz * o[2] == 3]
                cyc = _cycle_sorted(pts, (sx, sy, sz))
                faces.append(tuple(index[p] for p in cyc))
    return offs, faces


def build_bcc_colex(L: int) -> Colex:
    """Periodic L x L x L lattice of truncated octahedra as a 4-colored colex.

    Cells sit on two interpenetrating cubic sublattices (cubic constant 4,
    offset (2,2,2)); square faces join cells within a sublattice, hexagons
    join cells across sublattices.  Colors come from sublattice and
    coordinate parity, which only closes up around the torus for even L.

    Counts: cells 2L^3, vertices 12L^3, edges 24L^3, faces 14L^3.
    """
    if not isinstance(L, int) or L < 2 or L % 2 != 0:
        raise ValueError("L must be an even integer >= 2")

    period = 4 * L
    offsets, template_faces = _truncated_octahedron()

    vertex_ids: dict[tuple[int, int, int], int] = {}
    coords: list[tuple[int, int, int]] = []

    def vertex_id(p: tuple[int, int, int]) -> int:
        i = vertex_ids.get(p)
        if i is None:
            i = len(coords)
            vertex_ids[p] = i
            coords.append(p)
        return i

    face_ids: dict[frozenset[int], int] = {}
    face_vertex_cycles: list[tuple[int, ...]] = []
    cell_faces: list[tuple[int, ...]] = []
    cell_colors: list[Color] = []

    sublattices = (
        ((0, 0, 0), (Color.R, Color.G)),
        ((2, 2, 2), (Color.B, Color.Y)),
    )
    for base, parity_colors in sublattices:
        for i, j, k in itertools.product(range(L), repeat=3):
            center = (4 * i + base[0], 4 * j + base[1], 4 * k + base[2])
            color = parity_colors[(i + j + k) % 2]
            vids = [
                vertex_id(tuple((center[a] + off[a]) % period for a in range(3)))
                for off in offsets
            ]
            fids = []
            for cyc in template_faces:
                vcyc = tuple(vids[t] for t in cyc)
                key = frozenset(vcyc)
                fi = face_ids.get(key)
                if fi is None:
                    fi = len(face_vertex_cycles)
                    face_ids[key] = fi
                    face_vertex_cycles.append(vcyc)
                fids.append(fi)
            cell_faces.append(tuple(fids))
            cell_colors.append(color)

    edge_ids: dict[tuple[int, int], int] = {}
    edge_list: list[tuple[int, int]] = []
    face_edge_cycles: list[tuple[int, ...]] = []
    for vcyc in face_vertex_cycles:
        ecyc = []
        m = len(vcyc)
        for a in range(m):
            u, w = vcyc[a], vcyc[(a + 1) % m]
            key = (u, w) if u < w else (w, u)
            ei = edge_ids.get(key)
            if ei is None:
                ei = len(edge_list)
                edge_ids[key] = ei
                edge_list.append(key)
            ecyc.append(ei)
        face_edge_cycles.append(tuple(ecyc))

    cx = CellComplex(
        n_vertices=len(coords),
        edge_vertices=tuple(edge_list),
        face_vertices=tuple(face_vertex_cycles),
        face_edges=tuple(face_edge_cycles),
        cell_faces=tuple(cell_faces),
    )
    return Colex(complex=cx, cell_colors=tuple(cell_colors), vertex_coords=tuple(coords))


# ---------------------------------------------------------------------------
# JSON lattice interchange
# ---------------------------------------------------------------------------

FORMAT_NAME = "colex-lattice"
FORMAT_VERSION = 1


def colex_to_dict(colex: Colex) -> dict:
    """Serializable description of a colex (vertex cycles per face)."""
    cx = colex.complex
    data = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "n_vertices": cx.n_vertices,
        "edges": [list(e) for e in cx.edge_vertices],
        "faces": [list(f) for f in cx.face_vertices],
        "cells": [list(c) for c in cx.cell_faces],
        "cell_colors": [c.label for c in colex.cell_colors],
    }
    if colex.vertex_coords is not None:
        data["vertex_coords"] = [list(p) for p in colex.vertex_coords]
    return data


def colex_from_dict(data: dict) -> Colex:
    """Rebuild a colex from its serialized form; malformed input raises ValueError."""
    if data.get("format") != FORMAT_NAME:
        raise ValueError(f"unrecognized format {data.get('format')!r}")
    if data.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported version {data.get('version')!r}")
    try:
        n_vertices = int(data["n_vertices"])
        edges = tuple((int(a), int(b)) for a, b in data["edges"])
        faces = tuple(tuple(int(x) for x in f) for f in data["faces"])
        cells = tuple(tuple(int(x) for x in c) for c in data["cells"])
        colors = tuple(Color.from_label(s) for s in data["cell_colors"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed lattice data: {exc}") from exc

    edge_index = {}
    for i, (a, b) in enumerate(edges):
        edge_index[(a, b) if a < b else (b, a)] = i
    face_edges = []
    for f, vcyc in enumerate(faces):
        ecyc = []
        m = len(vcyc)
        for a in range(m):
            u, w = vcyc[a], vcyc[(a + 1) % m]
            key = (u, w) if u < w else (w, u)
            if key not in edge_index:
                raise ValueError(f"face {f} uses an edge {key} not in the edge list")
            ecyc.append(edge_index[key])
        face_edges.append(tuple(ecyc))

    coords = None
    if "vertex_coords" in data:
        coords = tuple(tuple(int(x) for x in p) for p in data["vertex_coords"])

    cx = CellComplex(
        n_vertices=n_vertices,
        edge_vertices=edges,
        face_vertices=faces,
        face_edges=tuple(face_edges),
        cell_faces=cells,
    )
    return Colex(complex=cx, cell_colors=colors, vertex_coords=coords)


def save_colex(colex: Colex, path: str, indent: int | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(colex_to_dict(colex), fh, indent=indent)
        fh.write("\n")


def load_colex(path: str) -> Colex:
    with open(path, "r", encoding="utf-8") as fh:
        return colex_from_dict(json.load(fh))
