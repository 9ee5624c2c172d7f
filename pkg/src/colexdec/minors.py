"""Minor complexes of the dual lattice and the cell projection maps.

Deleting one color class of dual vertices (with every cell touching them)
leaves a complex hosting a 3D toric code whose qubits are the surviving
faces; deleting two color classes leaves one whose qubits are the surviving
edges.  Ids of surviving vertices, edges, and faces are preserved from the
dual complex, so restricting a syndrome is plain indexing.

Projection sends each dual 3-cell (a tetrahedron) to its unique face of the
deleted color, or to its unique edge colored by the surviving pair.  The
face/edge boundary of a set of 3-cells is its mod-2 image under all
projections at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .cellcomplex import COLORS, Color, DualComplex, complement_pair

__all__ = [
    "MinorComplexC",
    "MinorComplexCC",
    "minor_c",
    "minor_cc",
    "face_boundary",
    "edge_boundary",
]


def _xor_accumulate(items: Iterable[int]) -> frozenset[int]:
    out: set[int] = set()
    for x in items:
        if x in out:
            out.discard(x)
        else:
            out.add(x)
    return frozenset(out)


@dataclass(frozen=True)
class MinorComplexC:
    """Minor obtained by deleting one color class of dual vertices.

    Surviving cells keep their dual ids.  Faces are exactly the dual faces
    of the deleted color; each deleted vertex becomes a merged 3-cell whose
    boundary collects the projected faces of the tetrahedra around it.
    """

    color: Color
    vertex_ids: tuple[int, ...]
    edge_ids: tuple[int, ...]
    face_ids: tuple[int, ...]
    face_edges: tuple[tuple[int, ...], ...]
    cell_vertex_ids: tuple[int, ...]
    cell_faces: tuple[tuple[int, ...], ...]
    cell_projection: tuple[int, ...]

    @property
    def counts(self) -> tuple[int, int, int, int]:
        """(vertices, edges, faces, 3-cells)."""
        return (
            len(self.vertex_ids),
            len(self.edge_ids),
            len(self.face_ids),
            len(self.cell_vertex_ids),
        )

    def project_support(self, cells: Iterable[int]) -> frozenset[int]:
        """Mod-2 image of a set of dual 3-cells under the face projection."""
        return _xor_accumulate(self.cell_projection[c] for c in cells)


@dataclass(frozen=True)
class MinorComplexCC:
    """Minor obtained by deleting two color classes of dual vertices.

    Only edges colored by the surviving pair remain.  Each dual edge colored
    by the deleted pair generates a face whose boundary is the cycle of
    projected edges of the tetrahedra around it; each deleted vertex
    becomes a 3-cell, stored as the set of faces around it.
    """

    deleted: tuple[Color, Color]
    kept: tuple[Color, Color]
    vertex_ids: tuple[int, ...]
    edge_ids: tuple[int, ...]
    face_ids: tuple[int, ...]
    face_edges: tuple[tuple[int, ...], ...]
    cell_vertex_ids: tuple[int, ...]
    cell_faces: tuple[tuple[int, ...], ...]
    cell_projection: tuple[int, ...]

    @property
    def counts(self) -> tuple[int, int, int, int]:
        """(vertices, edges, faces, 3-cells)."""
        return (
            len(self.vertex_ids),
            len(self.edge_ids),
            len(self.face_ids),
            len(self.cell_vertex_ids),
        )

    def project_support(self, cells: Iterable[int]) -> frozenset[int]:
        """Mod-2 image of a set of dual 3-cells under the edge projection."""
        return _xor_accumulate(self.cell_projection[c] for c in cells)


def minor_c(d: DualComplex, color: Color) -> MinorComplexC:
    """Delete the given color class of dual vertices and merge around them."""
    cx = d.complex
    n_v, n_e, n_f, n_c = cx.counts

    vertex_ids = tuple(v for v in range(n_v) if d.vertex_colors[v] != color)
    edge_ids = tuple(e for e in range(n_e) if color not in d.edge_colors[e])
    face_ids = tuple(f for f in range(n_f) if d.face_colors[f] == color)

    edge_keep = frozenset(edge_ids)
    face_edges = []
    for f in face_ids:
        edges = cx.face_edges[f]
        if not edge_keep.issuperset(edges):
            raise ValueError(f"face {f} has an edge touching the deleted color")
        face_edges.append(edges)

    projection = []
    for cell in range(n_c):
        matches = [f for f in cx.cell_faces[cell] if d.face_colors[f] == color]
        if len(matches) != 1:
            raise ValueError(f"3-cell {cell} has {len(matches)} faces of color {color.label}")
        projection.append(matches[0])

    cell_vertex_ids = tuple(v for v in range(n_v) if d.vertex_colors[v] == color)
    cell_faces = []
    for v in cell_vertex_ids:
        around = cx.vertex_cells[v]
        faces = sorted(projection[cell] for cell in around)
        if len(set(faces)) != len(faces):
            raise ValueError(f"two 3-cells at vertex {v} share a projected face")
        cell_faces.append(tuple(faces))

    return MinorComplexC(
        color=color,
        vertex_ids=vertex_ids,
        edge_ids=edge_ids,
        face_ids=tuple(face_ids),
        face_edges=tuple(face_edges),
        cell_vertex_ids=cell_vertex_ids,
        cell_faces=tuple(cell_faces),
        cell_projection=tuple(projection),
    )


def minor_cc(d: DualComplex, c1: Color, c2: Color) -> MinorComplexCC:
    """Delete two color classes of dual vertices; order of colors is irrelevant."""
    if c1 == c2:
        raise ValueError("the two deleted colors must be distinct")
    deleted = tuple(sorted((c1, c2)))
    kept = complement_pair(*deleted)
    deleted_set = frozenset(deleted)
    kept_set = frozenset(kept)

    cx = d.complex
    n_v, n_e, n_f, n_c = cx.counts

    vertex_ids = tuple(v for v in range(n_v) if d.vertex_colors[v] in kept_set)
    edge_ids = tuple(e for e in range(n_e) if d.edge_colors[e] == kept_set)

    projection = []
    for cell in range(n_c):
        matches = [e for e in cx.cell_edges[cell] if d.edge_colors[e] == kept_set]
        if len(matches) != 1:
            raise ValueError(
                f"3-cell {cell} has {len(matches)} edges colored by the kept pair"
            )
        projection.append(matches[0])

    # A face is generated by each dual edge colored with the deleted pair;
    # walking the primal face under that edge orders the tetrahedra around
    # it, so their projected edges come out as a closed cycle.
    face_ids = tuple(e for e in range(n_e) if d.edge_colors[e] == deleted_set)
    face_edges = []
    for e in face_ids:
        ring = d.primal.complex.face_vertices[e]
        cycle = tuple(projection[q] for q in ring)
        if len(set(cycle)) != len(cycle):
            raise ValueError(f"two 3-cells around edge {e} share a projected edge")
        face_edges.append(cycle)

    cell_vertex_ids = tuple(v for v in range(n_v) if d.vertex_colors[v] in deleted_set)
    cell_faces = []
    for v in cell_vertex_ids:
        faces = tuple(
            sorted(e for e in cx.vertex_edges[v] if d.edge_colors[e] == deleted_set)
        )
        cell_faces.append(faces)

    return MinorComplexCC(
        deleted=deleted,
        kept=kept,
        vertex_ids=vertex_ids,
        edge_ids=edge_ids,
        face_ids=face_ids,
        face_edges=tuple(face_edges),
        cell_vertex_ids=cell_vertex_ids,
        cell_faces=tuple(cell_faces),
        cell_projection=tuple(projection),
    )


def face_boundary(d: DualComplex, support: Iterable[int]) -> frozenset[int]:
    """Mod-2 sum of the faces of the given dual 3-cells.

    Equals the union over all four colors of the projected support, since a
    tetrahedron has exactly one face of each color.
    """
    cx = d.complex
    out: set[int] = set()
    for cell in support:
        for f in cx.cell_faces[cell]:
            if f in out:
                out.discard(f)
            else:
                out.add(f)
    return frozenset(out)


def edge_boundary(d: DualComplex, support: Iterable[int]) -> frozenset[int]:
    """Mod-2 sum of the edges of the given dual 3-cells.

    Equals the union over all six color pairs of the projected support, and
    coincides with the X-type syndrome of the support as an X error.
    """
    cx = d.complex
    out: set[int] = set()
    for cell in support:
        for e in cx.cell_edges[cell]:
            if e in out:
                out.discard(e)
            else:
                out.add(e)
    return frozenset(out)
