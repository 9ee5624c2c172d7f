import numpy as np
import pytest

from colexdec import gf2
from colexdec.cellcomplex import COLOR_PAIRS, COLORS, Color, complement_pair
from colexdec.minors import edge_boundary, face_boundary, minor_c, minor_cc


@pytest.fixture(scope="module")
def minors_c(dual2):
    return {c: minor_c(dual2, c) for c in COLORS}


@pytest.fixture(scope="module")
def minors_cc(dual2):
    return {pair: minor_cc(dual2, *pair) for pair in COLOR_PAIRS}


def test_single_color_minor_counts(minors_c):
    for m in minors_c.values():
        assert m.counts == (12, 56, 48, 4)


def test_pair_minor_counts(minors_cc):
    assert minors_cc[(Color.R, Color.G)].counts == (8, 24, 24, 8)
    assert minors_cc[(Color.B, Color.Y)].counts == (8, 24, 24, 8)
    for pair in ((Color.R, Color.B), (Color.R, Color.Y), (Color.G, Color.B), (Color.G, Color.Y)):
        assert minors_cc[pair].counts == (8, 16, 16, 8)


def test_pair_minor_rejects_equal_colors(dual2):
    with pytest.raises(ValueError):
        minor_cc(dual2, Color.R, Color.R)


def test_pair_minor_color_bookkeeping(minors_cc, dual2):
    m = minors_cc[(Color.R, Color.G)]
    assert m.deleted == (Color.R, Color.G)
    assert m.kept == (Color.B, Color.Y)
    kept = frozenset(m.kept)
    for v in m.vertex_ids:
        assert dual2.vertex_colors[v] in kept
    for e in m.edge_ids:
        assert dual2.edge_colors[e] == kept


def test_single_color_minor_faces_partition(minors_c, dual2):
    for c, m in minors_c.items():
        assert sorted(m.face_ids) == [
            f for f in range(len(dual2.face_colors)) if dual2.face_colors[f] is c
        ]


def test_cell_projection_sends_each_cell_to_one_face(minors_c, dual2):
    for c, m in minors_c.items():
        for q in range(dual2.n_qubits):
            f = m.cell_projection[q]
            assert f in dual2.complex.cell_faces[q]
            assert dual2.face_colors[f] is c
            assert m.project_support([q]) == frozenset({f})


def test_pair_projection_sends_each_cell_to_one_edge(minors_cc, dual2):
    for pair, m in minors_cc.items():
        kept = frozenset(m.kept)
        for q in range(dual2.n_qubits):
            e = m.cell_projection[q]
            assert e in dual2.complex.cell_edges[q]
            assert dual2.edge_colors[e] == kept


def test_project_support_is_mod_two(minors_c):
    m = minors_c[Color.R]
    assert m.project_support([]) == frozenset()
    assert m.project_support([3, 3]) == frozenset()
    a = m.project_support([3])
    b = m.project_support([5])
    assert m.project_support([3, 5]) == a ^ b


def test_merged_cell_boundaries_cancel(minors_c):
    """Every face of a single-color minor sits between exactly two merged cells."""
    for m in minors_c.values():
        seen: dict[int, int] = {}
        for faces in m.cell_faces:
            for f in faces:
                seen[f] = seen.get(f, 0) + 1
        assert set(seen.values()) == {2}
        assert sorted(seen) == sorted(m.face_ids)


def test_merged_cell_stabilizer_rank(minors_c):
    for m in minors_c.values():
        face_index = {f: i for i, f in enumerate(m.face_ids)}
        rows = np.zeros((len(m.cell_faces), len(m.face_ids)), dtype=np.uint8)
        for i, faces in enumerate(m.cell_faces):
            for f in faces:
                rows[i, face_index[f]] ^= 1
        assert gf2.rank(rows) == 3


def test_pair_minor_faces_are_cycles(minors_cc, dual2):
    """Each face's edge ring hits every vertex an even number of times."""
    for pair, m in minors_cc.items():
        for ring in m.face_edges:
            degree: dict[int, int] = {}
            for e in ring:
                for v in dual2.complex.edge_vertices[e]:
                    degree[v] = degree.get(v, 0) + 1
            assert all(d % 2 == 0 for d in degree.values())


def test_face_boundary_matches_color_projections(minors_c, dual2):
    rng = np.random.default_rng(0)
    for _ in range(20):
        support = list(np.nonzero(rng.integers(0, 2, size=dual2.n_qubits))[0])
        expected = face_boundary(dual2, support)
        union: set[int] = set()
        for m in minors_c.values():
            part = m.project_support(support)
            assert not (union & part)
            union |= part
        assert frozenset(union) == expected


def test_edge_boundary_matches_pair_projections(minors_cc, dual2):
    rng = np.random.default_rng(1)
    for _ in range(20):
        support = list(np.nonzero(rng.integers(0, 2, size=dual2.n_qubits))[0])
        expected = edge_boundary(dual2, support)
        union: set[int] = set()
        for m in minors_cc.values():
            part = m.project_support(support)
            assert not (union & part)
            union |= part
        assert frozenset(union) == expected
