import json

import numpy as np
import pytest

from colexdec.cellcomplex import (
    COLOR_PAIRS,
    COLORS,
    Color,
    build_bcc_colex,
    colex_from_dict,
    colex_to_dict,
    complement_pair,
    dual,
    first_betti_number,
    load_colex,
    save_colex,
    validate_colex,
)


def face_pair_counts(colex):
    counts = {}
    for colors in colex.face_colors:
        key = tuple(sorted(colors))
        counts[key] = counts.get(key, 0) + 1
    return counts


def test_color_labels_round_trip():
    for c in COLORS:
        assert Color.from_label(c.label) is c
    with pytest.raises(ValueError):
        Color.from_label("q")


def test_complement_pair():
    assert set(complement_pair(Color.R, Color.G)) == {Color.B, Color.Y}
    assert set(complement_pair(Color.B, Color.Y)) == {Color.R, Color.G}
    with pytest.raises(ValueError):
        complement_pair(Color.R, Color.R)


@pytest.mark.parametrize("L", [1, 3, 0, -2])
def test_builder_rejects_bad_sizes(L):
    with pytest.raises(ValueError):
        build_bcc_colex(L)


def test_l2_counts(colex2):
    assert colex2.complex.counts == (96, 192, 112, 16)
    assert colex2.complex.euler_characteristic == 0


def test_l4_counts():
    cx = build_bcc_colex(4)
    assert cx.complex.counts == (768, 1536, 896, 128)
    assert cx.complex.euler_characteristic == 0
    assert validate_colex(cx).ok


def test_edge_count_is_twice_vertex_count(colex2):
    v, e, _, _ = colex2.complex.counts
    assert e == 2 * v


def test_l2_is_a_valid_colex(colex2):
    report = validate_colex(colex2)
    assert report.ok, report.summary()


def test_cells_split_evenly_by_color(colex2):
    for c in COLORS:
        assert len(colex2.cells_of_color(c)) == 4


def test_face_pair_census(colex2):
    counts = face_pair_counts(colex2)
    assert counts[(Color.R, Color.G)] == 24
    assert counts[(Color.B, Color.Y)] == 24
    for pair in ((Color.R, Color.B), (Color.R, Color.Y), (Color.G, Color.B), (Color.G, Color.Y)):
        assert counts[pair] == 16


def test_each_vertex_touches_all_four_colors(colex2):
    for v in range(colex2.complex.n_vertices):
        cells = colex2.complex.vertex_cells[v]
        assert len(cells) == 4
        assert {colex2.cell_colors[c] for c in cells} == set(COLORS)


def test_faces_alternate_two_colors(colex2):
    for colors in colex2.face_colors:
        assert len(colors) == 2


def test_first_betti_number_of_torus(colex2):
    assert first_betti_number(colex2.complex) == 3


class TestDual:
    def test_counts_reverse(self, colex2, dual2):
        v, e, f, c = colex2.complex.counts
        assert dual2.complex.counts == (c, f, e, v)
        assert dual2.complex.euler_characteristic == 0

    def test_ids_carry_over(self, colex2, dual2):
        assert dual2.n_qubits == colex2.complex.n_vertices
        for cell, color in enumerate(colex2.cell_colors):
            assert dual2.vertex_colors[cell] is color

    def test_cells_are_tetrahedra(self, dual2):
        cx = dual2.complex
        for q in range(dual2.n_qubits):
            assert len(cx.cell_faces[q]) == 4
            assert len(cx.cell_vertices[q]) == 4
            assert len(cx.cell_edges[q]) == 6
            vertex_colors = {dual2.vertex_colors[v] for v in cx.cell_vertices[q]}
            assert vertex_colors == set(COLORS)

    def test_edge_colors_match_endpoint_colors(self, dual2):
        for e, (u, v) in enumerate(dual2.complex.edge_vertices):
            assert dual2.edge_colors[e] == frozenset(
                {dual2.vertex_colors[u], dual2.vertex_colors[v]}
            )

    def test_face_colors_partition(self, dual2):
        per_color = {c: 0 for c in COLORS}
        for c in dual2.face_colors:
            per_color[c] += 1
        assert per_color == {c: 48 for c in COLORS}


class TestSerialization:
    def test_dict_round_trip(self, colex2):
        data = colex_to_dict(colex2)
        assert data["format"] == "colex-lattice"
        back = colex_from_dict(json.loads(json.dumps(data)))
        assert back.complex.counts == colex2.complex.counts
        assert back.cell_colors == colex2.cell_colors
        assert back.complex.edge_vertices == colex2.complex.edge_vertices

    def test_file_round_trip(self, colex2, tmp_path):
        path = tmp_path / "lat.json"
        save_colex(colex2, str(path))
        back = load_colex(str(path))
        assert back.complex.counts == colex2.complex.counts
        assert validate_colex(back).ok

    def test_loader_rejects_unknown_format(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"format": "nonsense"}))
        with pytest.raises(ValueError):
            load_colex(str(path))


def test_incidence_matrices_agree_with_lists(dual2):
    cx = dual2.complex
    m = cx.cell_edge_matrix
    assert m.shape == (len(cx.edge_vertices), dual2.n_qubits)
    q = 7
    col = np.nonzero(m[:, q])[0]
    assert sorted(col) == sorted(cx.cell_edges[q])
