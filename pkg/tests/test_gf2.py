import numpy as np
import pytest

from colexdec import gf2


def brute_rank(m: np.ndarray) -> int:
    """Rank over GF(2) by enumerating the row span."""
    span = {0}
    width = m.shape[1]
    for row in m % 2:
        word = int("".join(str(int(b)) for b in row), 2) if width else 0
        span |= {word ^ s for s in span}
    return len(span).bit_length() - 1


def test_as_gf2_reduces_mod_two():
    a = np.array([[2, 3], [4, 5]])
    out = gf2.as_gf2(a)
    assert out.dtype == np.uint8
    assert np.array_equal(out, [[0, 1], [0, 1]])


def test_rank_known_matrices():
    assert gf2.rank(np.eye(4, dtype=np.uint8)) == 4
    assert gf2.rank(np.zeros((3, 5), dtype=np.uint8)) == 0
    # two equal rows collapse
    m = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 1]], dtype=np.uint8)
    assert gf2.rank(m) == 2


@pytest.mark.parametrize("seed", range(6))
def test_rank_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, 2, size=(7, 9), dtype=np.uint8)
    assert gf2.rank(m) == brute_rank(m)


def test_row_echelon_preserves_rowspace():
    rng = np.random.default_rng(3)
    m = rng.integers(0, 2, size=(6, 8), dtype=np.uint8)
    ech, pivots = gf2.row_echelon(m)
    assert gf2.rank(ech) == gf2.rank(m) == len(pivots)
    for row in ech[: len(pivots)]:
        assert gf2.in_rowspace(m, row)


@pytest.mark.parametrize("seed", range(8))
def test_solve_round_trip(seed):
    rng = np.random.default_rng(100 + seed)
    m = rng.integers(0, 2, size=(10, 7), dtype=np.uint8)
    x = rng.integers(0, 2, size=7, dtype=np.uint8)
    b = (m.astype(np.int64) @ x) & 1
    got = gf2.solve(m, b)
    assert got is not None
    assert np.array_equal((m.astype(np.int64) @ got) & 1, b)


def test_solve_reports_inconsistent_system():
    m = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    b = np.array([1, 0], dtype=np.uint8)
    assert gf2.solve(m, b) is None


def test_nullspace_annihilates_and_spans():
    rng = np.random.default_rng(17)
    m = rng.integers(0, 2, size=(5, 9), dtype=np.uint8)
    ns = gf2.nullspace(m)
    assert ns.shape[0] == 9 - gf2.rank(m)
    assert not ((m.astype(np.int64) @ ns.T.astype(np.int64)) & 1).any()
    assert gf2.rank(ns) == ns.shape[0]


def test_in_rowspace():
    m = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    assert gf2.in_rowspace(m, np.array([1, 0, 1], dtype=np.uint8))
    assert not gf2.in_rowspace(m, np.array([1, 0, 0], dtype=np.uint8))


class TestGf2Solver:
    def test_matches_free_functions(self):
        rng = np.random.default_rng(5)
        m = rng.integers(0, 2, size=(8, 6), dtype=np.uint8)
        solver = gf2.Gf2Solver(m)
        assert solver.rank == gf2.rank(m)
        assert solver.nullspace().shape == gf2.nullspace(m).shape
        for _ in range(10):
            x = rng.integers(0, 2, size=6, dtype=np.uint8)
            b = (m.astype(np.int64) @ x) & 1
            got = solver.solve(b)
            assert got is not None
            assert np.array_equal((m.astype(np.int64) @ got) & 1, b)

    def test_solve_is_linear_on_solvable_inputs(self):
        rng = np.random.default_rng(11)
        m = rng.integers(0, 2, size=(9, 5), dtype=np.uint8)
        solver = gf2.Gf2Solver(m)
        x1 = rng.integers(0, 2, size=5, dtype=np.uint8)
        x2 = rng.integers(0, 2, size=5, dtype=np.uint8)
        b1 = (m.astype(np.int64) @ x1) & 1
        b2 = (m.astype(np.int64) @ x2) & 1
        lhs = solver.solve((b1 ^ b2).astype(np.uint8))
        rhs = solver.solve(b1) ^ solver.solve(b2)
        assert np.array_equal((m.astype(np.int64) @ lhs) & 1, (m.astype(np.int64) @ rhs) & 1)

    def test_consistent_flags_out_of_image(self):
        m = np.array([[1, 0], [0, 0]], dtype=np.uint8)
        solver = gf2.Gf2Solver(m)
        assert solver.consistent(np.array([1, 0], dtype=np.uint8))
        assert not solver.consistent(np.array([0, 1], dtype=np.uint8))
        assert solver.solve(np.array([0, 1], dtype=np.uint8)) is None

    def test_membership_via_transposed_matrix(self):
        rows = np.array([[1, 1, 0, 0], [0, 0, 1, 1]], dtype=np.uint8)
        member = gf2.Gf2Solver(rows.T.copy())
        assert member.solve(np.array([1, 1, 1, 1], dtype=np.uint8)) is not None
        assert member.solve(np.array([1, 0, 0, 0], dtype=np.uint8)) is None
