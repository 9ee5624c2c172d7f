import numpy as np
import pytest

from colexdec import gf2
from colexdec.code import (
    ErrorSupport,
    ResidualClass,
    code_dimension,
    residual_class,
    stabilizer_matrices,
    syndrome_of,
)


def find_logical_x(dual2, mats2) -> np.ndarray:
    """A zero-syndrome X support outside the X stabilizer span."""
    candidates = gf2.nullspace(dual2.complex.cell_edge_matrix)
    for row in candidates:
        if not gf2.in_rowspace(mats2.sx, row):
            return row.astype(np.uint8)
    raise AssertionError("no X logical found")


def find_logical_z(dual2, mats2) -> np.ndarray:
    candidates = gf2.nullspace(dual2.complex.cell_vertex_matrix)
    for row in candidates:
        if not gf2.in_rowspace(mats2.sz, row):
            return row.astype(np.uint8)
    raise AssertionError("no Z logical found")


def test_error_support_xor_and_weights():
    a = ErrorSupport.from_qubits(5, x=[0, 1], z=[4])
    b = ErrorSupport.from_qubits(5, x=[1, 2])
    c = a ^ b
    assert c.weights == (2, 1)
    assert sorted(np.nonzero(c.x)[0]) == [0, 2]


def test_syndrome_shapes(dual2):
    s = syndrome_of(dual2, ErrorSupport.empty(dual2.n_qubits))
    assert s.x_syndrome.shape == (112,)
    assert s.z_syndrome.shape == (16,)
    assert s.is_zero


def test_syndrome_rejects_wrong_length(dual2):
    with pytest.raises(ValueError):
        syndrome_of(dual2, ErrorSupport.empty(7))


def test_single_x_error_flags_its_cell_edges(dual2):
    q = 11
    s = syndrome_of(dual2, ErrorSupport.from_qubits(dual2.n_qubits, x=[q]))
    assert sorted(np.nonzero(s.x_syndrome)[0]) == sorted(dual2.complex.cell_edges[q])
    assert not s.z_syndrome.any()


def test_single_z_error_flags_its_cell_corners(dual2):
    q = 42
    s = syndrome_of(dual2, ErrorSupport.from_qubits(dual2.n_qubits, z=[q]))
    assert sorted(np.nonzero(s.z_syndrome)[0]) == sorted(dual2.complex.cell_vertices[q])
    assert not s.x_syndrome.any()


def test_syndrome_is_linear(dual2):
    rng = np.random.default_rng(2)
    n = dual2.n_qubits
    e1 = ErrorSupport(x=rng.integers(0, 2, n, dtype=np.uint8), z=rng.integers(0, 2, n, dtype=np.uint8))
    e2 = ErrorSupport(x=rng.integers(0, 2, n, dtype=np.uint8), z=rng.integers(0, 2, n, dtype=np.uint8))
    s12 = syndrome_of(dual2, e1 ^ e2)
    s1 = syndrome_of(dual2, e1)
    s2 = syndrome_of(dual2, e2)
    assert np.array_equal(s12.x_syndrome, s1.x_syndrome ^ s2.x_syndrome)
    assert np.array_equal(s12.z_syndrome, s1.z_syndrome ^ s2.z_syndrome)


def test_stabilizer_matrix_shapes_and_ranks(mats2):
    assert mats2.sx.shape == (16, 96)
    assert mats2.sz.shape == (112 + 16, 96)
    assert mats2.n_edge_rows == 112
    assert gf2.rank(mats2.sx) == 13
    assert gf2.rank(mats2.sz) == 74


def test_css_orthogonality(mats2):
    overlap = (mats2.sx.astype(np.int64) @ mats2.sz.T.astype(np.int64)) & 1
    assert not overlap.any()


def test_stabilizers_have_zero_syndrome(dual2, mats2):
    for row in mats2.sx[:4]:
        assert syndrome_of(dual2, ErrorSupport(x=row.copy(), z=row * 0)).is_zero
    for row in mats2.sz[:4]:
        assert syndrome_of(dual2, ErrorSupport(x=row * 0, z=row.copy())).is_zero


def test_code_dimension(dual2, mats2):
    assert code_dimension(dual2, mats2) == 9


def test_all_ones_x_support_is_a_stabilizer(mats2):
    assert gf2.in_rowspace(mats2.sx, np.ones(96, dtype=np.uint8))


class TestResidualClass:
    def test_exact_estimate_is_success(self, dual2):
        e = ErrorSupport.from_qubits(dual2.n_qubits, x=[3], z=[8])
        assert residual_class(dual2, e, e) is ResidualClass.SUCCESS

    def test_stabilizer_residual_is_success(self, dual2, mats2, memberships2):
        sx_m, sz_m = memberships2
        actual = ErrorSupport(x=mats2.sx[2].copy(), z=np.zeros(96, dtype=np.uint8))
        estimate = ErrorSupport.empty(dual2.n_qubits)
        got = residual_class(dual2, actual, estimate, mats2, sx_m, sz_m)
        assert got is ResidualClass.SUCCESS

    def test_mismatched_syndrome(self, dual2, mats2):
        actual = ErrorSupport.from_qubits(dual2.n_qubits, x=[0])
        estimate = ErrorSupport.empty(dual2.n_qubits)
        assert residual_class(dual2, actual, estimate, mats2) is ResidualClass.SYNDROME_MISMATCH

    def test_logical_x_residual(self, dual2, mats2):
        lx = find_logical_x(dual2, mats2)
        actual = ErrorSupport(x=lx, z=np.zeros(96, dtype=np.uint8))
        estimate = ErrorSupport.empty(dual2.n_qubits)
        assert residual_class(dual2, actual, estimate, mats2) is ResidualClass.LOGICAL_X

    def test_logical_z_residual(self, dual2, mats2):
        lz = find_logical_z(dual2, mats2)
        actual = ErrorSupport(x=np.zeros(96, dtype=np.uint8), z=lz)
        estimate = ErrorSupport.empty(dual2.n_qubits)
        assert residual_class(dual2, actual, estimate, mats2) is ResidualClass.LOGICAL_Z

    def test_double_logical_reports_x_sector(self, dual2, mats2):
        actual = ErrorSupport(x=find_logical_x(dual2, mats2), z=find_logical_z(dual2, mats2))
        estimate = ErrorSupport.empty(dual2.n_qubits)
        assert residual_class(dual2, actual, estimate, mats2) is ResidualClass.LOGICAL_X

    def test_prefactored_membership_agrees(self, dual2, mats2, memberships2):
        sx_m, sz_m = memberships2
        rng = np.random.default_rng(9)
        n = dual2.n_qubits
        for _ in range(10):
            actual = ErrorSupport(
                x=rng.integers(0, 2, n, dtype=np.uint8),
                z=rng.integers(0, 2, n, dtype=np.uint8),
            )
            estimate = ErrorSupport(
                x=rng.integers(0, 2, n, dtype=np.uint8),
                z=rng.integers(0, 2, n, dtype=np.uint8),
            )
            fast = residual_class(dual2, actual, estimate, mats2, sx_m, sz_m)
            slow = residual_class(dual2, actual, estimate, mats2)
            assert fast is slow
