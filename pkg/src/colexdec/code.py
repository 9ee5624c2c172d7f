"""CSS stabilizer semantics of the color code on the dual complex.

Qubits sit on dual 3-cells.  X-type generators act on all qubits around a
dual vertex; Z-type generators act on all qubits around a dual edge, with
one dependent Z generator per dual vertex thrown in for completeness.  An
X error is detected by the edge-type checks, a Z error by the vertex-type
checks, so a syndrome is a flag vector over dual edges plus one over dual
vertices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import gf2
from .cellcomplex import DualComplex

__all__ = [
    "ErrorSupport",
    "Syndrome",
    "StabilizerMatrices",
    "ResidualClass",
    "syndrome_of",
    "stabilizer_matrices",
    "code_dimension",
    "residual_class",
]


@dataclass(frozen=True, eq=False)
class ErrorSupport:
    """Pauli error given by its X and Z supports over the qubits."""

    x: np.ndarray
    z: np.ndarray

    @classmethod
    def empty(cls, n_qubits: int) -> "ErrorSupport":
        return cls(
            x=np.zeros(n_qubits, dtype=np.uint8),
            z=np.zeros(n_qubits, dtype=np.uint8),
        )

    @classmethod
    def from_qubits(cls, n_qubits: int, x=(), z=()) -> "ErrorSupport":
        e = cls.empty(n_qubits)
        for q in x:
            e.x[q] ^= 1
        for q in z:
            e.z[q] ^= 1
        return e

    def __xor__(self, other: "ErrorSupport") -> "ErrorSupport":
        return ErrorSupport(x=self.x ^ other.x, z=self.z ^ other.z)

    @property
    def weights(self) -> tuple[int, int]:
        return int(self.x.sum()), int(self.z.sum())


@dataclass(frozen=True, eq=False)
class Syndrome:
    """Violated checks: one flag per dual edge (X errors) and per dual vertex (Z errors)."""

    x_syndrome: np.ndarray
    z_syndrome: np.ndarray

    def equals(self, other: "Syndrome") -> bool:
        return np.array_equal(self.x_syndrome, other.x_syndrome) and np.array_equal(
            self.z_syndrome, other.z_syndrome
        )

    @property
    def is_zero(self) -> bool:
        return not (self.x_syndrome.any() or self.z_syndrome.any())


@dataclass(frozen=True, eq=False)
class StabilizerMatrices:
    """Generator supports as GF(2) matrices, one row per generator.

    ``sz`` holds the edge-type rows first, then the dependent vertex-cell
    rows (same supports as the X generators); ``n_edge_rows`` marks the
    split.
    """

    sx: np.ndarray
    sz: np.ndarray
    n_edge_rows: int


class ResidualClass(enum.Enum):
    SUCCESS = "success"
    LOGICAL_X = "logical_x"
    LOGICAL_Z = "logical_z"
    SYNDROME_MISMATCH = "syndrome_mismatch"


def syndrome_of(d: DualComplex, error: ErrorSupport) -> Syndrome:
    """Flags of all edge-type and vertex-type checks for the given error."""
    cx = d.complex
    n = d.n_qubits
    if error.x.shape[0] != n or error.z.shape[0] != n:
        raise ValueError(f"error supports must have length {n}")
    x_syn = (cx.cell_edge_matrix @ error.x.astype(np.int64)) & 1
    z_syn = (cx.cell_vertex_matrix @ error.z.astype(np.int64)) & 1
    return Syndrome(
        x_syndrome=x_syn.astype(np.uint8),
        z_syndrome=z_syn.astype(np.uint8),
    )


def stabilizer_matrices(d: DualComplex) -> StabilizerMatrices:
    """X generators per dual vertex; Z generators per dual edge plus dependents."""
    sx = d.complex.cell_vertex_matrix.copy()
    sz_edges = d.complex.cell_edge_matrix.copy()
    sz = np.vstack([sz_edges, sx])
    return StabilizerMatrices(sx=sx, sz=sz, n_edge_rows=sz_edges.shape[0])


def code_dimension(d: DualComplex, mats: StabilizerMatrices | None = None) -> int:
    """Number of logical qubits: physical qubits minus independent generators."""
    mats = mats if mats is not None else stabilizer_matrices(d)
    return d.n_qubits - gf2.rank(mats.sx) - gf2.rank(mats.sz)


def residual_class(
    d: DualComplex,
    actual: ErrorSupport,
    estimate: ErrorSupport,
    mats: StabilizerMatrices | None = None,
    sx_membership: gf2.Gf2Solver | None = None,
    sz_membership: gf2.Gf2Solver | None = None,
) -> ResidualClass:
    """Classify an estimate against the actual error.

    Mismatched syndromes are reported as such.  Otherwise the residual
    (actual XOR estimate) commutes with everything; it is a success exactly
    when both parts lie in the respective stabilizer rowspace.  When both
    sectors are logical the X sector is reported.

    The membership solvers, when given, must be factorizations of the
    transposed stabilizer matrices.
    """
    s_actual = syndrome_of(d, actual)
    s_estimate = syndrome_of(d, estimate)
    if not s_actual.equals(s_estimate):
        return ResidualClass.SYNDROME_MISMATCH

    residual = actual ^ estimate
    if mats is None and (sx_membership is None or sz_membership is None):
        mats = stabilizer_matrices(d)
    if sx_membership is not None:
        x_ok = sx_membership.solve(residual.x) is not None
    else:
        x_ok = gf2.in_rowspace(mats.sx, residual.x)
    if sz_membership is not None:
        z_ok = sz_membership.solve(residual.z) is not None
    else:
        z_ok = gf2.in_rowspace(mats.sz, residual.z)

    if x_ok and z_ok:
        return ResidualClass.SUCCESS
    if not x_ok:
        return ResidualClass.LOGICAL_X
    return ResidualClass.LOGICAL_Z
