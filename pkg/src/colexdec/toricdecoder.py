"""Component decoders for the 3D toric codes living on minor complexes.

Two instance shapes: surface decoding (qubits on faces, checks on edges,
errors are face sets whose edge boundary must match the syndrome) and
string decoding (qubits on edges, checks on vertices, errors are edge sets
whose endpoints must match the flagged vertices).

Three decoder kinds share one interface.  The exact decoder is globally
optimal but partial: it refuses instances beyond its configured caps with
a distinct error, never silently degrading.  The algebraic and greedy
decoders scale further without optimality guarantees.  Every estimate
returned by any kind reproduces its input syndrome exactly.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import gf2
from .cellcomplex import DualComplex
from .minors import MinorComplexC, MinorComplexCC

__all__ = [
    "DecoderKind",
    "DecoderCaps",
    "DEFAULT_CAPS",
    "InvalidSyndromeError",
    "DecoderRefusalError",
    "ToricXInstance",
    "ToricZInstance",
    "decode_toric_x",
    "decode_toric_z",
]


class DecoderKind(enum.Enum):
    """Selects the component decoding strategy."""

    EXACT_MIN_WEIGHT = "exact"
    GF2_ANY_SOLUTION = "gf2"
    GREEDY_MATCH = "greedy"

    @classmethod
    def from_name(cls, name: str) -> "DecoderKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown decoder kind {name!r}")


@dataclass(frozen=True)
class DecoderCaps:
    """Size limits for the exact decoder; past them it refuses the instance.

    max_matching_defects caps the flagged-vertex count for exhaustive
    pairing; max_surface_weight caps the weight of an accepted surface
    estimate; max_surface_nullspace caps the solution-space dimension the
    surface search will enumerate.
    """

    max_matching_defects: int = 12
    max_surface_weight: int = 6
    max_surface_nullspace: int = 16


DEFAULT_CAPS = DecoderCaps()


class InvalidSyndromeError(ValueError):
    """The syndrome is not produced by any error on this instance."""


class DecoderRefusalError(RuntimeError):
    """The instance exceeds the exact decoder's configured caps."""


class ToricXInstance:
    """Surface decoding instance built from a one-color-deleted minor.

    Qubits are the minor's faces, checks its edges.  Local column/row order
    follows the minor's id order; estimates are reported as global face ids.
    """

    def __init__(self, minor: MinorComplexC) -> None:
        self.minor = minor
        self.face_ids = minor.face_ids
        self.edge_ids = minor.edge_ids
        self.face_index = {f: i for i, f in enumerate(minor.face_ids)}
        self.edge_index = {e: i for i, e in enumerate(minor.edge_ids)}
        h = np.zeros((len(minor.edge_ids), len(minor.face_ids)), dtype=np.uint8)
        for j, edges in enumerate(minor.face_edges):
            for e in edges:
                h[self.edge_index[e], j] ^= 1
        if h.size and (h.sum(axis=0) < 3).any():
            raise ValueError("every face must keep at least 3 distinct edges")
        self.check_matrix = h

    @property
    def n_qubits(self) -> int:
        return len(self.face_ids)

    @property
    def n_checks(self) -> int:
        return len(self.edge_ids)

    @cached_property
    def solver(self) -> gf2.Gf2Solver:
        return gf2.Gf2Solver(self.check_matrix)

    @cached_property
    def null_basis(self) -> np.ndarray:
        return self.solver.nullspace()

    @cached_property
    def stabilizer_matrix(self) -> np.ndarray:
        """Merged 3-cell boundaries as face vectors, one row per 3-cell."""
        m = np.zeros((len(self.minor.cell_vertex_ids), self.n_qubits), dtype=np.uint8)
        for i, faces in enumerate(self.minor.cell_faces):
            for f in faces:
                m[i, self.face_index[f]] ^= 1
        return m

    @cached_property
    def _stabilizer_membership(self) -> gf2.Gf2Solver:
        return gf2.Gf2Solver(self.stabilizer_matrix.T)

    @cached_property
    def _null_combinations(self) -> np.ndarray:
        """All GF(2) combinations of the nullspace basis, one per row."""
        k = self.null_basis.shape[0]
        masks = np.arange(1 << k, dtype=np.uint32)
        bits = ((masks[:, None] >> np.arange(k)) & 1).astype(np.int64)
        return ((bits @ self.null_basis.astype(np.int64)) & 1).astype(np.uint8)

    @cached_property
    def cocycle_tests(self) -> np.ndarray:
        """Functionals on edge vectors that vanish exactly on face boundaries.

        A local edge vector lies in the image of the face-boundary map iff
        every row here has even overlap with it.
        """
        return gf2.nullspace(self.check_matrix.T.copy())

    def faces_to_vector(self, faces: Iterable[int]) -> np.ndarray:
        v = np.zeros(self.n_qubits, dtype=np.uint8)
        for f in faces:
            v[self.face_index[f]] ^= 1
        return v

    def vector_to_faces(self, v: np.ndarray) -> frozenset[int]:
        return frozenset(self.face_ids[i] for i in np.nonzero(v)[0])

    def syndrome_of_faces(self, faces: Iterable[int]) -> np.ndarray:
        """Local edge-flag vector of a face set given by global ids."""
        v = self.faces_to_vector(faces)
        return ((self.check_matrix @ v.astype(np.int64)) & 1).astype(np.uint8)

    def is_stabilizer_equivalent(self, a: Iterable[int], b: Iterable[int]) -> bool:
        """True when two face sets differ by a sum of merged-cell boundaries."""
        diff = self.faces_to_vector(a) ^ self.faces_to_vector(b)
        return self._stabilizer_membership.solve(diff) is not None


class ToricZInstance:
    """String decoding instance built from a two-color-deleted minor.

    Qubits are the minor's edges, checks its surviving vertices.  The check
    graph may have parallel edges; adjacency lists are sorted so distance
    and path choices are deterministic.
    """

    def __init__(self, minor: MinorComplexCC, dual: DualComplex) -> None:
        self.minor = minor
        self.edge_ids = minor.edge_ids
        self.vertex_ids = minor.vertex_ids
        self.edge_index = {e: i for i, e in enumerate(minor.edge_ids)}
        self.vertex_index = {v: i for i, v in enumerate(minor.vertex_ids)}
        self.face_index = {f: i for i, f in enumerate(minor.face_ids)}
        n_v = len(minor.vertex_ids)
        n_e = len(minor.edge_ids)
        h = np.zeros((n_v, n_e), dtype=np.uint8)
        endpoints: list[tuple[int, int]] = []
        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n_v)]
        for j, e in enumerate(minor.edge_ids):
            a, b = dual.complex.edge_vertices[e]
            ai, bi = self.vertex_index[a], self.vertex_index[b]
            if ai == bi:
                raise ValueError(f"edge {e} is a self-loop in the minor")
            h[ai, j] = 1
            h[bi, j] = 1
            endpoints.append((ai, bi))
            adjacency[ai].append((bi, j))
            adjacency[bi].append((ai, j))
        self.check_matrix = h
        self.endpoints = tuple(endpoints)
        self.adjacency = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)

    @property
    def n_qubits(self) -> int:
        return len(self.edge_ids)

    @property
    def n_checks(self) -> int:
        return len(self.vertex_ids)

    @cached_property
    def solver(self) -> gf2.Gf2Solver:
        return gf2.Gf2Solver(self.check_matrix)

    @cached_property
    def stabilizer_matrix(self) -> np.ndarray:
        """Minor face cycles as edge vectors, one row per face."""
        m = np.zeros((len(self.minor.face_ids), self.n_qubits), dtype=np.uint8)
        for i, edges in enumerate(self.minor.face_edges):
            for e in edges:
                m[i, self.edge_index[e]] ^= 1
        return m

    @cached_property
    def _stabilizer_membership(self) -> gf2.Gf2Solver:
        return gf2.Gf2Solver(self.stabilizer_matrix.T)

    @cached_property
    def parallel_twins(self) -> dict[int, tuple[int, ...]]:
        """Global edge id -> other minor edges with the same two endpoints.

        Parallel edges carry identical vertex syndromes, so a decoder cannot
        tell them apart; swapping twins is the weight-preserving degeneracy
        the pipeline may need to resolve against global validity.
        """
        groups: dict[tuple[int, int], list[int]] = {}
        for j, (a, b) in enumerate(self.endpoints):
            key = (a, b) if a <= b else (b, a)
            groups.setdefault(key, []).append(j)
        twins: dict[int, tuple[int, ...]] = {}
        for members in groups.values():
            if len(members) < 2:
                continue
            for j in members:
                twins[self.edge_ids[j]] = tuple(
                    self.edge_ids[t] for t in members if t != j
                )
        return twins

    @cached_property
    def component_labels(self) -> np.ndarray:
        """Connected-component label per local vertex index."""
        labels = np.full(self.n_checks, -1, dtype=np.int64)
        current = 0
        for start in range(self.n_checks):
            if labels[start] >= 0:
                continue
            labels[start] = current
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v, _ in self.adjacency[u]:
                    if labels[v] < 0:
                        labels[v] = current
                        queue.append(v)
            current += 1
        return labels

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs BFS hop counts; -1 where vertices are disconnected."""
        n = self.n_checks
        dist = np.full((n, n), -1, dtype=np.int64)
        for start in range(n):
            dist[start, start] = 0
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v, _ in self.adjacency[u]:
                    if dist[start, v] < 0:
                        dist[start, v] = dist[start, u] + 1
                        queue.append(v)
        return dist

    def shortest_path_edges(self, a: int, b: int) -> list[int]:
        """Local edge indices of a deterministic shortest a-b walk.

        BFS from a visits sorted adjacency, so among equally short paths the
        one through smallest (vertex, edge) choices wins.
        """
        if a == b:
            return []
        parent: dict[int, tuple[int, int]] = {a: (-1, -1)}
        queue = deque([a])
        while queue:
            u = queue.popleft()
            if u == b:
                break
            for v, j in self.adjacency[u]:
                if v not in parent:
                    parent[v] = (u, j)
                    queue.append(v)
        if b not in parent:
            raise InvalidSyndromeError("flagged vertices lie in different components")
        path = []
        u = b
        while u != a:
            u, j = parent[u]
            path.append(j)
        return path

    def edges_to_vector(self, edges: Iterable[int]) -> np.ndarray:
        v = np.zeros(self.n_qubits, dtype=np.uint8)
        for e in edges:
            v[self.edge_index[e]] ^= 1
        return v

    def vector_to_edges(self, v: np.ndarray) -> frozenset[int]:
        return frozenset(self.edge_ids[i] for i in np.nonzero(v)[0])

    def syndrome_of_edges(self, edges: Iterable[int]) -> np.ndarray:
        """Local vertex-flag vector of an edge set given by global ids."""
        v = self.edges_to_vector(edges)
        return ((self.check_matrix @ v.astype(np.int64)) & 1).astype(np.uint8)

    def is_stabilizer_equivalent(self, a: Iterable[int], b: Iterable[int]) -> bool:
        """True when two edge sets differ by a sum of minor face cycles."""
        diff = self.edges_to_vector(a) ^ self.edges_to_vector(b)
        return self._stabilizer_membership.solve(diff) is not None


def decode_toric_x(
    instance: ToricXInstance,
    syndrome,
    kind: DecoderKind = DecoderKind.EXACT_MIN_WEIGHT,
    caps: DecoderCaps = DEFAULT_CAPS,
) -> frozenset[int]:
    """Face set (global ids) whose edge boundary equals the syndrome.

    The exact kind returns a minimum-cardinality solution, refusing with
    DecoderRefusalError when the solution space is too large to enumerate
    or the best weight exceeds its cap.  Raises InvalidSyndromeError when
    no face set fits at all.
    """
    s = gf2.as_gf2(syndrome).ravel()
    if s.shape[0] != instance.n_checks:
        raise ValueError(f"syndrome has length {s.shape[0]}, expected {instance.n_checks}")

    if kind is DecoderKind.GF2_ANY_SOLUTION:
        x = instance.solver.solve(s)
        if x is None:
            raise InvalidSyndromeError("syndrome is not the edge boundary of any face set")
        return instance.vector_to_faces(x)

    if kind is DecoderKind.EXACT_MIN_WEIGHT:
        x0 = instance.solver.solve(s)
        if x0 is None:
            raise InvalidSyndromeError("syndrome is not the edge boundary of any face set")
        k = instance.null_basis.shape[0]
        if k > caps.max_surface_nullspace:
            raise DecoderRefusalError(
                f"solution space dimension {k} exceeds cap {caps.max_surface_nullspace}"
            )
        candidates = instance._null_combinations ^ x0
        weights = candidates.sum(axis=1, dtype=np.int64)
        best = int(np.argmin(weights))
        if int(weights[best]) > caps.max_surface_weight:
            raise DecoderRefusalError(
                f"minimum estimate weight {int(weights[best])} exceeds cap "
                f"{caps.max_surface_weight}"
            )
        return instance.vector_to_faces(candidates[best])

    if kind is DecoderKind.GREEDY_MATCH:
        # flip the face clearing the most residual flags; finish
        # algebraically if no flip helps, to keep the output contract
        residual = s.copy()
        chosen = np.zeros(instance.n_qubits, dtype=np.uint8)
        h = instance.check_matrix.astype(np.int64)
        col_weights = h.sum(axis=0)
        while residual.any():
            gains = 2 * (residual.astype(np.int64) @ h) - col_weights
            j = int(np.argmax(gains))
            if gains[j] <= 0:
                break
            chosen[j] ^= 1
            residual ^= instance.check_matrix[:, j]
        if residual.any():
            x = instance.solver.solve(residual)
            if x is None:
                raise InvalidSyndromeError(
                    "syndrome is not the edge boundary of any face set"
                )
            chosen ^= x
        return instance.vector_to_faces(chosen)

    raise ValueError(f"unknown decoder kind {kind!r}")


def _min_weight_pairing(
    defects: tuple[int, ...], dist: np.ndarray
) -> list[tuple[int, int]] | None:
    """Exhaustive minimum-cost perfect pairing of defect vertices.

    Always pairs the first remaining defect, trying partners in ascending
    order and keeping strictly better costs only, so the first optimal
    pairing in lexicographic order wins.  Returns None when no pairing
    stays within graph components.
    """
    best_cost: int | None = None
    best_pairs: list[tuple[int, int]] | None = None
    pairs: list[tuple[int, int]] = []

    def recurse(remaining: tuple[int, ...], cost: int) -> None:
        nonlocal best_cost, best_pairs
        if not remaining:
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_pairs = list(pairs)
            return
        a = remaining[0]
        rest = remaining[1:]
        for i, b in enumerate(rest):
            d = int(dist[a, b])
            if d < 0:
                continue
            if best_cost is not None and cost + d >= best_cost:
                continue
            pairs.append((a, b))
            recurse(rest[:i] + rest[i + 1 :], cost + d)
            pairs.pop()

    recurse(defects, 0)
    return best_pairs


def decode_toric_z(
    instance: ToricZInstance,
    syndrome,
    kind: DecoderKind = DecoderKind.EXACT_MIN_WEIGHT,
    caps: DecoderCaps = DEFAULT_CAPS,
) -> frozenset[int]:
    """Edge set (global ids) whose endpoint parity equals the syndrome.

    The exact kind minimizes total path length over all ways of pairing the
    flagged vertices, refusing with DecoderRefusalError when there are more
    flags than its cap allows.  Raises InvalidSyndromeError when some graph
    component holds an odd number of flags.
    """
    s = gf2.as_gf2(syndrome).ravel()
    if s.shape[0] != instance.n_checks:
        raise ValueError(f"syndrome has length {s.shape[0]}, expected {instance.n_checks}")

    defects = tuple(int(i) for i in np.nonzero(s)[0])
    labels = instance.component_labels
    counts: dict[int, int] = {}
    for d in defects:
        counts[int(labels[d])] = counts.get(int(labels[d]), 0) + 1
    if any(c % 2 for c in counts.values()):
        raise InvalidSyndromeError(
            "some component holds an odd number of flagged vertices"
        )

    if kind is DecoderKind.GF2_ANY_SOLUTION:
        x = instance.solver.solve(s)
        if x is None:
            raise InvalidSyndromeError("syndrome is not realizable by any edge set")
        return instance.vector_to_edges(x)

    if kind is DecoderKind.EXACT_MIN_WEIGHT:
        if len(defects) > caps.max_matching_defects:
            raise DecoderRefusalError(
                f"{len(defects)} flagged vertices exceed cap "
                f"{caps.max_matching_defects}"
            )
        pairing = _min_weight_pairing(defects, instance.distances)
        if pairing is None:
            raise InvalidSyndromeError("flagged vertices admit no within-component pairing")
    elif kind is DecoderKind.GREEDY_MATCH:
        # repeatedly join the closest remaining pair, smallest ids first
        remaining = list(defects)
        dist = instance.distances
        pairing = []
        while remaining:
            best: tuple[int, int, int] | None = None
            for i in range(len(remaining)):
                for j in range(i + 1, len(remaining)):
                    d = int(dist[remaining[i], remaining[j]])
                    if d < 0:
                        continue
                    key = (d, remaining[i], remaining[j])
                    if best is None or key < best:
                        best = key
            if best is None:
                raise InvalidSyndromeError(
                    "flagged vertices admit no within-component pairing"
                )
            _, a, b = best
            pairing.append((a, b))
            remaining.remove(a)
            remaining.remove(b)
    else:
        raise ValueError(f"unknown decoder kind {kind!r}")

    chosen = np.zeros(instance.n_qubits, dtype=np.uint8)
    for a, b in pairing:
        for j in instance.shortest_path_edges(a, b):
            chosen[j] ^= 1
    return instance.vector_to_edges(chosen)
