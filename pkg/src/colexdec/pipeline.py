"""Full decoding pipeline: project, decode components, reassemble, lift.

The X side estimates the face boundary of the X error one color at a time,
then lifts the assembled closed surface back to a set of qubits.  The Z
side estimates the edge boundary one color pair at a time, checks that the
assembled edge set is a valid boundary, reinterprets it as a synthetic
X-type syndrome, and reuses the X machinery to finish.

Failures are raised as DecodeFailure carrying a machine-readable mode, so
simulation sweeps can attribute what went wrong where.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union

import numpy as np

from . import gf2
from .cellcomplex import COLORS, COLOR_PAIRS, Color, Colex, DualComplex, dual
from .code import ErrorSupport, Syndrome
from .minors import MinorComplexC, MinorComplexCC, minor_c, minor_cc
from .toricdecoder import (
    DEFAULT_CAPS,
    DecoderCaps,
    DecoderKind,
    DecoderRefusalError,
    InvalidSyndromeError,
    ToricXInstance,
    ToricZInstance,
    decode_toric_x,
    decode_toric_z,
)

__all__ = [
    "FailureMode",
    "DecodeFailure",
    "FaceBoundaryEstimate",
    "EdgeBoundaryEstimate",
    "LiftState",
    "DecodingContext",
    "DecodeResult",
    "project_x_syndrome",
    "project_z_syndrome",
    "estimate_x_boundary",
    "estimate_z_edge_boundary",
    "check_edge_boundary",
    "lift_boundary",
    "decode",
]


class FailureMode(enum.Enum):
    """What stopped a decode, in machine-readable form."""

    INVALID_EDGE_BOUNDARY = "invalid_edge_boundary"
    LIFT_CONTRADICTION = "lift_contradiction"
    COMPONENT_DECODER_FAILURE = "component_decoder_failure"
    COMPONENT_REFUSAL = "component_refusal"


class DecodeFailure(Exception):
    """A decode stage could not produce a usable intermediate result."""

    def __init__(self, mode: FailureMode, stage: str, message: str) -> None:
        super().__init__(f"{mode.value} at {stage}: {message}")
        self.mode = mode
        self.stage = stage


@dataclass(frozen=True)
class FaceBoundaryEstimate:
    """Closed-surface estimate assembled from per-color component estimates.

    faces is the disjoint union of the per-color sets; faces in the set for
    color c carry color c, so the union never collides.
    """

    per_color: Mapping[Color, frozenset[int]]
    faces: frozenset[int]

    @classmethod
    def from_components(
        cls, per_color: Mapping[Color, frozenset[int]]
    ) -> "FaceBoundaryEstimate":
        total: set[int] = set()
        for faces in per_color.values():
            if total & faces:
                raise ValueError("per-color face sets must be disjoint")
            total |= faces
        return cls(per_color=dict(per_color), faces=frozenset(total))

    @property
    def weight(self) -> int:
        return len(self.faces)


@dataclass(frozen=True)
class EdgeBoundaryEstimate:
    """Edge-boundary estimate assembled from per-pair component estimates.

    edges is the mod-2 sum of the per-pair sets; distinct pairs contribute
    edges of distinct colors, so the sum is again a disjoint union.
    """

    per_pair: Mapping[tuple[Color, Color], frozenset[int]]
    edges: frozenset[int]

    @classmethod
    def from_components(
        cls, per_pair: Mapping[tuple[Color, Color], frozenset[int]]
    ) -> "EdgeBoundaryEstimate":
        total: set[int] = set()
        for edges in per_pair.values():
            total ^= set(edges)
        return cls(per_pair=dict(per_pair), edges=frozenset(total))

    @property
    def weight(self) -> int:
        return len(self.edges)


@dataclass
class LiftState:
    """Working state of the boundary-to-volume traversal.

    labels hold 0 (unvisited) or +1/-1 per 3-cell; region collects the
    +1 side of each finished component before the smaller-side choice.
    """

    labels: np.ndarray
    region: set[int] = field(default_factory=set)
    frontier: deque = field(default_factory=deque)


class DecodingContext:
    """Caches the dual complex, its ten minors, and the component decoders.

    Building instances factors each component's check matrix once, so
    repeated decodes (sweeps, exhaustive scans) pay setup cost one time.
    """

    def __init__(self, dual_complex: DualComplex) -> None:
        self.dual = dual_complex
        self.minors_c: dict[Color, MinorComplexC] = {
            c: minor_c(dual_complex, c) for c in COLORS
        }
        self.minors_cc: dict[tuple[Color, Color], MinorComplexCC] = {
            pair: minor_cc(dual_complex, *pair) for pair in COLOR_PAIRS
        }
        self.x_instances: dict[Color, ToricXInstance] = {
            c: ToricXInstance(m) for c, m in self.minors_c.items()
        }
        self.z_instances: dict[tuple[Color, Color], ToricZInstance] = {
            pair: ToricZInstance(m, dual_complex) for pair, m in self.minors_cc.items()
        }

    @classmethod
    def from_colex(cls, colex: Colex) -> "DecodingContext":
        return cls(dual(colex))

    @property
    def n_qubits(self) -> int:
        return self.dual.n_qubits

    @cached_property
    def cell_adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per 3-cell, its (neighbor cell, shared face) pairs, one per face."""
        cx = self.dual.complex
        adj: list[list[tuple[int, int]]] = [[] for _ in range(len(cx.cell_faces))]
        for f, cells in enumerate(cx.face_cells):
            a, b = cells
            adj[a].append((b, f))
            adj[b].append((a, f))
        return tuple(tuple(sorted(nbrs)) for nbrs in adj)


Target = Union["DecodingContext", DualComplex, Colex]


def as_context(target: Target) -> DecodingContext:
    if isinstance(target, DecodingContext):
        return target
    if isinstance(target, DualComplex):
        return DecodingContext(target)
    if isinstance(target, Colex):
        return DecodingContext.from_colex(target)
    raise TypeError(f"expected DecodingContext, DualComplex, or Colex, got {type(target)!r}")


def project_x_syndrome(minor: MinorComplexC, s) -> np.ndarray:
    """Restrict an edge syndrome to the minor's surviving edges.

    Edge ids are preserved by the minor, so projection is plain restriction;
    the result is ordered like the minor's edge list.
    """
    vec = gf2.as_gf2(s).ravel()
    return vec[np.asarray(minor.edge_ids, dtype=np.intp)]


def project_z_syndrome(minor: MinorComplexCC, s) -> np.ndarray:
    """Restrict a vertex syndrome to the minor's surviving vertices."""
    vec = gf2.as_gf2(s).ravel()
    return vec[np.asarray(minor.vertex_ids, dtype=np.intp)]


def estimate_x_boundary(
    target: Target,
    s,
    kind: DecoderKind = DecoderKind.EXACT_MIN_WEIGHT,
    caps: DecoderCaps = DEFAULT_CAPS,
    stage_prefix: str = "x",
) -> FaceBoundaryEstimate:
    """Per-color component estimates of the X error's face boundary.

    Each color's surface decoder consumes the projected syndrome; the
    per-color face sets are disjoint by color, and their union estimates
    the closed surface bounding the error.  Raises DecodeFailure when a
    component refuses or cannot solve its instance.
    """
    ctx = as_context(target)
    per_color: dict[Color, frozenset[int]] = {}
    for color in COLORS:
        proj = project_x_syndrome(ctx.minors_c[color], s)
        stage = f"{stage_prefix}:{color.label}"
        try:
            per_color[color] = decode_toric_x(ctx.x_instances[color], proj, kind, caps)
        except DecoderRefusalError as exc:
            raise DecodeFailure(FailureMode.COMPONENT_REFUSAL, stage, str(exc)) from exc
        except InvalidSyndromeError as exc:
            raise DecodeFailure(
                FailureMode.COMPONENT_DECODER_FAILURE, stage, str(exc)
            ) from exc
    return FaceBoundaryEstimate.from_components(per_color)


def estimate_z_edge_boundary(
    target: Target,
    s,
    kind: DecoderKind = DecoderKind.EXACT_MIN_WEIGHT,
    caps: DecoderCaps = DEFAULT_CAPS,
) -> EdgeBoundaryEstimate:
    """Per-pair component estimates of the Z error's edge boundary.

    Each color pair's string decoder pairs up its projected flagged
    vertices; the mod-2 sum of the per-pair edge sets estimates the edge
    boundary.  Parallel minor edges carry identical component syndromes,
    so the components cannot tell them apart; the assembly stage settles
    the ambiguity globally by picking, among the twin combinations that
    make the boundary valid, the one admitting the cheapest surface fill
    (see _resolve_parallel_edges).  Raises DecodeFailure when a component
    refuses or cannot solve its instance.
    """
    ctx = as_context(target)
    per_pair: dict[tuple[Color, Color], frozenset[int]] = {}
    for pair in COLOR_PAIRS:
        proj = project_z_syndrome(ctx.minors_cc[pair], s)
        stage = f"z:{pair[0].label}{pair[1].label}"
        try:
            per_pair[pair] = decode_toric_z(ctx.z_instances[pair], proj, kind, caps)
        except DecoderRefusalError as exc:
            raise DecodeFailure(FailureMode.COMPONENT_REFUSAL, stage, str(exc)) from exc
        except InvalidSyndromeError as exc:
            raise DecodeFailure(
                FailureMode.COMPONENT_DECODER_FAILURE, stage, str(exc)
            ) from exc
    resolved = _resolve_parallel_edges(ctx, per_pair)
    if resolved is not None:
        per_pair = resolved
    return EdgeBoundaryEstimate.from_components(per_pair)


def _restrict(inst, edges: Iterable[int]) -> np.ndarray:
    """Indicator vector of an edge set over one minor's local edge order."""
    v = np.zeros(inst.n_checks, dtype=np.uint8)
    for e in edges:
        idx = inst.edge_index.get(e)
        if idx is not None:
            v[idx] ^= 1
    return v


def _surface_fill_cost(ctx: DecodingContext, edges: set[int]) -> int | None:
    """Total weight of the cheapest per-color face fill of an edge set.

    None when some color's restriction is not a face boundary, or when a
    color instance is too large to enumerate exactly.
    """
    total = 0
    for color in COLORS:
        inst = ctx.x_instances[color]
        if inst.null_basis.shape[0] > DEFAULT_CAPS.max_surface_nullspace:
            return None
        x0 = inst.solver.solve(_restrict(inst, edges))
        if x0 is None:
            return None
        candidates = inst._null_combinations ^ x0.astype(np.int64)
        total += int(candidates.sum(axis=1, dtype=np.int64).min())
    return total


def _resolve_parallel_edges(
    ctx: DecodingContext, per_pair: dict[tuple[Color, Color], frozenset[int]]
) -> dict[tuple[Color, Color], frozenset[int]] | None:
    """Resolve parallel-edge degeneracy against the global validity test.

    Trading an estimated edge for a parallel twin changes no component
    syndrome, so all twin combinations are equally good component
    estimates, while the assembled boundaries they produce differ.
    Validity of the assembly is linear over GF(2) in the twin choices, so
    the valid combinations form an affine space found by a small solve;
    among them the assembly keeps the one whose boundary admits the
    lightest per-color face fill, breaking ties by fewest trades.  Returns
    the adjusted per-pair sets, or None when nothing needed resolving or
    no valid combination exists.
    """
    swaps: list[tuple[tuple[Color, Color], int, int]] = []
    seen: set[tuple[tuple[Color, Color], frozenset[int]]] = set()
    for pair in COLOR_PAIRS:
        twins = ctx.z_instances[pair].parallel_twins
        for e in sorted(per_pair[pair]):
            for t in twins.get(e, ()):
                key = (pair, frozenset((e, t)))
                if key not in seen:
                    seen.add(key)
                    swaps.append((pair, e, t))
    if not swaps:
        return None

    edges_now: set[int] = set()
    for edges in per_pair.values():
        edges_now ^= set(edges)
    blocks = []
    rhs_parts = []
    for color in COLORS:
        inst = ctx.x_instances[color]
        tests = inst.cocycle_tests
        if tests.shape[0] == 0:
            continue
        tests64 = tests.astype(np.int64)
        rhs_parts.append((tests64 @ _restrict(inst, edges_now).astype(np.int64)) & 1)
        cols = np.zeros((tests.shape[0], len(swaps)), dtype=np.uint8)
        for gi, (_, e, t) in enumerate(swaps):
            for x in (e, t):
                idx = inst.edge_index.get(x)
                if idx is not None:
                    cols[:, gi] ^= tests[:, idx]
        blocks.append(cols)
    system = np.vstack(blocks).astype(np.uint8)
    rhs = np.concatenate(rhs_parts).astype(np.uint8)

    solver = gf2.Gf2Solver(system)
    alpha = solver.solve(rhs)
    if alpha is None:
        return None
    # Search the whole affine space when small enough; otherwise settle for
    # the particular solution.
    null = solver.nullspace()
    if 0 < null.shape[0] <= _TWIN_SEARCH_LIMIT:
        masks = np.arange(1 << null.shape[0], dtype=np.uint32)
        bits = ((masks[:, None] >> np.arange(null.shape[0])) & 1).astype(np.int64)
        candidates = (((bits @ null.astype(np.int64)) & 1) ^ alpha).astype(np.uint8)
        alpha = _cheapest_combination(ctx, edges_now, swaps, candidates)

    repaired = {pair: set(edges) for pair, edges in per_pair.items()}
    for gi in np.nonzero(alpha)[0]:
        pair, e, t = swaps[int(gi)]
        repaired[pair] ^= {e, t}
    return {pair: frozenset(edges) for pair, edges in repaired.items()}


# Exhaustive twin-combination search is capped at 2**limit candidates.
_TWIN_SEARCH_LIMIT = 12


def _cheapest_combination(
    ctx: DecodingContext,
    edges_now: set[int],
    swaps: list[tuple[tuple[Color, Color], int, int]],
    candidates: np.ndarray,
) -> np.ndarray:
    """Pick the valid twin combination with the lightest surface fill.

    Ties go to the combination trading the fewest edges, then to the
    lexicographically first choice vector, keeping the result independent
    of enumeration order.
    """
    best = None
    best_key = None
    for row in candidates:
        edges = set(edges_now)
        for gi in np.nonzero(row)[0]:
            _, e, t = swaps[int(gi)]
            edges ^= {e, t}
        cost = _surface_fill_cost(ctx, edges)
        if cost is None:
            continue
        key = (cost, int(row.sum()), tuple(int(b) for b in row))
        if best_key is None or key < best_key:
            best_key = key
            best = row
    return candidates[0] if best is None else best


def check_edge_boundary(
    target: Target, estimate: Union[EdgeBoundaryEstimate, Iterable[int]]
) -> bool:
    """True when the edge set restricts to a trivial cycle in every minor.

    Triviality is GF(2) membership of the restricted edge set in the image
    of the minor's face-boundary map, tested with the already factored
    component solvers.
    """
    ctx = as_context(target)
    edges = (
        estimate.edges
        if isinstance(estimate, EdgeBoundaryEstimate)
        else frozenset(estimate)
    )
    for color in COLORS:
        inst = ctx.x_instances[color]
        local = np.zeros(inst.n_checks, dtype=np.uint8)
        for e in edges:
            idx = inst.edge_index.get(e)
            if idx is not None:
                local[idx] ^= 1
        if inst.solver.solve(local) is None:
            return False
    return True


def _lift(
    ctx: DecodingContext, faces: frozenset[int], stage: str
) -> tuple[frozenset[int], bool]:
    """Core lift: (smaller region, tie flag); DecodeFailure on contradiction."""
    n_faces = len(ctx.dual.complex.face_vertices)
    for f in faces:
        if not 0 <= f < n_faces:
            raise ValueError(f"face id {f} out of range")
    adjacency = ctx.cell_adjacency
    n = len(adjacency)
    state = LiftState(labels=np.zeros(n, dtype=np.int8))
    region: set[int] = set()
    tie = False
    for start in range(n):
        if state.labels[start]:
            continue
        state.labels[start] = 1
        state.frontier.append(start)
        component: list[int] = []
        while state.frontier:
            u = state.frontier.popleft()
            component.append(u)
            for v, f in adjacency[u]:
                expected = -state.labels[u] if f in faces else state.labels[u]
                if state.labels[v] == 0:
                    state.labels[v] = expected
                    state.frontier.append(v)
                elif state.labels[v] != expected:
                    raise DecodeFailure(
                        FailureMode.LIFT_CONTRADICTION,
                        stage,
                        f"inconsistent side labels across face {f}",
                    )
        plus = [c for c in component if state.labels[c] > 0]
        state.region.update(plus)
        # smaller side wins; an exact tie keeps the side of the start cell
        if 2 * len(plus) < len(component):
            region.update(plus)
        elif 2 * len(plus) > len(component):
            region.update(c for c in component if state.labels[c] < 0)
        else:
            tie = True
            region.update(plus)
    return frozenset(region), tie


def lift_boundary(target: Target, faces: Iterable[int]) -> frozenset[int]:
    """Lift a closed surface to the smaller of the two volumes it bounds.

    Adjacent 3-cells take equal side labels across ordinary faces and
    opposite labels across faces of the surface.  A labeling contradiction
    means the face set bounds nothing and raises DecodeFailure.  When both
    volumes have equal size the one containing the lowest cell id wins.
    """
    ctx = as_context(target)
    region, _ = _lift(ctx, frozenset(faces), "lift")
    return region


@dataclass(frozen=True)
class DecodeResult:
    """Everything a decode produced, for verification and attribution.

    estimate is the corrected-error guess; the boundary estimates and lift
    regions expose the intermediate steps; component_weights maps stage
    labels (x:r, z:rg, zx:r, ...) to estimate weights; the tie flags mark
    lifts that hit an exact size tie and fell back to the start-cell side.
    """

    estimate: ErrorSupport
    x_boundary: FaceBoundaryEstimate
    z_boundary: EdgeBoundaryEstimate
    z_face_boundary: FaceBoundaryEstimate
    x_region: frozenset[int]
    z_region: frozenset[int]
    x_lift_tie: bool
    z_lift_tie: bool
    component_weights: Mapping[str, int]


def decode(
    target: Target,
    syndrome: Syndrome,
    kind: DecoderKind = DecoderKind.EXACT_MIN_WEIGHT,
    caps: DecoderCaps = DEFAULT_CAPS,
) -> DecodeResult:
    """Full CSS decode of a measured syndrome.

    X side: estimate the face boundary per color, lift to qubits.  Z side:
    estimate the edge boundary per pair, verify it is a valid boundary,
    reinterpret it as a synthetic X-type syndrome, and reuse the X
    machinery before lifting.  Raises DecodeFailure with the stage and
    mode when any step cannot complete.
    """
    ctx = as_context(target)
    n_edges = len(ctx.dual.complex.edge_vertices)

    x_boundary = estimate_x_boundary(ctx, syndrome.x_syndrome, kind, caps)
    x_region, x_tie = _lift(ctx, x_boundary.faces, "lift:x")

    z_boundary = estimate_z_edge_boundary(ctx, syndrome.z_syndrome, kind, caps)
    if not check_edge_boundary(ctx, z_boundary):
        raise DecodeFailure(
            FailureMode.INVALID_EDGE_BOUNDARY,
            "z:check",
            "assembled edge boundary restricts to a nontrivial cycle",
        )
    synthetic = np.zeros(n_edges, dtype=np.uint8)
    for e in z_boundary.edges:
        synthetic[e] = 1
    z_face_boundary = estimate_x_boundary(ctx, synthetic, kind, caps, stage_prefix="zx")
    z_region, z_tie = _lift(ctx, z_face_boundary.faces, "lift:z")

    estimate = ErrorSupport.from_qubits(ctx.n_qubits, x=x_region, z=z_region)
    weights: dict[str, int] = {}
    for color, faces in x_boundary.per_color.items():
        weights[f"x:{color.label}"] = len(faces)
    for (c1, c2), edges in z_boundary.per_pair.items():
        weights[f"z:{c1.label}{c2.label}"] = len(edges)
    for color, faces in z_face_boundary.per_color.items():
        weights[f"zx:{color.label}"] = len(faces)
    return DecodeResult(
        estimate=estimate,
        x_boundary=x_boundary,
        z_boundary=z_boundary,
        z_face_boundary=z_face_boundary,
        x_region=x_region,
        z_region=z_region,
        x_lift_tie=x_tie,
        z_lift_tie=z_tie,
        component_weights=weights,
    )
