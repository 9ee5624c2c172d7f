"""Monte Carlo harness: sample i.i.d. noise, decode, aggregate error rates.

Trials are seeded per index from a base seed, so a run's records do not
depend on execution order or worker count, and a fixed seed reproduces
the run bit for bit (wall times aside).
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import sqrt
from typing import Mapping, Sequence

import numpy as np

from .cellcomplex import Colex
from .code import (
    ErrorSupport,
    ResidualClass,
    StabilizerMatrices,
    residual_class,
    stabilizer_matrices,
    syndrome_of,
)
from .pipeline import DecodeFailure, DecodingContext, FailureMode, Target, as_context, decode
from .toricdecoder import DEFAULT_CAPS, DecoderCaps, DecoderKind
from . import gf2

WORKERS_ENV = "COLEXDEC_WORKERS"


class VerificationError(RuntimeError):
    """A trial's recorded outcome failed its internal recheck."""


@dataclass(frozen=True)
class NoiseModel:
    """Per-qubit X and Z flip probabilities, i.i.d. across qubits.

    By default the two flip types are independent.  With ``correlated``
    both are drawn from a single depolarizing event per qubit, which
    requires p_x == p_z and fixes the Y probability to half of it.
    """

    p_x: float
    p_z: float
    correlated: bool = False

    def __post_init__(self) -> None:
        for name, p in (("p_x", self.p_x), ("p_z", self.p_z)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.correlated:
            if self.p_x != self.p_z:
                raise ValueError("correlated sampling requires p_x == p_z")
            if self.p_x > 2.0 / 3.0:
                raise ValueError("correlated flip probability cannot exceed 2/3")

    @classmethod
    def depolarizing(cls, p: float) -> "NoiseModel":
        """Depolarizing channel of total error probability p."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        return cls(p_x=2.0 * p / 3.0, p_z=2.0 * p / 3.0, correlated=True)

    def sample(self, rng: np.random.Generator, n_qubits: int) -> ErrorSupport:
        if self.correlated:
            r = rng.random(n_qubits)
            third = self.p_x / 2.0
            x = r < 2.0 * third
            z = (r >= third) & (r < 3.0 * third)
        else:
            x = rng.random(n_qubits) < self.p_x
            z = rng.random(n_qubits) < self.p_z
        return ErrorSupport(x=x.astype(np.uint8), z=z.astype(np.uint8))


@dataclass(frozen=True, eq=False)
class TrialRecord:
    """Outcome of one sampled-and-decoded trial.

    ``residual`` classifies the correction that was actually applied; when
    the decoder declared failure the applied correction is the identity,
    and ``failure_mode``/``failure_stage`` say where it gave up.
    """

    seed: tuple[int, int]
    error: ErrorSupport
    residual: ResidualClass
    failure_mode: FailureMode | None
    failure_stage: str | None
    component_weights: Mapping[str, int]
    refusal_stages: tuple[str, ...]
    wall_time: float

    @property
    def failed(self) -> bool:
        return self.failure_mode is not None

    @property
    def bad(self) -> bool:
        """True when the trial counts against the decoder."""
        return self.failed or self.residual is not ResidualClass.SUCCESS

    def matches(self, other: "TrialRecord") -> bool:
        """Equality of everything except wall time."""
        return (
            self.seed == other.seed
            and np.array_equal(self.error.x, other.error.x)
            and np.array_equal(self.error.z, other.error.z)
            and self.residual is other.residual
            and self.failure_mode is other.failure_mode
            and self.failure_stage == other.failure_stage
            and dict(self.component_weights) == dict(other.component_weights)
            and self.refusal_stages == other.refusal_stages
        )

    def to_json_dict(self) -> dict:
        return {
            "seed": list(self.seed),
            "x": [int(q) for q in np.nonzero(self.error.x)[0]],
            "z": [int(q) for q in np.nonzero(self.error.z)[0]],
            "residual": self.residual.value,
            "failure_mode": self.failure_mode.value if self.failure_mode else None,
            "failure_stage": self.failure_stage,
            "component_weights": dict(self.component_weights),
            "refusal_stages": list(self.refusal_stages),
            "wall_time": self.wall_time,
        }


@dataclass(frozen=True)
class SweepPoint:
    """Aggregate for one noise setting."""

    p_x: float
    p_z: float
    trials: int
    logical: int
    failed: int
    ci_lo: float
    ci_hi: float
    records: tuple[TrialRecord, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if self.logical + self.failed > self.trials:
            raise ValueError("outcome counts exceed trial count")

    @property
    def p(self) -> float:
        return self.p_x

    @property
    def bad(self) -> int:
        return self.logical + self.failed

    @property
    def rate(self) -> float:
        return self.bad / self.trials if self.trials else 0.0


@dataclass(frozen=True)
class SweepReport:
    """All points of one sweep, plus enough metadata to rerun it."""

    lattice_size: int | None
    n_qubits: int
    decoder: DecoderKind
    seed: int
    points: tuple[SweepPoint, ...]

    def to_json_dict(self) -> dict:
        return {
            "format": "colexdec-sweep",
            "lattice_size": self.lattice_size,
            "n_qubits": self.n_qubits,
            "decoder": self.decoder.value,
            "seed": self.seed,
            "points": [
                {
                    "p": pt.p,
                    "p_x": pt.p_x,
                    "p_z": pt.p_z,
                    "trials": pt.trials,
                    "logical": pt.logical,
                    "failed": pt.failed,
                    "rate": pt.rate,
                    "ci_lo": pt.ci_lo,
                    "ci_hi": pt.ci_hi,
                    "records": [r.to_json_dict() for r in pt.records],
                }
                for pt in self.points
            ],
        }

    def write_json(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=1)
            fh.write("\n")

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "trials", "logical", "failed", "rate", "ci_lo", "ci_hi"])
            for pt in self.points:
                writer.writerow(
                    [pt.p, pt.trials, pt.logical, pt.failed, pt.rate, pt.ci_lo, pt.ci_hi]
                )


def wilson_interval(k: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for k hits out of n at normal quantile z."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if n == 0:
        return (0.0, 1.0)
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = (z / denom) * sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
    return (max(0.0, center - half), min(1.0, center + half))


def _run_one(
    ctx: DecodingContext,
    mats: StabilizerMatrices,
    sx_membership: gf2.Gf2Solver,
    sz_membership: gf2.Gf2Solver,
    noise: NoiseModel,
    seed: int,
    index: int,
    kind: DecoderKind,
    caps: DecoderCaps,
    verify: bool,
) -> TrialRecord:
    rng = np.random.default_rng([seed, index])
    n = ctx.n_qubits
    error = noise.sample(rng, n)
    syndrome = syndrome_of(ctx.dual, error)

    failure_mode: FailureMode | None = None
    failure_stage: str | None = None
    weights: dict[str, int] = {}
    refusals: tuple[str, ...] = ()
    start = time.perf_counter()
    try:
        result = decode(ctx, syndrome, kind, caps)
        estimate = result.estimate
        weights = dict(result.component_weights)
    except DecodeFailure as exc:
        estimate = ErrorSupport.empty(n)
        failure_mode = exc.mode
        failure_stage = exc.stage
        if exc.mode is FailureMode.COMPONENT_REFUSAL:
            refusals = (exc.stage,)
    elapsed = time.perf_counter() - start

    cls = residual_class(ctx.dual, error, estimate, mats, sx_membership, sz_membership)
    if verify:
        again = residual_class(ctx.dual, error, estimate, mats)
        if again is not cls:
            raise VerificationError(
                f"trial ({seed}, {index}): recorded {cls.value}, recheck got {again.value}"
            )
    return TrialRecord(
        seed=(seed, index),
        error=error,
        residual=cls,
        failure_mode=failure_mode,
        failure_stage=failure_stage,
        component_weights=weights,
        refusal_stages=refusals,
        wall_time=elapsed,
    )


def _resolve_workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


_WORKER_STATE: dict = {}


def _pool_init(colex: Colex, noise: NoiseModel, seed: int, kind: DecoderKind,
               caps: DecoderCaps, verify: bool) -> None:
    ctx = DecodingContext.from_colex(colex)
    mats = stabilizer_matrices(ctx.dual)
    _WORKER_STATE.update(
        ctx=ctx,
        mats=mats,
        sx=gf2.Gf2Solver(mats.sx.T.copy()),
        sz=gf2.Gf2Solver(mats.sz.T.copy()),
        noise=noise,
        seed=seed,
        kind=kind,
        caps=caps,
        verify=verify,
    )


def _pool_chunk(indices: Sequence[int]) -> list[TrialRecord]:
    st = _WORKER_STATE
    return [
        _run_one(st["ctx"], st["mats"], st["sx"], st["sz"], st["noise"],
                 st["seed"], i, st["kind"], st["caps"], st["verify"])
        for i in indices
    ]


def run_trials(
    target: Target,
    noise: NoiseModel,
    n: int,
    seed: int,
    kind: DecoderKind = DecoderKind.EXACT_MIN_WEIGHT,
    caps: DecoderCaps = DEFAULT_CAPS,
    verify: bool = True,
    workers: int | None = None,
) -> list[TrialRecord]:
    """Sample and decode n trials; trial i uses the RNG keyed (seed, i).

    Deterministic for a fixed seed regardless of worker count.  With more
    than one worker the target must be the colex itself so each process
    can rebuild the decoding context.
    """
    if n < 0:
        raise ValueError("trial count must be nonnegative")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    n_workers = _resolve_workers(workers)
    if n_workers > 1 and n > 1 and isinstance(target, Colex):
        chunk = max(1, -(-n // n_workers))
        chunks = [range(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with ProcessPoolExecutor(
            max_workers=n_workers,
            initializer=_pool_init,
            initargs=(target, noise, seed, kind, caps, verify),
        ) as pool:
            parts = list(pool.map(_pool_chunk, chunks))
        return [record for part in parts for record in part]

    ctx = as_context(target)
    mats = stabilizer_matrices(ctx.dual)
    sx_membership = gf2.Gf2Solver(mats.sx.T.copy())
    sz_membership = gf2.Gf2Solver(mats.sz.T.copy())
    return [
        _run_one(ctx, mats, sx_membership, sz_membership, noise, seed, i, kind, caps, verify)
        for i in range(n)
    ]


def _infer_lattice_size(target: Target) -> int | None:
    colex = target if isinstance(target, Colex) else None
    if colex is None:
        ctx = as_context(target)
        colex = ctx.dual.primal
    coords = colex.vertex_coords
    if not coords:
        return None
    period = 1 + max(max(c) for c in coords)
    return period // 4 if period % 4 == 0 else None


def sweep(
    target: Target,
    p_list: Sequence[float],
    trials: int,
    seed: int,
    p_z_list: Sequence[float] | None = None,
    kind: DecoderKind = DecoderKind.EXACT_MIN_WEIGHT,
    caps: DecoderCaps = DEFAULT_CAPS,
    verify: bool = True,
    workers: int | None = None,
    lattice_size: int | None = None,
) -> SweepReport:
    """Run one batch of trials per noise point and aggregate rates.

    ``p_list`` gives the X flip probability per point; Z defaults to the
    same values.  Points share the base seed, so trial i sees the same
    underlying randomness at every point.
    """
    p_x_list = list(p_list)
    p_z_values = list(p_z_list) if p_z_list is not None else list(p_x_list)
    if len(p_z_values) != len(p_x_list):
        raise ValueError("p_z list must match p list in length")
    ctx_or_colex = target
    points = []
    for p_x, p_z in zip(p_x_list, p_z_values):
        noise = NoiseModel(p_x=p_x, p_z=p_z)
        records = run_trials(ctx_or_colex, noise, trials, seed, kind, caps, verify, workers)
        failed = sum(1 for r in records if r.failed)
        logical = sum(1 for r in records if not r.failed and r.bad)
        lo, hi = wilson_interval(failed + logical, len(records))
        points.append(
            SweepPoint(
                p_x=p_x,
                p_z=p_z,
                trials=len(records),
                logical=logical,
                failed=failed,
                ci_lo=lo,
                ci_hi=hi,
                records=tuple(records),
            )
        )
    ctx = as_context(target)
    size = lattice_size if lattice_size is not None else _infer_lattice_size(target)
    return SweepReport(
        lattice_size=size,
        n_qubits=ctx.n_qubits,
        decoder=kind,
        seed=seed,
        points=tuple(points),
    )
